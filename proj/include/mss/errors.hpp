#pragma once

#include <stdexcept>
#include <string>

namespace mss {

struct MssError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, wrong types, bad weight syntax).
struct SchemaError : MssError {
  using MssError::MssError;
};

// Structurally well-formed input violating a semantic invariant.
struct ValidationError : MssError {
  using MssError::MssError;
};

// No feasible solution exists; stage_index is 0-based, or -1 if n/a.
struct InfeasibleError : MssError {
  explicit InfeasibleError(const std::string& what, int stage = -1)
      : MssError(what), stage_index(stage) {}
  int stage_index;
};

struct TooLargeError : MssError {
  using MssError::MssError;
};

struct NotBipartiteError : MssError {
  using MssError::MssError;
};

struct IndexError : MssError {
  using MssError::MssError;
};

struct BadParamsError : MssError {
  using MssError::MssError;
};

struct DegreeTooHighError : MssError {
  using MssError::MssError;
};

}  // namespace mss
