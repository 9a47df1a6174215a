#pragma once

#include <cstddef>
#include <vector>

#include "mss/mgraph.hpp"

namespace mss {

// Caps for the ground-truth machinery. max_vertices applies per enumeration
// unit (a whole stage, or a connected component for problems whose optima
// factor over components). max_dp_transitions bounds the work of the
// stage-to-stage dynamic program; MSS_MAX_ORACLE_STATES overrides it.
struct OracleConfig {
  std::size_t max_vertices = 12;
  std::size_t max_solutions = 1'000'000;
  unsigned long long max_dp_transitions = 1'000'000;

  static OracleConfig from_env();
};

// f(G): every feasible solution, by direct enumeration. s-t cuts are
// enumerated as delta(U) over bipartitions with s in U, t not in U; under
// strictly positive weights every minimum cut has this form.
std::vector<ElementSet> enumerate_feasible(
    const StageGraph& stage, ProblemKind kind,
    const OracleConfig& config = OracleConfig{});

struct OptimalSolutionSet {
  std::size_t stage_index = 0;
  std::vector<ElementSet> solutions;
  Rational measure;
};

// f*(G): the measure-optimal subsets of f(G). For perfect matching, max
// cut, vertex cover and independent set the optima factor over connected
// components, which extends the reach well beyond whole-graph enumeration.
OptimalSolutionSet enumerate_optimal(const StageGraph& stage, ProblemKind kind,
                                     const OracleConfig& config = OracleConfig{});

struct ExactResult {
  SolutionSequence solution;
  long long quality = 0;
};

// Ground-truth multistage optimum: a dynamic program over per-stage optimal
// solutions. Internally solutions are grouped into classes by their traces
// on the shared-element boundaries (and by cardinality for the symmetric
// difference cost), which leaves the optimum unchanged because transition
// qualities only depend on those traces. Minimum-cut stages are enumerated
// through the residual graph's component DAG instead of vertex subsets, so
// reduction-sized instances stay tractable.
ExactResult exact_multistage(const ProblemInstance& inst, QualityKind quality,
                             const OracleConfig& config = OracleConfig{});

struct VerifyReport {
  std::vector<bool> stagewise_optimal;
  std::size_t quality = 0;

  bool all_optimal() const;
};

// Checks each per-stage set for membership in f*(G_i) by enumeration and
// evaluates the global quality.
VerifyReport verify_sequence(const ProblemInstance& inst,
                             const SolutionSequence& sol,
                             QualityKind quality = QualityKind::IntersectionProfit,
                             const OracleConfig& config = OracleConfig{});

// The feasibility predicate behind f(G). For MMinCut this is the literal
// reading: removing the edge set leaves no s-t path.
bool is_feasible(const StageGraph& stage, ProblemKind kind,
                 const ElementSet& elements);

}  // namespace mss
