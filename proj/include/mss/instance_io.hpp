#pragma once

#include <cstddef>
#include <string>

#include "mss/mgraph.hpp"

namespace mss {

// Instance documents are JSON:
//   { "problem": "MSPath" | "MMinPM" | "MMinCut" | "MWBMaxCut" |
//                "MMinBVC" | "MMaxBIS" | "MMaxBB",
//     "stages": [ { "vertices": ["s","a","t"],
//                   "edges": [ {"u":"s","v":"a","w":"3/2"}, ... ],
//                   "vertex_weights": {"a":"1"},   (vertex-weighted kinds)
//                   "s": "s", "t": "t" },          (MSPath / MMinCut)
//                 ... ] }
// Weights are decimal integers or "p/q" strings, parsed exactly; a missing
// weight defaults to 1. Parsing and serialization are mutually inverse on
// validated instances.
ProblemInstance parse_instance(const std::string& text);
std::string serialize_instance(const ProblemInstance& inst);

// Solution documents: {"per_stage":[["e:s,a","e:a,t"],...],"quality":n}
// with edge keys "e:<u>,<v>" (endpoints in lexicographic order for
// undirected edges) and vertex keys "v:<label>".
std::string serialize_solution(const SolutionSequence& sol,
                               std::size_t quality);
SolutionSequence parse_solution(const std::string& text, ProblemKind kind);

// A MaxCut input for the reduction commands: the instance-document stage
// shape without weights or terminals, {"vertices":[...],"edges":[{"u","v"}]}.
StageGraph parse_maxcut_graph(const std::string& text);

}  // namespace mss
