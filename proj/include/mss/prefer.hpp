#pragma once

#include <map>
#include <utility>

#include "mss/mgraph.hpp"
#include "mss/stage_solvers.hpp"

namespace mss {

// Preference-efficient ("preficient") single-stage solving: return a
// solution that is optimal under the original weights and, among all
// optimal solutions, has maximum overlap with a preferred element set Y.
//
// The rational epsilon-perturbation is realized exactly over integers:
// after canonicalizing weights to integers, every weight is scaled by
// (m + 1) where m is the number of weighted elements, and preferred
// elements get a unit nudge. The scaled weights keep all strict order
// relations of subset sums (any two distinct sums differ by at least
// m + 1 after scaling), the nudge of at most m never bridges that gap,
// and equal-weight sets are ordered by their overlap with Y.

enum class PreferenceDirection { FavorMin, FavorMax };

struct ModifiedWeights {
  std::map<ElementId, Int> base;
  ElementSet preferred;
  PreferenceDirection direction = PreferenceDirection::FavorMin;
  std::map<ElementId, Int> modified;
};

// Multiplies by the least common multiple of the denominators; the result
// preserves every order and tie relation of subset sums. Returns the
// integer weights and the scale factor applied.
std::pair<std::map<ElementId, Int>, Int> canonicalize_weights(
    const std::map<ElementId, Rational>& weights);

// modified(e) = base(e) * (m + 1) - [e in Y]  (FavorMin)
// modified(e) = base(e) * (m + 1) + [e in Y]  (FavorMax)
ModifiedWeights modify_weights(const std::map<ElementId, Int>& base,
                               const ElementSet& preferred,
                               PreferenceDirection direction);

// The preficiency oracle B(G, Y). Elements of Y that do not occur in the
// stage are ignored. The returned measure is under the original weights.
StageSolution prefer_solve(ProblemKind kind, const StageGraph& stage,
                           const ElementSet& preferred);

// Same vertices and vertex weights; edge set {ab | a in A, b in B} \ E for
// the canonical bipartition (A, B).
StageGraph bipartite_complement(const StageGraph& stage);

}  // namespace mss
