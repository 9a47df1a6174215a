#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mss/mgraph.hpp"
#include "mss/prefer.hpp"

namespace mss {

// B(G, Y): a per-stage-optimal solution maximizing overlap with Y.
using PreficiencyOracle =
    std::function<StageSolution(const StageGraph&, const ElementSet&)>;

PreficiencyOracle make_preficiency_oracle(ProblemKind kind);

// Every candidate 2-stage solution generated by approx_two_stage, in
// generation order. loop 0 marks the empty-intersection fallback pair.
struct CandidateEntry {
  int loop = 0;
  std::size_t iteration = 0;
  ElementSet stage1;
  ElementSet stage2;
  std::size_t quality = 0;
};

struct CandidateLog {
  std::vector<CandidateEntry> entries;
  std::size_t chosen = 0;  // index of the reported candidate
};

// Two-stage intersection-profit approximation. Loop one seeds the oracle
// with each shared element on its own; loop two repeatedly asks for a
// first-stage solution covering the still-unclaimed shared elements. The
// best candidate pair by intersection profit wins, first occurrence on
// ties. If no shared selecting element exists the result is a quality-0
// pair of per-stage optima. The output satisfies
// quality^2 * 2*chi >= opt^2.
std::pair<SolutionSequence, CandidateLog> approx_two_stage(
    const ProblemInstance& inst, const PreficiencyOracle& oracle);

// Index bookkeeping for the window-lifting scheme: windows I_i cover
// [1..tau] once per residue class of window starts modulo t.
struct WindowPlan {
  int t = 2;
  int tau = 2;
  std::vector<int> window_starts;  // J = [-t+2 .. tau]
  // start -> inclusive 1-based stage range
  std::map<int, std::pair<int, int>> windows;
  // residue k in [0..t-1] -> starts in J with start ≡ k (mod t)
  std::map<int, std::vector<int>> residue_classes;
};

WindowPlan window_plan(int tau, int t);

// A solver for instances with at most t stages (1-stage windows occur at
// the boundary). Must return per-stage-optimal solutions.
using SubAlgorithm = std::function<SolutionSequence(const ProblemInstance&)>;

// Runs the subalgorithm on every window, stitches one full solution per
// residue class, and returns the best stitched solution under the goal of
// `quality`. With an alpha-approximate subalgorithm the result is an
// alpha*(t-1)/t approximation for maximization goals.
SolutionSequence window_lift(const ProblemInstance& inst, int t,
                             const SubAlgorithm& subalgo, QualityKind quality);

// window_lift with t = 2 over the two-stage preficiency approximation;
// quality^2 * 8*chi >= opt^2.
SolutionSequence approx_multistage(const ProblemInstance& inst);

}  // namespace mss
