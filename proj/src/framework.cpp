#include "mss/framework.hpp"

#include <algorithm>

namespace mss {

PreficiencyOracle make_preficiency_oracle(ProblemKind kind) {
  return [kind](const StageGraph& stage, const ElementSet& preferred) {
    return prefer_solve(kind, stage, preferred);
  };
}

namespace {

StageSolution call_oracle(const PreficiencyOracle& oracle,
                          const StageGraph& stage, const ElementSet& preferred,
                          int stage_number) {
  try {
    return oracle(stage, preferred);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(
        std::string(e.what()) + " in stage " + std::to_string(stage_number),
        stage_number);
  }
}

std::size_t overlap(const ElementSet& a, const ElementSet& b) {
  return transition_quality(a, b, QualityKind::IntersectionProfit);
}

}  // namespace

std::pair<SolutionSequence, CandidateLog> approx_two_stage(
    const ProblemInstance& inst, const PreficiencyOracle& oracle) {
  if (inst.graph.tau() != 2) {
    throw ValidationError("approx_two_stage needs exactly 2 stages");
  }
  const StageGraph& g1 = inst.graph.stages[0];
  const StageGraph& g2 = inst.graph.stages[1];
  const ElementSet shared =
      intersection_elements(inst.graph, selecting_kind(inst.problem));

  CandidateLog log;
  auto record = [&log](int loop, std::size_t iteration, const StageSolution& s1,
                       const StageSolution& s2) {
    log.entries.push_back({loop, iteration, s1.elements, s2.elements,
                           overlap(s1.elements, s2.elements)});
  };

  std::size_t iteration = 0;
  for (const auto& x : shared) {
    StageSolution s1 = call_oracle(oracle, g1, ElementSet{x}, 1);
    StageSolution s2 = call_oracle(oracle, g2, s1.elements, 2);
    record(1, iteration++, s1, s2);
  }

  ElementSet remaining = shared;
  iteration = 0;
  while (true) {
    StageSolution s1 = call_oracle(oracle, g1, remaining, 1);
    if (overlap(s1.elements, remaining) == 0) {
      if (log.entries.empty()) {
        // No shared selecting element at all: any pair of per-stage optima
        // is optimal with quality 0.
        StageSolution s2 = call_oracle(oracle, g2, {}, 2);
        record(0, 0, s1, s2);
      }
      break;
    }
    StageSolution s2 = call_oracle(oracle, g2, s1.elements, 2);
    record(2, iteration++, s1, s2);
    for (const auto& e : s1.elements) remaining.erase(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < log.entries.size(); ++i) {
    if (log.entries[i].quality > log.entries[best].quality) best = i;
  }
  log.chosen = best;

  SolutionSequence sol;
  sol.problem = inst.problem;
  sol.per_stage = {log.entries[best].stage1, log.entries[best].stage2};
  return {std::move(sol), std::move(log)};
}

WindowPlan window_plan(int tau, int t) {
  if (t < 2) throw BadParamsError("window length must be at least 2");
  if (tau < 2) throw BadParamsError("stage count must be at least 2");
  WindowPlan plan;
  plan.t = t;
  plan.tau = tau;
  for (int i = -t + 2; i <= tau; ++i) {
    plan.window_starts.push_back(i);
    plan.windows[i] = {std::max(1, i), std::min(tau, i + t - 1)};
    int k = ((i % t) + t) % t;
    plan.residue_classes[k].push_back(i);
  }
  return plan;
}

SolutionSequence window_lift(const ProblemInstance& inst, int t,
                             const SubAlgorithm& subalgo, QualityKind quality) {
  const int tau = static_cast<int>(inst.graph.tau());
  WindowPlan plan = window_plan(tau, t);

  std::map<int, SolutionSequence> window_solutions;
  for (int start : plan.window_starts) {
    auto [lo, hi] = plan.windows.at(start);
    std::vector<std::size_t> indices;
    for (int j = lo; j <= hi; ++j) indices.push_back(j);
    ProblemInstance window;
    window.problem = inst.problem;
    window.graph = induced_submultistage(inst.graph, indices);
    SolutionSequence part = subalgo(window);
    if (part.per_stage.size() != indices.size()) {
      throw MssError("subalgorithm returned wrong stage count");
    }
    window_solutions[start] = std::move(part);
  }

  std::optional<SolutionSequence> best;
  std::size_t best_quality = 0;
  for (const auto& [k, starts] : plan.residue_classes) {
    SolutionSequence stitched;
    stitched.problem = inst.problem;
    for (int start : starts) {
      const SolutionSequence& part = window_solutions.at(start);
      stitched.per_stage.insert(stitched.per_stage.end(),
                                part.per_stage.begin(), part.per_stage.end());
    }
    if (static_cast<int>(stitched.per_stage.size()) != tau) {
      throw MssError("stitched solution has wrong stage count");
    }
    std::size_t q = global_quality(stitched, quality);
    bool better = !best || (quality_is_max(quality) ? q > best_quality
                                                    : q < best_quality);
    if (better) {
      best = std::move(stitched);
      best_quality = q;
    }
  }
  return *best;
}

SolutionSequence approx_multistage(const ProblemInstance& inst) {
  PreficiencyOracle oracle = make_preficiency_oracle(inst.problem);
  SubAlgorithm subalgo = [&inst, &oracle](const ProblemInstance& window) {
    if (window.graph.tau() == 1) {
      SolutionSequence single;
      single.problem = window.problem;
      try {
        single.per_stage.push_back(
            prefer_solve(window.problem, window.graph.stages[0], {}).elements);
      } catch (const InfeasibleError& e) {
        throw InfeasibleError(std::string(e.what()) + " in a boundary window");
      }
      return single;
    }
    return approx_two_stage(window, oracle).first;
  };
  return window_lift(inst, 2, subalgo, QualityKind::IntersectionProfit);
}

}  // namespace mss
