#include <doctest.h>

#include <random>

#include "mss/framework.hpp"
#include "mss/oracle.hpp"

#include "generators.hpp"
#include "helpers.hpp"

using namespace mss;
using namespace mss::testing;

TEST_CASE("window_plan") {
  SUBCASE("tau=3, t=2") {
    WindowPlan plan = window_plan(3, 2);
    CHECK(plan.window_starts == std::vector<int>{0, 1, 2, 3});
    CHECK(plan.windows.at(0) == std::pair<int, int>{1, 1});
    CHECK(plan.windows.at(1) == std::pair<int, int>{1, 2});
    CHECK(plan.windows.at(2) == std::pair<int, int>{2, 3});
    CHECK(plan.windows.at(3) == std::pair<int, int>{3, 3});
    CHECK(plan.residue_classes.at(0) == std::vector<int>{0, 2});
    CHECK(plan.residue_classes.at(1) == std::vector<int>{1, 3});
  }
  SUBCASE("tau=2, t=2") {
    WindowPlan plan = window_plan(2, 2);
    CHECK(plan.window_starts == std::vector<int>{0, 1, 2});
    CHECK(plan.residue_classes.at(0) == std::vector<int>{0, 2});
    CHECK(plan.residue_classes.at(1) == std::vector<int>{1});
  }
  SUBCASE("each residue class covers every stage exactly once") {
    for (int tau : {2, 3, 5, 8}) {
      for (int t : {2, 3, 4}) {
        WindowPlan plan = window_plan(tau, t);
        for (const auto& [k, starts] : plan.residue_classes) {
          std::vector<int> covered(tau + 1, 0);
          for (int start : starts) {
            auto [lo, hi] = plan.windows.at(start);
            for (int j = lo; j <= hi; ++j) covered[j]++;
          }
          for (int j = 1; j <= tau; ++j) CHECK(covered[j] == 1);
        }
      }
    }
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(window_plan(3, 1), BadParamsError);
    CHECK_THROWS_AS(window_plan(1, 2), BadParamsError);
  }
}

TEST_CASE("approx_two_stage") {
  SUBCASE("diamond stages can keep a whole path") {
    StageGraph diamond = make_stage(
        {}, {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}}, "s", "t");
    ProblemInstance inst =
        make_instance(ProblemKind::MSPath, {diamond, diamond});
    auto [sol, log] =
        approx_two_stage(inst, make_preficiency_oracle(inst.problem));
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 2);
    CHECK(verify_sequence(inst, sol).all_optimal());
    // the log reports the first-best candidate
    CHECK(log.entries[log.chosen].quality == 2);
    for (const auto& entry : log.entries) {
      CHECK(entry.quality <= log.entries[log.chosen].quality);
    }
  }
  SUBCASE("edge-disjoint stages fall back to a quality-0 pair") {
    StageGraph g1 = make_stage({}, {{"s", "a"}, {"a", "t"}}, "s", "t");
    StageGraph g2 = make_stage({}, {{"s", "b"}, {"b", "t"}}, "s", "t");
    ProblemInstance inst = make_instance(ProblemKind::MSPath, {g1, g2});
    auto [sol, log] =
        approx_two_stage(inst, make_preficiency_oracle(inst.problem));
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 0);
    CHECK(verify_sequence(inst, sol).all_optimal());
    CHECK(log.entries.size() == 1);
    CHECK(log.entries[0].loop == 0);
  }
  SUBCASE("wrong stage count is rejected") {
    StageGraph g = make_stage({}, {{"s", "t"}}, "s", "t");
    ProblemInstance inst = make_instance(ProblemKind::MSPath, {g, g, g});
    CHECK_THROWS_AS(
        approx_two_stage(inst, make_preficiency_oracle(inst.problem)),
        ValidationError);
  }
  SUBCASE("infeasible stages name the stage") {
    StageGraph ok = make_stage({}, {{"s", "t"}}, "s", "t");
    StageGraph broken = make_stage({"s", "t"}, {{"a", "b"}}, "s", "t");
    ProblemInstance inst;
    inst.problem = ProblemKind::MSPath;
    inst.graph.stages = {ok, broken};
    try {
      approx_two_stage(inst, make_preficiency_oracle(inst.problem));
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(e.stage_index == 2);
    }
  }
  SUBCASE("the refill loop stops within |X_cap| iterations") {
    std::mt19937 rng(41);
    for (int round = 0; round < 10; ++round) {
      ProblemInstance inst = random_instance(ProblemKind::MMaxBIS, rng, 2, 6);
      auto [sol, log] =
          approx_two_stage(inst, make_preficiency_oracle(inst.problem));
      std::size_t loop2 = 0;
      for (const auto& entry : log.entries) {
        if (entry.loop == 2) ++loop2;
      }
      CHECK(loop2 <= intersection_elements(inst.graph,
                                           selecting_kind(inst.problem))
                         .size());
    }
  }
  SUBCASE("quality bound against the exact optimum on random instances") {
    std::mt19937 rng(7);
    const ProblemKind kinds[] = {ProblemKind::MSPath, ProblemKind::MMinCut,
                                 ProblemKind::MMaxBIS, ProblemKind::MMinPM};
    for (ProblemKind kind : kinds) {
      for (int round = 0; round < 10; ++round) {
        ProblemInstance inst = random_instance(kind, rng, 2, 6);
        auto [sol, log] =
            approx_two_stage(inst, make_preficiency_oracle(kind));
        long long q =
            (long long)global_quality(sol, QualityKind::IntersectionProfit);
        long long opt =
            exact_multistage(inst, QualityKind::IntersectionProfit).quality;
        long long chi = (long long)intertwinement(inst.graph);
        CHECK(q * q * 2 * chi >= opt * opt);
        CHECK(opt >= q);  // the oracle optimum dominates any framework output
        CHECK(verify_sequence(inst, sol).all_optimal());
      }
    }
  }
}

TEST_CASE("window_lift") {
  StageGraph diamond = make_stage(
      {}, {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}}, "s", "t");
  SUBCASE("identical stages reach the optimum") {
    ProblemInstance inst = make_instance(
        ProblemKind::MSPath, {diamond, diamond, diamond, diamond});
    SolutionSequence sol = approx_multistage(inst);
    long long opt =
        exact_multistage(inst, QualityKind::IntersectionProfit).quality;
    CHECK((long long)global_quality(sol, QualityKind::IntersectionProfit) ==
          opt);
    CHECK(opt == 6);
  }
  SUBCASE("subalgorithm runs once per window") {
    ProblemInstance inst = make_instance(
        ProblemKind::MSPath, {diamond, diamond, diamond});
    int calls = 0;
    SubAlgorithm counting = [&calls](const ProblemInstance& window) {
      ++calls;
      return exact_multistage(window, QualityKind::IntersectionProfit)
          .solution;
    };
    window_lift(inst, 2, counting, QualityKind::IntersectionProfit);
    CHECK(calls == 3 + 2 - 1);
    calls = 0;
    window_lift(inst, 3, counting, QualityKind::IntersectionProfit);
    CHECK(calls == 3 + 3 - 1);
  }
  SUBCASE("exact windows give at least half the optimum") {
    std::mt19937 rng(99);
    for (int round = 0; round < 8; ++round) {
      ProblemInstance inst =
          random_instance(ProblemKind::MMaxBIS, rng, 3 + rng() % 3, 5);
      SubAlgorithm exact_window = [](const ProblemInstance& window) {
        return exact_multistage(window, QualityKind::IntersectionProfit)
            .solution;
      };
      long long q = (long long)global_quality(
          window_lift(inst, 2, exact_window, QualityKind::IntersectionProfit),
          QualityKind::IntersectionProfit);
      long long opt =
          exact_multistage(inst, QualityKind::IntersectionProfit).quality;
      CHECK(2 * q >= opt);
    }
  }
  SUBCASE("minimization goal stitches the argmin") {
    ProblemInstance inst = make_instance(
        ProblemKind::MSPath, {diamond, diamond, diamond});
    SubAlgorithm exact_window = [](const ProblemInstance& window) {
      return exact_multistage(window, QualityKind::SymmetricDifferenceCost)
          .solution;
    };
    SolutionSequence sol = window_lift(inst, 2, exact_window,
                                       QualityKind::SymmetricDifferenceCost);
    CHECK(global_quality(sol, QualityKind::SymmetricDifferenceCost) == 0);
  }
}

TEST_CASE("approx_multistage") {
  SUBCASE("tau=2 does no worse than the plain two-stage run") {
    std::mt19937 rng(13);
    for (int round = 0; round < 6; ++round) {
      ProblemInstance inst = random_instance(ProblemKind::MMinCut, rng, 2, 6);
      auto [two_stage, log] =
          approx_two_stage(inst, make_preficiency_oracle(inst.problem));
      SolutionSequence lifted = approx_multistage(inst);
      CHECK(global_quality(lifted, QualityKind::IntersectionProfit) >=
            global_quality(two_stage, QualityKind::IntersectionProfit));
    }
  }
  SUBCASE("stagewise optimality and the composed bound on random instances") {
    std::mt19937 rng(23);
    const ProblemKind kinds[] = {ProblemKind::MSPath, ProblemKind::MMaxBIS};
    for (ProblemKind kind : kinds) {
      for (int round = 0; round < 6; ++round) {
        ProblemInstance inst = random_instance(kind, rng, 5, 5);
        SolutionSequence sol = approx_multistage(inst);
        CHECK(verify_sequence(inst, sol).all_optimal());
        long long q =
            (long long)global_quality(sol, QualityKind::IntersectionProfit);
        long long opt =
            exact_multistage(inst, QualityKind::IntersectionProfit).quality;
        long long chi = (long long)intertwinement(inst.graph);
        CHECK(q * q * 8 * chi >= opt * opt);
      }
    }
  }
  SUBCASE("element-disjoint stages give zero, matching the optimum") {
    StageGraph g1 = unit_vertex_weights(make_stage({"a"}, {}));
    StageGraph g2 = unit_vertex_weights(make_stage({"b"}, {}));
    StageGraph g3 = unit_vertex_weights(make_stage({"c"}, {}));
    ProblemInstance inst = make_instance(ProblemKind::MMaxBIS, {g1, g2, g3});
    CHECK(global_quality(approx_multistage(inst),
                         QualityKind::IntersectionProfit) == 0);
  }
}
