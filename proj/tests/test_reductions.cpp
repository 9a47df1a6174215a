#include <doctest.h>

#include "mss/instance_io.hpp"
#include "mss/reductions.hpp"

#include "helpers.hpp"

using namespace mss;
using namespace mss::testing;

namespace {

MaxCutInstance maxcut(std::initializer_list<std::pair<std::string, std::string>> edges,
                      std::size_t k,
                      std::initializer_list<std::string> extra = {}) {
  MaxCutInstance mc;
  mc.k = k;
  for (const auto& v : extra) mc.graph.vertices.insert(v);
  for (const auto& [u, v] : edges) {
    mc.graph.vertices.insert(u);
    mc.graph.vertices.insert(v);
    mc.graph.edges.insert(ElementId::edge(u, v));
  }
  return mc;
}

MaxCutInstance triangle(std::size_t k) {
  return maxcut({{"u", "v"}, {"v", "w"}, {"u", "w"}}, k);
}

std::size_t count_label_prefix(const StageGraph& stage, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& v : stage.vertices) {
    if (v.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

// q' = sum over transitions of |S_i ∩ S_{i+1}| + |complement agreement|
std::size_t q_prime(const ProblemInstance& inst, const SolutionSequence& sol) {
  std::size_t total = 0;
  for (std::size_t i = 0; i + 1 < sol.per_stage.size(); ++i) {
    const StageGraph& g1 = inst.graph.stages[i];
    const StageGraph& g2 = inst.graph.stages[i + 1];
    for (const auto& v : g1.vertices) {
      if (!g2.has_vertex(v)) continue;
      bool in1 = sol.per_stage[i].count(ElementId::vertex(v)) > 0;
      bool in2 = sol.per_stage[i + 1].count(ElementId::vertex(v)) > 0;
      if (in1 == in2) ++total;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("reduce_to_mmincut structure on a triangle") {
  ReductionOutput out = reduce_to_mmincut(triangle(2));
  CHECK(out.kappa == 5);
  const StageGraph& g1 = out.instance.graph.stages[0];
  const StageGraph& g2 = out.instance.graph.stages[1];
  CHECK(count_label_prefix(g1, "x:") == 3);
  // per vertex of degree 2: two alpha and two beta middle edges
  ElementSet shared;
  for (const auto& e : g1.edges) {
    if (g2.has_edge(e)) shared.insert(e);
  }
  CHECK(shared.size() == 12);
  CHECK(g1.terminals == g2.terminals);
  // all weights are 1
  for (const auto& [e, w] : g1.edge_weights) CHECK(w == Rational(1));
}

TEST_CASE("reduce_to_mminbvc structure on a triangle") {
  ReductionOutput out = reduce_to_mminbvc(triangle(2));
  CHECK(out.kappa == 5);
  const StageGraph& g1 = out.instance.graph.stages[0];
  const StageGraph& g2 = out.instance.graph.stages[1];
  CHECK(g1.vertices.size() == 18);
  CHECK(g1.edges.size() == 18);
  CHECK(g2.vertices == g1.vertices);
  CHECK(g2.edges.size() == 12);
  // stage 1 is a disjoint union of cycles; stage 2 adds isolated vertices
  for (const auto& v : g1.vertices) CHECK(g1.degree(v) == 2);
  for (const auto& v : g2.vertices) {
    std::size_t d = g2.degree(v);
    CHECK((d == 0 || d == 2));
    if (d == 0) CHECK(v.find(":f") != std::string::npos);
  }
}

TEST_CASE("reduce_to_mwbmaxcut structure") {
  ReductionOutput out = reduce_to_mwbmaxcut(triangle(2));
  for (const StageGraph& stage : out.instance.graph.stages) {
    // planarity necessary condition (Euler bound)
    if (stage.vertices.size() >= 3) {
      CHECK(stage.edges.size() <= 3 * stage.vertices.size() - 6);
    }
    // weights are 1 on shared edges and 4 elsewhere
    const StageGraph& other =
        &stage == &out.instance.graph.stages[0] ? out.instance.graph.stages[1]
                                                : out.instance.graph.stages[0];
    for (const auto& [e, w] : stage.edge_weights) {
      CHECK(w == (other.has_edge(e) ? Rational(1) : Rational(4)));
    }
  }
  CHECK_THROWS_AS(
      reduce_to_mwbmaxcut(maxcut(
          {{"c", "a"}, {"c", "b"}, {"c", "d"}, {"c", "e"}}, 1)),
      DegreeTooHighError);
}

TEST_CASE("reduction outputs re-parse and witnesses stay disjoint") {
  for (auto reduce : {reduce_to_mmincut, reduce_to_mwbmaxcut, reduce_to_mminbvc}) {
    ReductionOutput out = reduce(triangle(1));
    ProblemInstance reparsed =
        parse_instance(serialize_instance(out.instance));
    CHECK(serialize_instance(reparsed) == serialize_instance(out.instance));
    std::set<std::string> seen;
    for (const auto& [v, labels] : out.vertex_witness) {
      for (const auto& label : labels) CHECK(seen.insert(label).second);
    }
  }
  CHECK_THROWS_AS(reduce_to_mmincut(maxcut({{"a:b", "c"}}, 0)),
                  ValidationError);
}

TEST_CASE("reduction equivalence on small instances") {
  OracleConfig config;
  config.max_dp_transitions = 1'000'000'000ull;
  SUBCASE("single edge") {
    for (auto reduce : {reduce_to_mmincut, reduce_to_mwbmaxcut,
                        reduce_to_mminbvc}) {
      MaxCutInstance yes = maxcut({{"u", "v"}}, 1);
      ReductionCheck c1 = verify_reduction(yes, reduce(yes), config);
      CHECK(c1.maxcut_yes);
      CHECK(c1.multistage_yes);
      CHECK(c1.equivalent);

      MaxCutInstance no = maxcut({{"u", "v"}}, 2);
      ReductionCheck c2 = verify_reduction(no, reduce(no), config);
      CHECK(!c2.maxcut_yes);
      CHECK(!c2.multistage_yes);
      CHECK(c2.equivalent);
    }
  }
  SUBCASE("path u-v-w with k=2 is a yes-instance") {
    MaxCutInstance mc = maxcut({{"u", "v"}, {"v", "w"}}, 2);
    for (auto reduce : {reduce_to_mmincut, reduce_to_mwbmaxcut,
                        reduce_to_mminbvc}) {
      CHECK(verify_reduction(mc, reduce(mc), config).equivalent);
    }
  }
  SUBCASE("triangle with k=2 yes, k=3 no") {
    for (std::size_t k : {2u, 3u}) {
      MaxCutInstance mc = triangle(k);
      for (auto reduce : {reduce_to_mmincut, reduce_to_mwbmaxcut,
                          reduce_to_mminbvc}) {
        ReductionCheck check = verify_reduction(mc, reduce(mc), config);
        CHECK(check.maxcut_yes == (k == 2));
        CHECK(check.equivalent);
      }
    }
  }
}

TEST_CASE("max_cut_value") {
  CHECK(max_cut_value(triangle(0).graph) == 2);
  CHECK(max_cut_value(maxcut({{"u", "v"}}, 0).graph) == 1);
  CHECK(max_cut_value(maxcut({}, 0, {"a"}).graph) == 0);
}

TEST_CASE("vertex_variant_min_cut") {
  StageGraph path = make_stage({}, {{"s", "a"}, {"a", "t"}}, "s", "t");
  ProblemInstance inst = make_instance(ProblemKind::MMinCut, {path, path});
  SUBCASE("largest partitions agree on both stages") {
    SolutionSequence sol =
        vertex_variant_min_cut(inst, VertexVariantMode::LargestPartition);
    CHECK(sol.per_stage[0] == vertices_of({"s", "a"}));
    CHECK(sol.per_stage[1] == vertices_of({"s", "a"}));
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 2);
  }
  SUBCASE("q-prime counts agreement on both sides") {
    SolutionSequence sol =
        vertex_variant_min_cut(inst, VertexVariantMode::QPrime);
    CHECK(q_prime(inst, sol) == 3);
  }
  SUBCASE("only shared vertices can contribute") {
    StageGraph g1 = make_stage({}, {{"s", "x"}, {"x", "t"}}, "s", "t");
    StageGraph g2 = make_stage({}, {{"s", "y"}, {"y", "t"}}, "s", "t");
    ProblemInstance mixed = make_instance(ProblemKind::MMinCut, {g1, g2});
    SolutionSequence sol =
        vertex_variant_min_cut(mixed, VertexVariantMode::LargestPartition);
    CHECK(sol.per_stage[0] == vertices_of({"s", "x"}));
    CHECK(sol.per_stage[1] == vertices_of({"s", "y"}));
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 1);
  }
  SUBCASE("missing terminals are infeasible") {
    ProblemInstance broken;
    broken.problem = ProblemKind::MMinCut;
    broken.graph.stages = {path, make_stage({}, {{"s", "a"}})};
    CHECK_THROWS_AS(
        vertex_variant_min_cut(broken, VertexVariantMode::LargestPartition),
        InfeasibleError);
  }
}
