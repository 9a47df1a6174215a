#include <doctest.h>

#include "mss/instance_io.hpp"
#include "mss/mgraph.hpp"

#include "helpers.hpp"

using namespace mss;
using namespace mss::testing;

TEST_CASE("element identity normalizes undirected edges") {
  CHECK(ElementId::edge("b", "a") == ElementId::edge("a", "b"));
  CHECK(ElementId::edge("a", "b").key() == "e:a,b");
  CHECK(ElementId::vertex("a").key() == "v:a");
  CHECK(ElementId::vertex("a") != ElementId::vertex("b"));
  CHECK_THROWS_AS(ElementId::edge("a", "a"), ValidationError);
}

TEST_CASE("parse_instance accepts a 2-stage MSPath document") {
  const char* doc = R"({
    "problem": "MSPath",
    "stages": [
      {"vertices": ["s","a","t"],
       "edges": [{"u":"s","v":"a","w":"3/2"}, {"u":"a","v":"t","w":"1"}],
       "s": "s", "t": "t"},
      {"vertices": ["s","a","t"],
       "edges": [{"u":"s","v":"t","w":"2"}],
       "s": "s", "t": "t"}
    ]})";
  ProblemInstance inst = parse_instance(doc);
  CHECK(inst.graph.tau() == 2);
  CHECK(inst.problem == ProblemKind::MSPath);
  CHECK(inst.graph.stages[0].edge_weights.at(ElementId::edge("s", "a")) ==
        Rational(3, 2));
}

TEST_CASE("parse_instance rejects bad documents") {
  CHECK_THROWS_AS(parse_instance("not json"), SchemaError);
  // zero weight
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MSPath","stages":[
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"0"}],"s":"s","t":"t"},
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"1"}],"s":"s","t":"t"}]})"),
      ValidationError);
  // single stage
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MSPath","stages":[
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"1"}],"s":"s","t":"t"}]})"),
      ValidationError);
  // dangling endpoint
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MMinCut","stages":[
        {"vertices":["s","t"],"edges":[{"u":"s","v":"x","w":"1"}],"s":"s","t":"t"},
        {"vertices":["s","t"],"edges":[],"s":"s","t":"t"}]})"),
      ValidationError);
  // missing terminals
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MMinCut","stages":[
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"1"}]},
        {"vertices":["s","t"],"edges":[],"s":"s","t":"t"}]})"),
      ValidationError);
  // non-bipartite stage for a bipartite-only kind
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MMinBVC","stages":[
        {"vertices":["a","b","c"],"edges":[{"u":"a","v":"b"},{"u":"b","v":"c"},{"u":"a","v":"c"}]},
        {"vertices":["a"],"edges":[]}]})"),
      ValidationError);
  // malformed weight strings
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MSPath","stages":[
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"1.5"}],"s":"s","t":"t"},
        {"vertices":["s","t"],"edges":[],"s":"s","t":"t"}]})"),
      SchemaError);
  // self-loops
  CHECK_THROWS_AS(
      parse_instance(R"({"problem":"MMaxBIS","stages":[
        {"vertices":["a"],"edges":[{"u":"a","v":"a"}]},
        {"vertices":["a"],"edges":[]}]})"),
      ValidationError);
}

TEST_CASE("serialization round-trips validated instances") {
  const char* docs[] = {
      R"({"problem":"MSPath","stages":[
        {"vertices":["s","a","t"],"edges":[{"u":"s","v":"a","w":"3/2"},{"u":"a","v":"t","w":"2"}],"s":"s","t":"t"},
        {"vertices":["s","t"],"edges":[{"u":"s","v":"t","w":"1"}],"s":"s","t":"t"}]})",
      R"({"problem":"MMaxBIS","stages":[
        {"vertices":["a","b"],"edges":[{"u":"a","v":"b"}],"vertex_weights":{"a":"2","b":"1/3"}},
        {"vertices":["a","b"],"edges":[]}]})",
  };
  for (const char* doc : docs) {
    std::string first = serialize_instance(parse_instance(doc));
    std::string second = serialize_instance(parse_instance(first));
    CHECK(first == second);
  }
}

TEST_CASE("intertwinement") {
  StageGraph k2 = make_stage({}, {{"u", "v"}});
  SUBCASE("identical single-edge stages share two vertices and one edge") {
    MultistageGraph mg{{k2, k2}};
    CHECK(intertwinement(mg) == 3);
  }
  SUBCASE("disjoint stages share nothing") {
    StageGraph other = make_stage({}, {{"x", "y"}});
    MultistageGraph mg{{k2, other}};
    CHECK(intertwinement(mg) == 0);
  }
  SUBCASE("maximum over consecutive pairs") {
    StageGraph g1 = make_stage({"p", "q"}, {});
    StageGraph g2 = make_stage({"p", "q"}, {{"c", "d"}});
    StageGraph g3 = make_stage({"p", "q"}, {{"c", "d"}, {"c", "q"}});
    // |X1 ∩ X2| = 2 vertices; |X2 ∩ X3| = 4 vertices + 1 edge
    MultistageGraph mg{{g1, g2, g3}};
    CHECK(pair_intersection_size(g1, g2) == 2);
    CHECK(pair_intersection_size(g2, g3) == 5);
    CHECK(intertwinement(mg) == 5);
  }
  SUBCASE("bounded by the largest stage") {
    MultistageGraph mg{{k2, k2}};
    CHECK(intertwinement(mg) <= k2.elements().size());
  }
}

TEST_CASE("intersection_elements") {
  StageGraph k2 = make_stage({}, {{"u", "v"}});
  SUBCASE("identical stages keep all elements") {
    MultistageGraph mg{{k2, k2}};
    CHECK(intersection_elements(mg, ElementKind::Vertex) ==
          vertices_of({"u", "v"}));
    CHECK(intersection_elements(mg, ElementKind::Edge) ==
          edges_of({{"u", "v"}}));
  }
  SUBCASE("only the shared vertex remains") {
    StageGraph g2 = make_stage({"a", "x"}, {});
    StageGraph g1 = make_stage({"a", "u"}, {});
    MultistageGraph mg{{g1, g2}};
    CHECK(intersection_elements(mg, ElementKind::Vertex) == vertices_of({"a"}));
  }
  SUBCASE("edge identity requires the edge in all stages") {
    StageGraph g2 = make_stage({"u", "v"}, {});
    MultistageGraph mg{{k2, g2}};
    CHECK(intersection_elements(mg, ElementKind::Edge).empty());
    CHECK(intersection_elements(mg, ElementKind::Vertex).size() == 2);
  }
  SUBCASE("adding a stage never enlarges the intersection") {
    StageGraph g3 = make_stage({"u"}, {});
    MultistageGraph two{{k2, k2}};
    MultistageGraph three{{k2, k2, g3}};
    auto big = intersection_elements(two, ElementKind::Vertex);
    auto small = intersection_elements(three, ElementKind::Vertex);
    for (const auto& e : small) CHECK(big.count(e) == 1);
  }
}

TEST_CASE("induced_submultistage") {
  MultistageGraph mg;
  for (int i = 0; i < 5; ++i) {
    mg.stages.push_back(make_stage({std::string("v") + char('0' + i)}, {}));
  }
  SUBCASE("middle slice") {
    MultistageGraph sub = induced_submultistage(mg, {2, 3});
    CHECK(sub.tau() == 2);
    CHECK(sub.stages[0].has_vertex("v1"));
    CHECK(sub.stages[1].has_vertex("v2"));
  }
  SUBCASE("identity") {
    MultistageGraph sub = induced_submultistage(mg, {1, 2, 3, 4, 5});
    CHECK(sub.tau() == 5);
  }
  SUBCASE("single stage allowed internally") {
    CHECK(induced_submultistage(mg, {4}).tau() == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(induced_submultistage(mg, {6}), IndexError);
    CHECK_THROWS_AS(induced_submultistage(mg, {0}), IndexError);
    CHECK_THROWS_AS(induced_submultistage(mg, {3, 2}), IndexError);
    CHECK_THROWS_AS(induced_submultistage(mg, {}), IndexError);
  }
}

TEST_CASE("global_quality") {
  SolutionSequence sol;
  sol.problem = ProblemKind::MMaxBIS;
  SUBCASE("identical sets across three stages") {
    ElementSet s = vertices_of({"a", "b", "c", "d"});
    sol.per_stage = {s, s, s};
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 8);
  }
  SUBCASE("disjoint sets") {
    sol.per_stage = {vertices_of({"a"}), vertices_of({"b"})};
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 0);
  }
  SUBCASE("symmetric difference") {
    sol.per_stage = {vertices_of({"a", "b"}), vertices_of({"b", "c"})};
    CHECK(global_quality(sol, QualityKind::SymmetricDifferenceCost) == 2);
  }
  SUBCASE("single stage has no transitions") {
    sol.per_stage = {vertices_of({"a"})};
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == 0);
  }
  SUBCASE("intersection profit is reversal invariant") {
    sol.per_stage = {vertices_of({"a", "b"}), vertices_of({"b"}),
                     vertices_of({"b", "c", "d"})};
    std::size_t forward = global_quality(sol, QualityKind::IntersectionProfit);
    std::reverse(sol.per_stage.begin(), sol.per_stage.end());
    CHECK(global_quality(sol, QualityKind::IntersectionProfit) == forward);
  }
}

TEST_CASE("bipartition is canonical and rejects odd cycles") {
  StageGraph path = make_stage({}, {{"a", "b"}, {"b", "c"}});
  auto [a, b] = bipartition(path);
  CHECK(a == std::set<std::string>{"a", "c"});
  CHECK(b == std::set<std::string>{"b"});
  StageGraph triangle =
      make_stage({}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK_THROWS_AS(bipartition(triangle), NotBipartiteError);
  CHECK(!is_bipartite(triangle));

  // isolated vertices alternate sides in label order
  StageGraph isolated = make_stage({"a", "b", "c"}, {});
  auto [ia, ib] = bipartition(isolated);
  CHECK(ia == std::set<std::string>{"a", "c"});
  CHECK(ib == std::set<std::string>{"b"});
}

TEST_CASE("solution documents") {
  SolutionSequence sol;
  sol.problem = ProblemKind::MSPath;
  sol.per_stage = {edges_of({{"s", "a"}, {"a", "t"}}), edges_of({{"s", "t"}})};
  std::string doc = serialize_solution(sol, 1);
  SolutionSequence parsed = parse_solution(doc, ProblemKind::MSPath);
  CHECK(parsed.per_stage == sol.per_stage);
  CHECK(doc.find("e:a,t") != std::string::npos);
}
