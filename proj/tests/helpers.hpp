#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "mss/mgraph.hpp"

namespace mss::testing {

struct EdgeSpec {
  std::string u;
  std::string v;
  std::string w = "1";
};

inline StageGraph make_stage(std::initializer_list<std::string> vertices,
                             std::initializer_list<EdgeSpec> edges,
                             const char* s = nullptr, const char* t = nullptr) {
  StageGraph stage;
  for (const auto& v : vertices) stage.vertices.insert(v);
  for (const auto& e : edges) {
    ElementId id = ElementId::edge(e.u, e.v);
    stage.vertices.insert(e.u);
    stage.vertices.insert(e.v);
    stage.edges.insert(id);
    stage.edge_weights[id] = parse_rational(e.w);
  }
  if (s && t) stage.terminals = {{s, t}};
  return stage;
}

inline StageGraph with_vertex_weights(
    StageGraph stage,
    std::initializer_list<std::pair<std::string, std::string>> weights) {
  stage.edge_weights.clear();
  for (const auto& v : stage.vertices) stage.vertex_weights[v] = 1;
  for (const auto& [v, w] : weights) stage.vertex_weights[v] = parse_rational(w);
  return stage;
}

inline StageGraph unit_vertex_weights(StageGraph stage) {
  return with_vertex_weights(std::move(stage), {});
}

inline ProblemInstance make_instance(ProblemKind kind,
                                     std::vector<StageGraph> stages) {
  ProblemInstance inst;
  inst.problem = kind;
  inst.graph.stages = std::move(stages);
  inst.validate();
  return inst;
}

inline ElementSet edges_of(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  ElementSet out;
  for (const auto& [u, v] : pairs) out.insert(ElementId::edge(u, v));
  return out;
}

inline ElementSet vertices_of(std::initializer_list<std::string> labels) {
  ElementSet out;
  for (const auto& v : labels) out.insert(ElementId::vertex(v));
  return out;
}

}  // namespace mss::testing
