#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "mss/mgraph.hpp"

namespace mss::testing {

// Deterministic random instances for property tests. All stages of one
// instance draw from a shared universe graph so that consecutive stages
// overlap in vertices and edges; weights come from a small rational pool to
// provoke ties (which is where preference handling matters).

inline const std::vector<std::string>& weight_pool() {
  static const std::vector<std::string> pool = {"1", "1", "2",
                                                "1/2", "3/2", "3"};
  return pool;
}

inline Rational draw_weight(std::mt19937& rng) {
  const auto& pool = weight_pool();
  return parse_rational(pool[rng() % pool.size()]);
}

inline std::vector<std::string> label_range(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline bool has_path(const StageGraph& stage, const std::string& s,
                     const std::string& t) {
  std::set<std::string> seen{s};
  std::vector<std::string> queue{s};
  while (!queue.empty()) {
    std::string v = queue.back();
    queue.pop_back();
    if (v == t) return true;
    for (const auto& w : stage.neighbors(v)) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return false;
}

// Random subgraph stage over a fixed universe of labeled edges.
inline StageGraph random_stage(const std::vector<std::pair<std::string, std::string>>& universe,
                               const std::vector<std::string>& vertices,
                               std::mt19937& rng, int keep_percent) {
  StageGraph stage;
  for (const auto& v : vertices) stage.vertices.insert(v);
  for (const auto& [u, v] : universe) {
    if (int(rng() % 100) < keep_percent) {
      ElementId e = ElementId::edge(u, v);
      stage.edges.insert(e);
      stage.edge_weights[e] = draw_weight(rng);
    }
  }
  return stage;
}

inline ProblemInstance random_instance(ProblemKind kind, std::mt19937& rng,
                                       std::size_t tau, int n) {
  ProblemInstance inst;
  inst.problem = kind;
  const bool vertex_weighted = is_vertex_weighted(kind);
  const bool bipartite = requires_bipartite(kind) || kind == ProblemKind::MMinPM;

  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> universe;
  std::vector<std::string> side_a, side_b;
  if (bipartite) {
    int half = std::max(1, n / 2);
    side_a = label_range("a", half);
    side_b = label_range("b", half);
    vertices = side_a;
    vertices.insert(vertices.end(), side_b.begin(), side_b.end());
    for (const auto& u : side_a) {
      for (const auto& v : side_b) universe.push_back({u, v});
    }
  } else {
    vertices = label_range("v", n);
    if (needs_terminals(kind)) {
      vertices[0] = "s";
      vertices[n - 1] = "t";
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (std::size_t j = i + 1; j < vertices.size(); ++j) {
        universe.push_back({vertices[i], vertices[j]});
      }
    }
  }

  for (std::size_t stage_idx = 0; stage_idx < tau; ++stage_idx) {
    for (int attempt = 0;; ++attempt) {
      StageGraph stage = random_stage(universe, vertices, rng, 55);
      if (needs_terminals(kind)) stage.terminals = {{"s", "t"}};
      if (kind == ProblemKind::MSPath && !has_path(stage, "s", "t")) {
        if (attempt < 20) continue;
        ElementId direct = ElementId::edge("s", "t");
        stage.edges.insert(direct);
        stage.edge_weights[direct] = draw_weight(rng);
      }
      if (kind == ProblemKind::MMinPM) {
        // guarantee a perfect matching via a random permutation
        std::vector<std::string> shuffled = side_b;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (std::size_t i = 0; i < side_a.size(); ++i) {
          ElementId e = ElementId::edge(side_a[i], shuffled[i]);
          if (!stage.has_edge(e)) {
            stage.edges.insert(e);
            stage.edge_weights[e] = draw_weight(rng);
          }
        }
      }
      if (vertex_weighted) {
        stage.edge_weights.clear();
        for (const auto& v : stage.vertices) {
          stage.vertex_weights[v] = draw_weight(rng);
        }
      }
      inst.graph.stages.push_back(std::move(stage));
      break;
    }
  }
  inst.validate();
  return inst;
}

}  // namespace mss::testing
