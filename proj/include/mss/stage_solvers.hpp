#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mss/mgraph.hpp"

namespace mss {

// Exact single-stage solvers. All of them take strictly positive integer
// weights so that callers can feed either canonicalized original weights or
// the preference-modified weights; measures are reported under the weights
// given here.
using IntEdgeWeights = std::map<ElementId, Int>;
using IntVertexWeights = std::map<std::string, Int>;

struct StageSolution {
  ElementSet elements;
  Rational measure;
};

// Directed arc network with positive integer capacities.
struct FlowNetwork {
  struct Arc {
    int from = -1;
    int to = -1;
    Int capacity;
  };

  std::vector<std::string> labels;
  std::map<std::string, int> index;
  std::vector<Arc> arcs;
  int source = -1;
  int sink = -1;

  int add_vertex(const std::string& label);
  void add_arc(const std::string& from, const std::string& to, Int capacity);
  void set_terminals(const std::string& source_label,
                     const std::string& sink_label);
};

struct MaxFlowResult {
  Int value;
  // Arcs leaving the source side, indices into FlowNetwork::arcs. Their
  // capacities sum to `value`.
  std::vector<std::size_t> cut_arcs;
  // Vertices reachable from the source in the final residual graph.
  std::set<std::string> source_side;
};

// Edmonds-Karp (BFS augmenting paths), deterministic in arc insertion order.
MaxFlowResult max_flow_min_cut(const FlowNetwork& net);

// Minimum-weight s-t path; Infeasible when t is unreachable. Ties are broken
// toward the lexicographically smallest predecessor, making output unique.
StageSolution shortest_path(const StageGraph& stage,
                            const IntEdgeWeights& weights,
                            const std::string& s, const std::string& t);

// Minimum-weight perfect matching: Hungarian algorithm on bipartite stages,
// exhaustive search otherwise (|V| <= 16, TooLarge beyond).
StageSolution min_weight_perfect_matching(const StageGraph& stage,
                                          const IntEdgeWeights& weights);

// Undirected min s-t cut via doubled arcs; the returned cut is the
// residual-reachability cut (edges leaving the set of residual-reachable
// vertices). Disconnected terminals give the empty cut, measure 0.
StageSolution min_st_cut(const StageGraph& stage, const IntEdgeWeights& weights,
                         const std::string& s, const std::string& t);

// Maximum cut. Bipartite stages use the closed form (every edge is cut);
// otherwise exhaustive bipartition search up to 20 vertices.
StageSolution max_cut(const StageGraph& stage, const IntEdgeWeights& weights);

// Minimum-weight vertex cover of a bipartite stage via the terminal network:
// source->A and B->sink arcs carry the vertex weights, original edges carry
// M = 1 + sum of all vertex weights so they never enter a minimum cut.
StageSolution min_bipartite_vertex_cover(const StageGraph& stage,
                                         const IntVertexWeights& weights);

}  // namespace mss
