#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mss/errors.hpp"
#include "mss/rational.hpp"

namespace mss {

enum class ElementKind { Vertex, Edge };

// A graph element identified by labels. Identity across stages is by label:
// two stages contain "the same" edge exactly when the normalized endpoint
// pairs are equal. Undirected edges are normalized to lexicographic order.
struct ElementId {
  ElementKind kind = ElementKind::Vertex;
  std::string a;
  std::string b;  // empty for vertices

  static ElementId vertex(std::string label);
  // Throws ValidationError on self-loops.
  static ElementId edge(std::string u, std::string v, bool directed = false);

  bool is_vertex() const { return kind == ElementKind::Vertex; }
  bool is_edge() const { return kind == ElementKind::Edge; }

  // "v:<label>" or "e:<u>,<v>"
  std::string key() const;

  auto operator<=>(const ElementId&) const = default;
};

using ElementSet = std::set<ElementId>;

enum class ProblemKind {
  MMinPM,
  MSPath,
  MMinCut,
  MWBMaxCut,
  MMinBVC,
  MMaxBIS,
  MMaxBB,
};

ElementKind selecting_kind(ProblemKind kind);
bool is_vertex_weighted(ProblemKind kind);     // vertex-selecting kinds
bool needs_terminals(ProblemKind kind);        // MSPath, MMinCut
bool requires_bipartite(ProblemKind kind);     // MMinBVC, MMaxBIS, MMaxBB
bool is_minimization(ProblemKind kind);        // per-stage goal psi
std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

enum class QualityKind { IntersectionProfit, SymmetricDifferenceCost };

// q_cap = |S ∩ S'| (goal max), q_sym = |S △ S'| (goal min).
std::size_t transition_quality(const ElementSet& s1, const ElementSet& s2,
                               QualityKind kind);
bool quality_is_max(QualityKind kind);

// One stage: an enriched graph. Weight maps are keyed by element; which map
// is meaningful depends on the ProblemKind of the enclosing instance.
struct StageGraph {
  std::set<std::string> vertices;
  std::set<ElementId> edges;
  bool directed = false;
  std::map<ElementId, Rational> edge_weights;
  std::map<std::string, Rational> vertex_weights;
  std::optional<std::pair<std::string, std::string>> terminals;

  bool has_vertex(const std::string& label) const;
  bool has_edge(const ElementId& e) const;
  // Sorted unique neighbor labels (undirected view).
  std::vector<std::string> neighbors(const std::string& v) const;
  std::size_t degree(const std::string& v) const;

  // All elements of one kind, or both.
  ElementSet elements(std::optional<ElementKind> kind = std::nullopt) const;

  // Structural invariants: endpoints present, weights positive, terminals
  // distinct and present. Throws ValidationError.
  void validate() const;
};

// Canonical 2-coloring: components are processed in order of their smallest
// vertex, which is assigned to side A. Throws NotBipartiteError. The same
// coloring is used everywhere a bipartition matters (vertex-cover network,
// bipartite complement, biclique feasibility), so that all routes agree.
std::pair<std::set<std::string>, std::set<std::string>> bipartition(
    const StageGraph& stage);

bool is_bipartite(const StageGraph& stage);

struct MultistageGraph {
  std::vector<StageGraph> stages;

  std::size_t tau() const { return stages.size(); }
};

struct ProblemInstance {
  ProblemKind problem = ProblemKind::MSPath;
  MultistageGraph graph;

  // Full semantic validation: tau >= 2, per-stage invariants, kind-specific
  // requirements (terminals, bipartiteness). Throws ValidationError.
  void validate() const;
};

// One element set per stage.
struct SolutionSequence {
  ProblemKind problem = ProblemKind::MSPath;
  std::vector<ElementSet> per_stage;
};

// chi = max over consecutive stage pairs of |X_i ∩ X_{i+1}|, counting both
// vertices and edges. Zero for fewer than two stages.
std::size_t intertwinement(const MultistageGraph& mg);

// Shared-element count for one consecutive pair (vertices + edges).
std::size_t pair_intersection_size(const StageGraph& g1, const StageGraph& g2);

// X_cap restricted to one kind, over all stages.
ElementSet intersection_elements(const MultistageGraph& mg, ElementKind kind);

// Stages at the given 1-based indices, in order. Indices must be nonempty,
// strictly increasing and within range; a single-stage result is permitted
// (window lifting uses boundary windows of length one).
MultistageGraph induced_submultistage(const MultistageGraph& mg,
                                      const std::vector<std::size_t>& indices);

// Q(S) = sum of transition qualities over consecutive pairs.
std::size_t global_quality(const SolutionSequence& sol, QualityKind kind);

// m(G, S) under the stage's original rational weights: edge-weight sum for
// edge-selecting kinds, vertex-weight sum for vertex-selecting kinds.
Rational measure_of(const StageGraph& stage, ProblemKind kind,
                    const ElementSet& elements);

}  // namespace mss
