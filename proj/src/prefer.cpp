#include "mss/prefer.hpp"

#include <algorithm>

namespace mss {

std::pair<std::map<ElementId, Int>, Int> canonicalize_weights(
    const std::map<ElementId, Rational>& weights) {
  Int scale = 1;
  for (const auto& [e, w] : weights) {
    if (w <= 0) {
      throw ValidationError("nonpositive weight on " + e.key());
    }
    scale = boost::multiprecision::lcm(scale, Int(denominator(w)));
  }
  std::map<ElementId, Int> result;
  for (const auto& [e, w] : weights) {
    Rational scaled = w * scale;
    result[e] = numerator(scaled);
  }
  return {result, scale};
}

ModifiedWeights modify_weights(const std::map<ElementId, Int>& base,
                               const ElementSet& preferred,
                               PreferenceDirection direction) {
  ModifiedWeights out;
  out.base = base;
  out.preferred = preferred;
  out.direction = direction;
  const Int multiplier = Int(base.size()) + 1;
  for (const auto& e : preferred) {
    if (!base.count(e)) {
      throw ValidationError("preferred element " + e.key() + " is unweighted");
    }
  }
  for (const auto& [e, w] : base) {
    if (w <= 0) throw ValidationError("base weights must be positive");
    Int m = w * multiplier;
    if (preferred.count(e)) {
      m += direction == PreferenceDirection::FavorMax ? 1 : -1;
    }
    out.modified[e] = std::move(m);
  }
  return out;
}

namespace {

ElementSet restrict_to_stage(const StageGraph& stage, ProblemKind kind,
                             const ElementSet& preferred) {
  ElementSet out;
  for (const auto& e : preferred) {
    if (e.kind != selecting_kind(kind)) continue;
    if (e.is_edge() ? stage.has_edge(e) : stage.has_vertex(e.a)) out.insert(e);
  }
  return out;
}

std::map<ElementId, Rational> vertex_weight_elements(const StageGraph& stage) {
  std::map<ElementId, Rational> out;
  for (const auto& v : stage.vertices) {
    auto it = stage.vertex_weights.find(v);
    if (it == stage.vertex_weights.end()) {
      throw ValidationError("missing vertex weight for " + v);
    }
    out[ElementId::vertex(v)] = it->second;
  }
  return out;
}

IntEdgeWeights modified_edge_weights(const StageGraph& stage,
                                     const ElementSet& preferred,
                                     PreferenceDirection direction) {
  auto [ints, scale] = canonicalize_weights(stage.edge_weights);
  (void)scale;
  return modify_weights(ints, preferred, direction).modified;
}

IntVertexWeights modified_vertex_weights(const StageGraph& stage,
                                         const ElementSet& preferred,
                                         PreferenceDirection direction) {
  auto [ints, scale] = canonicalize_weights(vertex_weight_elements(stage));
  (void)scale;
  IntVertexWeights out;
  for (auto& [e, w] : modify_weights(ints, preferred, direction).modified) {
    out[e.a] = w;
  }
  return out;
}

std::pair<std::string, std::string> stage_terminals(const StageGraph& stage) {
  if (!stage.terminals) throw ValidationError("stage has no terminals");
  return *stage.terminals;
}

StageSolution prefer_cover(const StageGraph& stage, const ElementSet& preferred,
                           PreferenceDirection direction) {
  auto cover = min_bipartite_vertex_cover(
      stage, modified_vertex_weights(stage, preferred, direction));
  cover.measure = measure_of(stage, ProblemKind::MMinBVC, cover.elements);
  return cover;
}

}  // namespace

StageSolution prefer_solve(ProblemKind kind, const StageGraph& stage,
                           const ElementSet& preferred) {
  const ElementSet y = restrict_to_stage(stage, kind, preferred);
  switch (kind) {
    case ProblemKind::MSPath: {
      auto [s, t] = stage_terminals(stage);
      auto sol = shortest_path(
          stage, modified_edge_weights(stage, y, PreferenceDirection::FavorMin),
          s, t);
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
    case ProblemKind::MMinPM: {
      auto sol = min_weight_perfect_matching(
          stage, modified_edge_weights(stage, y, PreferenceDirection::FavorMin));
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
    case ProblemKind::MMinCut: {
      auto [s, t] = stage_terminals(stage);
      auto sol = min_st_cut(
          stage, modified_edge_weights(stage, y, PreferenceDirection::FavorMin),
          s, t);
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
    case ProblemKind::MWBMaxCut: {
      auto sol = max_cut(
          stage, modified_edge_weights(stage, y, PreferenceDirection::FavorMax));
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
    case ProblemKind::MMinBVC:
      return prefer_cover(stage, y, PreferenceDirection::FavorMin);
    case ProblemKind::MMaxBIS: {
      // The independent set is the complement of the cover, so preferring Y
      // in the independent set means the cover must avoid Y-vertices among
      // equal-weight covers: the Y-nudge goes up, not down. (Preferring the
      // complement set V \ Y instead would maximize |cover \ Y|, which is
      // not the same once minimum covers differ in cardinality.)
      auto cover = prefer_cover(stage, y, PreferenceDirection::FavorMax);
      StageSolution sol;
      for (const auto& v : stage.vertices) {
        ElementId id = ElementId::vertex(v);
        if (!cover.elements.count(id)) sol.elements.insert(id);
      }
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
    case ProblemKind::MMaxBB: {
      StageGraph complement = bipartite_complement(stage);
      auto sol = prefer_solve(ProblemKind::MMaxBIS, complement, y);
      sol.measure = measure_of(stage, kind, sol.elements);
      return sol;
    }
  }
  throw MssError("unreachable");
}

StageGraph bipartite_complement(const StageGraph& stage) {
  auto [side_a, side_b] = bipartition(stage);
  StageGraph out;
  out.vertices = stage.vertices;
  out.vertex_weights = stage.vertex_weights;
  for (const auto& a : side_a) {
    for (const auto& b : side_b) {
      ElementId e = ElementId::edge(a, b);
      if (!stage.has_edge(e)) out.edges.insert(e);
    }
  }
  return out;
}

}  // namespace mss
