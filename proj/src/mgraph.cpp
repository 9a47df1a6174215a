#include "mss/mgraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mss {

ElementId ElementId::vertex(std::string label) {
  ElementId id;
  id.kind = ElementKind::Vertex;
  id.a = std::move(label);
  return id;
}

ElementId ElementId::edge(std::string u, std::string v, bool directed) {
  if (u == v) {
    throw ValidationError("self-loop edge " + u);
  }
  ElementId id;
  id.kind = ElementKind::Edge;
  if (!directed && v < u) std::swap(u, v);
  id.a = std::move(u);
  id.b = std::move(v);
  return id;
}

std::string ElementId::key() const {
  if (is_vertex()) return "v:" + a;
  return "e:" + a + "," + b;
}

ElementKind selecting_kind(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MMinPM:
    case ProblemKind::MSPath:
    case ProblemKind::MMinCut:
    case ProblemKind::MWBMaxCut:
      return ElementKind::Edge;
    default:
      return ElementKind::Vertex;
  }
}

bool is_vertex_weighted(ProblemKind kind) {
  return selecting_kind(kind) == ElementKind::Vertex;
}

bool needs_terminals(ProblemKind kind) {
  return kind == ProblemKind::MSPath || kind == ProblemKind::MMinCut;
}

bool requires_bipartite(ProblemKind kind) {
  return kind == ProblemKind::MMinBVC || kind == ProblemKind::MMaxBIS ||
         kind == ProblemKind::MMaxBB;
}

bool is_minimization(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MMinPM:
    case ProblemKind::MSPath:
    case ProblemKind::MMinCut:
    case ProblemKind::MMinBVC:
      return true;
    default:
      return false;
  }
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MMinPM: return "MMinPM";
    case ProblemKind::MSPath: return "MSPath";
    case ProblemKind::MMinCut: return "MMinCut";
    case ProblemKind::MWBMaxCut: return "MWBMaxCut";
    case ProblemKind::MMinBVC: return "MMinBVC";
    case ProblemKind::MMaxBIS: return "MMaxBIS";
    case ProblemKind::MMaxBB: return "MMaxBB";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "MMinPM") return ProblemKind::MMinPM;
  if (name == "MSPath") return ProblemKind::MSPath;
  if (name == "MMinCut") return ProblemKind::MMinCut;
  if (name == "MWBMaxCut") return ProblemKind::MWBMaxCut;
  if (name == "MMinBVC") return ProblemKind::MMinBVC;
  if (name == "MMaxBIS") return ProblemKind::MMaxBIS;
  if (name == "MMaxBB") return ProblemKind::MMaxBB;
  throw SchemaError("unknown problem kind: " + name);
}

std::size_t transition_quality(const ElementSet& s1, const ElementSet& s2,
                               QualityKind kind) {
  std::size_t common = 0;
  for (const auto& e : s1) {
    if (s2.count(e)) ++common;
  }
  if (kind == QualityKind::IntersectionProfit) return common;
  return s1.size() + s2.size() - 2 * common;
}

bool quality_is_max(QualityKind kind) {
  return kind == QualityKind::IntersectionProfit;
}

bool StageGraph::has_vertex(const std::string& label) const {
  return vertices.count(label) > 0;
}

bool StageGraph::has_edge(const ElementId& e) const {
  return edges.count(e) > 0;
}

std::vector<std::string> StageGraph::neighbors(const std::string& v) const {
  std::set<std::string> out;
  for (const auto& e : edges) {
    if (e.a == v) out.insert(e.b);
    else if (e.b == v) out.insert(e.a);
  }
  return {out.begin(), out.end()};
}

std::size_t StageGraph::degree(const std::string& v) const {
  std::size_t d = 0;
  for (const auto& e : edges) {
    if (e.a == v || e.b == v) ++d;
  }
  return d;
}

ElementSet StageGraph::elements(std::optional<ElementKind> kind) const {
  ElementSet out;
  if (!kind || *kind == ElementKind::Vertex) {
    for (const auto& v : vertices) out.insert(ElementId::vertex(v));
  }
  if (!kind || *kind == ElementKind::Edge) {
    out.insert(edges.begin(), edges.end());
  }
  return out;
}

void StageGraph::validate() const {
  for (const auto& e : edges) {
    if (!has_vertex(e.a) || !has_vertex(e.b)) {
      throw ValidationError("edge " + e.key() + " has a dangling endpoint");
    }
  }
  for (const auto& [e, w] : edge_weights) {
    if (w <= 0) {
      throw ValidationError("nonpositive weight on " + e.key());
    }
  }
  for (const auto& [v, w] : vertex_weights) {
    if (w <= 0) {
      throw ValidationError("nonpositive weight on vertex " + v);
    }
    if (!has_vertex(v)) {
      throw ValidationError("weight for unknown vertex " + v);
    }
  }
  if (terminals) {
    const auto& [s, t] = *terminals;
    if (s == t) throw ValidationError("terminals coincide: " + s);
    if (!has_vertex(s) || !has_vertex(t)) {
      throw ValidationError("terminal missing from vertex set");
    }
  }
}

std::pair<std::set<std::string>, std::set<std::string>> bipartition(
    const StageGraph& stage) {
  std::map<std::string, int> color;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : stage.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  int isolated_side = 0;
  for (const auto& start : stage.vertices) {
    if (color.count(start)) continue;
    if (adj[start].empty()) {
      // isolated vertices alternate sides in label order
      color[start] = isolated_side;
      isolated_side = 1 - isolated_side;
      continue;
    }
    color[start] = 0;  // smallest vertex of the component goes to side A
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
      std::string v = queue.front();
      queue.pop_front();
      for (const auto& w : adj[v]) {
        auto it = color.find(w);
        if (it == color.end()) {
          color[w] = 1 - color[v];
          queue.push_back(w);
        } else if (it->second == color[v]) {
          throw NotBipartiteError("stage contains an odd cycle");
        }
      }
    }
  }
  std::set<std::string> a, b;
  for (const auto& [v, c] : color) (c == 0 ? a : b).insert(v);
  return {a, b};
}

bool is_bipartite(const StageGraph& stage) {
  try {
    bipartition(stage);
    return true;
  } catch (const NotBipartiteError&) {
    return false;
  }
}

void ProblemInstance::validate() const {
  if (graph.tau() < 2) {
    throw ValidationError("instance needs at least 2 stages");
  }
  for (std::size_t i = 0; i < graph.tau(); ++i) {
    const StageGraph& stage = graph.stages[i];
    stage.validate();
    const std::string where = " (stage " + std::to_string(i + 1) + ")";
    if (needs_terminals(problem) && !stage.terminals) {
      throw ValidationError("missing terminals for " + to_string(problem) +
                            where);
    }
    if (is_vertex_weighted(problem)) {
      for (const auto& v : stage.vertices) {
        if (!stage.vertex_weights.count(v)) {
          throw ValidationError("missing vertex weight for " + v + where);
        }
      }
    } else {
      for (const auto& e : stage.edges) {
        if (!stage.edge_weights.count(e)) {
          throw ValidationError("missing edge weight for " + e.key() + where);
        }
      }
    }
    if (requires_bipartite(problem) && !is_bipartite(stage)) {
      throw ValidationError("non-bipartite stage for " + to_string(problem) +
                            where);
    }
  }
}

std::size_t pair_intersection_size(const StageGraph& g1,
                                   const StageGraph& g2) {
  std::size_t n = 0;
  for (const auto& v : g1.vertices) {
    if (g2.has_vertex(v)) ++n;
  }
  for (const auto& e : g1.edges) {
    if (g2.has_edge(e)) ++n;
  }
  return n;
}

std::size_t intertwinement(const MultistageGraph& mg) {
  std::size_t chi = 0;
  for (std::size_t i = 0; i + 1 < mg.tau(); ++i) {
    chi = std::max(chi, pair_intersection_size(mg.stages[i], mg.stages[i + 1]));
  }
  return chi;
}

ElementSet intersection_elements(const MultistageGraph& mg, ElementKind kind) {
  if (mg.stages.empty()) return {};
  ElementSet out = mg.stages.front().elements(kind);
  for (std::size_t i = 1; i < mg.tau(); ++i) {
    ElementSet next = mg.stages[i].elements(kind);
    ElementSet keep;
    for (const auto& e : out) {
      if (next.count(e)) keep.insert(e);
    }
    out.swap(keep);
  }
  return out;
}

MultistageGraph induced_submultistage(const MultistageGraph& mg,
                                      const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw IndexError("empty index list");
  MultistageGraph out;
  std::size_t prev = 0;
  for (std::size_t idx : indices) {
    if (idx < 1 || idx > mg.tau()) {
      throw IndexError("stage index " + std::to_string(idx) + " out of range");
    }
    if (idx <= prev) throw IndexError("indices must be strictly increasing");
    prev = idx;
    out.stages.push_back(mg.stages[idx - 1]);
  }
  return out;
}

std::size_t global_quality(const SolutionSequence& sol, QualityKind kind) {
  std::size_t q = 0;
  for (std::size_t i = 0; i + 1 < sol.per_stage.size(); ++i) {
    q += transition_quality(sol.per_stage[i], sol.per_stage[i + 1], kind);
  }
  return q;
}

Rational measure_of(const StageGraph& stage, ProblemKind kind,
                    const ElementSet& elements) {
  Rational total = 0;
  for (const auto& e : elements) {
    if (selecting_kind(kind) == ElementKind::Edge) {
      auto it = stage.edge_weights.find(e);
      if (!e.is_edge() || it == stage.edge_weights.end()) {
        throw ValidationError("unweighted element " + e.key() + " in measure");
      }
      total += it->second;
    } else {
      auto it = stage.vertex_weights.find(e.a);
      if (!e.is_vertex() || it == stage.vertex_weights.end()) {
        throw ValidationError("unweighted element " + e.key() + " in measure");
      }
      total += it->second;
    }
  }
  return total;
}

}  // namespace mss
