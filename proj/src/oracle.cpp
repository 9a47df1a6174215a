#include "mss/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>

#include "mss/prefer.hpp"
#include "mss/stage_solvers.hpp"

namespace mss {

OracleConfig OracleConfig::from_env() {
  OracleConfig config;
  if (const char* cap = std::getenv("MSS_MAX_ORACLE_STATES")) {
    config.max_dp_transitions = std::strtoull(cap, nullptr, 10);
    if (config.max_dp_transitions == 0) config.max_dp_transitions = 1;
  }
  return config;
}

bool VerifyReport::all_optimal() const {
  return std::all_of(stagewise_optimal.begin(), stagewise_optimal.end(),
                     [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// feasibility predicates

namespace {

bool elements_in_stage(const StageGraph& stage, ProblemKind kind,
                       const ElementSet& elements) {
  for (const auto& e : elements) {
    if (e.kind != selecting_kind(kind)) return false;
    if (e.is_edge() ? !stage.has_edge(e) : !stage.has_vertex(e.a)) return false;
  }
  return true;
}

bool is_st_path(const StageGraph& stage, const ElementSet& edges) {
  if (!stage.terminals) return false;
  const auto& [s, t] = *stage.terminals;
  if (edges.empty()) return false;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (const auto& [v, nb] : adj) {
    std::size_t want = (v == s || v == t) ? 1 : 2;
    if (nb.size() != want) return false;
  }
  if (!adj.count(s) || !adj.count(t)) return false;
  // walk from s; a simple path visits every edge exactly once
  std::string prev = s, cur = adj[s][0];
  std::size_t steps = 1;
  while (cur != t) {
    const auto& nb = adj[cur];
    std::string next = (nb[0] == prev) ? nb[1] : nb[0];
    prev = cur;
    cur = next;
    ++steps;
  }
  return steps == edges.size();
}

bool is_perfect_matching(const StageGraph& stage, const ElementSet& edges) {
  std::map<std::string, int> hit;
  for (const auto& e : edges) {
    hit[e.a]++;
    hit[e.b]++;
  }
  for (const auto& v : stage.vertices) {
    auto it = hit.find(v);
    if (it == hit.end() || it->second != 1) return false;
  }
  return hit.size() == stage.vertices.size();
}

bool is_literal_cut(const StageGraph& stage, const ElementSet& cut) {
  if (!stage.terminals) return false;
  const auto& [s, t] = *stage.terminals;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : stage.edges) {
    if (cut.count(e)) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::set<std::string> seen{s};
  std::deque<std::string> queue{s};
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    if (v == t) return false;
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return true;
}

// F = delta(U) for some U: two-color each component so that F-edges cross
// and other edges do not.
bool is_cut_form(const StageGraph& stage, const ElementSet& cut) {
  std::map<std::string, int> color;
  std::map<std::string, std::vector<std::pair<std::string, int>>> adj;
  for (const auto& e : stage.edges) {
    int diff = cut.count(e) ? 1 : 0;
    adj[e.a].push_back({e.b, diff});
    adj[e.b].push_back({e.a, diff});
  }
  for (const auto& start : stage.vertices) {
    if (color.count(start)) continue;
    color[start] = 0;
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
      std::string v = queue.front();
      queue.pop_front();
      for (const auto& [w, diff] : adj[v]) {
        int expected = color[v] ^ diff;
        auto it = color.find(w);
        if (it == color.end()) {
          color[w] = expected;
          queue.push_back(w);
        } else if (it->second != expected) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_vertex_cover(const StageGraph& stage, const ElementSet& cover) {
  for (const auto& e : stage.edges) {
    if (!cover.count(ElementId::vertex(e.a)) &&
        !cover.count(ElementId::vertex(e.b))) {
      return false;
    }
  }
  return true;
}

bool is_independent_set(const StageGraph& stage, const ElementSet& set) {
  for (const auto& e : stage.edges) {
    if (set.count(ElementId::vertex(e.a)) && set.count(ElementId::vertex(e.b))) {
      return false;
    }
  }
  return true;
}

bool is_biclique(const StageGraph& stage, const ElementSet& set) {
  auto [side_a, side_b] = bipartition(stage);
  std::vector<std::string> in_a, in_b;
  for (const auto& e : set) {
    if (side_a.count(e.a)) in_a.push_back(e.a);
    else in_b.push_back(e.a);
  }
  for (const auto& a : in_a) {
    for (const auto& b : in_b) {
      if (!stage.has_edge(ElementId::edge(a, b))) return false;
    }
  }
  return true;
}

}  // namespace

bool is_feasible(const StageGraph& stage, ProblemKind kind,
                 const ElementSet& elements) {
  if (!elements_in_stage(stage, kind, elements)) return false;
  switch (kind) {
    case ProblemKind::MSPath: return is_st_path(stage, elements);
    case ProblemKind::MMinPM: return is_perfect_matching(stage, elements);
    case ProblemKind::MMinCut: return is_literal_cut(stage, elements);
    case ProblemKind::MWBMaxCut: return is_cut_form(stage, elements);
    case ProblemKind::MMinBVC: return is_vertex_cover(stage, elements);
    case ProblemKind::MMaxBIS: return is_independent_set(stage, elements);
    case ProblemKind::MMaxBB: return is_biclique(stage, elements);
  }
  return false;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

void check_vertex_cap(const StageGraph& stage, const OracleConfig& config) {
  // hard limit: subset enumeration shifts a 64-bit mask
  const std::size_t cap = std::min<std::size_t>(config.max_vertices, 25);
  if (stage.vertices.size() > cap) {
    throw TooLargeError("stage has " + std::to_string(stage.vertices.size()) +
                        " vertices, enumeration cap is " + std::to_string(cap));
  }
}

void check_solution_cap(std::size_t count, const OracleConfig& config) {
  if (count > config.max_solutions) {
    throw TooLargeError("solution enumeration exceeded " +
                        std::to_string(config.max_solutions) + " entries");
  }
}

std::vector<ElementSet> enumerate_paths(const StageGraph& stage,
                                        const OracleConfig& config) {
  if (!stage.terminals) throw ValidationError("stage has no terminals");
  const auto& [s, t] = *stage.terminals;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : stage.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
  std::vector<ElementSet> out;
  std::set<std::string> on_path{s};
  ElementSet edges;
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    if (v == t) {
      check_solution_cap(out.size() + 1, config);
      out.push_back(edges);
      return;
    }
    for (const auto& w : adj[v]) {
      if (on_path.count(w)) continue;
      on_path.insert(w);
      ElementId e = ElementId::edge(v, w);
      edges.insert(e);
      dfs(w);
      edges.erase(e);
      on_path.erase(w);
    }
  };
  dfs(s);
  return out;
}

std::vector<ElementSet> enumerate_matchings(const StageGraph& stage,
                                            const OracleConfig& config) {
  if (stage.vertices.size() % 2 != 0) return {};
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = i;
  std::vector<std::vector<std::size_t>> adj(verts.size());
  for (const auto& e : stage.edges) {
    adj[id[e.a]].push_back(id[e.b]);
    adj[id[e.b]].push_back(id[e.a]);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  std::vector<ElementSet> out;
  std::vector<char> matched(verts.size(), 0);
  ElementSet edges;
  std::function<void(std::size_t)> dfs = [&](std::size_t from) {
    std::size_t u = from;
    while (u < verts.size() && matched[u]) ++u;
    if (u == verts.size()) {
      check_solution_cap(out.size() + 1, config);
      out.push_back(edges);
      return;
    }
    matched[u] = 1;
    for (std::size_t v : adj[u]) {
      if (matched[v]) continue;
      matched[v] = 1;
      ElementId e = ElementId::edge(verts[u], verts[v]);
      edges.insert(e);
      dfs(u + 1);
      edges.erase(e);
      matched[v] = 0;
    }
    matched[u] = 0;
  };
  dfs(0);
  return out;
}

ElementSet cut_of(const StageGraph& stage,
                  const std::set<std::string>& side) {
  ElementSet out;
  for (const auto& e : stage.edges) {
    if (side.count(e.a) != side.count(e.b)) out.insert(e);
  }
  return out;
}

std::vector<ElementSet> enumerate_st_cuts(const StageGraph& stage,
                                          const OracleConfig& config) {
  if (!stage.terminals) throw ValidationError("stage has no terminals");
  const auto& [s, t] = *stage.terminals;
  std::vector<std::string> rest;
  for (const auto& v : stage.vertices) {
    if (v != s && v != t) rest.push_back(v);
  }
  std::set<ElementSet> seen;
  const std::size_t n = rest.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    std::set<std::string> side{s};
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) side.insert(rest[i]);
    }
    seen.insert(cut_of(stage, side));
    check_solution_cap(seen.size(), config);
  }
  return {seen.begin(), seen.end()};
}

std::vector<ElementSet> enumerate_cuts(const StageGraph& stage,
                                       const OracleConfig& config) {
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::set<ElementSet> seen;
  if (verts.empty()) return {ElementSet{}};
  const std::size_t n = verts.size() - 1;  // delta(U) = delta(V \ U)
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    std::set<std::string> side;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) side.insert(verts[i + 1]);
    }
    seen.insert(cut_of(stage, side));
    check_solution_cap(seen.size(), config);
  }
  return {seen.begin(), seen.end()};
}

std::vector<ElementSet> enumerate_vertex_subsets(
    const StageGraph& stage, const OracleConfig& config,
    const std::function<bool(const ElementSet&)>& predicate) {
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::vector<ElementSet> out;
  const std::size_t n = verts.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    ElementSet set;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) set.insert(ElementId::vertex(verts[i]));
    }
    if (predicate(set)) {
      check_solution_cap(out.size() + 1, config);
      out.push_back(std::move(set));
    }
  }
  return out;
}

}  // namespace

std::vector<ElementSet> enumerate_feasible(const StageGraph& stage,
                                           ProblemKind kind,
                                           const OracleConfig& config) {
  check_vertex_cap(stage, config);
  switch (kind) {
    case ProblemKind::MSPath:
      return enumerate_paths(stage, config);
    case ProblemKind::MMinPM:
      return enumerate_matchings(stage, config);
    case ProblemKind::MMinCut:
      return enumerate_st_cuts(stage, config);
    case ProblemKind::MWBMaxCut:
      return enumerate_cuts(stage, config);
    case ProblemKind::MMinBVC:
      return enumerate_vertex_subsets(stage, config, [&](const ElementSet& s) {
        return is_vertex_cover(stage, s);
      });
    case ProblemKind::MMaxBIS:
      return enumerate_vertex_subsets(stage, config, [&](const ElementSet& s) {
        return is_independent_set(stage, s);
      });
    case ProblemKind::MMaxBB: {
      bipartition(stage);  // NotBipartite propagates
      return enumerate_vertex_subsets(stage, config, [&](const ElementSet& s) {
        return is_biclique(stage, s);
      });
    }
  }
  throw MssError("unreachable");
}

// ---------------------------------------------------------------------------
// optimal solutions, factored over components where valid

namespace {

bool decomposes_over_components(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MMinPM:
    case ProblemKind::MWBMaxCut:
    case ProblemKind::MMinBVC:
    case ProblemKind::MMaxBIS:
      return true;
    default:
      return false;
  }
}

std::vector<StageGraph> split_components(const StageGraph& stage) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : stage.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::set<std::string> visited;
  std::vector<StageGraph> comps;
  for (const auto& start : stage.vertices) {
    if (visited.count(start)) continue;
    StageGraph comp;
    comp.directed = stage.directed;
    std::deque<std::string> queue{start};
    visited.insert(start);
    while (!queue.empty()) {
      std::string v = queue.front();
      queue.pop_front();
      comp.vertices.insert(v);
      auto wit = stage.vertex_weights.find(v);
      if (wit != stage.vertex_weights.end()) comp.vertex_weights[v] = wit->second;
      for (const auto& w : adj[v]) {
        if (visited.insert(w).second) queue.push_back(w);
      }
    }
    for (const auto& e : stage.edges) {
      if (comp.has_vertex(e.a)) {
        comp.edges.insert(e);
        auto ew = stage.edge_weights.find(e);
        if (ew != stage.edge_weights.end()) comp.edge_weights[e] = ew->second;
      }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

OptimalSolutionSet filter_optimal(const StageGraph& stage, ProblemKind kind,
                                  std::vector<ElementSet> feasible) {
  if (feasible.empty()) {
    throw InfeasibleError("no feasible solution for " + to_string(kind));
  }
  OptimalSolutionSet out;
  bool minimize = is_minimization(kind);
  std::optional<Rational> best;
  std::vector<Rational> measures;
  measures.reserve(feasible.size());
  for (const auto& s : feasible) {
    Rational m = measure_of(stage, kind, s);
    if (!best || (minimize ? m < *best : m > *best)) best = m;
    measures.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    if (measures[i] == *best) out.solutions.push_back(std::move(feasible[i]));
  }
  out.measure = *best;
  return out;
}

}  // namespace

OptimalSolutionSet enumerate_optimal(const StageGraph& stage, ProblemKind kind,
                                     const OracleConfig& config) {
  if (!decomposes_over_components(kind)) {
    return filter_optimal(stage, kind, enumerate_feasible(stage, kind, config));
  }
  std::vector<StageGraph> comps = split_components(stage);
  std::vector<OptimalSolutionSet> parts;
  parts.reserve(comps.size());
  for (const auto& comp : comps) {
    parts.push_back(
        filter_optimal(comp, kind, enumerate_feasible(comp, kind, config)));
  }
  OptimalSolutionSet out;
  out.measure = 0;
  out.solutions = {ElementSet{}};
  for (const auto& part : parts) {
    check_solution_cap(out.solutions.size() * part.solutions.size(), config);
    std::vector<ElementSet> next;
    next.reserve(out.solutions.size() * part.solutions.size());
    for (const auto& prefix : out.solutions) {
      for (const auto& extra : part.solutions) {
        ElementSet merged = prefix;
        merged.insert(extra.begin(), extra.end());
        next.push_back(std::move(merged));
      }
    }
    out.solutions = std::move(next);
    out.measure += part.measure;
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact multistage DP over trace classes

namespace {

using Mask = std::vector<std::uint64_t>;

struct Universe {
  std::vector<ElementId> elements;
  std::map<ElementId, std::size_t> index;

  explicit Universe(ElementSet set) : elements(set.begin(), set.end()) {
    for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
  }
  Universe() = default;

  std::size_t words() const { return (elements.size() + 63) / 64; }

  Mask mask_of(const ElementSet& set) const {
    Mask m(words(), 0);
    for (const auto& e : set) {
      auto it = index.find(e);
      if (it != index.end()) m[it->second / 64] |= std::uint64_t(1) << (it->second % 64);
    }
    return m;
  }
};

std::size_t popcount(const Mask& m) {
  std::size_t n = 0;
  for (auto w : m) n += std::popcount(w);
  return n;
}

std::size_t and_popcount(const Mask& a, const Mask& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] & b[i]);
  return n;
}

void mask_or(Mask& into, const Mask& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] |= from[i];
}

struct SolutionClass {
  Mask left;
  Mask right;
  std::size_t set_size = 0;
  std::size_t rep = 0;
};

class StageFamily {
 public:
  virtual ~StageFamily() = default;
  virtual ElementSet materialize(std::size_t class_index) const = 0;

  std::vector<SolutionClass> classes;
};

class EnumeratedFamily : public StageFamily {
 public:
  EnumeratedFamily(const StageGraph& stage, ProblemKind kind,
                   const Universe& left, const Universe& right,
                   const OracleConfig& config) {
    optimal_ = enumerate_optimal(stage, kind, config);
    std::map<std::tuple<Mask, Mask, std::size_t>, std::size_t> dedup;
    for (std::size_t i = 0; i < optimal_.solutions.size(); ++i) {
      const ElementSet& s = optimal_.solutions[i];
      auto key = std::make_tuple(left.mask_of(s), right.mask_of(s), s.size());
      if (dedup.emplace(key, classes.size()).second) {
        classes.push_back({std::get<0>(key), std::get<1>(key), s.size(), i});
      }
    }
  }

  ElementSet materialize(std::size_t class_index) const override {
    return optimal_.solutions[classes[class_index].rep];
  }

 private:
  OptimalSolutionSet optimal_;
};

// Minimum-cut stages: minimum cuts are the boundaries of residual-closed
// vertex sets. After a max flow, contract strongly connected residual
// components; the source component's descendants are forced in, components
// reaching the sink component are forced out, and the remaining component
// DAG splits into independent blocks whose successor-closed subsets can be
// combined freely. Classes are built per block and assembled mixed-radix.
class MinCutFamily : public StageFamily {
 public:
  MinCutFamily(const StageGraph& stage, ProblemKind kind, const Universe& left,
               const Universe& right, const OracleConfig& config) {
    if (!stage.terminals) throw ValidationError("stage has no terminals");
    const auto& [s, t] = *stage.terminals;

    std::vector<std::string> verts(stage.vertices.begin(),
                                   stage.vertices.end());
    std::map<std::string, int> id;
    for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = int(i);
    const int n = int(verts.size());

    edge_ids_.assign(stage.edges.begin(), stage.edges.end());
    std::vector<std::pair<int, int>> ends;
    for (const auto& e : edge_ids_) ends.push_back({id[e.a], id[e.b]});

    auto [intw, scale] = canonicalize_weights(stage.edge_weights);
    (void)scale;

    // doubled-arc max flow (Edmonds-Karp)
    std::vector<Int> residual;
    std::vector<int> head;
    std::vector<std::vector<int>> adj(n);
    auto push_arc = [&](int u, int v, Int cap) {
      adj[u].push_back(int(residual.size()));
      residual.push_back(std::move(cap));
      head.push_back(v);
      adj[v].push_back(int(residual.size()));
      residual.push_back(Int(0));
      head.push_back(u);
    };
    for (std::size_t k = 0; k < edge_ids_.size(); ++k) {
      const Int& w = intw.at(edge_ids_[k]);
      push_arc(ends[k].first, ends[k].second, w);
      push_arc(ends[k].second, ends[k].first, w);
    }
    const int src = id[s], dst = id[t];
    while (true) {
      std::vector<int> pred(n, -1);
      pred[src] = -2;
      std::deque<int> queue{src};
      while (!queue.empty() && pred[dst] == -1) {
        int v = queue.front();
        queue.pop_front();
        for (int a : adj[v]) {
          if (residual[a] > 0 && pred[head[a]] == -1) {
            pred[head[a]] = a;
            queue.push_back(head[a]);
          }
        }
      }
      if (pred[dst] == -1) break;
      Int bottleneck = -1;
      for (int v = dst; v != src;) {
        int a = pred[v];
        if (bottleneck < 0 || residual[a] < bottleneck) bottleneck = residual[a];
        v = head[a ^ 1];
      }
      for (int v = dst; v != src;) {
        int a = pred[v];
        residual[a] -= bottleneck;
        residual[a ^ 1] += bottleneck;
        v = head[a ^ 1];
      }
    }

    // strongly connected components of the residual graph (Kosaraju)
    std::vector<std::vector<int>> radj(n), fadj(n);
    for (int v = 0; v < n; ++v) {
      for (int a : adj[v]) {
        if (residual[a] > 0) {
          fadj[v].push_back(head[a]);
          radj[head[a]].push_back(v);
        }
      }
    }
    std::vector<int> order;
    {
      std::vector<char> seen(n, 0);
      for (int v0 = 0; v0 < n; ++v0) {
        if (seen[v0]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{v0, 0}};
        seen[v0] = 1;
        while (!stack.empty()) {
          auto& [v, i] = stack.back();
          if (i < fadj[v].size()) {
            int w = fadj[v][i++];
            if (!seen[w]) {
              seen[w] = 1;
              stack.push_back({w, 0});
            }
          } else {
            order.push_back(v);
            stack.pop_back();
          }
        }
      }
    }
    std::vector<int> comp(n, -1);
    int comp_count = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (comp[*it] != -1) continue;
      std::deque<int> queue{*it};
      comp[*it] = comp_count;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : radj[v]) {
          if (comp[w] == -1) {
            comp[w] = comp_count;
            queue.push_back(w);
          }
        }
      }
      ++comp_count;
    }

    std::set<std::pair<int, int>> comp_arcs;
    for (int v = 0; v < n; ++v) {
      for (int w : fadj[v]) {
        if (comp[v] != comp[w]) comp_arcs.insert({comp[v], comp[w]});
      }
    }
    std::vector<std::vector<int>> csucc(comp_count), cpred(comp_count);
    for (auto [a, b] : comp_arcs) {
      csucc[a].push_back(b);
      cpred[b].push_back(a);
    }

    const int cs = comp[src], ct = comp[dst];
    if (cs == ct) throw MssError("internal: terminals share a residual component");
    std::vector<char> forced_in(comp_count, 0), forced_out(comp_count, 0);
    {
      std::deque<int> queue{cs};
      forced_in[cs] = 1;
      while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        for (int d : csucc[c]) {
          if (!forced_in[d]) {
            forced_in[d] = 1;
            queue.push_back(d);
          }
        }
      }
      queue = {ct};
      forced_out[ct] = 1;
      while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        for (int d : cpred[c]) {
          if (!forced_out[d]) {
            forced_out[d] = 1;
            queue.push_back(d);
          }
        }
      }
    }
    for (int c = 0; c < comp_count; ++c) {
      if (forced_in[c] && forced_out[c]) {
        throw MssError("internal: residual path from source to sink");
      }
    }

    // blocks: connected components of the free part of the component DAG
    std::vector<int> block_of(comp_count, -1);
    std::vector<std::vector<int>> block_nodes;
    for (int c0 = 0; c0 < comp_count; ++c0) {
      if (forced_in[c0] || forced_out[c0] || block_of[c0] != -1) continue;
      int b = int(block_nodes.size());
      block_nodes.push_back({});
      std::deque<int> queue{c0};
      block_of[c0] = b;
      while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        block_nodes[b].push_back(c);
        for (int d : csucc[c]) {
          if (!forced_in[d] && !forced_out[d] && block_of[d] == -1) {
            block_of[d] = b;
            queue.push_back(d);
          }
        }
        for (int d : cpred[c]) {
          if (!forced_in[d] && !forced_out[d] && block_of[d] == -1) {
            block_of[d] = b;
            queue.push_back(d);
          }
        }
      }
    }

    // partition edges: forced crossings, per-block incidences
    std::vector<std::vector<std::size_t>> block_edges(block_nodes.size());
    base_size_ = 0;
    Mask base_left(left.words(), 0), base_right(right.words(), 0);
    for (std::size_t k = 0; k < edge_ids_.size(); ++k) {
      int ca = comp[ends[k].first], cb = comp[ends[k].second];
      bool a_free = !forced_in[ca] && !forced_out[ca];
      bool b_free = !forced_in[cb] && !forced_out[cb];
      if (!a_free && !b_free) {
        if (forced_in[ca] != forced_in[cb]) {
          base_cut_.push_back(k);
          add_edge_bits(left, right, k, base_left, base_right);
        }
        continue;
      }
      if (a_free && b_free && block_of[ca] != block_of[cb]) {
        throw MssError("internal: edge between independent blocks");
      }
      block_edges[a_free ? block_of[ca] : block_of[cb]].push_back(k);
    }
    base_size_ = base_cut_.size();
    base_left_ = base_left;
    base_right_ = base_right;

    // enumerate successor-closed subsets per block, dedup by trace
    for (std::size_t b = 0; b < block_nodes.size(); ++b) {
      std::vector<int>& nodes = block_nodes[b];
      std::sort(nodes.begin(), nodes.end());
      std::map<int, std::size_t> pos;
      for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
      // process order: successors before predecessors
      std::vector<std::size_t> topo;
      {
        std::vector<std::size_t> outdeg(nodes.size(), 0);
        std::vector<std::vector<std::size_t>> preds(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          for (int d : csucc[nodes[i]]) {
            auto it = pos.find(d);
            if (it != pos.end()) {
              outdeg[i]++;
              preds[it->second].push_back(i);
            }
          }
        }
        std::deque<std::size_t> ready;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          if (outdeg[i] == 0) ready.push_back(i);
        }
        while (!ready.empty()) {
          std::size_t i = ready.front();
          ready.pop_front();
          topo.push_back(i);
          for (std::size_t p : preds[i]) {
            if (--outdeg[p] == 0) ready.push_back(p);
          }
        }
        if (topo.size() != nodes.size()) {
          throw MssError("internal: block is not acyclic");
        }
      }
      std::vector<std::vector<std::size_t>> succ_in_block(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int d : csucc[nodes[i]]) {
          auto it = pos.find(d);
          if (it != pos.end()) succ_in_block[i].push_back(it->second);
          else if (forced_out[d]) {
            // including nodes[i] would drag the sink side in; it can never
            // be chosen, which the closure check below enforces via a
            // sentinel.
            succ_in_block[i].push_back(SIZE_MAX);
          }
        }
      }

      std::vector<char> chosen(nodes.size(), 0);
      std::map<std::tuple<Mask, Mask, std::size_t>, std::size_t> dedup;
      std::vector<BlockClass> block_classes;
      std::size_t enumerated = 0;
      std::function<void(std::size_t)> recurse = [&](std::size_t step) {
        if (step == topo.size()) {
          check_solution_cap(++enumerated, config);
          Mask lmask(left.words(), 0), rmask(right.words(), 0);
          std::vector<int> cut;
          for (std::size_t k_idx : block_edges[b]) {
            int ca = comp[ends[k_idx].first], cb = comp[ends[k_idx].second];
            bool sa = forced_in[ca] ||
                      (block_of[ca] == int(b) && chosen[pos.at(ca)]);
            bool sb = forced_in[cb] ||
                      (block_of[cb] == int(b) && chosen[pos.at(cb)]);
            if (sa != sb) {
              cut.push_back(int(k_idx));
              add_edge_bits(left, right, k_idx, lmask, rmask);
            }
          }
          auto key = std::make_tuple(lmask, rmask, cut.size());
          if (dedup.emplace(key, block_classes.size()).second) {
            block_classes.push_back({std::move(lmask), std::move(rmask),
                                     cut.size(), std::move(cut)});
          }
          return;
        }
        std::size_t i = topo[step];
        recurse(step + 1);  // exclude nodes[i]
        bool can_include = true;
        for (std::size_t sidx : succ_in_block[i]) {
          if (sidx == SIZE_MAX || !chosen[sidx]) {
            can_include = false;
            break;
          }
        }
        if (can_include) {
          chosen[i] = 1;
          recurse(step + 1);
          chosen[i] = 0;
        }
      };
      recurse(0);
      blocks_.push_back(std::move(block_classes));
    }

    // assemble global classes mixed-radix over block choices
    unsigned long long total = 1;
    for (const auto& bc : blocks_) {
      total *= bc.size();
      check_solution_cap(total, config);
    }
    (void)kind;
    classes.reserve(total);
    for (unsigned long long idx = 0; idx < total; ++idx) {
      Mask lmask = base_left_;
      Mask rmask = base_right_;
      std::size_t size = base_size_;
      unsigned long long rem = idx;
      for (std::size_t b = blocks_.size(); b-- > 0;) {
        const BlockClass& bc = blocks_[b][rem % blocks_[b].size()];
        rem /= blocks_[b].size();
        mask_or(lmask, bc.left);
        mask_or(rmask, bc.right);
        size += bc.count;
      }
      classes.push_back({std::move(lmask), std::move(rmask), size,
                         std::size_t(idx)});
    }
  }

  ElementSet materialize(std::size_t class_index) const override {
    ElementSet out;
    for (int k : base_cut_) out.insert(edge_ids_[k]);
    unsigned long long rem = classes[class_index].rep;
    for (std::size_t b = blocks_.size(); b-- > 0;) {
      const BlockClass& bc = blocks_[b][rem % blocks_[b].size()];
      rem /= blocks_[b].size();
      for (int k : bc.cut) out.insert(edge_ids_[k]);
    }
    return out;
  }

 private:
  struct BlockClass {
    Mask left;
    Mask right;
    std::size_t count = 0;
    std::vector<int> cut;
  };

  void add_edge_bits(const Universe& left, const Universe& right,
                     std::size_t edge_idx, Mask& lmask, Mask& rmask) {
    const ElementId& e = edge_ids_[edge_idx];
    auto lit = left.index.find(e);
    if (lit != left.index.end()) {
      lmask[lit->second / 64] |= std::uint64_t(1) << (lit->second % 64);
    }
    auto rit = right.index.find(e);
    if (rit != right.index.end()) {
      rmask[rit->second / 64] |= std::uint64_t(1) << (rit->second % 64);
    }
  }

  std::vector<ElementId> edge_ids_;
  std::vector<int> base_cut_;
  std::size_t base_size_ = 0;
  Mask base_left_;
  Mask base_right_;
  std::vector<std::vector<BlockClass>> blocks_;
};

std::unique_ptr<StageFamily> make_family(const StageGraph& stage,
                                         ProblemKind kind,
                                         const Universe& left,
                                         const Universe& right,
                                         const OracleConfig& config) {
  if (kind == ProblemKind::MMinCut) {
    return std::make_unique<MinCutFamily>(stage, kind, left, right, config);
  }
  return std::make_unique<EnumeratedFamily>(stage, kind, left, right, config);
}

ElementSet shared_selecting_elements(const StageGraph& g1, const StageGraph& g2,
                                     ProblemKind kind) {
  ElementSet out;
  if (selecting_kind(kind) == ElementKind::Edge) {
    for (const auto& e : g1.edges) {
      if (g2.has_edge(e)) out.insert(e);
    }
  } else {
    for (const auto& v : g1.vertices) {
      if (g2.has_vertex(v)) out.insert(ElementId::vertex(v));
    }
  }
  return out;
}

}  // namespace

ExactResult exact_multistage(const ProblemInstance& inst, QualityKind quality,
                             const OracleConfig& config) {
  const std::size_t tau = inst.graph.tau();
  if (tau == 0) throw ValidationError("instance has no stages");

  std::vector<Universe> boundaries;
  for (std::size_t b = 0; b + 1 < tau; ++b) {
    boundaries.emplace_back(shared_selecting_elements(
        inst.graph.stages[b], inst.graph.stages[b + 1], inst.problem));
  }
  const Universe empty_universe;

  std::vector<std::unique_ptr<StageFamily>> families;
  for (std::size_t i = 0; i < tau; ++i) {
    const Universe& left = (i == 0) ? empty_universe : boundaries[i - 1];
    const Universe& right = (i + 1 == tau) ? empty_universe : boundaries[i];
    try {
      families.push_back(
          make_family(inst.graph.stages[i], inst.problem, left, right, config));
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(std::string(e.what()) + " in stage " +
                            std::to_string(i + 1), int(i + 1));
    }
  }

  unsigned long long transitions = 0;
  for (std::size_t i = 0; i + 1 < tau; ++i) {
    unsigned long long step = families[i]->classes.size();
    step *= families[i + 1]->classes.size();
    transitions += step;
    if (transitions > config.max_dp_transitions) {
      throw TooLargeError("dynamic program needs " +
                          std::to_string(transitions) +
                          " transitions, cap is " +
                          std::to_string(config.max_dp_transitions));
    }
  }

  const bool maximize = quality_is_max(quality);
  auto pair_quality = [&](const SolutionClass& a, const SolutionClass& b) {
    std::size_t common = and_popcount(a.right, b.left);
    if (quality == QualityKind::IntersectionProfit) return (long long)common;
    return (long long)(a.set_size + b.set_size - 2 * common);
  };

  std::vector<std::size_t> chosen(tau, 0);
  long long best_quality = 0;

  if (tau == 1) {
    chosen[0] = 0;
  } else if (tau == 2 && quality == QualityKind::IntersectionProfit) {
    // global scan with two-sided popcount pruning
    const auto& c0 = families[0]->classes;
    const auto& c1 = families[1]->classes;
    std::vector<std::size_t> order0(c0.size()), order1(c1.size());
    std::iota(order0.begin(), order0.end(), 0);
    std::iota(order1.begin(), order1.end(), 0);
    std::vector<std::size_t> pc0(c0.size()), pc1(c1.size());
    for (std::size_t i = 0; i < c0.size(); ++i) pc0[i] = popcount(c0[i].right);
    for (std::size_t i = 0; i < c1.size(); ++i) pc1[i] = popcount(c1[i].left);
    std::stable_sort(order0.begin(), order0.end(),
                     [&](std::size_t a, std::size_t b) { return pc0[a] > pc0[b]; });
    std::stable_sort(order1.begin(), order1.end(),
                     [&](std::size_t a, std::size_t b) { return pc1[a] > pc1[b]; });
    long long best = -1;
    for (std::size_t a : order0) {
      if ((long long)pc0[a] <= best) break;
      for (std::size_t b : order1) {
        if ((long long)pc1[b] <= best) break;
        long long q = (long long)and_popcount(c0[a].right, c1[b].left);
        if (q > best) {
          best = q;
          chosen[0] = a;
          chosen[1] = b;
        }
      }
    }
    best_quality = best;
  } else {
    std::vector<std::vector<long long>> dp(tau);
    std::vector<std::vector<std::size_t>> parent(tau);
    dp[0].assign(families[0]->classes.size(), 0);
    parent[0].assign(families[0]->classes.size(), 0);
    for (std::size_t i = 1; i < tau; ++i) {
      const auto& prev = families[i - 1]->classes;
      const auto& cur = families[i]->classes;
      std::vector<std::size_t> order(prev.size());
      std::iota(order.begin(), order.end(), 0);
      if (maximize) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                         std::size_t b) {
          return dp[i - 1][a] + (long long)popcount(prev[a].right) >
                 dp[i - 1][b] + (long long)popcount(prev[b].right);
        });
      }
      dp[i].assign(cur.size(), 0);
      parent[i].assign(cur.size(), 0);
      for (std::size_t c = 0; c < cur.size(); ++c) {
        bool have = false;
        long long best = 0;
        std::size_t arg = 0;
        for (std::size_t p : order) {
          long long bound = dp[i - 1][p] + (long long)popcount(prev[p].right);
          if (maximize && have && bound <= best) break;
          long long value = dp[i - 1][p] + pair_quality(prev[p], cur[c]);
          if (!have || (maximize ? value > best : value < best)) {
            have = true;
            best = value;
            arg = p;
          }
        }
        dp[i][c] = best;
        parent[i][c] = arg;
      }
    }
    std::size_t arg = 0;
    for (std::size_t c = 1; c < dp[tau - 1].size(); ++c) {
      if (maximize ? dp[tau - 1][c] > dp[tau - 1][arg]
                   : dp[tau - 1][c] < dp[tau - 1][arg]) {
        arg = c;
      }
    }
    best_quality = dp[tau - 1][arg];
    chosen[tau - 1] = arg;
    for (std::size_t i = tau - 1; i > 0; --i) {
      chosen[i - 1] = parent[i][chosen[i]];
    }
  }

  ExactResult result;
  result.solution.problem = inst.problem;
  for (std::size_t i = 0; i < tau; ++i) {
    result.solution.per_stage.push_back(families[i]->materialize(chosen[i]));
  }
  result.quality =
      (long long)global_quality(result.solution, quality);
  if (result.quality != best_quality && tau > 1) {
    throw MssError("internal: DP value disagrees with reconstruction");
  }
  return result;
}

VerifyReport verify_sequence(const ProblemInstance& inst,
                             const SolutionSequence& sol, QualityKind quality,
                             const OracleConfig& config) {
  if (sol.per_stage.size() != inst.graph.tau()) {
    throw ValidationError("solution stage count mismatch");
  }
  VerifyReport report;
  for (std::size_t i = 0; i < inst.graph.tau(); ++i) {
    OptimalSolutionSet optimal =
        enumerate_optimal(inst.graph.stages[i], inst.problem, config);
    bool found = std::find(optimal.solutions.begin(), optimal.solutions.end(),
                           sol.per_stage[i]) != optimal.solutions.end();
    report.stagewise_optimal.push_back(found);
  }
  report.quality = global_quality(sol, quality);
  return report;
}

}  // namespace mss
