#include "mss/stage_solvers.hpp"

#include <algorithm>
#include <deque>

namespace mss {

int FlowNetwork::add_vertex(const std::string& label) {
  auto it = index.find(label);
  if (it != index.end()) return it->second;
  int id = static_cast<int>(labels.size());
  labels.push_back(label);
  index.emplace(label, id);
  return id;
}

void FlowNetwork::add_arc(const std::string& from, const std::string& to,
                          Int capacity) {
  if (capacity <= 0) throw ValidationError("arc capacity must be positive");
  if (from == to) throw ValidationError("arc endpoints coincide");
  arcs.push_back({add_vertex(from), add_vertex(to), std::move(capacity)});
}

void FlowNetwork::set_terminals(const std::string& source_label,
                                const std::string& sink_label) {
  if (source_label == sink_label) {
    throw ValidationError("source equals sink");
  }
  source = add_vertex(source_label);
  sink = add_vertex(sink_label);
}

MaxFlowResult max_flow_min_cut(const FlowNetwork& net) {
  if (net.source < 0 || net.sink < 0) {
    throw ValidationError("flow network has no terminals");
  }
  const int n = static_cast<int>(net.labels.size());
  // Interleave each arc with a zero-capacity reverse companion; arc i's
  // companion is i^1.
  std::vector<Int> residual;
  std::vector<int> head;
  residual.reserve(net.arcs.size() * 2);
  head.reserve(net.arcs.size() * 2);
  std::vector<std::vector<int>> adj(n);
  for (const auto& arc : net.arcs) {
    adj[arc.from].push_back(static_cast<int>(residual.size()));
    residual.push_back(arc.capacity);
    head.push_back(arc.to);
    adj[arc.to].push_back(static_cast<int>(residual.size()));
    residual.push_back(Int(0));
    head.push_back(arc.from);
  }

  Int flow = 0;
  std::vector<int> pred_arc(n);
  while (true) {
    std::fill(pred_arc.begin(), pred_arc.end(), -1);
    pred_arc[net.source] = -2;
    std::deque<int> queue{net.source};
    while (!queue.empty() && pred_arc[net.sink] == -1) {
      int v = queue.front();
      queue.pop_front();
      for (int a : adj[v]) {
        if (residual[a] > 0 && pred_arc[head[a]] == -1) {
          pred_arc[head[a]] = a;
          queue.push_back(head[a]);
        }
      }
    }
    if (pred_arc[net.sink] == -1) break;
    Int bottleneck = -1;
    for (int v = net.sink; v != net.source;) {
      int a = pred_arc[v];
      if (bottleneck < 0 || residual[a] < bottleneck) bottleneck = residual[a];
      v = head[a ^ 1];
    }
    for (int v = net.sink; v != net.source;) {
      int a = pred_arc[v];
      residual[a] -= bottleneck;
      residual[a ^ 1] += bottleneck;
      v = head[a ^ 1];
    }
    flow += bottleneck;
  }

  std::vector<char> reachable(n, 0);
  reachable[net.source] = 1;
  std::deque<int> queue{net.source};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int a : adj[v]) {
      if (residual[a] > 0 && !reachable[head[a]]) {
        reachable[head[a]] = 1;
        queue.push_back(head[a]);
      }
    }
  }

  MaxFlowResult result;
  result.value = flow;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const auto& arc = net.arcs[i];
    if (reachable[arc.from] && !reachable[arc.to]) result.cut_arcs.push_back(i);
  }
  for (int v = 0; v < n; ++v) {
    if (reachable[v]) result.source_side.insert(net.labels[v]);
  }
  return result;
}

namespace {

const Int& weight_of(const IntEdgeWeights& weights, const ElementId& e) {
  auto it = weights.find(e);
  if (it == weights.end()) {
    throw ValidationError("missing weight for " + e.key());
  }
  if (it->second <= 0) throw ValidationError("weights must be positive");
  return it->second;
}

}  // namespace

StageSolution shortest_path(const StageGraph& stage,
                            const IntEdgeWeights& weights,
                            const std::string& s, const std::string& t) {
  if (!stage.has_vertex(s) || !stage.has_vertex(t)) {
    throw ValidationError("terminal not in stage");
  }
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::map<std::string, int> id;
  for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = i;
  std::vector<std::vector<std::pair<int, Int>>> adj(verts.size());
  for (const auto& e : stage.edges) {
    const Int& w = weight_of(weights, e);
    adj[id[e.a]].push_back({id[e.b], w});
    adj[id[e.b]].push_back({id[e.a], w});
  }
  const int n = static_cast<int>(verts.size());
  std::vector<Int> dist(n);
  std::vector<char> settled(n, 0), seen(n, 0);
  std::vector<int> pred(n, -1);
  int src = id[s], dst = id[t];
  dist[src] = 0;
  seen[src] = 1;
  for (int round = 0; round < n; ++round) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!seen[v] || settled[v]) continue;
      if (best == -1 || dist[v] < dist[best]) best = v;
    }
    if (best == -1) break;
    settled[best] = 1;
    for (const auto& [w, cost] : adj[best]) {
      if (settled[w]) continue;
      Int candidate = dist[best] + cost;
      if (!seen[w] || candidate < dist[w]) {
        seen[w] = 1;
        dist[w] = candidate;
        pred[w] = best;
      } else if (candidate == dist[w] && pred[w] >= 0 &&
                 verts[best] < verts[pred[w]]) {
        pred[w] = best;
      }
    }
  }
  if (!settled[dst]) {
    throw InfeasibleError("no path between " + s + " and " + t);
  }
  StageSolution sol;
  for (int v = dst; v != src; v = pred[v]) {
    sol.elements.insert(ElementId::edge(verts[pred[v]], verts[v]));
  }
  sol.measure = Rational(dist[dst]);
  return sol;
}

namespace {

StageSolution hungarian_matching(const StageGraph& stage,
                                 const IntEdgeWeights& weights,
                                 const std::set<std::string>& side_a,
                                 const std::set<std::string>& side_b) {
  if (side_a.size() != side_b.size()) {
    throw InfeasibleError("no perfect matching: unbalanced sides");
  }
  const int n = static_cast<int>(side_a.size());
  std::vector<std::string> rows(side_a.begin(), side_a.end());
  std::vector<std::string> cols(side_b.begin(), side_b.end());
  std::map<std::string, int> col_id;
  for (int j = 0; j < n; ++j) col_id[cols[j]] = j;

  Int total = 1;
  for (const auto& e : stage.edges) total += weight_of(weights, e);
  const Int non_edge = total;  // exceeds any real perfect matching

  std::vector<std::vector<Int>> cost(n, std::vector<Int>(n, non_edge));
  std::map<std::string, int> row_id;
  for (int i = 0; i < n; ++i) row_id[rows[i]] = i;
  for (const auto& e : stage.edges) {
    int i = row_id.count(e.a) ? row_id[e.a] : row_id[e.b];
    int j = col_id.count(e.a) ? col_id[e.a] : col_id[e.b];
    cost[i][j] = weights.at(e);
  }

  const Int sentinel = non_edge * (n + 1) * (n + 1) + 1;
  std::vector<Int> u(n + 1, Int(0)), v(n + 1, Int(0));
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Int> minv(n + 1, sentinel);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      Int delta = sentinel;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Int cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  StageSolution sol;
  Int measure = 0;
  for (int j = 1; j <= n; ++j) {
    int i = p[j];
    if (cost[i - 1][j - 1] == non_edge) {
      throw InfeasibleError("no perfect matching");
    }
    measure += cost[i - 1][j - 1];
    sol.elements.insert(ElementId::edge(rows[i - 1], cols[j - 1]));
  }
  sol.measure = Rational(measure);
  return sol;
}

void exhaustive_matching(const std::vector<std::string>& verts,
                         const std::vector<std::vector<const Int*>>& w,
                         std::vector<char>& matched, std::size_t from,
                         Int current, std::vector<std::pair<int, int>>& picked,
                         Int& best, std::vector<std::pair<int, int>>& best_set) {
  const std::size_t n = verts.size();
  std::size_t u = from;
  while (u < n && matched[u]) ++u;
  if (u == n) {
    if (best < 0 || current < best) {
      best = current;
      best_set = picked;
    }
    return;
  }
  if (best >= 0 && current >= best) return;
  matched[u] = 1;
  for (std::size_t v = u + 1; v < n; ++v) {
    if (matched[v] || w[u][v] == nullptr) continue;
    matched[v] = 1;
    picked.push_back({static_cast<int>(u), static_cast<int>(v)});
    exhaustive_matching(verts, w, matched, u + 1, current + *w[u][v], picked,
                        best, best_set);
    picked.pop_back();
    matched[v] = 0;
  }
  matched[u] = 0;
}

}  // namespace

StageSolution min_weight_perfect_matching(const StageGraph& stage,
                                          const IntEdgeWeights& weights) {
  if (stage.vertices.size() % 2 != 0) {
    throw InfeasibleError("odd vertex count");
  }
  if (stage.vertices.empty()) {
    return {ElementSet{}, Rational(0)};
  }
  try {
    auto [a, b] = bipartition(stage);
    // The canonical coloring puts isolated vertices in A; rebalance only
    // matters for matchability and is handled by the unbalanced check.
    return hungarian_matching(stage, weights, a, b);
  } catch (const NotBipartiteError&) {
    // fall through to exhaustive search
  }
  if (stage.vertices.size() > 16) {
    throw TooLargeError("perfect matching beyond 16 vertices on non-bipartite stage");
  }
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::map<std::string, int> id;
  for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = i;
  std::vector<std::vector<const Int*>> w(
      verts.size(), std::vector<const Int*>(verts.size(), nullptr));
  for (const auto& e : stage.edges) {
    const Int& we = weight_of(weights, e);
    w[id[e.a]][id[e.b]] = &we;
    w[id[e.b]][id[e.a]] = &we;
  }
  std::vector<char> matched(verts.size(), 0);
  std::vector<std::pair<int, int>> picked, best_set;
  Int best = -1;
  exhaustive_matching(verts, w, matched, 0, Int(0), picked, best, best_set);
  if (best < 0) throw InfeasibleError("no perfect matching");
  StageSolution sol;
  for (auto [u, v] : best_set) {
    sol.elements.insert(ElementId::edge(verts[u], verts[v]));
  }
  sol.measure = Rational(best);
  return sol;
}

StageSolution min_st_cut(const StageGraph& stage, const IntEdgeWeights& weights,
                         const std::string& s, const std::string& t) {
  if (!stage.has_vertex(s) || !stage.has_vertex(t)) {
    throw ValidationError("terminal not in stage");
  }
  FlowNetwork net;
  for (const auto& v : stage.vertices) net.add_vertex(v);
  for (const auto& e : stage.edges) {
    const Int& w = weight_of(weights, e);
    net.add_arc(e.a, e.b, w);
    net.add_arc(e.b, e.a, w);
  }
  net.set_terminals(s, t);
  MaxFlowResult flow = max_flow_min_cut(net);
  StageSolution sol;
  Int measure = 0;
  for (const auto& e : stage.edges) {
    bool a_in = flow.source_side.count(e.a) > 0;
    bool b_in = flow.source_side.count(e.b) > 0;
    if (a_in != b_in) {
      sol.elements.insert(e);
      measure += weights.at(e);
    }
  }
  sol.measure = Rational(measure);
  return sol;
}

StageSolution max_cut(const StageGraph& stage, const IntEdgeWeights& weights) {
  for (const auto& e : stage.edges) weight_of(weights, e);
  if (is_bipartite(stage)) {
    // A bipartition cuts every edge, and no cut can exceed the total weight.
    StageSolution sol;
    Int measure = 0;
    for (const auto& e : stage.edges) {
      sol.elements.insert(e);
      measure += weights.at(e);
    }
    sol.measure = Rational(measure);
    return sol;
  }
  if (stage.vertices.size() > 20) {
    throw TooLargeError("max cut beyond 20 vertices on non-bipartite stage");
  }
  std::vector<std::string> verts(stage.vertices.begin(), stage.vertices.end());
  std::map<std::string, int> id;
  for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = i;
  std::vector<std::pair<int, int>> ends;
  std::vector<const Int*> ws;
  std::vector<const ElementId*> edge_ids;
  for (const auto& e : stage.edges) {
    ends.push_back({id[e.a], id[e.b]});
    ws.push_back(&weights.at(e));
    edge_ids.push_back(&e);
  }
  // delta(U) = delta(V\U): fix the first vertex outside U.
  const std::size_t n = verts.size();
  std::uint32_t best_mask = 0;
  Int best = -1;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    Int value = 0;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      bool a_in = ends[i].first > 0 && (mask >> (ends[i].first - 1)) & 1;
      bool b_in = ends[i].second > 0 && (mask >> (ends[i].second - 1)) & 1;
      if (a_in != b_in) value += *ws[i];
    }
    if (best < 0 || value > best) {
      best = value;
      best_mask = mask;
    }
  }
  StageSolution sol;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    bool a_in = ends[i].first > 0 && (best_mask >> (ends[i].first - 1)) & 1;
    bool b_in = ends[i].second > 0 && (best_mask >> (ends[i].second - 1)) & 1;
    if (a_in != b_in) sol.elements.insert(*edge_ids[i]);
  }
  sol.measure = Rational(best);
  return sol;
}

StageSolution min_bipartite_vertex_cover(const StageGraph& stage,
                                         const IntVertexWeights& weights) {
  auto [side_a, side_b] = bipartition(stage);
  Int big = 1;
  for (const auto& v : stage.vertices) {
    auto it = weights.find(v);
    if (it == weights.end()) {
      throw ValidationError("missing weight for vertex " + v);
    }
    if (it->second <= 0) throw ValidationError("weights must be positive");
    big += it->second;
  }
  std::string source = "#s";
  std::string sink = "#t";
  while (stage.has_vertex(source)) source += "#";
  while (stage.has_vertex(sink)) sink += "#";
  FlowNetwork net;
  net.set_terminals(source, sink);
  for (const auto& v : side_a) net.add_arc(source, v, weights.at(v));
  for (const auto& v : side_b) net.add_arc(v, sink, weights.at(v));
  for (const auto& e : stage.edges) {
    const std::string& a = side_a.count(e.a) ? e.a : e.b;
    const std::string& b = (a == e.a) ? e.b : e.a;
    net.add_arc(a, b, big);
  }
  MaxFlowResult flow = max_flow_min_cut(net);
  StageSolution sol;
  Int measure = 0;
  for (std::size_t idx : flow.cut_arcs) {
    const auto& arc = net.arcs[idx];
    const std::string& from = net.labels[arc.from];
    const std::string& to = net.labels[arc.to];
    const std::string& covered = (from == source) ? to : from;
    if (from != source && to != sink) {
      throw MssError("internal: original edge entered a minimum cut");
    }
    sol.elements.insert(ElementId::vertex(covered));
    measure += weights.at(covered);
  }
  sol.measure = Rational(measure);
  return sol;
}

}  // namespace mss
