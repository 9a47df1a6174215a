#include "mss/reductions.hpp"

#include <algorithm>

#include "mss/prefer.hpp"
#include "mss/stage_solvers.hpp"

namespace mss {

std::string edge_token(const ElementId& e) { return e.a + "+" + e.b; }

namespace {

void check_reduction_labels(const StageGraph& graph) {
  for (const auto& v : graph.vertices) {
    if (v.find(':') != std::string::npos || v.find('+') != std::string::npos ||
        v.find(',') != std::string::npos) {
      throw ValidationError("reduction input labels must not contain ':', '+' or ','");
    }
  }
}

// incident edge tokens, sorted; padded with fictional tokens up to `arity`
std::vector<std::string> incident_tokens(const StageGraph& graph,
                                         const std::string& v,
                                         std::size_t arity) {
  std::vector<std::string> toks;
  for (const auto& e : graph.edges) {
    if (e.a == v || e.b == v) toks.push_back(edge_token(e));
  }
  std::sort(toks.begin(), toks.end());
  if (arity > 0 && toks.size() > arity) {
    throw DegreeTooHighError("vertex " + v + " has degree " +
                             std::to_string(toks.size()) + ", need <= " +
                             std::to_string(arity));
  }
  for (std::size_t f = 1; toks.size() < arity; ++f) {
    toks.push_back("f" + std::to_string(f));
  }
  return toks;
}

void add_unit_edge(StageGraph& stage, const std::string& u,
                   const std::string& v) {
  stage.vertices.insert(u);
  stage.vertices.insert(v);
  ElementId e = ElementId::edge(u, v);
  stage.edges.insert(e);
  stage.edge_weights[e] = 1;
}

void set_uniform_edge_weights(StageGraph& stage, const Rational& shared,
                              const Rational& other,
                              const std::set<ElementId>& shared_edges) {
  for (const auto& e : stage.edges) {
    stage.edge_weights[e] = shared_edges.count(e) ? shared : other;
  }
}

}  // namespace

ReductionOutput reduce_to_mmincut(const MaxCutInstance& mc) {
  check_reduction_labels(mc.graph);
  ReductionOutput out;
  out.kappa = mc.graph.edges.size() + mc.k;

  StageGraph g1, g2;
  g1.terminals = {"s", "t"};
  g2.terminals = {"s", "t"};
  g1.vertices = {"s", "t"};
  g2.vertices = {"s", "t"};

  for (const auto& v : mc.graph.vertices) {
    const std::string hub = "x:" + v;
    auto& witness = out.vertex_witness[v];
    witness.push_back(hub);
    g1.vertices.insert(hub);
    for (const auto& tok : incident_tokens(mc.graph, v, 0)) {
      const std::string ao = "ao:" + v + ":" + tok;
      const std::string ai = "ai:" + v + ":" + tok;
      const std::string bi = "bi:" + v + ":" + tok;
      const std::string bo = "bo:" + v + ":" + tok;
      witness.insert(witness.end(), {ao, ai, bi, bo});
      add_unit_edge(g1, "s", ao);
      add_unit_edge(g1, ao, ai);  // the alpha edge
      add_unit_edge(g1, ai, hub);
      add_unit_edge(g1, hub, bi);
      add_unit_edge(g1, bi, bo);  // the beta edge
      add_unit_edge(g1, bo, "t");
    }
  }

  for (const auto& e : mc.graph.edges) {
    const std::string tok = edge_token(e);
    const std::string& v = e.a;
    const std::string& w = e.b;
    const std::string cw = "c:" + tok + ":" + w;
    const std::string cv = "c:" + tok + ":" + v;
    out.edge_witness[tok] = {cw, cv};
    // path through the alpha edges of both endpoints
    add_unit_edge(g2, "s", cw);
    add_unit_edge(g2, cw, "ao:" + w + ":" + tok);
    add_unit_edge(g2, "ao:" + w + ":" + tok, "ai:" + w + ":" + tok);
    add_unit_edge(g2, "ai:" + w + ":" + tok, "ao:" + v + ":" + tok);
    add_unit_edge(g2, "ao:" + v + ":" + tok, "ai:" + v + ":" + tok);
    add_unit_edge(g2, "ai:" + v + ":" + tok, "t");
    // path through the beta edges
    add_unit_edge(g2, "s", "bi:" + w + ":" + tok);
    add_unit_edge(g2, "bi:" + w + ":" + tok, "bo:" + w + ":" + tok);
    add_unit_edge(g2, "bo:" + w + ":" + tok, "bi:" + v + ":" + tok);
    add_unit_edge(g2, "bi:" + v + ":" + tok, "bo:" + v + ":" + tok);
    add_unit_edge(g2, "bo:" + v + ":" + tok, cv);
    add_unit_edge(g2, cv, "t");
  }

  out.instance.problem = ProblemKind::MMinCut;
  out.instance.graph.stages = {std::move(g1), std::move(g2)};
  out.instance.validate();
  return out;
}

ReductionOutput reduce_to_mwbmaxcut(const MaxCutInstance& mc) {
  check_reduction_labels(mc.graph);
  ReductionOutput out;
  out.kappa = mc.graph.edges.size() + mc.k;

  StageGraph g1, g2;
  for (const auto& v : mc.graph.vertices) {
    auto toks = incident_tokens(mc.graph, v, 3);
    const std::string hub = "x:" + v;
    auto& witness = out.vertex_witness[v];
    witness.push_back(hub);
    std::vector<std::string> cycle;
    for (const auto& tok : toks) {
      cycle.push_back("a:" + v + ":" + tok);
      cycle.push_back("b:" + v + ":" + tok);
      cycle.push_back("c:" + v + ":" + tok);
    }
    witness.insert(witness.end(), cycle.begin(), cycle.end());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      add_unit_edge(g1, cycle[i], cycle[(i + 1) % cycle.size()]);
    }
    for (const auto& tok : toks) {
      add_unit_edge(g1, hub, "b:" + v + ":" + tok);
      add_unit_edge(g1, "a:" + v + ":" + tok, "c:" + v + ":" + tok);
    }
  }

  // stage 2 keeps every non-hub vertex and adds one gadget per edge
  for (const auto& v : g1.vertices) {
    if (v.rfind("x:", 0) != 0) g2.vertices.insert(v);
  }
  for (const auto& e : mc.graph.edges) {
    const std::string tok = edge_token(e);
    const std::string& v = e.a;
    const std::string& w = e.b;
    auto la = [&](const std::string& u) { return "a:" + u + ":" + tok; };
    auto lb = [&](const std::string& u) { return "b:" + u + ":" + tok; };
    auto lc = [&](const std::string& u) { return "c:" + u + ":" + tok; };
    add_unit_edge(g2, la(v), lc(w));
    add_unit_edge(g2, lb(v), lb(w));
    add_unit_edge(g2, lc(v), la(w));
    auto& witness = out.edge_witness[tok];
    for (const auto& u : {v, w}) {
      const std::string p1 = "p:" + tok + ":" + u + ":1";
      const std::string p2 = "p:" + tok + ":" + u + ":2";
      witness.insert(witness.end(), {p1, p2});
      add_unit_edge(g2, la(u), p1);
      add_unit_edge(g2, p1, p2);
      add_unit_edge(g2, p2, lc(u));
      add_unit_edge(g2, la(u), lb(u));
      add_unit_edge(g2, lb(u), lc(u));
    }
  }

  std::set<ElementId> shared;
  for (const auto& e : g1.edges) {
    if (g2.has_edge(e)) shared.insert(e);
  }
  set_uniform_edge_weights(g1, 1, 4, shared);
  set_uniform_edge_weights(g2, 1, 4, shared);

  out.instance.problem = ProblemKind::MWBMaxCut;
  out.instance.graph.stages = {std::move(g1), std::move(g2)};
  out.instance.validate();
  return out;
}

ReductionOutput reduce_to_mminbvc(const MaxCutInstance& mc) {
  check_reduction_labels(mc.graph);
  ReductionOutput out;
  out.kappa = mc.graph.edges.size() + mc.k;

  StageGraph g1, g2;
  for (const auto& v : mc.graph.vertices) {
    auto toks = incident_tokens(mc.graph, v, 3);
    std::vector<std::string> cycle;
    for (const auto& tok : toks) {
      cycle.push_back("a:" + v + ":" + tok);
      cycle.push_back("b:" + v + ":" + tok);
    }
    out.vertex_witness[v] = cycle;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      add_unit_edge(g1, cycle[i], cycle[(i + 1) % cycle.size()]);
    }
  }
  g2.vertices = g1.vertices;
  for (const auto& e : mc.graph.edges) {
    const std::string tok = edge_token(e);
    auto la = [&](const std::string& u) { return "a:" + u + ":" + tok; };
    auto lb = [&](const std::string& u) { return "b:" + u + ":" + tok; };
    out.edge_witness[tok] = {la(e.a), lb(e.a), la(e.b), lb(e.b)};
    add_unit_edge(g2, la(e.a), la(e.b));
    add_unit_edge(g2, la(e.b), lb(e.b));
    add_unit_edge(g2, lb(e.b), lb(e.a));
    add_unit_edge(g2, lb(e.a), la(e.a));
  }
  g1.edge_weights.clear();
  g2.edge_weights.clear();
  for (const auto& v : g1.vertices) g1.vertex_weights[v] = 1;
  for (const auto& v : g2.vertices) g2.vertex_weights[v] = 1;

  out.instance.problem = ProblemKind::MMinBVC;
  out.instance.graph.stages = {std::move(g1), std::move(g2)};
  out.instance.validate();
  return out;
}

std::size_t max_cut_value(const StageGraph& graph) {
  if (graph.vertices.size() > 20) {
    throw TooLargeError("max cut enumeration beyond 20 vertices");
  }
  std::vector<std::string> verts(graph.vertices.begin(), graph.vertices.end());
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < verts.size(); ++i) id[verts[i]] = i;
  std::size_t best = 0;
  const std::size_t n = verts.empty() ? 0 : verts.size() - 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    std::size_t value = 0;
    for (const auto& e : graph.edges) {
      std::size_t ia = id[e.a], ib = id[e.b];
      bool a_in = ia > 0 && ((mask >> (ia - 1)) & 1);
      bool b_in = ib > 0 && ((mask >> (ib - 1)) & 1);
      if (a_in != b_in) ++value;
    }
    best = std::max(best, value);
  }
  return best;
}

ReductionCheck verify_reduction(const MaxCutInstance& mc,
                                const ReductionOutput& out,
                                const OracleConfig& config) {
  if (mc.graph.vertices.size() > 6) {
    throw TooLargeError("MaxCut verification beyond 6 vertices");
  }
  ReductionCheck check;
  check.maxcut_yes = max_cut_value(mc.graph) >= mc.k;
  ExactResult exact =
      exact_multistage(out.instance, QualityKind::IntersectionProfit, config);
  check.multistage_yes = exact.quality >= (long long)out.kappa;
  check.equivalent = (check.maxcut_yes == check.multistage_yes);
  return check;
}

namespace {

std::pair<std::string, std::string> terminals_or_throw(const StageGraph& stage,
                                                       std::size_t index) {
  if (!stage.terminals) {
    throw InfeasibleError("missing terminals in stage " +
                          std::to_string(index + 1), int(index + 1));
  }
  return *stage.terminals;
}

}  // namespace

SolutionSequence vertex_variant_min_cut(const ProblemInstance& inst,
                                        VertexVariantMode mode) {
  const auto& stages = inst.graph.stages;
  SolutionSequence sol;
  sol.problem = inst.problem;

  if (mode == VertexVariantMode::LargestPartition) {
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const StageGraph& stage = stages[i];
      auto [s, t] = terminals_or_throw(stage, i);
      auto [intw, scale] = canonicalize_weights(stage.edge_weights);
      (void)scale;
      // Run the flow toward s: the residual-reachable set from t is the
      // minimal t-side, so its complement is the maximal s-side partition.
      FlowNetwork net;
      for (const auto& v : stage.vertices) net.add_vertex(v);
      for (const auto& e : stage.edges) {
        net.add_arc(e.a, e.b, intw.at(e));
        net.add_arc(e.b, e.a, intw.at(e));
      }
      net.set_terminals(t, s);
      MaxFlowResult flow = max_flow_min_cut(net);
      ElementSet side;
      for (const auto& v : stage.vertices) {
        if (!flow.source_side.count(v)) side.insert(ElementId::vertex(v));
      }
      sol.per_stage.push_back(std::move(side));
    }
    return sol;
  }

  // QPrime: one cut over disjoint stage copies, unit copy edges between
  // shared vertices, heavy terminal edges. Stage weights are scaled by
  // (copy count + 1) so per-stage optimality always dominates copy savings.
  std::map<ElementId, Rational> tagged;
  auto tag = [](std::size_t i, const std::string& v) {
    return std::to_string(i) + ":" + v;
  };
  for (std::size_t i = 0; i < stages.size(); ++i) {
    terminals_or_throw(stages[i], i);
    for (const auto& [e, w] : stages[i].edge_weights) {
      tagged[ElementId::edge(tag(i, e.a), tag(i, e.b))] = w;
    }
  }
  auto [intw, scale] = canonicalize_weights(tagged);
  (void)scale;

  Int copy_count = 0;
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    for (const auto& v : stages[i].vertices) {
      if (stages[i + 1].has_vertex(v)) ++copy_count;
    }
  }
  const Int stage_scale = copy_count + 1;
  Int heavy = 1 + copy_count;
  for (auto& [e, w] : intw) {
    w *= stage_scale;
    heavy += w;
  }

  FlowNetwork net;
  net.set_terminals("#s", "#t");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (const auto& v : stages[i].vertices) net.add_vertex(tag(i, v));
    for (const auto& e : stages[i].edges) {
      const Int& w = intw.at(ElementId::edge(tag(i, e.a), tag(i, e.b)));
      net.add_arc(tag(i, e.a), tag(i, e.b), w);
      net.add_arc(tag(i, e.b), tag(i, e.a), w);
    }
    auto [s, t] = *stages[i].terminals;
    net.add_arc("#s", tag(i, s), heavy);
    net.add_arc(tag(i, s), "#s", heavy);
    net.add_arc(tag(i, t), "#t", heavy);
    net.add_arc("#t", tag(i, t), heavy);
  }
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    for (const auto& v : stages[i].vertices) {
      if (stages[i + 1].has_vertex(v)) {
        net.add_arc(tag(i, v), tag(i + 1, v), 1);
        net.add_arc(tag(i + 1, v), tag(i, v), 1);
      }
    }
  }

  MaxFlowResult flow = max_flow_min_cut(net);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    ElementSet side;
    for (const auto& v : stages[i].vertices) {
      if (flow.source_side.count(tag(i, v))) side.insert(ElementId::vertex(v));
    }
    sol.per_stage.push_back(std::move(side));
  }
  return sol;
}

}  // namespace mss
