#include "mss/instance_io.hpp"

#include <json.hpp>

namespace mss {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("invalid JSON");
  return doc;
}

std::string require_string(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw SchemaError(std::string("expected string field '") + key + "'");
  }
  return obj[key].get<std::string>();
}

Rational positive_weight(const std::string& text, const std::string& where) {
  Rational w = parse_rational(text);
  if (w <= 0) throw ValidationError("nonpositive weight at " + where);
  return w;
}

StageGraph parse_stage(const json& node, ProblemKind kind) {
  if (!node.is_object()) throw SchemaError("stage must be an object");
  StageGraph stage;
  if (!node.contains("vertices") || !node["vertices"].is_array()) {
    throw SchemaError("stage needs a 'vertices' array");
  }
  for (const auto& v : node["vertices"]) {
    if (!v.is_string()) throw SchemaError("vertex labels must be strings");
    auto label = v.get<std::string>();
    if (!stage.vertices.insert(label).second) {
      throw ValidationError("duplicate vertex " + label);
    }
  }
  if (node.contains("edges")) {
    if (!node["edges"].is_array()) throw SchemaError("'edges' must be an array");
    for (const auto& e : node["edges"]) {
      ElementId id = ElementId::edge(require_string(e, "u"),
                                     require_string(e, "v"));
      if (!stage.edges.insert(id).second) {
        throw ValidationError("duplicate edge " + id.key());
      }
      if (!is_vertex_weighted(kind)) {
        std::string w = e.contains("w") ? require_string(e, "w") : "1";
        stage.edge_weights[id] = positive_weight(w, id.key());
      }
    }
  }
  if (is_vertex_weighted(kind)) {
    if (node.contains("vertex_weights")) {
      if (!node["vertex_weights"].is_object()) {
        throw SchemaError("'vertex_weights' must be an object");
      }
      for (const auto& [v, w] : node["vertex_weights"].items()) {
        if (!w.is_string()) throw SchemaError("weights must be strings");
        if (!stage.has_vertex(v)) {
          throw ValidationError("weight for unknown vertex " + v);
        }
        stage.vertex_weights[v] = positive_weight(w.get<std::string>(), v);
      }
    }
    for (const auto& v : stage.vertices) {
      stage.vertex_weights.emplace(v, Rational(1));
    }
  }
  if (node.contains("s") || node.contains("t")) {
    stage.terminals = {require_string(node, "s"), require_string(node, "t")};
  }
  return stage;
}

}  // namespace

ProblemInstance parse_instance(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("instance must be a JSON object");
  ProblemInstance inst;
  inst.problem = problem_kind_from_string(require_string(doc, "problem"));
  if (!doc.contains("stages") || !doc["stages"].is_array()) {
    throw SchemaError("instance needs a 'stages' array");
  }
  for (const auto& s : doc["stages"]) {
    inst.graph.stages.push_back(parse_stage(s, inst.problem));
  }
  inst.validate();
  return inst;
}

std::string serialize_instance(const ProblemInstance& inst) {
  json doc;
  doc["problem"] = to_string(inst.problem);
  doc["stages"] = json::array();
  for (const StageGraph& stage : inst.graph.stages) {
    json node;
    node["vertices"] = json::array();
    for (const auto& v : stage.vertices) node["vertices"].push_back(v);
    node["edges"] = json::array();
    for (const auto& e : stage.edges) {
      json edge{{"u", e.a}, {"v", e.b}};
      if (!is_vertex_weighted(inst.problem)) {
        edge["w"] = format_rational(stage.edge_weights.at(e));
      }
      node["edges"].push_back(edge);
    }
    if (is_vertex_weighted(inst.problem)) {
      json weights = json::object();
      for (const auto& [v, w] : stage.vertex_weights) {
        weights[v] = format_rational(w);
      }
      node["vertex_weights"] = weights;
    }
    if (needs_terminals(inst.problem) && stage.terminals) {
      node["s"] = stage.terminals->first;
      node["t"] = stage.terminals->second;
    }
    doc["stages"].push_back(node);
  }
  return doc.dump();
}

std::string serialize_solution(const SolutionSequence& sol,
                               std::size_t quality) {
  json doc;
  doc["per_stage"] = json::array();
  for (const ElementSet& s : sol.per_stage) {
    json stage = json::array();
    for (const auto& e : s) stage.push_back(e.key());
    doc["per_stage"].push_back(stage);
  }
  doc["quality"] = quality;
  return doc.dump();
}

SolutionSequence parse_solution(const std::string& text, ProblemKind kind) {
  json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("per_stage") ||
      !doc["per_stage"].is_array()) {
    throw SchemaError("solution needs a 'per_stage' array");
  }
  SolutionSequence sol;
  sol.problem = kind;
  for (const auto& stage : doc["per_stage"]) {
    if (!stage.is_array()) throw SchemaError("per-stage entry must be an array");
    ElementSet set;
    for (const auto& item : stage) {
      if (!item.is_string()) throw SchemaError("element keys must be strings");
      std::string keyed = item.get<std::string>();
      if (keyed.rfind("v:", 0) == 0) {
        set.insert(ElementId::vertex(keyed.substr(2)));
      } else if (keyed.rfind("e:", 0) == 0) {
        std::string pair = keyed.substr(2);
        std::size_t comma = pair.find(',');
        if (comma == std::string::npos) {
          throw SchemaError("bad edge key " + keyed);
        }
        set.insert(ElementId::edge(pair.substr(0, comma),
                                   pair.substr(comma + 1)));
      } else {
        throw SchemaError("bad element key " + keyed);
      }
    }
    sol.per_stage.push_back(std::move(set));
  }
  return sol;
}

StageGraph parse_maxcut_graph(const std::string& text) {
  json doc = parse_json(text);
  StageGraph stage = parse_stage(doc, ProblemKind::MWBMaxCut);
  stage.edge_weights.clear();
  stage.terminals.reset();
  stage.validate();
  return stage;
}

}  // namespace mss
