#include "mss/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mss/framework.hpp"
#include "mss/instance_io.hpp"
#include "mss/oracle.hpp"
#include "mss/reductions.hpp"

namespace mss {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + path);
  out << content;
}

json instance_digest(const ProblemInstance& inst) {
  json digest;
  digest["problem"] = to_string(inst.problem);
  digest["tau"] = inst.graph.tau();
  digest["chi"] = intertwinement(inst.graph);
  digest["x_cap"] =
      intersection_elements(inst.graph, ElementKind::Vertex).size() +
      intersection_elements(inst.graph, ElementKind::Edge).size();
  return digest;
}

QualityKind quality_from_flag(const std::string& flag) {
  if (flag == "cap") return QualityKind::IntersectionProfit;
  if (flag == "sym") return QualityKind::SymmetricDifferenceCost;
  throw ValidationError("unknown quality '" + flag + "' (use cap or sym)");
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

json solution_json(const SolutionSequence& sol, std::size_t quality) {
  return json::parse(serialize_solution(sol, quality));
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

void append_check(json& report, const ProblemInstance& inst,
                  const SolutionSequence& sol, QualityKind quality) {
  OracleConfig config = OracleConfig::from_env();
  VerifyReport verify = verify_sequence(inst, sol, quality, config);
  ExactResult exact = exact_multistage(inst, quality, config);
  report["check"] = json::object();
  report["check"]["stagewise_optimal"] = verify.stagewise_optimal;
  report["opt"] = exact.quality;
  if (exact.quality > 0) {
    Rational ratio(Int(report["quality"].get<long long>()),
                   Int(exact.quality));
    report["ratio"] = format_decimal(ratio, 6);
  }
}

int cmd_solve(const std::string& algo, int t, const std::string& quality_flag,
              const std::string& in, const std::string& out_path, bool check,
              bool no_timing, std::string& out) {
  Timer timer;
  ProblemInstance inst = parse_instance(read_file(in));
  QualityKind quality = quality_from_flag(quality_flag);

  SolutionSequence sol;
  if (algo == "two-stage") {
    if (quality != QualityKind::IntersectionProfit) {
      throw ValidationError("the two-stage algorithm optimizes intersection profit only");
    }
    sol = approx_two_stage(inst, make_preficiency_oracle(inst.problem)).first;
  } else if (algo == "windowed") {
    if (quality == QualityKind::IntersectionProfit && t == 2) {
      sol = approx_multistage(inst);
    } else {
      // exact windows: any quality, any window length
      OracleConfig config = OracleConfig::from_env();
      SubAlgorithm exact_window = [&](const ProblemInstance& window) {
        return exact_multistage(window, quality, config).solution;
      };
      sol = window_lift(inst, t, exact_window, quality);
    }
  } else {
    throw ValidationError("unknown algorithm '" + algo + "'");
  }

  std::size_t quality_value = global_quality(sol, quality);
  json report;
  report["command"] = "solve";
  report["algo"] = algo;
  report["instance"] = instance_digest(inst);
  report["result"] = solution_json(sol, quality_value);
  report["quality"] = quality_value;
  if (check) append_check(report, inst, sol, quality);
  if (!out_path.empty()) {
    write_file(out_path, serialize_solution(sol, quality_value));
    report["out"] = out_path;
  }
  if (!no_timing) report["wall_ms"] = timer.ms();
  out = report.dump();
  return 0;
}

int cmd_exact(const std::string& in, const std::string& quality_flag,
              bool no_timing, std::string& out) {
  Timer timer;
  ProblemInstance inst = parse_instance(read_file(in));
  QualityKind quality = quality_from_flag(quality_flag);
  ExactResult exact = exact_multistage(inst, quality, OracleConfig::from_env());
  json report;
  report["command"] = "exact";
  report["instance"] = instance_digest(inst);
  report["result"] = solution_json(exact.solution, exact.quality);
  report["quality"] = exact.quality;
  if (!no_timing) report["wall_ms"] = timer.ms();
  out = report.dump();
  return 0;
}

int cmd_stats(const std::string& in, bool no_timing, std::string& out) {
  Timer timer;
  ProblemInstance inst = parse_instance(read_file(in));
  json report;
  report["command"] = "stats";
  report["instance"] = instance_digest(inst);
  json pairs = json::array();
  for (std::size_t i = 0; i + 1 < inst.graph.tau(); ++i) {
    pairs.push_back(pair_intersection_size(inst.graph.stages[i],
                                           inst.graph.stages[i + 1]));
  }
  report["pair_intersections"] = pairs;
  std::size_t chi = intertwinement(inst.graph);
  if (chi > 0) {
    report["bound_two_stage"] = format_double(1.0 / std::sqrt(2.0 * chi));
    report["bound_multistage"] = format_double(1.0 / std::sqrt(8.0 * chi));
  } else {
    report["bound_two_stage"] = nullptr;
    report["bound_multistage"] = nullptr;
  }
  if (!no_timing) report["wall_ms"] = timer.ms();
  out = report.dump();
  return 0;
}

int cmd_reduce(const std::string& target, const std::string& in,
               std::size_t k, const std::string& out_path, bool verify,
               bool no_timing, std::string& out) {
  Timer timer;
  MaxCutInstance mc{parse_maxcut_graph(read_file(in)), k};
  ReductionOutput reduction;
  if (target == "mmincut") {
    reduction = reduce_to_mmincut(mc);
  } else if (target == "mwbmaxcut") {
    reduction = reduce_to_mwbmaxcut(mc);
  } else if (target == "mminbvc") {
    reduction = reduce_to_mminbvc(mc);
  } else {
    throw ValidationError("unknown reduction target '" + target + "'");
  }

  write_file(out_path, serialize_instance(reduction.instance));
  json witness;
  witness["vertices"] = reduction.vertex_witness;
  witness["edges"] = reduction.edge_witness;
  witness["kappa"] = reduction.kappa;
  const std::string witness_path = out_path + ".witness.json";
  write_file(witness_path, witness.dump());

  json report;
  report["command"] = "reduce";
  report["target"] = target;
  report["kappa"] = reduction.kappa;
  report["out"] = out_path;
  report["witness"] = witness_path;
  report["instance"] = instance_digest(reduction.instance);
  if (verify) {
    ReductionCheck check =
        verify_reduction(mc, reduction, OracleConfig::from_env());
    report["verify"] = {{"maxcut_yes", check.maxcut_yes},
                        {"multistage_yes", check.multistage_yes},
                        {"equivalent", check.equivalent}};
  }
  if (!no_timing) report["wall_ms"] = timer.ms();
  out = report.dump();
  return 0;
}

int cmd_verify(const std::string& in, const std::string& sol_path,
               const std::string& quality_flag, bool no_timing,
               std::string& out) {
  Timer timer;
  ProblemInstance inst = parse_instance(read_file(in));
  QualityKind quality = quality_from_flag(quality_flag);
  SolutionSequence sol = parse_solution(read_file(sol_path), inst.problem);
  VerifyReport verify =
      verify_sequence(inst, sol, quality, OracleConfig::from_env());
  json report;
  report["command"] = "verify";
  report["instance"] = instance_digest(inst);
  report["stagewise_optimal"] = verify.stagewise_optimal;
  report["all_optimal"] = verify.all_optimal();
  report["quality"] = verify.quality;
  if (!no_timing) report["wall_ms"] = timer.ms();
  out = report.dump();
  return 0;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"multistage subgraph problem toolkit"};
  app.require_subcommand(1);

  std::string algo = "two-stage", quality = "cap", in, out_path, sol_path;
  std::string target;
  int t = 2;
  std::size_t k = 0;
  bool check = false, verify_flag = false, no_timing = false;

  CLI::App* solve = app.add_subcommand("solve", "approximate a multistage instance");
  solve->add_option("--algo", algo, "two-stage or windowed")->required();
  solve->add_option("--t", t, "window length for windowed");
  solve->add_option("--quality", quality, "cap or sym");
  solve->add_option("--in", in, "instance file")->required();
  solve->add_option("--out", out_path, "write the solution document here");
  solve->add_flag("--check", check, "verify against the exact oracle");
  solve->add_flag("--no-timing", no_timing);

  CLI::App* exact = app.add_subcommand("exact", "ground-truth optimum");
  exact->add_option("--in", in, "instance file")->required();
  exact->add_option("--quality", quality, "cap or sym");
  exact->add_flag("--no-timing", no_timing);

  CLI::App* stats = app.add_subcommand("stats", "instance statistics");
  stats->add_option("--in", in, "instance file")->required();
  stats->add_flag("--no-timing", no_timing);

  CLI::App* reduce = app.add_subcommand("reduce", "MaxCut hardness gadgets");
  reduce->add_option("--target", target, "mmincut, mwbmaxcut or mminbvc")
      ->required();
  reduce->add_option("--in", in, "MaxCut graph file")->required();
  reduce->add_option("--k", k, "MaxCut threshold")->required();
  reduce->add_option("--out", out_path, "instance output file")->required();
  reduce->add_flag("--verify", verify_flag, "brute-force the equivalence");
  reduce->add_flag("--no-timing", no_timing);

  CLI::App* verify = app.add_subcommand("verify", "check a solution document");
  verify->add_option("--in", in, "instance file")->required();
  verify->add_option("--sol", sol_path, "solution file")->required();
  verify->add_option("--quality", quality, "cap or sym");
  verify->add_flag("--no-timing", no_timing);

  CliResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    help << app.help();
    result.out = help.str();
    return result;
  } catch (const CLI::ParseError& e) {
    result.err = e.what();
    result.exit_code = 2;
    return result;
  }

  try {
    if (solve->parsed()) {
      result.exit_code = cmd_solve(algo, t, quality, in, out_path, check,
                                   no_timing, result.out);
    } else if (exact->parsed()) {
      result.exit_code = cmd_exact(in, quality, no_timing, result.out);
    } else if (stats->parsed()) {
      result.exit_code = cmd_stats(in, no_timing, result.out);
    } else if (reduce->parsed()) {
      result.exit_code = cmd_reduce(target, in, k, out_path, verify_flag,
                                    no_timing, result.out);
    } else if (verify->parsed()) {
      result.exit_code =
          cmd_verify(in, sol_path, quality, no_timing, result.out);
    }
  } catch (const TooLargeError& e) {
    result.err = e.what();
    result.exit_code = 4;
  } catch (const InfeasibleError& e) {
    result.err = e.what();
    result.exit_code = 3;
  } catch (const MssError& e) {
    result.err = e.what();
    result.exit_code = 2;
  }
  return result;
}

}  // namespace mss
