// Command-line front end: instance generation, single runs, Monte-Carlo
// sweeps, oracle verification and sweep aggregation. Exit codes:
// 0 success, 2 malformed input, 3 infeasible instance/parameters.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ostoc/harness.hpp"

using namespace ostoc;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

NormKind parse_norm(const std::string& s) {
  if (s == "euclidean") return NormKind::kEuclidean;
  if (s == "maxabs") return NormKind::kMaxAbs;
  throw std::invalid_argument("unknown norm: " + s);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

// Fill options that were not passed on the command line from a JSON
// config file; explicit flags win on conflict.
void apply_config(CLI::App* cmd, const json& cfg) {
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

AlgorithmKind default_algorithm(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kLinear: return AlgorithmKind::kLinearCP;
    case InstanceKind::kPacking: return AlgorithmKind::kPacking;
    case InstanceKind::kSmooth: return AlgorithmKind::kSmoothCP;
    case InstanceKind::kFeasibility:
    case InstanceKind::kCovering: return AlgorithmKind::kFeasibility;
  }
  return AlgorithmKind::kFeasibility;
}

StreamOrder make_stream(const Instance& inst, const std::string& mode, uint64_t seed, int t_out) {
  if (mode == "rp") return rp_stream(inst, seed);
  if (mode == "iid") return iid_stream(inst, seed, t_out);
  throw std::invalid_argument("unknown stream mode: " + mode);
}

double resolve_z(const Instance& inst, const StreamOrder& order, const std::string& z_flag,
                 AlgorithmKind algo, double epsilon) {
  if (z_flag != "auto") return std::stod(z_flag);
  if (algo == AlgorithmKind::kPacking) return estimate_z_packing(inst, order, epsilon).Z;
  if (algo == AlgorithmKind::kFeasibility) return 0.0;
  const int prefix = std::max(2, order.length() / 4);
  return estimate_z_phased(inst, order, prefix).Z;
}

std::optional<OracleRef> compute_oracle(const Instance& inst, bool enabled) {
  if (!enabled) return std::nullopt;
  if (inst.kind == InstanceKind::kPacking) {
    const OracleResult lp = packing_opt_sum(inst);
    return OracleRef{lp.value / static_cast<double>(inst.T), "packing_dual",
                     lp.tolerance_achieved};
  }
  const OracleResult frac = fractional_opt(inst, 0.0);
  return OracleRef{frac.value, "fractional_dual", frac.tolerance_achieved};
}

struct SweepRow {
  std::string algo;
  std::string kind;
  int T = 0;
  double B = 0.0;
  double eps = 0.0;
  double Z = 0.0;
  uint64_t seed = 0;
  MetricsSummary metrics;
  std::string inst_hash, cfg_hash;
};

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "algo,kind,T,B,eps,Z,seed,regret1,regret2,ratio,tau,total_reward,wall_ms,instance_hash,"
      "config_hash\n";
  for (const auto& r : rows) {
    out += r.algo + "," + r.kind + "," + std::to_string(r.T) + "," + fmt(r.B) + "," + fmt(r.eps) +
           "," + fmt(r.Z) + "," + std::to_string(r.seed) + ",";
    out += (r.metrics.regret1 ? fmt(*r.metrics.regret1) : "") + std::string(",");
    out += fmt(r.metrics.regret2) + ",";
    out += (r.metrics.ratio ? fmt(*r.metrics.ratio) : "") + std::string(",");
    out += std::to_string(r.metrics.tau) + "," + fmt(r.metrics.total_reward) + "," +
           fmt(r.metrics.wall_clock_ms) + "," + r.inst_hash + "," + r.cfg_hash + "\n";
  }
  return out;
}

int cmd_gen(const GenParams& params, const std::string& out_path) {
  const Instance inst = generate(params);
  save_instance(inst, out_path);
  std::cout << "wrote " << out_path << " hash=" << instance_hash(inst) << "\n";
  return 0;
}

int cmd_run(const std::string& inst_path, const std::string& algo_flag, const std::string& stream,
            uint64_t seed, int t_out, const std::string& z_flag, double epsilon, bool oracle_on,
            bool emit_qgap, const std::string& trace_path, const std::string& summary_path) {
  const Instance inst = load_instance(inst_path);
  const StreamOrder order = make_stream(inst, stream, seed, t_out);
  RunConfig cfg;
  cfg.algorithm = algo_flag == "auto" ? default_algorithm(inst.kind) : algorithm_from_string(algo_flag);
  cfg.epsilon = epsilon;
  cfg.Z = resolve_z(inst, order, z_flag, cfg.algorithm, epsilon);

  const auto t0 = std::chrono::steady_clock::now();
  const RunTrace trace = run(inst, order, cfg);
  const auto t1 = std::chrono::steady_clock::now();

  MetricsSummary metrics = compute_metrics(trace, inst, compute_oracle(inst, oracle_on));
  metrics.wall_clock_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  std::vector<double> qgap;
  const std::vector<double>* qgap_ptr = nullptr;
  if (emit_qgap) {
    qgap = qgap_trace(inst, order);
    qgap_ptr = &qgap;
  }
  write_file(trace_path, trace_to_csv(trace, instance_hash(inst), seed,
                                      config_hash(cfg, order), qgap_ptr));
  write_file(summary_path, summary_to_json(trace, metrics, inst, order, cfg));
  std::cout << "algo=" << to_string(cfg.algorithm) << " tau=" << trace.tau
            << " regret2=" << fmt(metrics.regret2)
            << (metrics.regret1 ? " regret1=" + fmt(*metrics.regret1) : "")
            << (metrics.ratio ? " ratio=" + fmt(*metrics.ratio) : "") << "\n";
  return 0;
}

int cmd_sweep(GenParams base, const std::string& algo_flag, const std::string& stream,
              const std::vector<double>& t_list, const std::vector<double>& b_list,
              const std::vector<double>& eps_list, int seeds, const std::string& z_flag,
              bool oracle_on, const std::string& out_path) {
  std::vector<SweepRow> rows;
  for (double t_val : t_list) {
    for (double b_val : b_list) {
      for (double eps : eps_list) {
        GenParams params = base;
        params.T = static_cast<int>(t_val);
        if (params.kind == InstanceKind::kPacking)
          params.budget = b_val > 0.0 ? b_val : static_cast<double>(params.T) / 4.0;
        const Instance inst = generate(params);
        const std::string inst_hash = instance_hash(inst);
        const std::optional<OracleRef> oracle = compute_oracle(inst, oracle_on);
        const AlgorithmKind algo =
            algo_flag == "auto" ? default_algorithm(inst.kind) : algorithm_from_string(algo_flag);

        std::vector<SweepRow> cell(static_cast<size_t>(seeds));
        parallel_for(seeds, [&](int s) {
          const uint64_t seed = static_cast<uint64_t>(s) + 1;
          const StreamOrder order = make_stream(inst, stream, seed, -1);
          RunConfig cfg;
          cfg.algorithm = algo;
          cfg.epsilon = eps;
          cfg.Z = resolve_z(inst, order, z_flag, algo, eps);
          const auto t0 = std::chrono::steady_clock::now();
          const RunTrace trace = run(inst, order, cfg);
          const auto t1 = std::chrono::steady_clock::now();
          MetricsSummary m = compute_metrics(trace, inst, oracle);
          m.wall_clock_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
          SweepRow row;
          row.algo = to_string(algo);
          row.kind = to_string(inst.kind);
          row.T = inst.T;
          row.B = inst.budget.value_or(0.0);
          row.eps = eps;
          row.Z = cfg.Z;
          row.seed = seed;
          row.metrics = m;
          row.inst_hash = inst_hash;
          row.cfg_hash = config_hash(cfg, order);
          cell[static_cast<size_t>(s)] = row;
        });
        rows.insert(rows.end(), cell.begin(), cell.end());
      }
    }
  }
  write_file(out_path, sweep_csv(rows));
  std::cout << "wrote " << out_path << " rows=" << rows.size() << "\n";
  return 0;
}

int cmd_verify() {
  const std::vector<std::string> violations = verify_suite();
  for (const auto& v : violations) std::cerr << "VIOLATION: " << v << "\n";
  std::cout << (violations.empty() ? "verify: all oracle cross-checks passed\n"
                                   : "verify: FAILED\n");
  return violations.empty() ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path) {
  // Long-format sweep rows -> per (algo, T) mean/stderr for each metric
  // plus a log-log slope fit across T.
  struct Key {
    std::string algo;
    int T;
    bool operator<(const Key& o) const { return std::tie(algo, T) < std::tie(o.algo, o.T); }
  };
  std::map<Key, std::map<std::string, std::vector<double>>> groups;
  const std::vector<std::string> metrics = {"regret1", "regret2", "ratio", "tau"};
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (header.empty()) {
        header = cells;
        continue;
      }
      std::map<std::string, std::string> row;
      for (size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
      const Key key{row.at("algo"), std::stoi(row.at("T"))};
      for (const auto& metric : metrics) {
        auto it = row.find(metric);
        if (it != row.end() && !it->second.empty())
          groups[key][metric].push_back(std::stod(it->second));
      }
    }
  }
  // Means per (algo, T), slopes per algo across T.
  std::map<std::string, std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>>
      series;  // algo -> metric -> (T, mean)
  std::string out = "algo,metric,T,n,mean,stderr,loglog_slope\n";
  for (const auto& [key, by_metric] : groups) {
    for (const auto& [metric, vals] : by_metric) {
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      series[key.algo][metric].first.push_back(key.T);
      series[key.algo][metric].second.push_back(mean);
    }
  }
  for (const auto& [key, by_metric] : groups) {
    for (const auto& metric : metrics) {
      auto it = by_metric.find(metric);
      if (it == by_metric.end()) continue;
      const auto& vals = it->second;
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      const double stderr_v =
          vals.size() > 1 ? std::sqrt(var / (static_cast<double>(vals.size()) - 1.0) /
                                      static_cast<double>(vals.size()))
                          : 0.0;
      const auto& [ts, means] = series[key.algo][metric];
      const double slope = fit_loglog_slope(ts, means);
      out += key.algo + "," + metric + "," + std::to_string(key.T) + "," +
             std::to_string(vals.size()) + "," + fmt(mean) + "," + fmt(stderr_v) + "," +
             (std::isnan(slope) ? "" : fmt(slope)) + "\n";
    }
  }
  write_file(out_path, out);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online stochastic convex programming harness"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags win on conflict");

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  GenParams gp;
  std::string gen_kind = "feasibility", gen_norm = "maxabs", gen_out = "instance.osp.jsonl";
  uint64_t gen_seed = 1;
  gen->add_option("--kind", gen_kind, "feasibility|linear|packing|covering|smooth");
  gen->add_option("--d", gp.d, "dimension");
  gen->add_option("--T", gp.T, "horizon");
  gen->add_option("--k", gp.options_per_step, "options per step");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--norm", gen_norm, "euclidean|maxabs");
  gen->add_option("--budget", gp.budget, "packing budget B (default T/4)");
  gen->add_option("--objective", gp.objective, "auto|zero|separable|quadratic");
  gen->add_option("--quad-beta", gp.quad_beta, "quadratic smoothness beta");
  gen->add_option("--out", gen_out, "output path (.osp.jsonl)");

  // --- run ---
  auto* runc = app.add_subcommand("run", "run one experiment");
  std::string run_inst, run_algo = "auto", run_stream = "rp", run_z = "auto";
  std::string run_trace = "trace.csv", run_summary = "summary.json";
  uint64_t run_seed = 1;
  int run_t_out = -1;
  double run_eps = 0.1;
  bool run_no_oracle = false, run_qgap = false;
  runc->add_option("--instance", run_inst, "instance file")->required();
  runc->add_option("--algo", run_algo, "auto|feasibility|general_cp|linear_cp|packing|smooth_cp");
  runc->add_option("--stream", run_stream, "rp|iid");
  runc->add_option("--seed", run_seed, "stream seed");
  runc->add_option("--T-out", run_t_out, "iid stream length (default T)");
  runc->add_option("--Z", run_z, "Z value or 'auto'");
  runc->add_option("--epsilon", run_eps, "packing MW epsilon");
  runc->add_flag("--no-oracle", run_no_oracle, "skip offline oracle (regret1/ratio unavailable)");
  runc->add_flag("--emit-qgap", run_qgap, "append the q_gap diagnostic column");
  runc->add_option("--trace", run_trace, "trace csv path");
  runc->add_option("--summary", run_summary, "summary json path");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo grid over (T, B, eps, seeds)");
  GenParams sp;
  std::string sw_kind = "feasibility", sw_norm = "maxabs", sw_algo = "auto", sw_stream = "rp";
  std::string sw_t = "200,800", sw_b = "-1", sw_eps = "0.1", sw_z = "auto";
  std::string sw_out = "sweep.csv";
  uint64_t sw_gen_seed = 1;
  int sw_seeds = 10;
  bool sw_no_oracle = false;
  sweep->add_option("--kind", sw_kind, "instance kind");
  sweep->add_option("--d", sp.d, "dimension");
  sweep->add_option("--k", sp.options_per_step, "options per step");
  sweep->add_option("--gen-seed", sw_gen_seed, "instance generator seed");
  sweep->add_option("--norm", sw_norm, "euclidean|maxabs");
  sweep->add_option("--objective", sp.objective, "auto|zero|separable|quadratic");
  sweep->add_option("--T", sw_t, "comma list of horizons");
  sweep->add_option("--B", sw_b, "comma list of budgets (-1: T/4)");
  sweep->add_option("--eps", sw_eps, "comma list of packing epsilons");
  sweep->add_option("--seeds", sw_seeds, "stream seeds per cell");
  sweep->add_option("--algo", sw_algo, "algorithm");
  sweep->add_option("--stream", sw_stream, "rp|iid");
  sweep->add_option("--Z", sw_z, "Z value or 'auto'");
  sweep->add_flag("--no-oracle", sw_no_oracle, "skip offline oracles");
  sweep->add_option("--out", sw_out, "output csv");

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "oracle cross-check suite");

  // --- report ---
  auto* report = app.add_subcommand("report", "aggregate sweep csvs");
  std::vector<std::string> rep_in;
  std::string rep_out = "report.csv";
  report->add_option("--in", rep_in, "sweep csv(s)")->required();
  report->add_option("--out", rep_out, "output csv");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config: " + config_path);
      json cfg = json::parse(in);
      for (CLI::App* sub : {gen, runc, sweep, report})
        if (sub->parsed()) apply_config(sub, cfg);
    }
    if (gen->parsed()) {
      gp.kind = instance_kind_from_string(gen_kind);
      gp.norm = parse_norm(gen_norm);
      gp.seed = gen_seed;
      return cmd_gen(gp, gen_out);
    }
    if (runc->parsed())
      return cmd_run(run_inst, run_algo, run_stream, run_seed, run_t_out, run_z, run_eps,
                     !run_no_oracle, run_qgap, run_trace, run_summary);
    if (sweep->parsed()) {
      sp.kind = instance_kind_from_string(sw_kind);
      sp.norm = parse_norm(sw_norm);
      sp.seed = sw_gen_seed;
      return cmd_sweep(sp, sw_algo, sw_stream, parse_list(sw_t), parse_list(sw_b),
                       parse_list(sw_eps), sw_seeds, sw_z, !sw_no_oracle, sw_out);
    }
    if (verify->parsed()) return cmd_verify();
    if (report->parsed()) return cmd_report(rep_in, rep_out);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
