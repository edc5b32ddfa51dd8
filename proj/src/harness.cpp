#include "ostoc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "json.hpp"

namespace ostoc {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

MetricsSummary compute_metrics(const RunTrace& trace, const Instance& inst,
                               const std::optional<OracleRef>& oracle) {
  MetricsSummary m;
  m.tau = trace.tau;
  m.total_reward = trace.total_reward;
  if (trace.algorithm == AlgorithmKind::kSmoothCP) {
    m.regret2 = QuadraticBoxPenalty(inst.set).eval(trace.avg);
  } else {
    m.regret2 = inst.set.distance(trace.avg);
  }
  if (oracle) {
    m.oracle = oracle;
    const double achieved = inst.has_rewards()
                                ? trace.total_reward / static_cast<double>(trace.T)
                                : inst.objective.eval(trace.avg);
    m.regret1 = oracle->opt_avg - achieved;
    if (trace.algorithm == AlgorithmKind::kPacking)
      m.ratio = trace.total_reward / (oracle->opt_avg * static_cast<double>(trace.T));
  }
  return m;
}

std::string config_json(const RunConfig& config, const StreamOrder& order) {
  json j;
  j["algorithm"] = to_string(config.algorithm);
  j["Z"] = config.Z;
  j["epsilon"] = config.epsilon;
  j["theta_learner"] = static_cast<int>(config.theta_learner);
  j["phi_learner"] = static_cast<int>(config.phi_learner);
  j["ogd_grad_bound"] = config.ogd_grad_bound;
  j["mw_epsilon"] = config.mw_epsilon;
  j["stream"] = order.mode == StreamOrder::Mode::kRp ? "rp" : "iid";
  j["stream_seed"] = order.seed;
  j["stream_length"] = order.length();
  return j.dump();
}

std::string config_hash(const RunConfig& config, const StreamOrder& order) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_json(config, order))));
  return buf;
}

std::string trace_to_csv(const RunTrace& trace, const std::string& inst_hash, uint64_t seed,
                         const std::string& cfg_hash, const std::vector<double>* qgap) {
  std::string out = "# instance=" + inst_hash + " seed=" + std::to_string(seed) +
                    " config=" + cfg_hash + "\n";
  out += "t,idx,r";
  for (int j = 1; j <= trace.d; ++j) out += ",v_" + std::to_string(j);
  for (int j = 1; j <= trace.d; ++j) out += ",theta_" + std::to_string(j);
  for (int j = 1; j <= trace.d; ++j) out += ",phi_" + std::to_string(j);
  for (int j = 1; j <= trace.d; ++j) out += ",cum_budget_" + std::to_string(j);
  if (qgap) out += ",q_gap";
  out += "\n";
  Vec cum = Vec::zeros(trace.d);
  for (int t = 0; t < trace.tau; ++t) {
    const StepRecord& s = trace.steps[static_cast<size_t>(t)];
    cum += s.v;
    out += std::to_string(t + 1) + "," + std::to_string(s.chosen) + "," + fmt(s.r);
    for (int j = 0; j < trace.d; ++j) out += "," + fmt(s.v[j]);
    for (int j = 0; j < trace.d; ++j) out += "," + fmt(s.theta[j]);
    for (int j = 0; j < trace.d; ++j) out += "," + fmt(s.phi[j]);
    for (int j = 0; j < trace.d; ++j) out += "," + fmt(cum[j]);
    if (qgap) out += "," + fmt((*qgap)[static_cast<size_t>(t)]);
    out += "\n";
  }
  return out;
}

std::string summary_to_json(const RunTrace& trace, const MetricsSummary& metrics,
                            const Instance& inst, const StreamOrder& order,
                            const RunConfig& config) {
  json j;
  j["schema_version"] = 1;
  j["algorithm"] = to_string(config.algorithm);
  j["instance_hash"] = instance_hash(inst);
  j["config_hash"] = config_hash(config, order);
  j["seed"] = order.seed;
  j["stream"] = order.mode == StreamOrder::Mode::kRp ? "rp" : "iid";
  j["T"] = trace.T;
  j["d"] = trace.d;
  j["Z"] = config.Z;
  j["tau"] = trace.tau;
  j["total_reward"] = trace.total_reward;
  json avg = json::array();
  for (int k = 0; k < trace.d; ++k) avg.push_back(trace.avg[k]);
  j["avg"] = avg;
  json over = json::array();
  for (int k = 0; k < trace.d; ++k) over.push_back(trace.overshoot[k]);
  j["overshoot"] = over;
  j["regret2"] = metrics.regret2;
  if (metrics.regret1)
    j["regret1"] = *metrics.regret1;
  else
    j["regret1"] = nullptr;
  if (metrics.ratio)
    j["ratio"] = *metrics.ratio;
  else
    j["ratio"] = nullptr;
  if (metrics.oracle) {
    json o;
    o["opt_avg"] = metrics.oracle->opt_avg;
    o["method"] = metrics.oracle->method;
    o["tolerance_achieved"] = metrics.oracle->tolerance_achieved;
    j["oracle"] = o;
  } else {
    j["oracle"] = nullptr;
  }
  return j.dump() + "\n";
}

std::vector<double> qgap_trace(const Instance& inst, const StreamOrder& order) {
  if (inst.witness.empty())
    throw std::invalid_argument("qgap_trace: instance has no witness choices");
  const int T = order.length();
  const NormKind norm_kind = inst.set.distance_norm();
  // Witness vector by realized position.
  std::vector<Vec> w;
  w.reserve(static_cast<size_t>(T));
  Vec total = Vec::zeros(inst.d);
  for (int t = 0; t < T; ++t) {
    const int src = order.order[static_cast<size_t>(t)];
    const Request& req = inst.requests[static_cast<size_t>(src)];
    w.push_back(req.options[static_cast<size_t>(inst.witness[static_cast<size_t>(src)])].v);
    total += w.back();
  }
  const Vec overall = total * (1.0 / static_cast<double>(T));
  std::vector<double> q(static_cast<size_t>(T), 0.0);
  Vec suffix = total;
  for (int t = 0; t < T; ++t) {
    const Vec cond = suffix * (1.0 / static_cast<double>(T - t));
    q[static_cast<size_t>(t)] = norm(cond - overall, norm_kind);
    suffix -= w[static_cast<size_t>(t)];
  }
  return q;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxy / sxx;
}

int worker_count() {
  if (const char* env = std::getenv("OSTOC_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int wkr = 0; wkr < workers; ++wkr) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<Instance> tiny_instance_pack() {
  std::vector<Instance> pack;

  {
    GenParams p;
    p.kind = InstanceKind::kFeasibility;
    p.d = 2;
    p.T = 6;
    p.options_per_step = 2;
    p.seed = 101;
    p.norm = NormKind::kMaxAbs;
    pack.push_back(generate(p));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kFeasibility;
    p.d = 2;
    p.T = 6;
    p.options_per_step = 2;
    p.seed = 102;
    p.norm = NormKind::kEuclidean;
    p.objective = "separable";
    pack.push_back(generate(p));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kFeasibility;
    p.d = 1;
    p.T = 8;
    p.options_per_step = 2;
    p.seed = 103;
    p.norm = NormKind::kMaxAbs;
    p.objective = "quadratic";
    pack.push_back(generate(p));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kLinear;
    p.d = 2;
    p.T = 6;
    p.options_per_step = 3;
    p.seed = 104;
    p.norm = NormKind::kMaxAbs;
    pack.push_back(generate(p));
  }
  {
    // Hand-built d=1 packing: every request {(r=1, v=1), (0, 0)}, B=T/2.
    Instance inst;
    inst.d = 1;
    inst.T = 6;
    inst.kind = InstanceKind::kPacking;
    inst.budget = 3.0;
    inst.set = ConvexSetSpec::budget_cap(Vec{0.5}, NormKind::kMaxAbs);
    inst.objective = Objective::linear_reward(1);
    for (int t = 0; t < inst.T; ++t) {
      Request req;
      req.options.push_back({Vec{1.0}, 1.0});
      req.options.push_back({Vec{0.0}, 0.0});
      inst.requests.push_back(req);
      inst.witness.push_back(1);
    }
    validate(inst);
    pack.push_back(std::move(inst));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kPacking;
    p.d = 2;
    p.T = 6;
    p.options_per_step = 3;
    p.seed = 105;
    p.budget = 2.0;
    p.norm = NormKind::kMaxAbs;
    pack.push_back(generate(p));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kCovering;
    p.d = 2;
    p.T = 6;
    p.options_per_step = 2;
    p.seed = 106;
    p.norm = NormKind::kMaxAbs;
    pack.push_back(generate(p));
  }
  {
    GenParams p;
    p.kind = InstanceKind::kSmooth;
    p.d = 2;
    p.T = 8;
    p.options_per_step = 2;
    p.seed = 107;
    p.norm = NormKind::kEuclidean;
    pack.push_back(generate(p));
  }
  return pack;
}

std::vector<std::string> verify_suite() {
  std::vector<std::string> violations;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) violations.push_back(msg);
  };

  const std::vector<Instance> pack = tiny_instance_pack();
  for (size_t i = 0; i < pack.size(); ++i) {
    const Instance& inst = pack[i];
    const std::string tag = "instance[" + std::to_string(i) + "/" + to_string(inst.kind) + "]";

    // Serialization round-trip is byte-identical.
    const std::string ser = serialize(inst);
    check(serialize(parse_instance(ser)) == ser, tag + ": round-trip not byte-identical");

    // Weak duality: fractional dual bound dominates the integral optimum.
    for (double delta : {0.0, 0.1}) {
      const OracleResult bf = brute_force_opt(inst, delta);
      if (!bf.feasible) continue;
      const OracleResult frac = fractional_opt(inst, delta);
      check(frac.value >= bf.value - 1e-6,
            tag + ": fractional " + std::to_string(frac.value) + " < brute force " +
                std::to_string(bf.value) + " at delta " + std::to_string(delta));
    }

    // Packing dual agrees with the fractional oracle specialized to the
    // cap set (sum scale vs average scale).
    if (inst.kind == InstanceKind::kPacking) {
      const OracleResult lp = packing_opt_sum(inst);
      const OracleResult frac = fractional_opt(inst, 0.0);
      const double lp_avg = lp.value / static_cast<double>(inst.T);
      check(std::abs(lp_avg - frac.value) <= 1e-3 * std::max(1.0, std::abs(lp_avg)),
            tag + ": packing dual " + std::to_string(lp_avg) + " vs fractional " +
                std::to_string(frac.value));
    }

    // OPT^delta curve structure.
    if (!inst.has_rewards() || inst.kind == InstanceKind::kPacking) {
      const std::vector<double> grid = {0.0, 0.02, 0.05, 0.1, 0.2};
      const OptDeltaCurve curve = opt_delta_curve(inst, grid);
      for (size_t g = 1; g < grid.size(); ++g) {
        check(curve.value[g] >= curve.value[g - 1] - 1e-6, tag + ": OPT^delta not nondecreasing");
        if (g + 1 < grid.size()) {
          const double left = (curve.value[g] - curve.value[g - 1]) / (grid[g] - grid[g - 1]);
          const double right = (curve.value[g + 1] - curve.value[g]) / (grid[g + 1] - grid[g]);
          check(right <= left + 1e-6, tag + ": OPT^delta not concave");
        }
      }
    }
  }
  return violations;
}

}  // namespace ostoc
