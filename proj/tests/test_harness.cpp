#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ostoc/harness.hpp"

using namespace ostoc;

namespace {

struct ParsedTrace {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> cols;
};

// Minimal independent CSV re-parse used to recompute metrics.
ParsedTrace parse_csv(const std::string& csv) {
  ParsedTrace out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    if (out.cols.empty()) {
      while (std::getline(ls, cell, ',')) out.cols.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

TEST_CASE("metrics: perfect run has zero regrets; packing ratio 1 at optimum") {
  GenParams p;
  p.kind = InstanceKind::kFeasibility;
  p.options_per_step = 1;
  p.T = 10;
  p.d = 2;
  p.seed = 5;
  const Instance inst = generate(p);
  const RunTrace trace = run_feasibility(inst, rp_stream(inst, 1), RunConfig{});
  OracleRef oracle{inst.objective.eval(trace.avg), "brute_force", 0.0};
  const MetricsSummary m = compute_metrics(trace, inst, oracle);
  CHECK(*m.regret1 == doctest::Approx(0.0));
  CHECK(m.regret2 == doctest::Approx(0.0));

  // Hand-built packing run collecting OPT exactly.
  Instance pack;
  pack.d = 1;
  pack.T = 4;
  pack.kind = InstanceKind::kPacking;
  pack.budget = 4.0;
  pack.set = ConvexSetSpec::budget_cap(Vec{1.0}, NormKind::kMaxAbs);
  pack.objective = Objective::linear_reward(1);
  for (int t = 0; t < 4; ++t) {
    Request req;
    req.options.push_back({Vec{1.0}, 1.0});
    req.options.push_back({Vec{0.0}, 0.0});
    pack.requests.push_back(req);
    pack.witness.push_back(1);
  }
  validate(pack);
  RunConfig cfg;
  cfg.algorithm = AlgorithmKind::kPacking;
  cfg.Z = 0.5;
  cfg.epsilon = 0.5;
  const RunTrace ptrace = run_packing(pack, rp_stream(pack, 1), cfg);
  const double opt_sum = packing_opt_sum(pack).value;
  const MetricsSummary pm =
      compute_metrics(ptrace, pack, OracleRef{opt_sum / pack.T, "packing_dual", 1e-9});
  CHECK(*pm.ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(*pm.ratio >= 0.0);
  CHECK(*pm.ratio <= 1.0 + 1.0 / *pack.budget);
  CHECK(pm.regret2 >= 0.0);

  // Missing oracle: metrics unavailable, not zero.
  const MetricsSummary nm = compute_metrics(ptrace, pack, std::nullopt);
  CHECK_FALSE(nm.regret1.has_value());
  CHECK_FALSE(nm.ratio.has_value());
}

TEST_CASE("metrics recomputed from trace.csv match summary.json within 1e-9") {
  GenParams p;
  p.kind = InstanceKind::kFeasibility;
  p.T = 40;
  p.d = 3;
  p.seed = 7;
  p.options_per_step = 3;
  const Instance inst = generate(p);
  const StreamOrder order = rp_stream(inst, 11);
  const RunTrace trace = run_feasibility(inst, order, RunConfig{});
  const MetricsSummary m = compute_metrics(trace, inst, std::nullopt);
  const std::string csv = trace_to_csv(trace, instance_hash(inst), order.seed,
                                       config_hash(RunConfig{}, order));
  const ParsedTrace parsed = parse_csv(csv);
  REQUIRE(static_cast<int>(parsed.rows.size()) == trace.tau);
  Vec avg = Vec::zeros(inst.d);
  for (const auto& row : parsed.rows)
    for (int j = 0; j < inst.d; ++j) avg[j] += row[static_cast<size_t>(3 + j)];
  avg *= 1.0 / trace.T;
  CHECK(std::abs(inst.set.distance(avg) - m.regret2) <= 1e-9);
}

TEST_CASE("trace and summary bytes are deterministic") {
  GenParams p;
  p.kind = InstanceKind::kPacking;
  p.T = 60;
  p.d = 2;
  p.budget = 12.0;
  p.seed = 9;
  const Instance inst = generate(p);
  const StreamOrder order = rp_stream(inst, 21);
  RunConfig cfg;
  cfg.algorithm = AlgorithmKind::kPacking;
  cfg.Z = 1.5;
  cfg.epsilon = 0.2;
  auto emit = [&]() {
    const RunTrace trace = run_packing(inst, order, cfg);
    const MetricsSummary m =
        compute_metrics(trace, inst, OracleRef{0.7, "packing_dual", 1e-6});
    return trace_to_csv(trace, instance_hash(inst), order.seed, config_hash(cfg, order)) +
           summary_to_json(trace, m, inst, order, cfg);
  };
  CHECK(emit() == emit());
}

TEST_CASE("qgap diagnostic shrinks along the stream tail and needs a witness") {
  GenParams p;
  p.kind = InstanceKind::kFeasibility;
  p.T = 50;
  p.d = 2;
  p.seed = 13;
  const Instance inst = generate(p);
  const StreamOrder order = rp_stream(inst, 2);
  const std::vector<double> q = qgap_trace(inst, order);
  REQUIRE(static_cast<int>(q.size()) == inst.T);
  CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-12));  // full set seen at t=1

  Instance no_wit = inst;
  no_wit.witness.clear();
  CHECK_THROWS(qgap_trace(no_wit, order));
}

TEST_CASE("slope fit recovers a known power law") {
  std::vector<double> T = {100, 200, 400, 800, 1600};
  std::vector<double> y;
  for (double t : T) y.push_back(3.7 * std::pow(t, -0.5));
  CHECK(fit_loglog_slope(T, y) == doctest::Approx(-0.5).epsilon(0.02));
  // Insufficient points -> NaN.
  CHECK(std::isnan(fit_loglog_slope({100.0}, {1.0})));
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(500, 0);
  parallel_for(500, [&](int i) { hits[static_cast<size_t>(i)]++; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("verify suite passes on the bundled pack") {
  const std::vector<std::string> violations = verify_suite();
  for (const auto& v : violations) MESSAGE(v);
  CHECK(violations.empty());
}
