#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ostoc/algorithms.hpp"
#include "ostoc/instance.hpp"
#include "ostoc/oracles.hpp"

namespace ostoc {

// Offline benchmark on the average-reward / f(avg) scale, plus solver
// bookkeeping carried into the emitted summary.
struct OracleRef {
  double opt_avg = 0.0;
  std::string method;
  double tolerance_achieved = 0.0;
};

struct MetricsSummary {
  // OPT - f(avg) (or OPT - average reward). Unset when no oracle value
  // is available; never silently zero.
  std::optional<double> regret1;
  // d(avg, S); smooth runs measure the quadratic overshoot penalty.
  double regret2 = 0.0;
  // Packing only: total reward / (T * OPT).
  std::optional<double> ratio;
  int tau = 0;
  double total_reward = 0.0;
  double wall_clock_ms = 0.0;  // not serialized (summaries are byte-reproducible)
  std::optional<OracleRef> oracle;
};

MetricsSummary compute_metrics(const RunTrace& trace, const Instance& inst,
                               const std::optional<OracleRef>& oracle);

// Canonical JSON for a run configuration (hashed into outputs).
std::string config_json(const RunConfig& config, const StreamOrder& order);
std::string config_hash(const RunConfig& config, const StreamOrder& order);

// trace.csv: one '#' provenance line, then
// t,idx,r,v_1..v_d,theta_1..theta_d,phi_1..phi_d,cum_budget_1..cum_budget_d
std::string trace_to_csv(const RunTrace& trace, const std::string& inst_hash, uint64_t seed,
                         const std::string& cfg_hash,
                         const std::vector<double>* qgap = nullptr);

// summary.json (schema_version 1); deterministic bytes for fixed inputs.
std::string summary_to_json(const RunTrace& trace, const MetricsSummary& metrics,
                            const Instance& inst, const StreamOrder& order,
                            const RunConfig& config);

// Conditional-expectation gap diagnostic:
// q(t) = || mean of witness vectors over the remaining steps - overall
// witness mean || in the set norm, the part of the dual payoff the
// random order leaves unpredictable. Requires a witness-certified
// instance.
std::vector<double> qgap_trace(const Instance& inst, const StreamOrder& order);

// Least-squares slope of log(y) against log(x); NaN when fewer than two
// usable (positive) points.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Number of workers: OSTOC_THREADS when set, else hardware concurrency.
int worker_count();
// Runs fn(0..n-1) on the worker pool; each index owns its slot, so
// results are deterministic regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

// Deterministic desk-scale instances (T <= 8) used by `verify` and the
// oracle consistency tests.
std::vector<Instance> tiny_instance_pack();

// Oracle cross-check suite; returns human-readable violations (empty ==
// all checks pass).
std::vector<std::string> verify_suite();

}  // namespace ostoc
