#include "ostoc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ostoc {

std::string to_string(AlgorithmKind a) {
  switch (a) {
    case AlgorithmKind::kFeasibility: return "feasibility";
    case AlgorithmKind::kGeneralCP: return "general_cp";
    case AlgorithmKind::kLinearCP: return "linear_cp";
    case AlgorithmKind::kPacking: return "packing";
    case AlgorithmKind::kSmoothCP: return "smooth_cp";
  }
  return "feasibility";
}

AlgorithmKind algorithm_from_string(const std::string& s) {
  if (s == "feasibility") return AlgorithmKind::kFeasibility;
  if (s == "general_cp") return AlgorithmKind::kGeneralCP;
  if (s == "linear_cp") return AlgorithmKind::kLinearCP;
  if (s == "packing") return AlgorithmKind::kPacking;
  if (s == "smooth_cp") return AlgorithmKind::kSmoothCP;
  throw std::invalid_argument("unknown algorithm: " + s);
}

int select_feasibility(const Request& req, const Vec& theta) {
  int best = 0;
  double best_score = dot(theta, req.options[0].v);
  for (int i = 1; i < static_cast<int>(req.options.size()); ++i) {
    const double s = dot(theta, req.options[static_cast<size_t>(i)].v);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

namespace {

// argmax over options of a score; ties resolve to the lowest index.
template <typename Score>
int select_max(const Request& req, Score&& score) {
  int best = 0;
  double best_score = score(req.options[0]);
  for (int i = 1; i < static_cast<int>(req.options.size()); ++i) {
    const double s = score(req.options[static_cast<size_t>(i)]);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

double default_mw_epsilon(int experts, int horizon) {
  return std::min(0.5, std::sqrt(std::log(static_cast<double>(experts)) /
                                 std::max(1.0, static_cast<double>(horizon))));
}

double option_reward(const OptionItem& opt) {
  if (!opt.r) throw std::invalid_argument("option missing reward");
  return *opt.r;
}

struct TraceBuilder {
  explicit TraceBuilder(AlgorithmKind a, const Instance& inst, int horizon) {
    trace.algorithm = a;
    trace.T = horizon;
    trace.d = inst.d;
    trace.avg = Vec::zeros(inst.d);
    trace.consumption = Vec::zeros(inst.d);
    trace.overshoot = Vec::zeros(inst.d);
    trace.steps.reserve(static_cast<size_t>(horizon));
  }

  void record(int chosen, const OptionItem& opt, const Vec& theta, const Vec& phi) {
    StepRecord rec;
    rec.chosen = chosen;
    rec.r = opt.r.value_or(0.0);
    rec.v = opt.v;
    rec.theta = theta;
    rec.phi = phi;
    trace.consumption += opt.v;
    trace.total_reward += rec.r;
    trace.steps.push_back(std::move(rec));
  }

  RunTrace finish() {
    trace.tau = static_cast<int>(trace.steps.size());
    trace.avg = trace.consumption * (1.0 / static_cast<double>(trace.T));
    return std::move(trace);
  }

  RunTrace trace;
};

}  // namespace

std::unique_ptr<Learner> make_ball_learner(int d, NormKind norm, double radius, int horizon,
                                           LearnerChoice choice, double ogd_grad_bound,
                                           double mw_epsilon) {
  const bool use_mw = choice == LearnerChoice::kSignedMw ||
                      (choice == LearnerChoice::kAuto && norm == NormKind::kMaxAbs);
  if (use_mw) {
    const double eps = mw_epsilon > 0.0 ? mw_epsilon : default_mw_epsilon(2 * d + 1, horizon);
    const double cap = std::max(radius, 1e-12);
    return std::make_unique<SignedMwLearner>(d, eps, cap, radius);
  }
  // Supergradients are differences of two [0,1]^d points, so the
  // Euclidean bound sqrt(d) holds coordinatewise.
  const double g = ogd_grad_bound > 0.0 ? ogd_grad_bound : std::sqrt(static_cast<double>(d));
  return std::make_unique<OgdBallLearner>(d, norm, radius, g);
}

RunTrace run_feasibility(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  const int horizon = order.length();
  auto theta_learner = make_ball_learner(inst.d, inst.set.distance_norm(), 1.0, horizon,
                                         config.theta_learner, config.ogd_grad_bound,
                                         config.mw_epsilon);
  TraceBuilder tb(AlgorithmKind::kFeasibility, inst, horizon);
  const Vec no_phi = Vec::zeros(inst.d);
  for (int t = 0; t < horizon; ++t) {
    const Request& req = stream_request(inst, order, t);
    const Vec theta = theta_learner->current();
    const int pick = select_feasibility(req, theta);
    const OptionItem& opt = req.options[static_cast<size_t>(pick)];
    tb.record(pick, opt, theta, no_phi);
    // g_t(theta) = theta . v_t - h_S(theta); supergradient at theta_t.
    theta_learner->observe_linear(opt.v - inst.set.support_argmax(theta));
  }
  return tb.finish();
}

RunTrace run_general_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  if (inst.objective.kind() == Objective::Kind::kLinearReward)
    throw std::invalid_argument("run_general_cp: reward objectives belong to run_linear_cp");
  const int horizon = order.length();
  const double L = inst.objective.lipschitz();
  const double scale = 2.0 * (config.Z + L);
  const NormKind norm = inst.set.distance_norm();
  auto theta_learner = make_ball_learner(inst.d, norm, 1.0, horizon, config.theta_learner,
                                         config.ogd_grad_bound, config.mw_epsilon);
  auto phi_learner = make_ball_learner(inst.d, norm, L, horizon, config.phi_learner,
                                       config.ogd_grad_bound, config.mw_epsilon);
  TraceBuilder tb(AlgorithmKind::kGeneralCP, inst, horizon);
  for (int t = 0; t < horizon; ++t) {
    const Request& req = stream_request(inst, order, t);
    const Vec theta = theta_learner->current();
    const Vec phi = phi_learner->current();
    const int pick = select_max(req, [&](const OptionItem& opt) {
      return -dot(phi, opt.v) - scale * dot(theta, opt.v);
    });
    const OptionItem& opt = req.options[static_cast<size_t>(pick)];
    tb.record(pick, opt, theta, phi);
    theta_learner->observe_linear(opt.v - inst.set.support_argmax(theta));
    // psi_t(phi) = phi . v_t - (-f)*(phi)
    phi_learner->observe_linear(opt.v - inst.objective.conjugate_neg_f_argmax(phi));
  }
  return tb.finish();
}

RunTrace run_linear_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  const int horizon = order.length();
  const double scale = 2.0 * config.Z;
  auto theta_learner = make_ball_learner(inst.d, inst.set.distance_norm(), 1.0, horizon,
                                         config.theta_learner, config.ogd_grad_bound,
                                         config.mw_epsilon);
  TraceBuilder tb(AlgorithmKind::kLinearCP, inst, horizon);
  const Vec no_phi = Vec::zeros(inst.d);
  for (int t = 0; t < horizon; ++t) {
    const Request& req = stream_request(inst, order, t);
    const Vec theta = theta_learner->current();
    const int pick = select_max(req, [&](const OptionItem& opt) {
      return option_reward(opt) - scale * dot(theta, opt.v);
    });
    const OptionItem& opt = req.options[static_cast<size_t>(pick)];
    tb.record(pick, opt, theta, no_phi);
    theta_learner->observe_linear(opt.v - inst.set.support_argmax(theta));
  }
  return tb.finish();
}

RunTrace run_packing(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  if (inst.kind != InstanceKind::kPacking || !inst.budget)
    throw std::invalid_argument("run_packing: packing instance with budget required");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::invalid_argument("run_packing: epsilon outside (0,1)");
  const int horizon = order.length();
  const double B = *inst.budget;
  const double rate = B / static_cast<double>(horizon);
  MwSimplexLearner theta_learner(inst.d, config.epsilon, 1.0, /*includes_origin=*/true);
  TraceBuilder tb(AlgorithmKind::kPacking, inst, horizon);
  const Vec no_phi = Vec::zeros(inst.d);
  for (int t = 0; t < horizon; ++t) {
    const Request& req = stream_request(inst, order, t);
    const Vec theta = theta_learner.current();
    const int pick = select_max(req, [&](const OptionItem& opt) {
      return option_reward(opt) - config.Z * dot(theta, opt.v);
    });
    const OptionItem& opt = req.options[static_cast<size_t>(pick)];
    tb.record(pick, opt, theta, no_phi);
    // EXIT after the breaching step is committed (overshoot < one option).
    bool breached = false;
    for (int j = 0; j < inst.d; ++j) breached = breached || tb.trace.consumption[j] >= B;
    if (breached) break;
    theta_learner.observe_linear(opt.v - Vec::constant(inst.d, rate));
  }
  RunTrace trace = tb.finish();
  for (int j = 0; j < inst.d; ++j) trace.overshoot[j] = std::max(0.0, trace.consumption[j] - B);
  return trace;
}

RunTrace run_smooth_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  if (inst.objective.kind() != Objective::Kind::kQuadratic)
    throw std::invalid_argument("run_smooth_cp: quadratic objective required");
  const int horizon = order.length();
  const QuadraticBoxPenalty penalty(inst.set);
  const double g_bound = std::sqrt(static_cast<double>(inst.d));

  Vec theta_lo, theta_hi, f_lo, f_hi;
  penalty.gradient_range_box(theta_lo, theta_hi);
  inst.objective.gradient_range_box(f_lo, f_hi);
  // psi_t(phi) = phi . v - (-f)*(phi) is (1/beta)-strongly concave on the
  // gradient range of -f, i.e. the negated range of f.
  Vec phi_lo = Vec::zeros(inst.d), phi_hi = Vec::zeros(inst.d);
  for (int j = 0; j < inst.d; ++j) {
    phi_lo[j] = -f_hi[j];
    phi_hi[j] = -f_lo[j];
  }
  StronglyConcaveOgdLearner theta_learner(theta_lo, theta_hi, 1.0 / penalty.beta(), g_bound);
  StronglyConcaveOgdLearner phi_learner(phi_lo, phi_hi,
                                        1.0 / inst.objective.smoothness_beta().value(), g_bound);

  TraceBuilder tb(AlgorithmKind::kSmoothCP, inst, horizon);
  const double scale = 2.0 * config.Z;
  for (int t = 0; t < horizon; ++t) {
    const Request& req = stream_request(inst, order, t);
    const Vec theta = theta_learner.current();
    const Vec phi = phi_learner.current();
    const int pick = select_max(req, [&](const OptionItem& opt) {
      return -dot(phi, opt.v) - scale * dot(theta, opt.v);
    });
    const OptionItem& opt = req.options[static_cast<size_t>(pick)];
    tb.record(pick, opt, theta, phi);
    theta_learner.observe_linear(opt.v - penalty.conjugate_argmax(theta));
    phi_learner.observe_linear(opt.v - inst.objective.conjugate_neg_f_argmax(phi));
  }
  return tb.finish();
}

RunTrace run(const Instance& inst, const StreamOrder& order, const RunConfig& config) {
  switch (config.algorithm) {
    case AlgorithmKind::kFeasibility: return run_feasibility(inst, order, config);
    case AlgorithmKind::kGeneralCP: return run_general_cp(inst, order, config);
    case AlgorithmKind::kLinearCP: return run_linear_cp(inst, order, config);
    case AlgorithmKind::kPacking: return run_packing(inst, order, config);
    case AlgorithmKind::kSmoothCP: return run_smooth_cp(inst, order, config);
  }
  throw std::invalid_argument("run: unknown algorithm");
}

}  // namespace ostoc
