#include "ostoc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ostoc/rng.hpp"

namespace ostoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool reward_kind(const Instance& inst) { return inst.has_rewards(); }

double average_objective(const Instance& inst, const Vec& avg, double reward_sum) {
  if (reward_kind(inst)) return reward_sum / static_cast<double>(inst.T);
  return inst.objective.eval(avg);
}

}  // namespace

OracleResult brute_force_opt(const Instance& inst, double delta) {
  double combos = 1.0;
  for (const auto& req : inst.requests) {
    combos *= static_cast<double>(req.options.size());
    if (combos > 1e6) throw std::invalid_argument("brute_force_opt: more than 10^6 combinations");
  }
  OracleResult res;
  res.method = OracleMethod::kBruteForce;
  res.value = -kInf;
  res.feasible = false;

  std::vector<int> pick(static_cast<size_t>(inst.T), 0);
  const double invT = 1.0 / static_cast<double>(inst.T);
  while (true) {
    Vec sum = Vec::zeros(inst.d);
    double reward_sum = 0.0;
    for (int t = 0; t < inst.T; ++t) {
      const OptionItem& opt =
          inst.requests[static_cast<size_t>(t)].options[static_cast<size_t>(pick[static_cast<size_t>(t)])];
      sum += opt.v;
      reward_sum += opt.r.value_or(0.0);
    }
    const Vec avg = sum * invT;
    if (inst.set.distance(avg) <= delta + 1e-12) {
      const double val = average_objective(inst, avg, reward_sum);
      if (!res.feasible || val > res.value) {
        res.value = val;
        res.feasible = true;
      }
    }
    int t = 0;
    for (;; ++t) {
      if (t == inst.T) break;
      if (++pick[static_cast<size_t>(t)] <
          static_cast<int>(inst.requests[static_cast<size_t>(t)].options.size()))
        break;
      pick[static_cast<size_t>(t)] = 0;
    }
    if (t == inst.T) break;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Fractional dual.
// ---------------------------------------------------------------------------

namespace {

struct FracPoint {
  Vec phi, mu;
};

struct FracWork {
  const Instance* inst;
  NormKind norm;
  double L;
  bool use_phi;    // phi block active (concave-f kinds with L > 0)
  bool use_reward; // inner max includes the option reward
};

FracWork make_frac_work(const Instance& inst) {
  FracWork w;
  w.inst = &inst;
  w.norm = inst.set.distance_norm();
  w.use_reward = reward_kind(inst);
  w.L = w.use_reward ? 0.0 : inst.objective.lipschitz();
  w.use_phi = !w.use_reward && w.L > 0.0;
  return w;
}

// The delta-independent part of the dual objective at (phi, mu);
// mean_out receives (1/T) sum_t argmax_v [r? + (-phi-mu) . v].
double frac_base_eval(const FracWork& w, const FracPoint& p, Vec* mean_out) {
  const Instance& inst = *w.inst;
  Vec u = Vec::zeros(inst.d);
  for (int j = 0; j < inst.d; ++j) u[j] = -p.phi[j] - p.mu[j];
  double acc = 0.0;
  Vec mean = Vec::zeros(inst.d);
  for (const auto& req : inst.requests) {
    double best = -kInf;
    const OptionItem* best_opt = nullptr;
    for (const auto& opt : req.options) {
      const double s = (w.use_reward ? *opt.r : 0.0) + dot(u, opt.v);
      if (s > best) {
        best = s;
        best_opt = &opt;
      }
    }
    acc += best;
    mean += best_opt->v;
  }
  const double invT = 1.0 / static_cast<double>(inst.T);
  acc *= invT;
  mean *= invT;
  if (mean_out) *mean_out = mean;
  double base = acc + inst.set.support(p.mu);
  if (w.use_phi) base += inst.objective.conjugate_neg_f(p.phi);
  return base;
}

double frac_eval(const FracWork& w, const FracPoint& p, double delta, Vec* mean_out = nullptr) {
  return frac_base_eval(w, p, mean_out) + delta * dual_norm(p.mu, w.norm);
}

Vec dual_norm_subgrad(const Vec& mu, NormKind norm) {
  const int d = mu.dim();
  Vec g = Vec::zeros(d);
  if (norm == NormKind::kEuclidean) {
    const double nn = ostoc::norm(mu, NormKind::kEuclidean);
    if (nn > 1e-15)
      for (int j = 0; j < d; ++j) g[j] = mu[j] / nn;
  } else {
    for (int j = 0; j < d; ++j) g[j] = mu[j] > 0.0 ? 1.0 : (mu[j] < 0.0 ? -1.0 : 0.0);
  }
  return g;
}

struct FracSolve {
  FracPoint point;
  double value = 0.0;
  double base = 0.0;
  double tol = 0.0;
};

// Projected subgradient with restarts, then a geometric-step sweep and
// a random-direction polish around the incumbent. Deterministic.
FracSolve solve_fractional_dual(const FracWork& w, double delta) {
  const Instance& inst = *w.inst;
  const int d = inst.d;
  Rng rng(20240915);

  FracPoint best;
  best.phi = Vec::zeros(d);
  best.mu = Vec::zeros(d);
  double best_val = frac_eval(w, best, delta);

  const double mu_cap = 1e3;  // lambda search range upper end

  auto clip = [&](FracPoint& p) {
    if (w.use_phi) p.phi = project_dual_ball(p.phi, w.norm, w.L);
    p.mu = project_dual_ball(p.mu, w.norm, mu_cap);
  };

  auto consider = [&](const FracPoint& p) {
    const double v = frac_eval(w, p, delta);
    if (v < best_val) {
      best_val = v;
      best = p;
    }
  };

  auto subgrad_run = [&](FracPoint start, int iters, double c0) {
    FracPoint p = std::move(start);
    clip(p);
    for (int k = 1; k <= iters; ++k) {
      Vec mean = Vec::zeros(d);
      const double val = frac_eval(w, p, delta, &mean);
      if (val < best_val) {
        best_val = val;
        best = p;
      }
      const Vec norm_sub = dual_norm_subgrad(p.mu, w.norm);
      const double step = c0 / std::sqrt(static_cast<double>(k));
      Vec y = inst.set.support_argmax(p.mu);
      for (int j = 0; j < d; ++j) p.mu[j] -= step * (y[j] - mean[j] + delta * norm_sub[j]);
      if (w.use_phi) {
        const Vec x = inst.objective.conjugate_neg_f_argmax(p.phi);
        for (int j = 0; j < d; ++j) p.phi[j] -= step * (x[j] - mean[j]);
      }
      clip(p);
    }
    consider(p);
  };

  // Restarts: origin plus seeded random points at a few scales.
  const int restarts = 10;
  const int iters = 2000;
  for (int r = 0; r < restarts; ++r) {
    FracPoint start;
    start.phi = Vec::zeros(d);
    start.mu = Vec::zeros(d);
    double scale = 0.0;
    if (r > 0) {
      scale = r % 3 == 1 ? 0.5 : (r % 3 == 2 ? 2.0 : 8.0);
      for (int j = 0; j < d; ++j) {
        start.mu[j] = scale * rng.uniform(-1.0, 1.0);
        if (w.use_phi) start.phi[j] = w.L * rng.uniform(-1.0, 1.0);
      }
    }
    subgrad_run(std::move(start), iters, std::max(0.5, scale));
  }

  // Geometric step decay from the incumbent.
  {
    FracPoint p = best;
    double step = 0.05;
    for (int k = 0; k < 1200; ++k) {
      Vec mean = Vec::zeros(d);
      frac_eval(w, p, delta, &mean);
      const Vec norm_sub = dual_norm_subgrad(p.mu, w.norm);
      Vec y = inst.set.support_argmax(p.mu);
      for (int j = 0; j < d; ++j) p.mu[j] -= step * (y[j] - mean[j] + delta * norm_sub[j]);
      if (w.use_phi) {
        const Vec x = inst.objective.conjugate_neg_f_argmax(p.phi);
        for (int j = 0; j < d; ++j) p.phi[j] -= step * (x[j] - mean[j]);
      }
      clip(p);
      consider(p);
      step *= 0.992;
    }
  }

  // Random-direction descent polish: accepts improvements only, shrinks
  // the radius; escapes axis-aligned kinks that stall compass moves.
  const double tol_before_polish = best_val;
  {
    const int nvar = w.use_phi ? 2 * d : d;
    double h = 0.02;
    int since_improve = 0;
    for (int it = 0; it < 4000 && h > 1e-12; ++it) {
      FracPoint cand = best;
      for (int j = 0; j < d; ++j) {
        cand.mu[j] += h * rng.uniform(-1.0, 1.0);
        if (w.use_phi) cand.phi[j] += h * rng.uniform(-1.0, 1.0);
      }
      clip(cand);
      const double v = frac_eval(w, cand, delta);
      if (v < best_val - 1e-15) {
        best_val = v;
        best = cand;
        since_improve = 0;
      } else if (++since_improve >= 6 * nvar) {
        h *= 0.5;
        since_improve = 0;
      }
    }
  }

  FracSolve out;
  out.point = best;
  out.value = best_val;
  out.base = frac_base_eval(w, best, nullptr);
  out.tol = std::max(1e-12, tol_before_polish - best_val);
  return out;
}

}  // namespace

OracleResult fractional_opt(const Instance& inst, double delta) {
  const FracWork w = make_frac_work(inst);
  const FracSolve s = solve_fractional_dual(w, delta);
  OracleResult res;
  res.method = OracleMethod::kDualSubgradient;
  res.value = s.value;
  res.tolerance_achieved = s.tol;
  const double lambda = dual_norm(s.point.mu, w.norm);
  res.lambda = lambda;
  res.phi = s.point.phi;
  res.theta = lambda > 1e-12 ? s.point.mu * (1.0 / lambda) : Vec::zeros(inst.d);
  return res;
}

// ---------------------------------------------------------------------------
// Packing LP dual.
// ---------------------------------------------------------------------------

namespace {

// (1/n) [ sum_t max(0, max_v (r - v.theta)) + budget * sum_j theta_j ],
// with mean_out = (1/n) sum_t v*_t over the active (non-slack) argmaxes.
double packing_dual_avg(const std::vector<const Request*>& reqs, double budget, const Vec& theta,
                        Vec* mean_out) {
  const int d = theta.dim();
  double acc = 0.0;
  Vec mean = Vec::zeros(d);
  for (const Request* req : reqs) {
    double best = 0.0;
    const OptionItem* best_opt = nullptr;
    for (const auto& opt : req->options) {
      const double s = opt.r.value_or(0.0) - dot(theta, opt.v);
      if (s > best) {
        best = s;
        best_opt = &opt;
      }
    }
    acc += best;
    if (best_opt) mean += best_opt->v;
  }
  const double invN = 1.0 / static_cast<double>(reqs.size());
  double val = acc;
  for (int j = 0; j < d; ++j) val += budget * theta[j];
  if (mean_out) *mean_out = mean * invN;
  return val * invN;
}

struct PackingSolve {
  Vec theta;
  double value = 0.0;  // sum scale
  double tol = 0.0;
};

PackingSolve solve_packing_dual(const std::vector<const Request*>& reqs, int d, double budget) {
  const double n = static_cast<double>(reqs.size());
  Rng rng(77001);
  Vec best = Vec::zeros(d);
  double best_val = packing_dual_avg(reqs, budget, best, nullptr);

  auto clip = [&](Vec& theta) {
    for (int j = 0; j < d; ++j) theta[j] = std::clamp(theta[j], 0.0, 1e3);
  };
  auto consider = [&](const Vec& theta) {
    const double v = packing_dual_avg(reqs, budget, theta, nullptr);
    if (v < best_val) {
      best_val = v;
      best = theta;
    }
  };

  // Subgradient restarts.
  for (int r = 0; r < 6; ++r) {
    Vec theta = Vec::zeros(d);
    if (r > 0)
      for (int j = 0; j < d; ++j) theta[j] = rng.uniform(0.0, r % 2 == 0 ? 2.0 : 0.5);
    for (int k = 1; k <= 1500; ++k) {
      Vec mean = Vec::zeros(d);
      const double val = packing_dual_avg(reqs, budget, theta, &mean);
      if (val < best_val) {
        best_val = val;
        best = theta;
      }
      const double step = 0.5 / std::sqrt(static_cast<double>(k));
      for (int j = 0; j < d; ++j) theta[j] -= step * (budget / n - mean[j]);
      clip(theta);
    }
    consider(theta);
  }

  // Cyclic coordinate refinement; the dual is convex in each coordinate.
  const double before = best_val;
  for (int sweep = 0; sweep < 40; ++sweep) {
    bool moved = false;
    for (int j = 0; j < d; ++j) {
      Vec probe = best;
      const double fj = maximize_concave_1d(
          [&](double x) {
            probe[j] = x;
            return -packing_dual_avg(reqs, budget, probe, nullptr);
          },
          0.0, std::max(2.0, 4.0 * best[j]), 1e-12);
      probe[j] = fj;
      const double v = packing_dual_avg(reqs, budget, probe, nullptr);
      if (v < best_val - 1e-15) {
        best_val = v;
        best = probe;
        moved = true;
      }
    }
    if (!moved) break;
  }

  // Random-direction polish for the coupled kinks coordinate moves miss.
  double h = 0.05;
  int since = 0;
  for (int it = 0; it < 3000 && h > 1e-12; ++it) {
    Vec cand = best;
    for (int j = 0; j < d; ++j) cand[j] += h * rng.uniform(-1.0, 1.0);
    clip(cand);
    const double v = packing_dual_avg(reqs, budget, cand, nullptr);
    if (v < best_val - 1e-15) {
      best_val = v;
      best = cand;
      since = 0;
    } else if (++since >= 8 * d) {
      h *= 0.5;
      since = 0;
    }
  }

  PackingSolve out;
  out.theta = best;
  out.value = best_val * n;
  out.tol = std::max(1e-12, (before - best_val) * n);
  return out;
}

std::vector<const Request*> all_requests(const Instance& inst) {
  std::vector<const Request*> reqs;
  reqs.reserve(inst.requests.size());
  for (const auto& r : inst.requests) reqs.push_back(&r);
  return reqs;
}

}  // namespace

OracleResult packing_opt_sum(const Instance& inst, double budget_scale) {
  if (inst.kind != InstanceKind::kPacking || !inst.budget)
    throw std::invalid_argument("packing_opt_sum: packing instance with budget required");
  const auto reqs = all_requests(inst);
  // Budget enters the average-form dual divided by the request count.
  const PackingSolve s = solve_packing_dual(reqs, inst.d, budget_scale * *inst.budget);
  OracleResult res;
  res.method = OracleMethod::kPackingDual;
  res.value = s.value;
  res.theta = s.theta;
  res.lambda = dual_norm(s.theta, inst.set.distance_norm());
  res.tolerance_achieved = s.tol;
  return res;
}

double sampled_opt_hat(const Instance& inst, double delta, double rho, uint64_t seed) {
  if (inst.kind != InstanceKind::kPacking || !inst.budget)
    throw std::invalid_argument("sampled_opt_hat: packing instance required");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("sampled_opt_hat: delta outside (0,1]");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("sampled_opt_hat: rho outside (0,1]");
  const int n = std::min(inst.T, static_cast<int>(std::ceil(delta * inst.T)));
  const double delta_real = static_cast<double>(n) / static_cast<double>(inst.T);
  // Partial Fisher-Yates: first n entries of a seeded permutation.
  std::vector<int> idx(static_cast<size_t>(inst.T));
  for (int t = 0; t < inst.T; ++t) idx[static_cast<size_t>(t)] = t;
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<const Request*> sample;
  sample.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) sample.push_back(&inst.requests[static_cast<size_t>(idx[static_cast<size_t>(t)])]);

  const double eta = std::sqrt(3.0 * std::log((inst.d + 2) / rho));
  const double b = delta_real * *inst.budget + eta * std::sqrt(delta_real * *inst.budget);
  const PackingSolve s = solve_packing_dual(sample, inst.d, b);
  return s.value / delta_real;
}

ZPackingEstimate estimate_z_packing(const Instance& inst, const StreamOrder& order,
                                    double epsilon) {
  if (inst.kind != InstanceKind::kPacking || !inst.budget)
    throw std::invalid_argument("estimate_z_packing: packing instance required");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("estimate_z_packing: epsilon outside (0,1)");
  const double B = *inst.budget;
  const double rho = epsilon * epsilon;
  const double eta = std::sqrt(3.0 * std::log((inst.d + 2) / rho));
  const double logd = std::log(static_cast<double>(inst.d));
  double delta = logd > 0.0 ? 4.0 * eta * eta * epsilon * epsilon / logd : 1.0;
  delta = std::min(delta, 1.0);
  if (delta * inst.T < 1.0) throw InfeasibleError("estimate_z_packing: sample too small");
  const int n = std::min(order.length(), static_cast<int>(std::ceil(delta * inst.T)));
  const double delta_real = static_cast<double>(n) / static_cast<double>(inst.T);

  std::vector<const Request*> prefix;
  prefix.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) prefix.push_back(&stream_request(inst, order, t));
  const double b = delta_real * B + eta * std::sqrt(delta_real * B);
  const PackingSolve s = solve_packing_dual(prefix, inst.d, b);

  ZPackingEstimate z;
  z.opt_hat = s.value / delta_real;
  z.delta_used = delta_real;
  z.eta = eta;
  z.Z = 2.0 * z.opt_hat / B;
  z.precondition_warning = B < logd / (epsilon * epsilon);
  return z;
}

namespace {

Instance stream_prefix_instance(const Instance& inst, const StreamOrder& order, int n) {
  Instance prefix;
  prefix.d = inst.d;
  prefix.T = n;
  prefix.kind = inst.kind;
  prefix.set = inst.set;
  prefix.objective = inst.objective;
  prefix.budget = inst.budget;
  for (int t = 0; t < n; ++t) {
    const int src = order.order[static_cast<size_t>(t)];
    prefix.requests.push_back(inst.requests[static_cast<size_t>(src)]);
    if (!inst.witness.empty()) prefix.witness.push_back(inst.witness[static_cast<size_t>(src)]);
  }
  validate(prefix);
  return prefix;
}

double one_norm(int d, NormKind k) {
  return k == NormKind::kEuclidean ? std::sqrt(static_cast<double>(d)) : 1.0;
}

}  // namespace

ZPhasedEstimate estimate_z_phased(const Instance& inst, const StreamOrder& order, int prefix_len) {
  if (prefix_len < 2) throw std::invalid_argument("estimate_z_phased: prefix must have >= 2 steps");
  if (prefix_len > order.length()) throw std::invalid_argument("estimate_z_phased: prefix longer than stream");
  const Instance prefix = stream_prefix_instance(inst, order, prefix_len);
  const NormKind norm = inst.set.distance_norm();
  const double gamma = one_norm(inst.d, norm) *
                       std::sqrt(std::log(static_cast<double>(inst.d) * prefix_len) / prefix_len);

  const double reachable = min_fractional_distance(prefix);
  if (reachable > 4.0 * gamma)
    throw InfeasibleError("estimate_z_phased: prefix infeasible at delta = 4*gamma (min distance " +
                          std::to_string(reachable) + " > " + std::to_string(4.0 * gamma) + ")");

  const FracWork w = make_frac_work(prefix);
  const FracSolve hi = solve_fractional_dual(w, 4.0 * gamma);
  const FracSolve lo = solve_fractional_dual(w, gamma);
  // Pool the two certificates; min of affine nondecreasing bounds keeps
  // the pair ordered.
  const double hi_lam = dual_norm(hi.point.mu, norm);
  const double lo_lam = dual_norm(lo.point.mu, norm);
  const double opt_high = std::min(hi.base + 4.0 * gamma * hi_lam, lo.base + 4.0 * gamma * lo_lam);
  const double opt_low = std::min(hi.base + gamma * hi_lam, lo.base + gamma * lo_lam);

  ZPhasedEstimate z;
  z.gamma = gamma;
  z.opt_high = opt_high;
  z.opt_low = opt_low;
  z.Z = (opt_high - opt_low) / gamma + 2.0 * prefix.objective.lipschitz();
  return z;
}

OptDeltaCurve opt_delta_curve(const Instance& inst, const std::vector<double>& delta_grid) {
  if (delta_grid.size() < 2) throw std::invalid_argument("opt_delta_curve: need >= 2 grid points");
  for (size_t i = 1; i < delta_grid.size(); ++i)
    if (delta_grid[i] <= delta_grid[i - 1])
      throw std::invalid_argument("opt_delta_curve: grid must be ascending");

  const FracWork w = make_frac_work(inst);
  const NormKind norm = inst.set.distance_norm();
  struct Cert {
    double base, lambda;
  };
  std::vector<Cert> pool;
  for (double delta : delta_grid) {
    const FracSolve s = solve_fractional_dual(w, delta);
    pool.push_back({s.base, dual_norm(s.point.mu, norm)});
  }

  OptDeltaCurve curve;
  curve.delta = delta_grid;
  for (double delta : delta_grid) {
    double best = kInf, best_lambda = 0.0;
    for (const Cert& c : pool) {
      const double v = c.base + delta * c.lambda;
      if (v < best) {
        best = v;
        best_lambda = c.lambda;
      }
    }
    curve.value.push_back(best);
    curve.lambda.push_back(best_lambda);
  }
  curve.z_star = (curve.value[1] - curve.value[0]) / (delta_grid[1] - delta_grid[0]);
  return curve;
}

double min_fractional_distance(const Instance& inst) {
  // d_min = max_{||theta||_* <= 1} [ (1/T) sum_t min_v theta . v - h_S(theta) ],
  // concave in theta; solved by projected supergradient ascent.
  const NormKind norm = inst.set.distance_norm();
  const int d = inst.d;
  Rng rng(4242);
  const double invT = 1.0 / static_cast<double>(inst.T);

  auto eval = [&](const Vec& theta, Vec* grad_out) {
    double acc = 0.0;
    Vec mean = Vec::zeros(d);
    for (const auto& req : inst.requests) {
      double best = kInf;
      const OptionItem* best_opt = nullptr;
      for (const auto& opt : req.options) {
        const double s = dot(theta, opt.v);
        if (s < best) {
          best = s;
          best_opt = &opt;
        }
      }
      acc += best;
      mean += best_opt->v;
    }
    if (grad_out) *grad_out = mean * invT - inst.set.support_argmax(theta);
    return acc * invT - inst.set.support(theta);
  };

  Vec best = Vec::zeros(d);
  double best_val = 0.0;  // theta = 0 attains 0
  for (int r = 0; r < 8; ++r) {
    Vec theta = Vec::zeros(d);
    if (r > 0)
      for (int j = 0; j < d; ++j) theta[j] = rng.uniform(-1.0, 1.0);
    theta = project_dual_ball(theta, norm, 1.0);
    for (int k = 1; k <= 1200; ++k) {
      Vec grad = Vec::zeros(d);
      const double val = eval(theta, &grad);
      if (val > best_val) {
        best_val = val;
        best = theta;
      }
      theta.add_scaled(grad, 0.5 / std::sqrt(static_cast<double>(k)));
      theta = project_dual_ball(theta, norm, 1.0);
    }
  }
  // Local random-direction polish.
  double h = 0.05;
  int since = 0;
  for (int it = 0; it < 2000 && h > 1e-10; ++it) {
    Vec cand = best;
    for (int j = 0; j < d; ++j) cand[j] += h * rng.uniform(-1.0, 1.0);
    cand = project_dual_ball(cand, norm, 1.0);
    const double v = eval(cand, nullptr);
    if (v > best_val + 1e-15) {
      best_val = v;
      best = cand;
      since = 0;
    } else if (++since >= 8 * d) {
      h *= 0.5;
      since = 0;
    }
  }
  return std::max(0.0, best_val);
}

}  // namespace ostoc
