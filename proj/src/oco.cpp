#include "ostoc/oco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ostoc {

OgdBallLearner::OgdBallLearner(int d, NormKind norm, double radius, double grad_bound)
    : OgdBallLearner(Vec::zeros(d), norm, radius, grad_bound) {}

OgdBallLearner::OgdBallLearner(Vec initial, NormKind norm, double radius, double grad_bound)
    : iterate_(std::move(initial)), norm_(norm), radius_(radius), grad_bound_(grad_bound) {
  if (radius_ < 0.0) throw std::invalid_argument("OgdBallLearner: negative radius");
  if (grad_bound_ <= 0.0) throw std::invalid_argument("OgdBallLearner: grad bound must be > 0");
  iterate_ = project_dual_ball(iterate_, norm_, radius_);
}

void OgdBallLearner::observe_linear(const Vec& z) {
  ++t_;
  const double eta = radius_ / (grad_bound_ * std::sqrt(static_cast<double>(t_)));
  Vec next = iterate_;
  next.add_scaled(z, eta);
  iterate_ = project_dual_ball(next, norm_, radius_);
}

namespace {

// Shift log weights so the largest is 0; keeps exp() in range without
// changing any normalized ratio.
void renormalize(std::vector<double>& logw, double& log_origin, bool with_origin) {
  double m = with_origin ? log_origin : -1e300;
  for (double lw : logw) m = std::max(m, lw);
  for (double& lw : logw) lw -= m;
  if (with_origin) log_origin -= m;
}

}  // namespace

MwSimplexLearner::MwSimplexLearner(int d, double epsilon, double payoff_cap, bool includes_origin)
    : d_(d), epsilon_(epsilon), cap_(payoff_cap), origin_(includes_origin),
      logw_(static_cast<size_t>(d), 0.0) {
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw std::invalid_argument("MwSimplexLearner: epsilon outside (0,1)");
  if (cap_ <= 0.0) throw std::invalid_argument("MwSimplexLearner: payoff cap must be > 0");
}

Vec MwSimplexLearner::current() const {
  double denom = origin_ ? std::exp(log_origin_) : 0.0;
  std::vector<double> w(static_cast<size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    w[static_cast<size_t>(j)] = std::exp(logw_[static_cast<size_t>(j)]);
    denom += w[static_cast<size_t>(j)];
  }
  Vec theta = Vec::zeros(d_);
  for (int j = 0; j < d_; ++j) theta[j] = w[static_cast<size_t>(j)] / denom;
  return theta;
}

void MwSimplexLearner::observe_linear(const Vec& z) {
  if (z.dim() != d_) throw std::invalid_argument("MwSimplexLearner: dimension mismatch");
  const double log1pe = std::log1p(epsilon_);
  for (int j = 0; j < d_; ++j) {
    if (std::abs(z[j]) > cap_ * (1.0 + 1e-12))
      throw std::invalid_argument("MwSimplexLearner: payoff exceeds cap");
    logw_[static_cast<size_t>(j)] += (z[j] / cap_) * log1pe;
  }
  renormalize(logw_, log_origin_, origin_);
  ++t_;
}

std::vector<double> MwSimplexLearner::weights() const {
  std::vector<double> w(static_cast<size_t>(d_));
  const double base = origin_ ? log_origin_ : 0.0;
  for (int j = 0; j < d_; ++j) w[static_cast<size_t>(j)] = std::exp(logw_[static_cast<size_t>(j)] - base);
  return w;
}

SignedMwLearner::SignedMwLearner(int d, double epsilon, double payoff_cap, double radius)
    : d_(d), epsilon_(epsilon), cap_(payoff_cap), radius_(radius),
      logw_pos_(static_cast<size_t>(d), 0.0), logw_neg_(static_cast<size_t>(d), 0.0) {
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw std::invalid_argument("SignedMwLearner: epsilon outside (0,1)");
  if (cap_ <= 0.0) throw std::invalid_argument("SignedMwLearner: payoff cap must be > 0");
  if (radius_ < 0.0) throw std::invalid_argument("SignedMwLearner: negative radius");
}

Vec SignedMwLearner::current() const {
  double denom = std::exp(log_origin_);
  std::vector<double> wp(static_cast<size_t>(d_)), wn(static_cast<size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    wp[static_cast<size_t>(j)] = std::exp(logw_pos_[static_cast<size_t>(j)]);
    wn[static_cast<size_t>(j)] = std::exp(logw_neg_[static_cast<size_t>(j)]);
    denom += wp[static_cast<size_t>(j)] + wn[static_cast<size_t>(j)];
  }
  Vec theta = Vec::zeros(d_);
  for (int j = 0; j < d_; ++j)
    theta[j] = radius_ * (wp[static_cast<size_t>(j)] - wn[static_cast<size_t>(j)]) / denom;
  return theta;
}

void SignedMwLearner::observe_linear(const Vec& z) {
  if (z.dim() != d_) throw std::invalid_argument("SignedMwLearner: dimension mismatch");
  const double log1pe = std::log1p(epsilon_);
  for (int j = 0; j < d_; ++j) {
    // Corner +radius*e_j earns radius*z_j, its mirror earns the negative.
    const double u = radius_ * z[j];
    if (std::abs(u) > cap_ * (1.0 + 1e-12))
      throw std::invalid_argument("SignedMwLearner: payoff exceeds cap");
    logw_pos_[static_cast<size_t>(j)] += (u / cap_) * log1pe;
    logw_neg_[static_cast<size_t>(j)] -= (u / cap_) * log1pe;
  }
  double m = log_origin_;
  for (int j = 0; j < d_; ++j)
    m = std::max({m, logw_pos_[static_cast<size_t>(j)], logw_neg_[static_cast<size_t>(j)]});
  for (int j = 0; j < d_; ++j) {
    logw_pos_[static_cast<size_t>(j)] -= m;
    logw_neg_[static_cast<size_t>(j)] -= m;
  }
  log_origin_ -= m;
  ++t_;
}

StronglyConcaveOgdLearner::StronglyConcaveOgdLearner(Vec box_lo, Vec box_hi,
                                                     double strong_concavity, double grad_bound)
    : iterate_(Vec::zeros(box_lo.dim())), lo_(std::move(box_lo)), hi_(std::move(box_hi)),
      h_(strong_concavity), g_(grad_bound) {
  if (h_ <= 0.0) throw std::invalid_argument("StronglyConcaveOgdLearner: H must be > 0");
  for (int j = 0; j < lo_.dim(); ++j)
    if (lo_[j] > hi_[j]) throw std::invalid_argument("StronglyConcaveOgdLearner: empty box");
  iterate_ = project_box(iterate_, lo_, hi_);
}

void StronglyConcaveOgdLearner::observe_linear(const Vec& z) {
  ++t_;
  const double eta = 1.0 / (h_ * static_cast<double>(t_));
  Vec next = iterate_;
  next.add_scaled(z, eta);
  iterate_ = project_box(next, lo_, hi_);
}

DomainSpec DomainSpec::dual_ball(int d, NormKind norm, double radius) {
  DomainSpec s;
  s.kind = Kind::kDualBall;
  s.d_ = d;
  s.norm_ = norm;
  s.radius_ = radius;
  return s;
}

DomainSpec DomainSpec::box(Vec lo, Vec hi) {
  DomainSpec s;
  s.kind = Kind::kBox;
  s.d_ = lo.dim();
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

DomainSpec DomainSpec::simplex_with_origin(int d) {
  DomainSpec s;
  s.kind = Kind::kSimplexWithOrigin;
  s.d_ = d;
  return s;
}

Vec DomainSpec::project(const Vec& v) const {
  switch (kind) {
    case Kind::kDualBall:
      return project_dual_ball(v, norm_, radius_);
    case Kind::kBox:
      return project_box(v, lo_, hi_);
    case Kind::kSimplexWithOrigin:
      return project_simplex_with_origin(v);
  }
  return v;
}

namespace {

double total_payoff(const std::vector<PayoffFn>& payoffs, const Vec& theta) {
  double s = 0.0;
  for (const auto& g : payoffs) s += g.value(theta);
  return s;
}

}  // namespace

HindsightResult hindsight_best(const std::vector<PayoffFn>& payoffs, const DomainSpec& domain,
                               uint64_t seed, int restarts, int iters) {
  const int d = domain.dim();
  Rng rng(seed);
  Vec best = domain.project(Vec::zeros(d));
  double best_val = total_payoff(payoffs, best);

  auto try_point = [&](const Vec& start) {
    Vec theta = domain.project(start);
    const double scale = domain.kind == DomainSpec::Kind::kDualBall ? std::max(domain.radius(), 1e-6) : 1.0;
    for (int k = 1; k <= iters; ++k) {
      Vec grad = Vec::zeros(d);
      for (const auto& g : payoffs) grad += g.supergrad(theta);
      const double step = scale / (std::sqrt(static_cast<double>(k)) *
                                   std::max(1.0, static_cast<double>(payoffs.size())));
      theta.add_scaled(grad, step);
      theta = domain.project(theta);
      const double val = total_payoff(payoffs, theta);
      if (val > best_val) {
        best_val = val;
        best = theta;
      }
    }
  };

  try_point(Vec::zeros(d));
  for (int r = 0; r < restarts; ++r) {
    Vec start = Vec::zeros(d);
    for (int j = 0; j < d; ++j) start[j] = rng.uniform(-1.0, 1.0) * std::max(domain.radius(), 1.0);
    try_point(start);
  }

  // Local grid refinement around the incumbent.
  double hw = domain.kind == DomainSpec::Kind::kDualBall ? std::max(domain.radius(), 1e-6) * 0.5 : 0.5;
  const int res = 5;
  for (int round = 0; round < 24; ++round) {
    Vec center = best;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    bool done = false;
    while (!done) {
      Vec cand = Vec::zeros(d);
      for (int j = 0; j < d; ++j) {
        const double frac = static_cast<double>(idx[static_cast<size_t>(j)]) / (res - 1);
        cand[j] = center[j] - hw + 2.0 * hw * frac;
      }
      cand = domain.project(cand);
      const double val = total_payoff(payoffs, cand);
      if (val > best_val) {
        best_val = val;
        best = cand;
      }
      for (int j = 0;; ++j) {
        if (j == d) {
          done = true;
          break;
        }
        if (++idx[static_cast<size_t>(j)] < res) break;
        idx[static_cast<size_t>(j)] = 0;
      }
    }
    hw *= 0.5;
  }
  return {best, best_val};
}

}  // namespace ostoc
