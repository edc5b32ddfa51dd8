#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ostoc/rng.hpp"
#include "ostoc/vec.hpp"

namespace ostoc {

// An online learner producing the dual iterates. observe_linear takes a
// supergradient z of the round's concave payoff at the current iterate
// and advances the state (gradient ascent or multiplicative update).
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Vec current() const = 0;
  virtual void observe_linear(const Vec& z) = 0;
  virtual int step_count() const = 0;
};

// Projected online gradient ascent on the dual-norm ball
// {u : dual_norm(u, norm) <= radius}, anytime step size
// eta_t = radius / (grad_bound * sqrt(t)).
class OgdBallLearner final : public Learner {
 public:
  OgdBallLearner(int d, NormKind norm, double radius, double grad_bound);
  OgdBallLearner(Vec initial, NormKind norm, double radius, double grad_bound);

  Vec current() const override { return iterate_; }
  void observe_linear(const Vec& z) override;
  int step_count() const override { return t_; }

 private:
  Vec iterate_;
  NormKind norm_;
  double radius_;
  double grad_bound_;
  int t_ = 0;
};

// Multiplicative weights over the d corners e_1..e_d, optionally with
// an origin slack expert of constant weight multiplier 1. Weights are
// kept in log space and renormalized for numerical range; the derived
// iterate is theta_j = w_j / (1 + sum w) with origin, w_j / sum w
// without.
class MwSimplexLearner final : public Learner {
 public:
  MwSimplexLearner(int d, double epsilon, double payoff_cap, bool includes_origin);

  Vec current() const override;
  void observe_linear(const Vec& z) override;
  int step_count() const override { return t_; }
  // Current weights w_1..w_d (origin weight normalized to 1).
  std::vector<double> weights() const;

 private:
  int d_;
  double epsilon_, cap_;
  bool origin_;
  std::vector<double> logw_;  // size d; origin log-weight tracked separately
  double log_origin_ = 0.0;
  int t_ = 0;
};

// Multiplicative weights over 2d signed corners {+e_j, -e_j} plus an
// origin slack expert; realizes the signed L1 ball of a given radius.
// theta_j = radius * (w+_j - w-_j) / (w0 + sum(w+ + w-)). Supergradients
// are given on the theta scale; the learner rescales internally.
class SignedMwLearner final : public Learner {
 public:
  SignedMwLearner(int d, double epsilon, double payoff_cap, double radius);

  Vec current() const override;
  void observe_linear(const Vec& z) override;
  int step_count() const override { return t_; }

 private:
  int d_;
  double epsilon_, cap_, radius_;
  std::vector<double> logw_pos_, logw_neg_;
  double log_origin_ = 0.0;
  int t_ = 0;
};

// Online gradient ascent for H-strongly-concave payoffs on a box
// domain, step size eta_t = 1 / (H t). Achieves logarithmic regret.
class StronglyConcaveOgdLearner final : public Learner {
 public:
  StronglyConcaveOgdLearner(Vec box_lo, Vec box_hi, double strong_concavity, double grad_bound);

  Vec current() const override { return iterate_; }
  void observe_linear(const Vec& z) override;
  int step_count() const override { return t_; }
  double strong_concavity() const { return h_; }
  double grad_bound() const { return g_; }

 private:
  Vec iterate_, lo_, hi_;
  double h_, g_;
  int t_ = 0;
};

// Offline domains for the hindsight oracle.
struct DomainSpec {
  enum class Kind { kDualBall, kBox, kSimplexWithOrigin };
  static DomainSpec dual_ball(int d, NormKind norm, double radius);
  static DomainSpec box(Vec lo, Vec hi);
  static DomainSpec simplex_with_origin(int d);

  Vec project(const Vec& v) const;
  int dim() const { return d_; }
  double radius() const { return radius_; }

  Kind kind = Kind::kDualBall;
  int d_ = 0;
  NormKind norm_ = NormKind::kEuclidean;
  double radius_ = 1.0;
  Vec lo_, hi_;
};

// One round's concave payoff for offline regret measurement.
struct PayoffFn {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> supergrad;
};

struct HindsightResult {
  Vec arg;
  double value = 0.0;
};

// Test oracle: maximize sum_t g_t(theta) over the domain by projected
// gradient ascent with random restarts followed by local grid
// refinement. Deterministic under `seed`.
HindsightResult hindsight_best(const std::vector<PayoffFn>& payoffs, const DomainSpec& domain,
                               uint64_t seed = 7, int restarts = 8, int iters = 2000);

}  // namespace ostoc
