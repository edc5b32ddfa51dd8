#include "ostoc/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ostoc {

ConvexSetSpec::ConvexSetSpec(Vec lower, Vec upper, NormKind n)
    : lower_(std::move(lower)), upper_(std::move(upper)), norm_(n) {
  if (lower_.dim() != upper_.dim() || lower_.dim() == 0)
    throw std::invalid_argument("ConvexSetSpec: bad dimensions");
  for (int j = 0; j < lower_.dim(); ++j) {
    if (!(0.0 <= lower_[j] && lower_[j] <= upper_[j] && upper_[j] <= 1.0))
      throw std::invalid_argument("ConvexSetSpec: need 0 <= lower <= upper <= 1");
  }
}

ConvexSetSpec ConvexSetSpec::box(Vec lower, Vec upper, NormKind n) {
  return ConvexSetSpec(std::move(lower), std::move(upper), n);
}

ConvexSetSpec ConvexSetSpec::budget_cap(Vec cap, NormKind n) {
  const int d = cap.dim();
  return ConvexSetSpec(Vec::zeros(d), std::move(cap), n);
}

ConvexSetSpec ConvexSetSpec::cover_floor(Vec floor, NormKind n) {
  const int d = floor.dim();
  return ConvexSetSpec(std::move(floor), Vec::ones(d), n);
}

double ConvexSetSpec::s_param() const {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s = std::max(s, upper_[j]);
  return s;
}

double ConvexSetSpec::support(const Vec& theta) const {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s += theta[j] > 0.0 ? theta[j] * upper_[j] : theta[j] * lower_[j];
  return s;
}

Vec ConvexSetSpec::support_argmax(const Vec& theta) const {
  Vec y = lower_;
  for (int j = 0; j < dim(); ++j)
    if (theta[j] > 0.0) y[j] = upper_[j];
  return y;
}

Vec ConvexSetSpec::nearest_point(const Vec& v) const { return project_box(v, lower_, upper_); }

double ConvexSetSpec::distance(const Vec& v) const { return norm(v - nearest_point(v), norm_); }

bool ConvexSetSpec::contains(const Vec& v, double tol) const {
  for (int j = 0; j < dim(); ++j)
    if (v[j] < lower_[j] - tol || v[j] > upper_[j] + tol) return false;
  return true;
}

namespace {

// Scale a candidate into the dual unit ball (radial; keeps interior
// points unchanged).
void clip_to_dual_ball(Vec& theta, NormKind k) {
  const double n = dual_norm(theta, k);
  if (n > 1.0) theta *= 1.0 / n;
}

}  // namespace

double fenchel_distance_oracle(const Vec& v, const ConvexSetSpec& S, int grid_resolution) {
  if (grid_resolution < 10) throw std::invalid_argument("fenchel_distance_oracle: resolution < 10");
  const int d = v.dim();
  const NormKind k = S.distance_norm();
  Vec center = Vec::zeros(d);
  double half_width = 1.0;
  Vec best_theta = Vec::zeros(d);
  double best = 0.0;  // theta = 0 attains 0
  const int rounds = 9;
  for (int round = 0; round < rounds; ++round) {
    // Dense grid over [center - hw, center + hw]^d, clipped to the ball.
    std::vector<int> idx(static_cast<size_t>(d), 0);
    bool done = false;
    while (!done) {
      Vec theta = Vec::zeros(d);
      for (int j = 0; j < d; ++j) {
        const double frac = static_cast<double>(idx[static_cast<size_t>(j)]) /
                            static_cast<double>(grid_resolution - 1);
        theta[j] = center[j] - half_width + 2.0 * half_width * frac;
      }
      clip_to_dual_ball(theta, k);
      const double val = dot(theta, v) - S.support(theta);
      if (val > best) {
        best = val;
        best_theta = theta;
      }
      for (int j = 0;; ++j) {
        if (j == d) {
          done = true;
          break;
        }
        if (++idx[static_cast<size_t>(j)] < grid_resolution) break;
        idx[static_cast<size_t>(j)] = 0;
      }
    }
    center = best_theta;
    half_width /= 3.0;
  }
  return best;
}

QuadraticBoxPenalty::QuadraticBoxPenalty(const ConvexSetSpec& box)
    : lo_(box.lower()), hi_(box.upper()) {}

QuadraticBoxPenalty::QuadraticBoxPenalty(Vec cap) : lo_(Vec::zeros(cap.dim())), hi_(std::move(cap)) {
  for (int j = 0; j < dim(); ++j)
    if (!(0.0 <= hi_[j] && hi_[j] <= 1.0))
      throw std::invalid_argument("QuadraticBoxPenalty: cap outside [0,1]");
}

double QuadraticBoxPenalty::eval(const Vec& x) const {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) {
    const double dev = std::max({0.0, x[j] - hi_[j], lo_[j] - x[j]});
    s += dev * dev;
  }
  return s;
}

Vec QuadraticBoxPenalty::gradient(const Vec& x) const {
  Vec g = Vec::zeros(dim());
  for (int j = 0; j < dim(); ++j)
    g[j] = 2.0 * (std::max(0.0, x[j] - hi_[j]) - std::max(0.0, lo_[j] - x[j]));
  return g;
}

double QuadraticBoxPenalty::conjugate(const Vec& theta) const {
  const Vec x = conjugate_argmax(theta);
  return dot(theta, x) - eval(x);
}

Vec QuadraticBoxPenalty::conjugate_argmax(const Vec& theta) const {
  // Per coordinate: argmax of theta*x - dist(x, [lo,hi])^2 on [0,1]. The
  // maximand is flat on [lo,hi], so theta = 0 picks lo (smallest);
  // otherwise the stationary point sits theta/2 beyond the active face.
  Vec x = Vec::zeros(dim());
  for (int j = 0; j < dim(); ++j) {
    if (theta[j] > 0.0)
      x[j] = std::min(1.0, hi_[j] + 0.5 * theta[j]);
    else if (theta[j] < 0.0)
      x[j] = std::max(0.0, lo_[j] + 0.5 * theta[j]);
    else
      x[j] = lo_[j];
  }
  return x;
}

void QuadraticBoxPenalty::gradient_range_box(Vec& lo, Vec& hi) const {
  lo = Vec::zeros(dim());
  hi = Vec::zeros(dim());
  for (int j = 0; j < dim(); ++j) {
    lo[j] = -2.0 * lo_[j];
    hi[j] = 2.0 * (1.0 - hi_[j]);
  }
}

}  // namespace ostoc
