#include "ostoc/vec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ostoc {

namespace {

void check_finite(const std::vector<double>& e) {
  for (double x : e) {
    if (!std::isfinite(x)) throw std::invalid_argument("Vec: non-finite entry");
  }
}

void check_same_dim(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Vec: dimension mismatch");
}

// Feasibility guard with a few ulps of slack so that projecting an
// already-projected point is an exact no-op.
bool within(double value, double radius) {
  return value <= radius * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
}

}  // namespace

Vec::Vec(std::vector<double> entries) : e_(std::move(entries)) { check_finite(e_); }

Vec::Vec(std::initializer_list<double> entries) : e_(entries) { check_finite(e_); }

Vec Vec::constant(int d, double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("Vec: non-finite entry");
  return Vec(std::vector<double>(static_cast<size_t>(d), c), Unchecked{});
}

Vec Vec::unit(int d, int j) {
  Vec v = zeros(d);
  v[j] = 1.0;
  return v;
}

Vec& Vec::operator+=(const Vec& o) {
  check_same_dim(*this, o);
  for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  check_same_dim(*this, o);
  for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : e_) x *= s;
  return *this;
}

Vec& Vec::add_scaled(const Vec& o, double s) {
  check_same_dim(*this, o);
  for (size_t i = 0; i < e_.size(); ++i) e_[i] += s * o.e_[i];
  return *this;
}

double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& v, NormKind k) {
  switch (k) {
    case NormKind::kEuclidean: {
      double s = 0.0;
      for (int i = 0; i < v.dim(); ++i) s += v[i] * v[i];
      return std::sqrt(s);
    }
    case NormKind::kMaxAbs: {
      double m = 0.0;
      for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i]));
      return m;
    }
  }
  return 0.0;
}

double dual_norm(const Vec& v, NormKind k) {
  switch (k) {
    case NormKind::kEuclidean:
      return norm(v, NormKind::kEuclidean);
    case NormKind::kMaxAbs: {
      double s = 0.0;
      for (int i = 0; i < v.dim(); ++i) s += std::abs(v[i]);
      return s;
    }
  }
  return 0.0;
}

Vec project_dual_ball(const Vec& theta, NormKind k, double radius) {
  if (radius < 0.0) throw std::invalid_argument("project_dual_ball: negative radius");
  if (radius == 0.0) return Vec::zeros(theta.dim());
  if (k == NormKind::kEuclidean) {
    const double n = norm(theta, NormKind::kEuclidean);
    if (within(n, radius)) return theta;
    return theta * (radius / n);
  }
  // L1 ball: exact soft-threshold. Sort |theta| descending, find the
  // largest prefix whose entries stay positive after subtracting the
  // shared threshold tau.
  const double l1 = dual_norm(theta, NormKind::kMaxAbs);
  if (within(l1, radius)) return theta;
  const int d = theta.dim();
  std::vector<double> mag(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) mag[static_cast<size_t>(i)] = std::abs(theta[i]);
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double prefix = 0.0, tau = 0.0;
  for (int j = 0; j < d; ++j) {
    prefix += mag[static_cast<size_t>(j)];
    const double cand = (prefix - radius) / static_cast<double>(j + 1);
    if (cand < mag[static_cast<size_t>(j)]) tau = cand;
  }
  Vec out = Vec::zeros(d);
  for (int i = 0; i < d; ++i) {
    const double m = std::abs(theta[i]) - tau;
    if (m > 0.0) out[i] = theta[i] < 0.0 ? -m : m;
  }
  return out;
}

Vec project_box(const Vec& v, const Vec& lo, const Vec& hi) {
  check_same_dim(v, lo);
  check_same_dim(v, hi);
  Vec out = v;
  for (int i = 0; i < v.dim(); ++i) out[i] = std::clamp(v[i], lo[i], hi[i]);
  return out;
}

Vec project_simplex_with_origin(const Vec& v) {
  const int d = v.dim();
  Vec clipped = Vec::zeros(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    clipped[i] = std::max(v[i], 0.0);
    sum += clipped[i];
  }
  if (sum <= 1.0) return clipped;
  // Cap binds: Euclidean projection of the original point onto the unit
  // simplex (thresholding zeroes negative entries on its own).
  std::vector<double> u(v.entries());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double prefix = 0.0, tau = 0.0;
  bool found = false;
  for (int j = 0; j < d; ++j) {
    prefix += u[static_cast<size_t>(j)];
    const double cand = (prefix - 1.0) / static_cast<double>(j + 1);
    if (cand < u[static_cast<size_t>(j)]) {
      tau = cand;
      found = true;
    }
  }
  if (!found) tau = (prefix - 1.0) / static_cast<double>(d);
  Vec out = Vec::zeros(d);
  for (int i = 0; i < d; ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

}  // namespace ostoc
