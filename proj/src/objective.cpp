#include "ostoc/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace ostoc {

double maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  // Bracket shrinks by invphi per step; 60 steps take a unit interval
  // below 1e-12.
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

ConcavePiece ConcavePiece::linear(double c) {
  ConcavePiece p;
  p.kind = Kind::kLinear;
  p.c = c;
  p.deriv_lo = p.deriv_hi = c;
  p.smooth = true;
  return p;
}

ConcavePiece ConcavePiece::min_cap(double cap) {
  if (!(0.0 <= cap && cap <= 1.0)) throw std::invalid_argument("min_cap: cap outside [0,1]");
  ConcavePiece p;
  p.kind = Kind::kMinCap;
  p.cap = cap;
  p.deriv_lo = 0.0;
  p.deriv_hi = 1.0;
  p.smooth = false;
  return p;
}

ConcavePiece ConcavePiece::quad(double a, double b) {
  if (b < 0.0) throw std::invalid_argument("quad piece: b < 0");
  ConcavePiece p;
  p.kind = Kind::kQuad;
  p.a = a;
  p.b = b;
  p.deriv_lo = a - b;
  p.deriv_hi = a;
  p.smooth = true;
  return p;
}

ConcavePiece ConcavePiece::generic(std::function<double(double)> fn, double deriv_lo,
                                   double deriv_hi, bool smooth) {
  ConcavePiece p;
  p.kind = Kind::kGeneric;
  p.fn = std::move(fn);
  p.deriv_lo = deriv_lo;
  p.deriv_hi = deriv_hi;
  p.smooth = smooth;
  return p;
}

double ConcavePiece::eval(double x) const {
  switch (kind) {
    case Kind::kLinear:
      return c * x;
    case Kind::kMinCap:
      return std::min(x, cap);
    case Kind::kQuad:
      return a * x - 0.5 * b * x * x;
    case Kind::kGeneric:
      return fn(x);
  }
  return 0.0;
}

double ConcavePiece::conjugate_argmax(double phi) const {
  switch (kind) {
    case Kind::kLinear: {
      return phi + c > 0.0 ? 1.0 : 0.0;
    }
    case Kind::kMinCap: {
      // phi*x + min(x, cap): slopes phi+1 below cap, phi above.
      double best_x = 0.0, best = eval(0.0);
      for (double x : {cap, 1.0}) {
        const double v = phi * x + eval(x);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      return best_x;
    }
    case Kind::kQuad: {
      if (b == 0.0) return phi + a > 0.0 ? 1.0 : 0.0;
      return std::clamp((phi + a) / b, 0.0, 1.0);
    }
    case Kind::kGeneric: {
      return maximize_concave_1d([&](double x) { return phi * x + fn(x); }, 0.0, 1.0);
    }
  }
  return 0.0;
}

double ConcavePiece::conjugate(double phi) const {
  const double x = conjugate_argmax(phi);
  return phi * x + eval(x);
}

namespace {

// Largest dual norm of a vector whose j-th entry ranges over
// [dlo_j, dhi_j]; coordinates are independent for a box.
double max_dual_norm(const std::vector<double>& dlo, const std::vector<double>& dhi, NormKind k) {
  double acc = 0.0;
  for (size_t j = 0; j < dlo.size(); ++j) {
    const double m = std::max(std::abs(dlo[j]), std::abs(dhi[j]));
    if (k == NormKind::kEuclidean)
      acc += m * m;
    else
      acc += m;  // dual of MaxAbs is SumAbs
  }
  return k == NormKind::kEuclidean ? std::sqrt(acc) : acc;
}

}  // namespace

Objective Objective::zero(int d) {
  Objective f;
  f.kind_ = Kind::kZero;
  f.d_ = d;
  f.lipschitz_ = 0.0;
  return f;
}

Objective Objective::linear_reward(int d) {
  Objective f;
  f.kind_ = Kind::kLinearReward;
  f.d_ = d;
  f.lipschitz_ = 0.0;
  return f;
}

Objective Objective::separable(std::vector<ConcavePiece> pieces, NormKind norm) {
  if (pieces.empty()) throw std::invalid_argument("separable: no pieces");
  Objective f;
  f.kind_ = Kind::kSeparable;
  f.d_ = static_cast<int>(pieces.size());
  f.pieces_ = std::move(pieces);
  std::vector<double> dlo, dhi;
  bool smooth = true;
  for (const auto& p : f.pieces_) {
    dlo.push_back(p.deriv_lo);
    dhi.push_back(p.deriv_hi);
    smooth = smooth && p.smooth;
  }
  f.lipschitz_ = max_dual_norm(dlo, dhi, norm);
  if (smooth) {
    // Smoothness constant is only known in closed form for quadratic
    // pieces; generic smooth pieces get no beta (conservative).
    bool known = true;
    double beta = 0.0;
    for (const auto& p : f.pieces_) {
      if (p.kind == ConcavePiece::Kind::kQuad)
        beta = std::max(beta, p.b);
      else if (p.kind != ConcavePiece::Kind::kLinear)
        known = false;
    }
    if (known && beta > 0.0) f.beta_ = beta;
  }
  return f;
}

Objective Objective::quadratic(Vec a, Vec x0, double beta, NormKind norm) {
  if (a.dim() != x0.dim() || a.dim() == 0) throw std::invalid_argument("quadratic: bad dims");
  if (beta <= 0.0) throw std::invalid_argument("quadratic: beta must be > 0");
  Objective f;
  f.kind_ = Kind::kQuadratic;
  f.d_ = a.dim();
  f.a_ = std::move(a);
  f.x0_ = std::move(x0);
  f.beta_ = beta;
  std::vector<double> dlo, dhi;
  for (int j = 0; j < f.d_; ++j) {
    dlo.push_back(f.a_[j] - beta * (1.0 - f.x0_[j]));
    dhi.push_back(f.a_[j] + beta * f.x0_[j]);
  }
  f.lipschitz_ = max_dual_norm(dlo, dhi, norm);
  return f;
}

double Objective::eval(const Vec& x) const {
  if (x.dim() != d_) throw std::invalid_argument("Objective::eval: dimension mismatch");
  for (int j = 0; j < d_; ++j)
    if (x[j] < -1e-9 || x[j] > 1.0 + 1e-9)
      throw std::invalid_argument("Objective::eval: x outside [0,1]^d");
  switch (kind_) {
    case Kind::kZero:
    case Kind::kLinearReward:
      return 0.0;
    case Kind::kSeparable: {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) s += pieces_[static_cast<size_t>(j)].eval(std::clamp(x[j], 0.0, 1.0));
      return s;
    }
    case Kind::kQuadratic: {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) {
        const double dx = std::clamp(x[j], 0.0, 1.0) - x0_[j];
        s += a_[j] * std::clamp(x[j], 0.0, 1.0) - 0.5 * beta_.value() * dx * dx;
      }
      return s;
    }
  }
  return 0.0;
}

Vec Objective::conjugate_neg_f_argmax(const Vec& phi) const {
  if (phi.dim() != d_) throw std::invalid_argument("conjugate_neg_f_argmax: dimension mismatch");
  Vec x = Vec::zeros(d_);
  switch (kind_) {
    case Kind::kZero:
    case Kind::kLinearReward:
      for (int j = 0; j < d_; ++j) x[j] = phi[j] > 0.0 ? 1.0 : 0.0;
      break;
    case Kind::kSeparable:
      for (int j = 0; j < d_; ++j) x[j] = pieces_[static_cast<size_t>(j)].conjugate_argmax(phi[j]);
      break;
    case Kind::kQuadratic:
      for (int j = 0; j < d_; ++j)
        x[j] = std::clamp(x0_[j] + (phi[j] + a_[j]) / beta_.value(), 0.0, 1.0);
      break;
  }
  return x;
}

double Objective::conjugate_neg_f(const Vec& phi) const {
  const Vec x = conjugate_neg_f_argmax(phi);
  double fx = 0.0;
  switch (kind_) {
    case Kind::kZero:
    case Kind::kLinearReward:
      break;
    case Kind::kSeparable:
      for (int j = 0; j < d_; ++j) fx += pieces_[static_cast<size_t>(j)].eval(x[j]);
      break;
    case Kind::kQuadratic:
      for (int j = 0; j < d_; ++j) {
        const double dx = x[j] - x0_[j];
        fx += a_[j] * x[j] - 0.5 * beta_.value() * dx * dx;
      }
      break;
  }
  return dot(phi, x) + fx;
}

void Objective::gradient_range_box(Vec& lo, Vec& hi) const {
  lo = Vec::zeros(d_);
  hi = Vec::zeros(d_);
  switch (kind_) {
    case Kind::kZero:
    case Kind::kLinearReward:
      throw std::invalid_argument("gradient_range_box: unsupported variant");
    case Kind::kSeparable:
      for (const auto& p : pieces_)
        if (!p.smooth) throw std::invalid_argument("gradient_range_box: non-smooth piece");
      for (int j = 0; j < d_; ++j) {
        lo[j] = pieces_[static_cast<size_t>(j)].deriv_lo;
        hi[j] = pieces_[static_cast<size_t>(j)].deriv_hi;
      }
      break;
    case Kind::kQuadratic:
      for (int j = 0; j < d_; ++j) {
        lo[j] = a_[j] - beta_.value() * (1.0 - x0_[j]);
        hi[j] = a_[j] + beta_.value() * x0_[j];
      }
      break;
  }
}

}  // namespace ostoc
