#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ostoc/vec.hpp"

namespace ostoc {

// Golden-section maximization of a concave function on [lo, hi].
// Iterations are bounded so the bracket shrinks below tol (default
// 1e-9); returns the bracket midpoint.
double maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-9);

// One coordinate of a separable concave objective. Built-in kinds have
// closed-form conjugates with deterministic (smallest-maximizer) tie
// breaking; kGeneric carries an evaluator plus derivative bounds and is
// maximized by golden section. Generic pieces are not serializable.
struct ConcavePiece {
  enum class Kind { kLinear, kMinCap, kQuad, kGeneric };

  static ConcavePiece linear(double c);
  // min(x, cap)
  static ConcavePiece min_cap(double cap);
  // a*x - (b/2)*x^2, b >= 0
  static ConcavePiece quad(double a, double b);
  static ConcavePiece generic(std::function<double(double)> fn, double deriv_lo, double deriv_hi,
                              bool smooth);

  double eval(double x) const;
  // max_{x in [0,1]} phi*x + f(x) and its smallest maximizer.
  double conjugate_argmax(double phi) const;
  double conjugate(double phi) const;

  Kind kind = Kind::kLinear;
  double c = 0.0;    // kLinear
  double cap = 0.0;  // kMinCap
  double a = 0.0, b = 0.0;  // kQuad
  std::function<double(double)> fn;  // kGeneric
  double deriv_lo = 0.0, deriv_hi = 0.0;
  bool smooth = true;
};

// Concave objective f on [0,1]^d with its conjugate machinery. The
// stored Lipschitz constant bounds the dual norm of every supergradient
// of f over the domain and is computed in closed form at construction;
// it is never estimated at run time.
class Objective {
 public:
  enum class Kind { kZero, kLinearReward, kSeparable, kQuadratic };

  static Objective zero(int d);
  // Marker for instances whose objective is the per-option reward; f
  // itself is identically zero.
  static Objective linear_reward(int d);
  static Objective separable(std::vector<ConcavePiece> pieces, NormKind norm);
  // f(x) = a . x - (beta/2) ||x - x0||_2^2
  static Objective quadratic(Vec a, Vec x0, double beta, NormKind norm);

  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  double lipschitz() const { return lipschitz_; }
  std::optional<double> smoothness_beta() const { return beta_; }

  double eval(const Vec& x) const;

  // (-f)*(phi) = max_{x in [0,1]^d} phi . x + f(x), and a maximizer
  // (coordinatewise smallest on ties).
  double conjugate_neg_f(const Vec& phi) const;
  Vec conjugate_neg_f_argmax(const Vec& phi) const;

  // Coordinatewise bounds of {grad f(x) : x in [0,1]^d}. Rejects
  // non-smooth variants.
  void gradient_range_box(Vec& lo, Vec& hi) const;

  const std::vector<ConcavePiece>& pieces() const { return pieces_; }
  const Vec& quad_a() const { return a_; }
  const Vec& quad_x0() const { return x0_; }

 private:
  Objective() = default;
  Kind kind_ = Kind::kZero;
  int d_ = 0;
  double lipschitz_ = 0.0;
  std::optional<double> beta_;
  std::vector<ConcavePiece> pieces_;  // kSeparable
  Vec a_, x0_;                        // kQuadratic
};

}  // namespace ostoc
