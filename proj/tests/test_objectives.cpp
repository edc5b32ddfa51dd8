#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ostoc/objective.hpp"
#include "ostoc/rng.hpp"

using namespace ostoc;

namespace {

Vec random_point(Rng& rng, int d, double lo, double hi) {
  Vec v = Vec::zeros(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

// Dense grid maximization of phi . x + f(x) over [0,1]^2.
double grid_conjugate(const Objective& f, const Vec& phi, int n = 400) {
  double best = -1e100;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Vec x{static_cast<double>(i) / n, static_cast<double>(j) / n};
      best = std::max(best, dot(phi, x) + f.eval(x));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("eval examples") {
  const auto zero = Objective::zero(2);
  CHECK(zero.eval(Vec{0.3, 0.9}) == 0.0);

  const auto quad = Objective::quadratic(Vec::zeros(2), Vec::zeros(2), 2.0, NormKind::kEuclidean);
  CHECK(quad.eval(Vec{1.0, 0.0}) == doctest::Approx(-1.0));

  const auto sep = Objective::separable(
      {ConcavePiece::min_cap(0.5), ConcavePiece::min_cap(0.5)}, NormKind::kMaxAbs);
  CHECK(sep.eval(Vec{0.8, 0.3}) == doctest::Approx(0.8));

  CHECK_THROWS(zero.eval(Vec{1.5, 0.0}));
}

TEST_CASE("conjugate examples") {
  const auto zero = Objective::zero(2);
  CHECK(zero.conjugate_neg_f(Vec{0.5, -0.25}) == doctest::Approx(0.5));

  const auto lin = Objective::separable({ConcavePiece::linear(0.3), ConcavePiece::linear(-0.6)},
                                        NormKind::kMaxAbs);
  // sum_j max(phi_j + c_j, 0)
  CHECK(lin.conjugate_neg_f(Vec{0.2, 0.2}) == doctest::Approx(0.5));

  const auto quad = Objective::quadratic(Vec::zeros(1), Vec{0.5}, 1.0, NormKind::kEuclidean);
  CHECK(quad.conjugate_neg_f(Vec{0.0}) == doctest::Approx(0.0));
  CHECK(quad.conjugate_neg_f_argmax(Vec{0.0})[0] == doctest::Approx(0.5));
  CHECK(quad.conjugate_neg_f_argmax(Vec{0.2})[0] == doctest::Approx(0.7));
}

TEST_CASE("argmax tie-breaking picks the coordinatewise-smallest maximizer") {
  const auto zero = Objective::zero(2);
  const Vec a = zero.conjugate_neg_f_argmax(Vec{1.0, -1.0});
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  const Vec b = zero.conjugate_neg_f_argmax(Vec::zeros(2));
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  // min_cap at phi = 0: maximizers are [cap, 1], smallest is cap.
  const auto sep = Objective::separable({ConcavePiece::min_cap(0.5)}, NormKind::kMaxAbs);
  CHECK(sep.conjugate_neg_f_argmax(Vec{0.0})[0] == 0.5);
  // At phi = -1 the plateau is [0, cap]; smallest is 0.
  CHECK(sep.conjugate_neg_f_argmax(Vec{-1.0})[0] == 0.0);
}

TEST_CASE("conjugate matches grid search") {
  Rng rng(31);
  const std::vector<Objective> objs = {
      Objective::zero(2),
      Objective::separable({ConcavePiece::min_cap(0.4), ConcavePiece::linear(0.7)},
                           NormKind::kMaxAbs),
      Objective::separable({ConcavePiece::quad(1.0, 2.0), ConcavePiece::quad(0.2, 0.5)},
                           NormKind::kEuclidean),
      Objective::quadratic(Vec{0.3, -0.2}, Vec{0.5, 0.25}, 1.5, NormKind::kEuclidean),
  };
  for (const auto& f : objs) {
    for (int rep = 0; rep < 10; ++rep) {
      const Vec phi = random_point(rng, 2, -1.5, 1.5);
      const double grid = grid_conjugate(f, phi);
      CHECK(f.conjugate_neg_f(phi) >= grid - 1e-9);
      CHECK(f.conjugate_neg_f(phi) <= grid + 1e-4);
    }
  }
}

TEST_CASE("Fenchel-Young and argmax consistency") {
  Rng rng(37);
  const auto f = Objective::quadratic(Vec{0.4, 0.1}, Vec{0.3, 0.6}, 2.0, NormKind::kEuclidean);
  for (int rep = 0; rep < 300; ++rep) {
    const Vec x = random_point(rng, 2, 0.0, 1.0);
    const Vec phi = random_point(rng, 2, -2.0, 2.0);
    CHECK(dot(phi, x) + f.eval(x) <= f.conjugate_neg_f(phi) + 1e-9);
    const Vec xs = f.conjugate_neg_f_argmax(phi);
    CHECK(dot(phi, xs) + f.eval(xs) == doctest::Approx(f.conjugate_neg_f(phi)).epsilon(1e-6));
  }
}

TEST_CASE("duality recovery: grid max of phi.x - (-f)*(phi) equals -f(x)") {
  // Conjugate duality: h(x) = max_{||phi||_* <= L} phi . x - h*(phi) with h = -f.
  Rng rng(41);
  const auto f = Objective::quadratic(Vec{0.5, -0.3}, Vec{0.4, 0.7}, 1.0, NormKind::kEuclidean);
  const double L = f.lipschitz();
  for (int rep = 0; rep < 5; ++rep) {
    const Vec x = random_point(rng, 2, 0.0, 1.0);
    double best = -1e100;
    const int n = 600;
    for (int i = -n; i <= n; ++i) {
      for (int j = -n; j <= n; ++j) {
        Vec phi{L * i / n, L * j / n};
        if (norm(phi, NormKind::kEuclidean) > L) continue;
        best = std::max(best, dot(phi, x) - f.conjugate_neg_f(phi));
      }
    }
    CHECK(std::abs(best - (-f.eval(x))) <= 1e-3);
  }
}

TEST_CASE("strong smoothness gives (1/beta)-strongly-convex conjugate") {
  Rng rng(43);
  const double beta = 2.0;
  const auto f = Objective::quadratic(Vec{0.2, 0.4}, Vec{0.5, 0.5}, beta, NormKind::kEuclidean);
  // Gradient range of h = -f is the negated range of f.
  Vec flo, fhi;
  f.gradient_range_box(flo, fhi);
  for (int rep = 0; rep < 500; ++rep) {
    Vec theta = Vec::zeros(2), phi = Vec::zeros(2);
    for (int j = 0; j < 2; ++j) {
      theta[j] = -rng.uniform(flo[j], fhi[j]);
      phi[j] = -rng.uniform(flo[j], fhi[j]);
    }
    const Vec x_phi = f.conjugate_neg_f_argmax(phi);
    const double lhs = f.conjugate_neg_f(theta) - f.conjugate_neg_f(phi) - dot(x_phi, theta - phi);
    const double rhs = 0.5 / beta * std::pow(norm(theta - phi, NormKind::kEuclidean), 2);
    CHECK(lhs >= rhs - 1e-6);
  }
}

TEST_CASE("gradient_range_box") {
  const auto quad = Objective::quadratic(Vec{0.0}, Vec{0.0}, 1.0, NormKind::kEuclidean);
  Vec lo, hi;
  quad.gradient_range_box(lo, hi);
  CHECK(lo[0] == doctest::Approx(-1.0));
  CHECK(hi[0] == doctest::Approx(0.0));

  const auto nonsmooth = Objective::separable({ConcavePiece::min_cap(0.5)}, NormKind::kMaxAbs);
  Vec a, b;
  CHECK_THROWS(nonsmooth.gradient_range_box(a, b));
  CHECK_THROWS(Objective::zero(1).gradient_range_box(a, b));

  // Smooth separable piece: endpoints of the derivative over [0,1]
  // against sampling.
  const auto sep = Objective::separable({ConcavePiece::quad(0.8, 1.6)}, NormKind::kEuclidean);
  sep.gradient_range_box(lo, hi);
  double dmin = 1e100, dmax = -1e100;
  for (int i = 0; i < 1000; ++i) {
    const double x = static_cast<double>(i) / 999.0;
    const double deriv = 0.8 - 1.6 * x;
    dmin = std::min(dmin, deriv);
    dmax = std::max(dmax, deriv);
  }
  CHECK(lo[0] == doctest::Approx(dmin).epsilon(1e-2));
  CHECK(hi[0] == doctest::Approx(dmax).epsilon(1e-2));
}

TEST_CASE("generic pieces run through golden section") {
  // f(x) = sqrt(x + 0.1) shifted in; concave, derivative bounded on [0,1].
  auto fn = [](double x) { return std::sqrt(x + 0.1); };
  const double dlo = 0.5 / std::sqrt(1.1), dhi = 0.5 / std::sqrt(0.1);
  const auto f = Objective::separable({ConcavePiece::generic(fn, dlo, dhi, true)},
                                      NormKind::kMaxAbs);
  for (double phi : {-1.0, -0.5, 0.0, 0.5}) {
    double best = -1e100;
    for (int i = 0; i <= 100000; ++i) {
      const double x = static_cast<double>(i) / 100000.0;
      best = std::max(best, phi * x + fn(x));
    }
    CHECK(f.conjugate_neg_f(Vec{phi}) == doctest::Approx(best).epsilon(1e-7));
  }
  CHECK(f.lipschitz() == doctest::Approx(dhi));
}

TEST_CASE("lipschitz constants in both norms") {
  // Supergradient entries range over [c_j, c_j]; L is the dual norm.
  const auto lin_inf = Objective::separable(
      {ConcavePiece::linear(0.3), ConcavePiece::linear(-0.4)}, NormKind::kMaxAbs);
  CHECK(lin_inf.lipschitz() == doctest::Approx(0.7));  // L1 of (0.3, 0.4)
  const auto lin_l2 = Objective::separable(
      {ConcavePiece::linear(0.3), ConcavePiece::linear(-0.4)}, NormKind::kEuclidean);
  CHECK(lin_l2.lipschitz() == doctest::Approx(0.5));
}
