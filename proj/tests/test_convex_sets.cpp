#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ostoc/convex_set.hpp"
#include "ostoc/rng.hpp"

using namespace ostoc;

namespace {

ConvexSetSpec random_box(Rng& rng, int d, NormKind k) {
  Vec lo = Vec::zeros(d), hi = Vec::zeros(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = rng.uniform(0.0, 0.5);
    hi[j] = lo[j] + rng.uniform(0.05, 1.0 - lo[j] - 0.05);
  }
  return ConvexSetSpec::box(lo, hi, k);
}

Vec random_point(Rng& rng, int d, double lo, double hi) {
  Vec v = Vec::zeros(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("constructor validates box") {
  CHECK_THROWS(ConvexSetSpec::box(Vec{0.5}, Vec{0.2}, NormKind::kMaxAbs));
  CHECK_THROWS(ConvexSetSpec::box(Vec{-0.1}, Vec{0.5}, NormKind::kMaxAbs));
  CHECK_THROWS(ConvexSetSpec::box(Vec{0.0}, Vec{1.2}, NormKind::kMaxAbs));
  const auto s = ConvexSetSpec::box(Vec{0.1, 0.2}, Vec{0.4, 0.9}, NormKind::kMaxAbs);
  CHECK(s.s_param() == doctest::Approx(0.9));
}

TEST_CASE("support function") {
  const auto s = ConvexSetSpec::budget_cap(Vec{0.3, 0.7}, NormKind::kMaxAbs);
  CHECK(s.support(Vec{1.0, 0.0}) == doctest::Approx(0.3));
  CHECK(s.support(Vec{-1.0, 0.0}) == doctest::Approx(0.0));
  CHECK(s.support(Vec::zeros(2)) == 0.0);

  // Random box/theta vs brute-force max over a grid of the box.
  Rng rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto box = random_box(rng, 2, NormKind::kMaxAbs);
    const Vec theta = random_point(rng, 2, -2.0, 2.0);
    double best = -1e100;
    const int n = 100;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const Vec y{box.lower()[0] + (box.upper()[0] - box.lower()[0]) * i / n,
                    box.lower()[1] + (box.upper()[1] - box.lower()[1]) * j / n};
        best = std::max(best, dot(theta, y));
      }
    }
    CHECK(box.support(theta) == doctest::Approx(best).epsilon(1e-6));
    CHECK(dot(theta, box.support_argmax(theta)) == doctest::Approx(box.support(theta)));
  }
}

TEST_CASE("distance basics") {
  const auto s = ConvexSetSpec::budget_cap(Vec{0.5}, NormKind::kMaxAbs);
  CHECK(s.distance(Vec{0.3}) == 0.0);
  CHECK(s.distance(Vec{0.8}) == doctest::Approx(0.3));
  const auto s2 = ConvexSetSpec::budget_cap(Vec{0.5}, NormKind::kEuclidean);
  CHECK(s2.distance(Vec{0.8}) == doctest::Approx(0.3));
}

TEST_CASE("fenchel oracle examples") {
  const auto s1 = ConvexSetSpec::budget_cap(Vec{0.5}, NormKind::kMaxAbs);
  CHECK(fenchel_distance_oracle(Vec{0.3}, s1, 21) <= 1e-9);
  CHECK(fenchel_distance_oracle(Vec{0.8}, s1, 21) == doctest::Approx(0.3).epsilon(1e-3));
  const auto s2 = ConvexSetSpec::budget_cap(Vec{0.5, 0.5}, NormKind::kMaxAbs);
  CHECK(fenchel_distance_oracle(Vec{1.0, 1.0}, s2, 21) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS(fenchel_distance_oracle(Vec{1.0}, s1, 5));
}

TEST_CASE("duality identity on random pairs") {
  Rng rng(17);
  for (NormKind k : {NormKind::kEuclidean, NormKind::kMaxAbs}) {
    for (int rep = 0; rep < 40; ++rep) {
      const auto box = random_box(rng, 2, k);
      const Vec v = random_point(rng, 2, -0.2, 1.2);
      const double geo = box.distance(v);
      const double dual = fenchel_distance_oracle(v, box, 21);
      CHECK(std::abs(geo - dual) <= 1e-3);
    }
  }
}

TEST_CASE("distance is 1-Lipschitz") {
  Rng rng(23);
  for (NormKind k : {NormKind::kEuclidean, NormKind::kMaxAbs}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto box = random_box(rng, 3, k);
      const Vec u = random_point(rng, 3, -0.5, 1.5);
      const Vec v = random_point(rng, 3, -0.5, 1.5);
      CHECK(std::abs(box.distance(u) - box.distance(v)) <= norm(u - v, k) + 1e-12);
    }
  }
}

TEST_CASE("quadratic overshoot penalty") {
  const QuadraticBoxPenalty h(Vec{0.5, 0.25});
  CHECK(h.eval(Vec{0.4, 0.2}) == 0.0);
  CHECK(h.eval(Vec{0.7, 0.5}) == doctest::Approx(0.04 + 0.0625));
  CHECK(h.gradient(Vec{0.7, 0.2})[0] == doctest::Approx(0.4));
  CHECK(h.gradient(Vec{0.7, 0.2})[1] == 0.0);

  Vec lo, hi;
  h.gradient_range_box(lo, hi);
  CHECK(lo[0] == 0.0);
  CHECK(hi[0] == doctest::Approx(1.0));
  CHECK(hi[1] == doctest::Approx(1.5));

  // Conjugate against a dense 1-d grid.
  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec theta{rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 2.0)};
    double best = -1e100;
    Vec best_x = Vec::zeros(2);
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; j += 40) {
        const Vec x{static_cast<double>(i) / n, static_cast<double>(j) / n};
        const double val = dot(theta, x) - h.eval(x);
        if (val > best) {
          best = val;
          best_x = x;
        }
      }
    }
    CHECK(h.conjugate(theta) >= best - 1e-9);
    CHECK(h.conjugate(theta) <= best + 2e-3);
    const Vec xs = h.conjugate_argmax(theta);
    CHECK(dot(theta, xs) - h.eval(xs) == doctest::Approx(h.conjugate(theta)));
  }
}
