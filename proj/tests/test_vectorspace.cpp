#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ostoc/rng.hpp"
#include "ostoc/vec.hpp"

using namespace ostoc;

namespace {

Vec random_vec(Rng& rng, int d, double lo = -1.0, double hi = 1.0) {
  Vec v = Vec::zeros(d);
  for (int j = 0; j < d; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("norm basics") {
  CHECK(norm(Vec{3.0, 4.0}, NormKind::kEuclidean) == doctest::Approx(5.0));
  CHECK(norm(Vec{0.2, -0.7}, NormKind::kMaxAbs) == doctest::Approx(0.7));
  CHECK(norm(Vec{1.0, 1.0, 1.0}, NormKind::kEuclidean) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("dual norm basics") {
  CHECK(dual_norm(Vec{1.0, 1.0}, NormKind::kMaxAbs) == doctest::Approx(2.0));
  CHECK(dual_norm(Vec{0.6, 0.8}, NormKind::kEuclidean) == doctest::Approx(1.0));
}

TEST_CASE("dual norm matches sampled maximization of u.v over the unit primal ball") {
  Rng rng(11);
  for (NormKind k : {NormKind::kEuclidean, NormKind::kMaxAbs}) {
    for (int rep = 0; rep < 5; ++rep) {
      const int d = 2;
      const Vec v = random_vec(rng, d);
      double best = 0.0;
      Rng sample_rng(100 + rep);
      for (int s = 0; s < 10000; ++s) {
        Vec u = random_vec(sample_rng, d);
        const double n = norm(u, k);
        if (n > 1e-12) u *= 1.0 / n;  // boundary of the primal unit ball
        best = std::max(best, dot(u, v));
      }
      const double dn = dual_norm(v, k);
      CHECK(best <= dn + 1e-12);
      CHECK(best >= dn * 0.98);
    }
  }
}

TEST_CASE("construction rejects non-finite entries") {
  CHECK_THROWS(Vec{1.0, std::nan("")});
  std::vector<double> bad = {0.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS(Vec(bad));
}

TEST_CASE("dual ball projection examples") {
  // Inside: unchanged.
  const Vec inside{0.1, -0.2};
  CHECK(project_dual_ball(inside, NormKind::kEuclidean, 1.0) == inside);
  CHECK(project_dual_ball(inside, NormKind::kMaxAbs, 1.0) == inside);
  // Radial scaling.
  const Vec p = project_dual_ball(Vec{3.0, 4.0}, NormKind::kEuclidean, 1.0);
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p[1] == doctest::Approx(0.8));
  // L1 soft threshold.
  const Vec q = project_dual_ball(Vec{0.9, 0.3}, NormKind::kMaxAbs, 1.0);
  CHECK(q[0] == doctest::Approx(0.8));
  CHECK(q[1] == doctest::Approx(0.2));
}

TEST_CASE("L1 projection matches grid search") {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec theta = random_vec(rng, 2, -1.5, 1.5);
    const Vec proj = project_dual_ball(theta, NormKind::kMaxAbs, 1.0);
    // Brute force over a fine grid of the L1 ball.
    double best = 1e100;
    Vec best_u = Vec::zeros(2);
    const int n = 400;
    for (int i = -n; i <= n; ++i) {
      for (int j = -n; j <= n; ++j) {
        if (std::abs(i) + std::abs(j) > n) continue;
        const Vec u{static_cast<double>(i) / n, static_cast<double>(j) / n};
        const double dist = norm(u - theta, NormKind::kEuclidean);
        if (dist < best) {
          best = dist;
          best_u = u;
        }
      }
    }
    CHECK(norm(proj - best_u, NormKind::kEuclidean) <= 3.0 / n);
  }
}

TEST_CASE("projection idempotence and feasibility") {
  Rng rng(7);
  for (NormKind k : {NormKind::kEuclidean, NormKind::kMaxAbs}) {
    for (double radius : {0.3, 1.0, 2.5}) {
      for (int rep = 0; rep < 200; ++rep) {
        const Vec theta = random_vec(rng, 4, -3.0, 3.0);
        const Vec once = project_dual_ball(theta, k, radius);
        CHECK(dual_norm(once, k) <= radius + 1e-12);
        CHECK(project_dual_ball(once, k, radius) == once);
      }
    }
  }
}

TEST_CASE("Holder inequality") {
  Rng rng(13);
  for (NormKind k : {NormKind::kEuclidean, NormKind::kMaxAbs}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const Vec u = random_vec(rng, 3, -2.0, 2.0);
      const Vec v = random_vec(rng, 3, -2.0, 2.0);
      CHECK(dot(u, v) <= norm(u, k) * dual_norm(v, k) + 1e-12);
    }
  }
}

TEST_CASE("simplex-with-origin projection") {
  const Vec inside{0.2, 0.3};
  CHECK(project_simplex_with_origin(inside) == inside);
  const Vec clipped = project_simplex_with_origin(Vec{-0.5, 0.4});
  CHECK(clipped[0] == doctest::Approx(0.0));
  CHECK(clipped[1] == doctest::Approx(0.4));
  const Vec capped = project_simplex_with_origin(Vec{1.0, 1.0});
  CHECK(capped[0] == doctest::Approx(0.5));
  CHECK(capped[1] == doctest::Approx(0.5));
  // Negative coordinate with binding cap: threshold comes from the
  // original entries.
  const Vec mixed = project_simplex_with_origin(Vec{2.0, -1.0});
  CHECK(mixed[0] == doctest::Approx(1.0));
  CHECK(mixed[1] == doctest::Approx(0.0));
}
