#pragma once

#include "ostoc/vec.hpp"

namespace ostoc {

// Axis-aligned box target set S = [lower, upper] in [0,1]^d together
// with the norm used for distances. Covers the packing cap sets
// Box(0, cap), covering floor sets Box(floor, 1) and plain feasibility
// boxes; a new set variant only needs support(), distance() and
// s_param().
class ConvexSetSpec {
 public:
  static ConvexSetSpec box(Vec lower, Vec upper, NormKind distance_norm);
  static ConvexSetSpec budget_cap(Vec cap, NormKind distance_norm);
  static ConvexSetSpec cover_floor(Vec floor, NormKind distance_norm);

  int dim() const { return lower_.dim(); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  NormKind distance_norm() const { return norm_; }

  // Coordinatewise largest value a vector in S can take.
  double s_param() const;

  // h_S(theta) = max_{y in S} theta . y
  double support(const Vec& theta) const;
  // A maximizer of theta . y over S (upper where theta > 0, else lower).
  Vec support_argmax(const Vec& theta) const;

  // Distance of v from S in distance_norm; the coordinatewise clamp is
  // the exact nearest point of a box in both supported norms.
  double distance(const Vec& v) const;
  Vec nearest_point(const Vec& v) const;
  bool contains(const Vec& v, double tol = 0.0) const;

 private:
  ConvexSetSpec(Vec lower, Vec upper, NormKind n);
  Vec lower_, upper_;
  NormKind norm_;
};

// Test oracle: max_{||theta||_dual <= 1} theta . v - h_S(theta) by grid
// search with iterative window refinement; grid_resolution (>= 10) is
// the number of points per axis in each round.
double fenchel_distance_oracle(const Vec& v, const ConvexSetSpec& S, int grid_resolution);

// Smooth stand-in for the hard box constraint, used by the smooth CP
// variant: h(x) = sum_j dist(x_j, [lo_j, hi_j])^2, the squared Euclidean
// distance to the box. For cap sets Box(0, cap) this is the overshoot
// penalty sum_j max(0, x_j - cap_j)^2. 2-strongly smooth w.r.t. the
// Euclidean norm.
class QuadraticBoxPenalty {
 public:
  explicit QuadraticBoxPenalty(const ConvexSetSpec& box);
  // Cap-set shorthand: Box(0, cap).
  explicit QuadraticBoxPenalty(Vec cap);

  int dim() const { return lo_.dim(); }
  double beta() const { return 2.0; }

  double eval(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  // h*(theta) = max_{x in [0,1]^d} theta . x - h(x) and its maximizer
  // (coordinatewise-smallest on ties).
  double conjugate(const Vec& theta) const;
  Vec conjugate_argmax(const Vec& theta) const;

  // Closure of {grad h(x) : x in [0,1]^d}: the box [-2 lo_j, 2(1-hi_j)].
  void gradient_range_box(Vec& lo, Vec& hi) const;

 private:
  Vec lo_, hi_;
};

}  // namespace ostoc
