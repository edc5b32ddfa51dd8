#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ostoc {

// Primal norms supported by the algorithms. The dual pairings are
// Euclidean <-> Euclidean and MaxAbs (L-inf) <-> SumAbs (L1); dual-norm
// evaluation and dual-ball projection are exposed through dual_norm()
// and project_dual_ball() below.
enum class NormKind { kEuclidean, kMaxAbs };

// Dense vector with finiteness checked on construction from raw data.
// Mutation through operator[] is trusted (internal arithmetic only).
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::vector<double> entries);
  Vec(std::initializer_list<double> entries);

  static Vec zeros(int d) { return Vec(std::vector<double>(static_cast<size_t>(d), 0.0), Unchecked{}); }
  static Vec constant(int d, double c);
  static Vec ones(int d) { return constant(d, 1.0); }
  static Vec unit(int d, int j);

  int dim() const { return static_cast<int>(e_.size()); }
  bool empty() const { return e_.empty(); }
  double operator[](int j) const { return e_[static_cast<size_t>(j)]; }
  double& operator[](int j) { return e_[static_cast<size_t>(j)]; }
  const std::vector<double>& entries() const { return e_; }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);
  // this += s * o
  Vec& add_scaled(const Vec& o, double s);

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.e_ == b.e_; }

 private:
  struct Unchecked {};
  Vec(std::vector<double> entries, Unchecked) : e_(std::move(entries)) {}
  std::vector<double> e_;
};

double dot(const Vec& a, const Vec& b);

double norm(const Vec& v, NormKind k);
double dual_norm(const Vec& v, NormKind k);

// Euclidean-nearest point of {u : dual_norm(u, k) <= radius}. Radial
// scaling for the Euclidean pairing, sort-based soft-threshold for the
// L1 ball. Returns the input unchanged when it is already feasible
// (exact idempotence).
Vec project_dual_ball(const Vec& theta, NormKind k, double radius);

// Euclidean projection onto the box [lo, hi] (coordinatewise clamp).
Vec project_box(const Vec& v, const Vec& lo, const Vec& hi);

// Euclidean projection onto {theta >= 0, sum theta <= 1}.
Vec project_simplex_with_origin(const Vec& v);

}  // namespace ostoc
