#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ostoc/instance.hpp"

namespace ostoc {

enum class OracleMethod { kBruteForce, kDualSubgradient, kPackingDual };

struct OracleResult {
  double value = 0.0;
  bool feasible = true;
  OracleMethod method = OracleMethod::kBruteForce;
  // Dual certificate (DualSubgradient / PackingDual).
  std::optional<double> lambda;
  Vec phi, theta;
  double tolerance_achieved = 0.0;
};

// Exhaustive enumeration over one option per step (integral solutions):
// max f(avg) (or average reward for reward kinds) subject to
// d(avg, S) <= delta. Guarded to at most 10^6 combinations. When no
// combination is feasible the result carries feasible = false and a
// -inf sentinel value.
OracleResult brute_force_opt(const Instance& inst, double delta);

// Fractional relaxation via the dual
//   min_{||phi||_* <= L, mu} (-f)*(phi) + h_S(mu)
//       + (1/T) sum_t h_{X_t}(-phi - mu) + delta * ||mu||_*
// (mu = lambda * theta; the support function is positively homogeneous,
// so the optimal lambda is ||mu||_*). The inner max over each finite
// option list is exact; the outer minimization runs projected
// subgradient descent with restarts plus local polish. The returned
// value is always a valid upper bound on the fractional optimum.
OracleResult fractional_opt(const Instance& inst, double delta);

// Offline packing LP value (sum-of-rewards scale) via its dual:
//   min_{theta >= 0} sum_t max(0, max_{(r,v)} (r - v . theta))
//                    + (budget_scale * B) * sum_j theta_j
OracleResult packing_opt_sum(const Instance& inst, double budget_scale = 1.0);

// OPT-hat of the sampled packing problem: draw ceil(delta*T) requests
// without replacement, solve the packing LP with inflated budget
// delta*B + eta*sqrt(delta*B) where eta = sqrt(3 ln((d+2)/rho)), and
// divide by the realized sampling fraction.
double sampled_opt_hat(const Instance& inst, double delta, double rho, uint64_t seed);

struct ZPackingEstimate {
  double Z = 0.0;
  double opt_hat = 0.0;
  double delta_used = 0.0;
  double eta = 0.0;
  // Set when B < log(d)/epsilon^2 (the caller-side assumption fails).
  bool precondition_warning = false;
};

// Z = 2 * OPT-hat / B from the first ceil(delta*T) requests of the
// realized stream, with rho = epsilon^2 and
// delta = 4 eta^2 epsilon^2 / log(d), clamped into (0, 1].
ZPackingEstimate estimate_z_packing(const Instance& inst, const StreamOrder& order,
                                    double epsilon);

struct ZPhasedEstimate {
  double Z = 0.0;
  double gamma = 0.0;
  double opt_high = 0.0;  // prefix OPT-hat at delta = 4 gamma
  double opt_low = 0.0;   // prefix OPT-hat at delta = gamma
};

// Phased estimator: gamma = ||1_d|| sqrt(log(d * T_r) / T_r),
// Z = (OPT-hat^{4 gamma}(T_r) - OPT-hat^{gamma}(T_r)) / gamma + 2L,
// where the prefix problems are solved by the fractional dual. Rejects
// prefixes that are infeasible at delta = 4 gamma.
ZPhasedEstimate estimate_z_phased(const Instance& inst, const StreamOrder& order, int prefix_len);

struct OptDeltaCurve {
  std::vector<double> delta;
  std::vector<double> value;
  std::vector<double> lambda;  // slope certificate active at each delta
  double z_star = 0.0;         // finite-difference slope at the first interval
};

// OPT^delta over an ascending grid. Every reported value is the
// tightest dual bound over the pooled certificates from all grid
// solves; since each certificate gives the affine bound
// base + delta * lambda with lambda >= 0, the reported curve is exactly
// nondecreasing and concave.
OptDeltaCurve opt_delta_curve(const Instance& inst, const std::vector<double>& delta_grid);

// Smallest achievable fractional distance min_{x in P} d(x, S); used to
// gate relaxed-feasibility problems.
double min_fractional_distance(const Instance& inst);

}  // namespace ostoc
