#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ostoc/convex_set.hpp"
#include "ostoc/objective.hpp"
#include "ostoc/vec.hpp"

namespace ostoc {

// Parameter combinations or inputs for which no feasible instance /
// solution exists. The CLI maps this to exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OptionItem {
  Vec v;
  std::optional<double> r;
};

struct Request {
  std::vector<OptionItem> options;
};

enum class InstanceKind { kFeasibility, kLinear, kPacking, kCovering, kSmooth };

std::string to_string(InstanceKind k);
InstanceKind instance_kind_from_string(const std::string& s);

// A full offline instance: the fixed request multiset X_1..X_T plus the
// target set, objective and (for packing) the budget. For witness
// certified kinds, `witness[t]` is one option index per step whose
// average lies in S.
struct Instance {
  int d = 0;
  int T = 0;
  InstanceKind kind = InstanceKind::kFeasibility;
  ConvexSetSpec set = ConvexSetSpec::box(Vec{0.0}, Vec{1.0}, NormKind::kMaxAbs);
  Objective objective = Objective::zero(1);
  std::optional<double> budget;
  std::vector<Request> requests;
  std::vector<int> witness;

  bool has_rewards() const {
    return kind == InstanceKind::kLinear || kind == InstanceKind::kPacking;
  }
};

// Checks all structural invariants (dimensions, ranges, kind-specific
// requirements like the packing zero option). Throws on violation.
void validate(const Instance& inst);

// --- serialization (JSON Lines, extension .osp.jsonl) ---------------------
// Line 1 is a header object {B?, T, d, kind, objective, set, witness?},
// then one line per request {"opts": [{"v": [...], "r": r?}, ...]}.
// Emission is canonical (sorted keys, shortest round-trip doubles), so
// serialize(parse(serialize(x))) is byte-identical.

std::string serialize(const Instance& inst);
Instance parse_instance(const std::string& jsonl);

void save_instance(const Instance& inst, const std::string& path);
// Accepts plain files and gzip-compressed variants (sniffed by magic).
Instance load_instance(const std::string& path);

// FNV-1a over the canonical serialization, hex encoded.
std::string instance_hash(const Instance& inst);
uint64_t fnv1a64(const std::string& bytes);

// --- generators ------------------------------------------------------------

struct GenParams {
  InstanceKind kind = InstanceKind::kFeasibility;
  int d = 2;
  int T = 100;
  int options_per_step = 2;
  uint64_t seed = 1;
  NormKind norm = NormKind::kMaxAbs;
  // Packing budget; < 0 means T/4.
  double budget = -1.0;
  // Optional explicit set geometry; empty vectors select kind defaults.
  Vec box_lower, box_upper;  // feasibility / linear
  Vec cap;                   // packing / smooth
  Vec floor_vec;             // covering
  // Objective attached to the instance: "auto" picks the kind default
  // (zero for feasibility/covering, linear_reward for linear/packing,
  // quadratic for smooth). Also accepted: "zero", "separable",
  // "quadratic".
  std::string objective = "auto";
  double quad_beta = 1.0;
  // Packing rewards are clamp(rho * <w, v>/d + noise); rho below.
  double reward_coupling = 0.75;
  // Decoy geometry for witness-certified kinds: "uniform" draws decoys
  // uniformly in [0,1]^d; "uniform_capped" in [0, decoy_radius]^d;
  // "near_witness" scatters them symmetrically around the step's witness
  // vector; "spike" perturbs one random coordinate. Confusable decoys
  // make selection mistakes inject random drift.
  std::string decoy_style = "uniform";
  double decoy_radius = 0.35;
  // Fraction of requests reduced to their witness option alone (forced
  // steps); limits the per-step steering capacity.
  double singleton_fraction = 0.0;
};

// Deterministic under seed. Witness-first for feasibility-certified
// kinds: witness vectors are drawn so their average lands exactly in
// the interior of S, then decoys are added around them.
Instance generate(const GenParams& params);

// --- input streams ----------------------------------------------------------

struct StreamOrder {
  enum class Mode { kRp, kIid };
  Mode mode = Mode::kRp;
  uint64_t seed = 0;
  // RP: a permutation of 0..T-1. IID: sampled request indices.
  std::vector<int> order;
  int length() const { return static_cast<int>(order.size()); }
};

StreamOrder rp_stream(const Instance& inst, uint64_t seed);
// Uniform with replacement over the instance's requests (the instance
// is the support of the IID distribution); optional nonuniform weights.
StreamOrder iid_stream(const Instance& inst, uint64_t seed, int T_out = -1);
StreamOrder iid_stream_weighted(const Instance& inst, uint64_t seed,
                                const std::vector<double>& weights, int T_out = -1);

inline const Request& stream_request(const Instance& inst, const StreamOrder& order, int t) {
  return inst.requests[static_cast<size_t>(order.order[static_cast<size_t>(t)])];
}

}  // namespace ostoc
