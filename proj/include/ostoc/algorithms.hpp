#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ostoc/instance.hpp"
#include "ostoc/oco.hpp"

namespace ostoc {

enum class AlgorithmKind { kFeasibility, kGeneralCP, kLinearCP, kPacking, kSmoothCP };

std::string to_string(AlgorithmKind a);
AlgorithmKind algorithm_from_string(const std::string& s);

enum class LearnerChoice { kAuto, kOgdBall, kSignedMw };

struct RunConfig {
  AlgorithmKind algorithm = AlgorithmKind::kFeasibility;
  // Objective/constraint trade-off rate (GeneralCP, LinearCP, Packing,
  // SmoothCP). The selection scale factors are exactly as printed in
  // the respective algorithms: 2(Z+L), 2Z, Z, 2Z.
  double Z = 0.0;
  // Packing multiplicative-weights parameter; must lie in (0,1).
  double epsilon = 0.1;
  LearnerChoice theta_learner = LearnerChoice::kAuto;
  LearnerChoice phi_learner = LearnerChoice::kAuto;
  // 0 selects the defaults: OGD gradient bound 2*sqrt(d) resp. 2, MW
  // epsilon min(0.5, sqrt(log(2d+1)/T)).
  double ogd_grad_bound = 0.0;
  double mw_epsilon = 0.0;
};

struct StepRecord {
  int chosen = 0;
  double r = 0.0;
  Vec v;
  Vec theta;
  Vec phi;  // zeros when the algorithm has no phi iterate
};

struct RunTrace {
  AlgorithmKind algorithm = AlgorithmKind::kFeasibility;
  int T = 0;  // run horizon (stream length)
  int d = 0;
  std::vector<StepRecord> steps;  // steps 1..tau
  int tau = 0;
  // Packing: consumption / T (zero-padded to the horizon); everything
  // else: average of the chosen vectors over all T steps.
  Vec avg;
  double total_reward = 0.0;
  Vec consumption;
  // max(0, consumption_j - B) for packing, zeros otherwise.
  Vec overshoot;
};

// argmin over options of theta . v; ties resolve to the lowest index.
int select_feasibility(const Request& req, const Vec& theta);

RunTrace run_feasibility(const Instance& inst, const StreamOrder& order, const RunConfig& config);
RunTrace run_general_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config);
RunTrace run_linear_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config);
RunTrace run_packing(const Instance& inst, const StreamOrder& order, const RunConfig& config);
RunTrace run_smooth_cp(const Instance& inst, const StreamOrder& order, const RunConfig& config);

RunTrace run(const Instance& inst, const StreamOrder& order, const RunConfig& config);

// Learner factory shared by the runners (exposed for tests): dual-ball
// learner on {||theta||_dual <= radius} for the given primal norm.
std::unique_ptr<Learner> make_ball_learner(int d, NormKind norm, double radius, int horizon,
                                           LearnerChoice choice, double ogd_grad_bound,
                                           double mw_epsilon);

}  // namespace ostoc
