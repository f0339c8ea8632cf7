#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ballsim/fit.hpp"
#include "trajkit/types.hpp"
#include "tvae/train.hpp"

namespace evalkit {

using trajkit::Vec3;

/// A total map from an observed prefix to a full-horizon position forecast.
/// The tvae flavor is the ensemble mean; its randomness is derived from a
/// content hash of the prefix, so predictions are reproducible and
/// independent of evaluation order.
struct Predictor {
  std::string tag;
  std::function<std::vector<Vec3>(const trajkit::MaskedTrajectory&)> predict;
};

/// Physics baseline closure. The ball state is re-estimated from the most
/// recent observations whenever the prefix grows: a degree-k fit over the
/// current flight arc, capped at the 2n freshest samples. Once a bounce has
/// n observations behind it the fit moves to the post-bounce arc; until then
/// the pre-bounce arc is used and the ODE carries the state through the
/// bounce. A quadratic fit straddling the bounce kink would be useless, and
/// windows much longer than 2n pick up polynomial truncation bias from drag.
Predictor physics_predictor(const ballsim::PhysicsParams& params, const trajkit::TimeGrid& grid,
                            int n = ballsim::kFitWindow, int k = ballsim::kFitDegree);
Predictor tvae_predictor(const tvae::TvaeModel& m, int samples, std::uint64_t seed);

struct ErrorCurve {
  std::vector<double> abscissa;
  std::vector<double> mean;    // meters
  std::vector<double> stddev;  // meters, sample std across trajectories
  std::vector<int> count;
  int skipped = 0;  // trajectories that were too short for the prefix

  std::size_t size() const { return abscissa.size(); }
};

/// Errors against ground truth (or measured positions when no truth is
/// stored), per future step, aggregated over the test split. The prefix is
/// the first `given` observed samples of each trajectory.
ErrorCurve error_vs_future_step(const Predictor& pred, const trajkit::Dataset& test, int given,
                                const trajkit::TimeGrid& grid);

/// Mean per-trajectory future error as a function of the prefix length.
ErrorCurve error_vs_given(const Predictor& pred, const trajkit::Dataset& test,
                          const std::vector<int>& given_values, const trajkit::TimeGrid& grid);

std::vector<int> default_given_values();  // 5, 10, ..., 200

struct AblationResult {
  ErrorCurve ci;
  ErrorCurve full;
  double ci_mean = 0.0;    // mean over reported curve points
  double full_mean = 0.0;
};

/// Trains twin models differing only in the ci flag and compares their
/// test-split error curves at the given prefix length.
AblationResult ablation_ci(const trajkit::Dataset& ds, const tvae::TrainConfig& cfg, int given,
                           int samples);

}  // namespace evalkit
