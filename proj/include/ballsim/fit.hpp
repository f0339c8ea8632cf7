#pragma once

#include <vector>

#include "ballsim/physics.hpp"
#include "trajkit/types.hpp"

namespace ballsim {

inline constexpr int kFitWindow = 30;  // n: grid steps considered by the launch fit
inline constexpr int kFitDegree = 2;   // k: polynomial degree

// Independent degree-k least-squares polynomial per coordinate over the
// observed samples among the first n grid steps, evaluated (value and first
// derivative) at the time of the first observed sample.  Masked-out steps
// are excluded.  Throws DataError "underdetermined" with fewer than k+1
// observed points.
BallState fit_initial_state(const trajkit::MaskedTrajectory& obs, int n, int k,
                            const trajkit::TimeGrid& grid);

// The physics baseline: launch estimation on the prefix, then integration
// over the full grid.  Steps before the first observation are filled by
// backward integration so all grid.steps rows are covered.
std::vector<Vec3> physics_predict(const trajkit::MaskedTrajectory& prefix,
                                  const trajkit::TimeGrid& grid, const PhysicsParams& params,
                                  int n = kFitWindow, int k = kFitDegree);

}  // namespace ballsim
