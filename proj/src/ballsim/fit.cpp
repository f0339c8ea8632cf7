#include "ballsim/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "trajkit/errors.hpp"

namespace ballsim {

BallState fit_initial_state(const trajkit::MaskedTrajectory& obs, int n, int k,
                            const trajkit::TimeGrid& grid) {
  if (n < 1 || k < 0) throw trajkit::DataError("fit_initial_state: need n >= 1 and k >= 0");
  std::vector<int> picked;
  const int limit = std::min(n, obs.size());
  for (int i = 0; i < limit; ++i)
    if (obs.mask[static_cast<std::size_t>(i)]) picked.push_back(i);
  if (static_cast<int>(picked.size()) < k + 1) throw trajkit::DataError("underdetermined");

  const double t0 = grid.time(picked.front());
  const auto rows = static_cast<Eigen::Index>(picked.size());
  Eigen::MatrixXd design(rows, k + 1);
  Eigen::MatrixXd target(rows, 3);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const double tau = grid.time(picked[static_cast<std::size_t>(j)]) - t0;
    double power = 1.0;
    for (int d = 0; d <= k; ++d) {
      design(j, d) = power;
      power *= tau;
    }
    target.row(j) = obs.values[static_cast<std::size_t>(picked[static_cast<std::size_t>(j)])]
                        .transpose();
  }
  const Eigen::MatrixXd coef = design.colPivHouseholderQr().solve(target);

  BallState state;
  state.position = coef.row(0).transpose();
  state.velocity = k >= 1 ? Vec3(coef.row(1).transpose()) : Vec3::Zero();
  state.time = t0;
  return state;
}

std::vector<Vec3> physics_predict(const trajkit::MaskedTrajectory& prefix,
                                  const trajkit::TimeGrid& grid, const PhysicsParams& params,
                                  int n, int k) {
  const BallState fitted = fit_initial_state(prefix, n, k, grid);
  const int i0 = static_cast<int>(std::lround((fitted.time - grid.origin) / grid.dt));

  std::vector<Vec3> out(static_cast<std::size_t>(grid.steps));
  out[static_cast<std::size_t>(i0)] = fitted.position;
  BallState cur = fitted;
  for (int i = i0 + 1; i < grid.steps; ++i) {
    cur = integrate_step(cur, grid.dt, params);
    if (!cur.position.allFinite()) throw trajkit::NumericError("diverged");
    out[static_cast<std::size_t>(i)] = cur.position;
  }
  cur = fitted;
  for (int i = i0 - 1; i >= 0; --i) {
    cur = rk4_step(cur, -grid.dt, params);
    if (!cur.position.allFinite()) throw trajkit::NumericError("diverged");
    out[static_cast<std::size_t>(i)] = cur.position;
  }
  return out;
}

}  // namespace ballsim
