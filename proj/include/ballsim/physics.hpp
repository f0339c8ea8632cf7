#pragma once

#include <utility>
#include <vector>

#include "trajkit/kvconfig.hpp"
#include "trajkit/types.hpp"

namespace ballsim {

using trajkit::Vec3;

struct BallState {
  Vec3 position = Vec3::Zero();  // meters
  Vec3 velocity = Vec3::Zero();  // m/s
  double time = 0.0;             // seconds
};

// Drag + bounce model without spin.  Gravity acts along -z; drag is
// quadratic in speed.  All values SI.
struct PhysicsParams {
  double gravity = 9.81;            // m/s^2
  double drag_coeff = 0.112;        // 1/m
  double table_height = 0.76;       // m
  double table_half_x = 1.37;       // m, table spans [-half, half]
  double table_half_y = 0.7625;     // m
  double restitution_z = 0.88;
  double tangential_retain = 0.80;
};

// Throws DataError when invariants are violated (k_d >= 0, restitution and
// tangential retention in (0, 1], positive table geometry).
void validate(const PhysicsParams& params);

trajkit::KvMap to_kv(const PhysicsParams& params);
PhysicsParams physics_from_kv(const trajkit::KvMap& kv);
PhysicsParams read_physics_config(const std::string& path);
void write_physics_config(const std::string& path, const PhysicsParams& params);

// Right-hand side of the flight ODE: d(position) = velocity,
// d(velocity) = (0,0,-g) - k_d * |v| * v.
std::pair<Vec3, Vec3> ball_dynamics(const BallState& state, const PhysicsParams& params);

// Plain RK4 step of ball_dynamics without event handling; dt may be
// negative, which backward re-simulation of pre-observation steps uses.
BallState rk4_step(const BallState& state, double dt, const PhysicsParams& params);

// One classical RK4 step of size dt.  A crossing of the table plane from
// above, inside the table extent, is located by bisection to |z - h| < 1e-6,
// the velocity reflected (v_z *= -restitution_z, tangential *= retain), and
// the remainder of the step integrated recursively.  Throws NumericError
// "diverged" on non-finite results.
BallState integrate_step(const BallState& state, double dt, const PhysicsParams& params);

struct SimResult {
  trajkit::Trajectory trajectory;
  std::vector<BallState> states;  // one per grid step
  int bounces = 0;
};

SimResult simulate_result(const BallState& init, const trajkit::TimeGrid& grid,
                          const PhysicsParams& params);
trajkit::Trajectory simulate(const BallState& init, const trajkit::TimeGrid& grid,
                             const PhysicsParams& params);

}  // namespace ballsim
