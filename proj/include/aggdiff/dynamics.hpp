#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aggdiff/energy.hpp"
#include "aggdiff/model.hpp"
#include "aggdiff/state.hpp"

namespace aggdiff {

struct NumParams {
  double dt = 1e-3;
  double newton_tol = 1e-10;   ///< max-norm of the implicit-Euler residual
  int newton_max_iter = 50;
  double steady_tol = 1e-5;    ///< consecutive-state distance divided by the step size
  double t_max = 10.0;
  int max_halvings = 20;       ///< consecutive halvings allowed while retrying one step
  double gap_floor = 1e-12;
  int snapshot_stride = 10;    ///< accepted steps between recorded samples

  void validate() const;
};

/// Thrown by explicit_step when forward Euler would reorder particles.
class OrderingViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepStatus { Accepted, NewtonDiverged, Singular };

struct StepResult {
  StepStatus status = StepStatus::NewtonDiverged;
  std::optional<ParticleState> state;  ///< set only when Accepted
  int newton_iters = 0;
  double residual = 0.0;  ///< final max-norm residual
  std::string reason;

  bool accepted() const { return status == StepStatus::Accepted; }
};

/// One implicit Euler step Y - X + dt g(Y) = 0 solved by damped Newton with
/// the analytic Jacobian I + dt H(Y), warm-started at X.
StepResult implicit_step(const ParticleState& s, const PhysParams& p, const NumParams& np);
StepResult implicit_step(const ParticleState& s, const PhysParams& p, const NumParams& np, double dt);

/// Forward Euler X - dt g(X). Throws OrderingViolated if the result is not
/// strictly increasing.
ParticleState explicit_step(const ParticleState& s, const PhysParams& p, double dt);

enum class RunStatus { Steady, BlowUp, Timeout };
std::string to_string(RunStatus s);

struct TrajectoryRow {
  double t;
  EnergyBreakdown energy;
  double second_moment;
  double center_of_mass;
  double min_gap;
  double max_density;
  double step_dist;  ///< Wasserstein distance to the previous accepted state
};

struct RunOutcome {
  RunStatus status = RunStatus::Timeout;
  ParticleState final_state;
  std::vector<TrajectoryRow> trajectory;
  std::vector<ParticleState> snapshots;  ///< state at each trajectory row
  long accepted_steps = 0;
  int halvings = 0;
  double final_dt = 0.0;
  std::string note;  ///< reason for termination
};

/// Runs implicit steps until the state stops moving (Steady), Newton fails
/// past the halving budget or particles collide (BlowUp), or t_max is
/// reached (Timeout).
RunOutcome evolve(const ParticleState& s0, const PhysParams& p, const NumParams& np);

}  // namespace aggdiff
