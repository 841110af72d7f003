#include "aggdiff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aggdiff {

void NumParams::validate() const {
  std::ostringstream msg;
  if (!(dt > 0.0)) msg << "dt must be positive; ";
  if (!(newton_tol > 0.0)) msg << "newton_tol must be positive; ";
  if (newton_max_iter <= 0) msg << "newton_max_iter must be positive; ";
  if (!(steady_tol > 0.0)) msg << "steady_tol must be positive; ";
  if (!(steady_tol > newton_tol)) msg << "steady_tol must exceed newton_tol; ";
  if (!(t_max > 0.0)) msg << "t_max must be positive; ";
  if (max_halvings < 0) msg << "max_halvings must be non-negative; ";
  if (!(gap_floor > 0.0)) msg << "gap_floor must be positive; ";
  if (snapshot_stride <= 0) msg << "snapshot_stride must be positive; ";
  const std::string s = msg.str();
  if (!s.empty()) throw InvalidInput("invalid numerical parameters: " + s.substr(0, s.size() - 2));
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Steady: return "Steady";
    case RunStatus::BlowUp: return "BlowUp";
    case RunStatus::Timeout: return "Timeout";
  }
  return "?";
}

namespace {

constexpr int kMaxDamping = 30;

bool admissible(const Eigen::VectorXd& y, double gap_floor) {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i])) return false;
  for (Eigen::Index i = 0; i + 1 < y.size(); ++i)
    if (!(y[i + 1] - y[i] > gap_floor)) return false;
  return true;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

StepResult failed(StepStatus status, int iters, double residual, std::string why) {
  StepResult r;
  r.status = status;
  r.newton_iters = iters;
  r.residual = residual;
  r.reason = std::move(why);
  return r;
}

// I + dt H is symmetric and positive definite unless attraction dominates
// the step; Cholesky is tried first and pivoted LU covers the rest.
Eigen::VectorXd solve_symmetric(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  return a.partialPivLu().solve(b);
}

}  // namespace

StepResult implicit_step(const ParticleState& s, const PhysParams& p, const NumParams& np) {
  return implicit_step(s, p, np, np.dt);
}

StepResult implicit_step(const ParticleState& s, const PhysParams& p, const NumParams& np,
                         double dt) {
  const auto n = static_cast<Eigen::Index>(s.size());
  const Eigen::Map<const Eigen::VectorXd> x(s.positions().data(), n);
  Eigen::VectorXd y = x;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  gradient_and_hessian(as_span(y), p, g, h);
  Eigen::VectorXd res = y - x + dt * g;
  double res_max = res.lpNorm<Eigen::Infinity>();

  for (int iter = 0;; ++iter) {
    if (res_max <= np.newton_tol) {
      StepResult r;
      r.status = StepStatus::Accepted;
      r.state.emplace(std::vector<double>(y.data(), y.data() + n), s.time() + dt);
      r.newton_iters = iter;
      r.residual = res_max;
      return r;
    }
    if (iter == np.newton_max_iter)
      return failed(StepStatus::NewtonDiverged, iter, res_max, "Newton iteration cap reached");

    Eigen::MatrixXd jac = dt * h;
    jac.diagonal().array() += 1.0;
    const Eigen::VectorXd delta = solve_symmetric(jac, -res);
    if (!delta.allFinite())
      return failed(StepStatus::Singular, iter, res_max, "Newton linear solve degenerated");

    const double res_norm = res.norm();
    double damping = 1.0;
    bool moved = false;
    bool have_hessian = false;
    Eigen::VectorXd trial;
    Eigen::VectorXd trial_res;
    Eigen::VectorXd trial_g;
    Eigen::MatrixXd trial_h;
    for (int k = 0; k <= kMaxDamping; ++k, damping *= 0.5) {
      trial = y + damping * delta;
      if (!admissible(trial, np.gap_floor)) continue;
      // A full step is usually accepted, so its Jacobian is worth building now.
      have_hessian = k == 0;
      if (have_hessian)
        gradient_and_hessian(as_span(trial), p, trial_g, trial_h);
      else
        trial_g = discrete_gradient(as_span(trial), p);
      trial_res = trial - x + dt * trial_g;
      if (trial_res.allFinite() && trial_res.norm() < res_norm) {
        moved = true;
        break;
      }
    }
    if (!moved)
      return failed(StepStatus::NewtonDiverged, iter + 1, res_max, "damping could not reduce residual");

    y = std::move(trial);
    res = std::move(trial_res);
    res_max = res.lpNorm<Eigen::Infinity>();
    if (have_hessian) {
      g = std::move(trial_g);
      h = std::move(trial_h);
    } else if (res_max > np.newton_tol) {
      gradient_and_hessian(as_span(y), p, g, h);
    }
  }
}

ParticleState explicit_step(const ParticleState& s, const PhysParams& p, double dt) {
  const Eigen::VectorXd g = discrete_gradient(s, p);
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = s[i] - dt * g[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    if (!(y[i + 1] > y[i])) throw OrderingViolated("forward Euler step reorders particles; reduce dt");
  return ParticleState(std::move(y), s.time() + dt);
}

namespace {

TrajectoryRow make_row(const ParticleState& s, const EnergyBreakdown& e, double step_dist) {
  return {s.time(), e, second_moment(s), center_of_mass(s), s.min_gap(), max_density(s), step_dist};
}

}  // namespace

RunOutcome evolve(const ParticleState& s0, const PhysParams& p, const NumParams& np) {
  p.validate();
  np.validate();

  RunOutcome out{RunStatus::Timeout, s0, {}, {}, 0, 0, np.dt, {}};
  ParticleState current = s0;
  EnergyBreakdown energy = discrete_energy(current, p);
  out.trajectory.push_back(make_row(current, energy, 0.0));
  out.snapshots.push_back(current);

  double dt = np.dt;
  double last_dist = 0.0;
  long since_record = 0;
  // Remaining time below this is treated as having reached t_max.
  const double t_eps = 1e-12 * std::max(1.0, np.t_max);

  auto record = [&](const ParticleState& s) {
    out.trajectory.push_back(make_row(s, energy, last_dist));
    out.snapshots.push_back(s);
    since_record = 0;
  };
  auto finish = [&](RunStatus status, std::string note) {
    if (since_record != 0) record(current);
    out.status = status;
    out.final_state = current;
    out.final_dt = dt;
    out.note = std::move(note);
    return out;
  };
  // The cap applies to consecutive halvings while retrying one step; the
  // step size is never restored, so a collapse can be followed down to the
  // gap floor.
  int streak = 0;
  auto halve = [&]() {
    if (streak >= np.max_halvings) return false;
    // A step that no longer advances the clock cannot resolve the collapse.
    if (current.time() + 0.5 * dt == current.time()) return false;
    ++streak;
    ++out.halvings;
    dt *= 0.5;
    return true;
  };

  while (np.t_max - current.time() > t_eps) {
    const double h = std::min(dt, np.t_max - current.time());
    StepResult step = implicit_step(current, p, np, h);
    if (!step.accepted()) {
      if (halve()) continue;
      return finish(RunStatus::BlowUp, "Newton failed after time-step halving: " + step.reason);
    }
    ParticleState next = std::move(*step.state);
    const EnergyBreakdown next_energy = discrete_energy(next, p);
    if (next_energy.total > energy.total + 1e-12 * (1.0 + std::abs(energy.total))) {
      if (halve()) continue;
      return finish(RunStatus::BlowUp, "energy increase persisted after time-step halving");
    }

    streak = 0;
    last_dist = wasserstein(current, next);
    current = std::move(next);
    energy = next_energy;
    ++out.accepted_steps;
    ++since_record;
    if (since_record >= np.snapshot_stride) record(current);

    if (current.min_gap() < np.gap_floor)
      return finish(RunStatus::BlowUp, "particle gap below floor");
    // Distance per unit time, so the test means the same at any step size.
    if (last_dist / h < np.steady_tol)
      return finish(RunStatus::Steady, "consecutive states closer than steady_tol");
  }
  return finish(RunStatus::Timeout, "reached t_max");
}

}  // namespace aggdiff
