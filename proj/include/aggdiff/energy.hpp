#pragma once

#include <Eigen/Dense>
#include <span>

#include "aggdiff/model.hpp"
#include "aggdiff/state.hpp"

namespace aggdiff {

struct EnergyBreakdown {
  double entropy = 0.0;      ///< U_m term
  double interaction = 0.0;  ///< chi W_k term, ordered pairs i != j
  double confinement = 0.0;  ///< r V / 2 term
  double total = 0.0;
};

/// Discrete free energy G^n_{k,r} of the particle positions. The entropy and
/// kernel branches are chosen independently (m == 1, k == 0 select the
/// logarithmic forms).
EnergyBreakdown discrete_energy(std::span<const double> x, const PhysParams& p);
EnergyBreakdown discrete_energy(const ParticleState& s, const PhysParams& p);

/// Velocity field of the particle ODE is -g. g is the gradient of G^n in the
/// mass-weighted metric, i.e. the Euclidean gradient divided by 1/n.
Eigen::VectorXd discrete_gradient(std::span<const double> x, const PhysParams& p);
Eigen::VectorXd discrete_gradient(const ParticleState& s, const PhysParams& p);

/// Jacobian of discrete_gradient. Symmetric: tridiagonal diffusion block,
/// dense interaction block, plus r on the diagonal.
Eigen::MatrixXd discrete_hessian(std::span<const double> x, const PhysParams& p);
Eigen::MatrixXd discrete_hessian(const ParticleState& s, const PhysParams& p);

/// Gradient and Jacobian assembled in one sweep over particle pairs.
void gradient_and_hessian(std::span<const double> x, const PhysParams& p, Eigen::VectorXd& grad,
                          Eigen::MatrixXd& hess);

/// Discrete dissipation (1/n) sum g_i^2, the squared L2(d eta) norm of the
/// particle velocity.
double dissipation(const ParticleState& s, const PhysParams& p);

/// F_resc - (1/2 - 1/k) V. Vanishes at stationary states of the rescaled
/// fair-competition flow. Requires m = 1 - k, k != 0 and the rescaled frame.
double virial_residual(const ParticleState& s, const PhysParams& p);

struct SecondMomentRate {
  double lhs;  ///< (d/dt) V along the particle flow
  double rhs;  ///< 2 (m - 1) F_k
};

/// Both sides of the second-moment law for the original-frame
/// fair-competition flow.
SecondMomentRate second_moment_rate(const ParticleState& s, const PhysParams& p);

struct BlowupFunctional {
  double value;        ///< H = -D + (m - 1)^2 F^2, evaluated on the renormalised state
  double dissipation;  ///< D of the renormalised state
  double energy;       ///< F_k of the renormalised state
};

/// Zero-homogeneous blow-up functional for the porous-medium
/// fair-competition case (k < 0, original frame). The state is first dilated
/// to unit second moment.
BlowupFunctional blowup_functional(const ParticleState& s, const PhysParams& p);

}  // namespace aggdiff
