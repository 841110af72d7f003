#include "aggdiff/energy.hpp"

#include <cmath>
#include <string>

namespace aggdiff {

namespace {

void require_ordered(std::span<const double> x) {
  if (x.size() < 2) throw InvalidInput("at least two particles are required");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i]))
      throw SingularConfiguration("coincident or unordered particles at index " +
                                  std::to_string(i));
  }
}

// |d|^(k-1) for d > 0, with the k == 0 branch spelled out to avoid pow().
inline double kernel_derivative_magnitude(double k, double d) {
  return k == 0.0 ? 1.0 / d : std::pow(d, k - 1.0);
}

void add_diffusion(std::span<const double> x, const PhysParams& p, double dm,
                   Eigen::VectorXd& g, Eigen::MatrixXd* h) {
  const std::size_t n = x.size();
  const double pre = p.m == 1.0 ? 1.0 : std::pow(dm, p.m - 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    const double dmm = p.m == 1.0 ? 1.0 / d : std::pow(d, -p.m);
    // d_i^{-m} enters g_i with a plus sign and g_{i+1} with a minus sign.
    g[i] += pre * dmm;
    g[i + 1] -= pre * dmm;
    if (h != nullptr) {
      const double a = p.m * pre * dmm / d;
      (*h)(i, i) += a;
      (*h)(i + 1, i + 1) += a;
      (*h)(i, i + 1) -= a;
      (*h)(i + 1, i) -= a;
    }
  }
}

void add_interaction(std::span<const double> x, const PhysParams& p, double dm,
                     Eigen::VectorXd& g, Eigen::MatrixXd* h) {
  const std::size_t n = x.size();
  const double c = 2.0 * p.chi * dm;
  const double ck = c * (p.k - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double gi = 0.0;
    double hii = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[j] - x[i];
      const double f = kernel_derivative_magnitude(p.k, d);
      // sign(i - j) = -1 for the lower index.
      gi -= c * f;
      g[j] += c * f;
      if (h != nullptr) {
        const double hij = ck * f / d;
        hii += hij;
        (*h)(j, j) += hij;
        // Lower triangle only (contiguous in column-major storage); the
        // caller mirrors it.
        (*h)(j, i) -= hij;
      }
    }
    g[i] += gi;
    if (h != nullptr) (*h)(i, i) += hii;
  }
}

}  // namespace

EnergyBreakdown discrete_energy(std::span<const double> x, const PhysParams& p) {
  require_ordered(x);
  const std::size_t n = x.size();
  const double dm = 1.0 / static_cast<double>(n);
  EnergyBreakdown e;

  double ent = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    ent += p.m == 1.0 ? std::log(d / dm) : std::pow(d, 1.0 - p.m);
  }
  e.entropy = p.m == 1.0 ? -dm * ent : std::pow(dm, p.m) / (p.m - 1.0) * ent;

  double inter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[j] - x[i];
      row += p.k == 0.0 ? std::log(d) : std::pow(d, p.k);
    }
    inter += row;
  }
  if (p.k != 0.0) inter /= p.k;
  e.interaction = 2.0 * p.chi * dm * dm * inter;

  double v = 0.0;
  for (double xi : x) v += xi * xi;
  e.confinement = p.confinement() * 0.5 * dm * v;

  e.total = e.entropy + e.interaction + e.confinement;
  return e;
}

EnergyBreakdown discrete_energy(const ParticleState& s, const PhysParams& p) {
  return discrete_energy(s.positions(), p);
}

Eigen::VectorXd discrete_gradient(std::span<const double> x, const PhysParams& p) {
  require_ordered(x);
  const double dm = 1.0 / static_cast<double>(x.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.size()));
  add_diffusion(x, p, dm, g, nullptr);
  add_interaction(x, p, dm, g, nullptr);
  const double r = p.confinement();
  if (r != 0.0)
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += r * x[i];
  return g;
}

Eigen::VectorXd discrete_gradient(const ParticleState& s, const PhysParams& p) {
  return discrete_gradient(s.positions(), p);
}

void gradient_and_hessian(std::span<const double> x, const PhysParams& p, Eigen::VectorXd& grad,
                          Eigen::MatrixXd& hess) {
  require_ordered(x);
  const auto n = static_cast<Eigen::Index>(x.size());
  const double dm = 1.0 / static_cast<double>(x.size());
  grad.setZero(n);
  hess.setZero(n, n);
  add_diffusion(x, p, dm, grad, &hess);
  add_interaction(x, p, dm, grad, &hess);
  for (Eigen::Index c = 1; c < n; ++c)
    for (Eigen::Index r = 0; r < c; ++r) hess(r, c) = hess(c, r);
  const double r = p.confinement();
  if (r != 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      grad[i] += r * x[static_cast<std::size_t>(i)];
      hess(i, i) += r;
    }
  }
}

Eigen::MatrixXd discrete_hessian(std::span<const double> x, const PhysParams& p) {
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  gradient_and_hessian(x, p, g, h);
  return h;
}

Eigen::MatrixXd discrete_hessian(const ParticleState& s, const PhysParams& p) {
  return discrete_hessian(s.positions(), p);
}

double dissipation(const ParticleState& s, const PhysParams& p) {
  return discrete_gradient(s, p).squaredNorm() * s.mass_per_particle();
}

double virial_residual(const ParticleState& s, const PhysParams& p) {
  if (!is_fair_competition(p)) throw InvalidInput("virial identity needs m = 1 - k");
  if (p.k == 0.0) throw InvalidInput("virial identity is stated for k != 0");
  if (p.frame != Frame::Rescaled) throw InvalidInput("virial identity needs the rescaled frame");
  return discrete_energy(s, p).total - (0.5 - 1.0 / p.k) * second_moment(s);
}

SecondMomentRate second_moment_rate(const ParticleState& s, const PhysParams& p) {
  if (!is_fair_competition(p)) throw InvalidInput("second-moment law needs m = 1 - k");
  if (p.frame != Frame::Original) throw InvalidInput("second-moment law needs the original frame");
  const Eigen::VectorXd g = discrete_gradient(s, p);
  double xv = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) xv += s[i] * g[static_cast<Eigen::Index>(i)];
  return {-2.0 * s.mass_per_particle() * xv, 2.0 * (p.m - 1.0) * discrete_energy(s, p).total};
}

BlowupFunctional blowup_functional(const ParticleState& s, const PhysParams& p) {
  if (!is_fair_competition(p) || !(p.k < 0.0))
    throw InvalidInput("blow-up functional needs the porous-medium fair-competition case");
  if (p.frame != Frame::Original) throw InvalidInput("blow-up functional needs the original frame");
  const double v = second_moment(s);
  if (!(v > 0.0)) throw InvalidInput("blow-up functional needs a positive second moment");
  const ParticleState unit = dilate(s, std::sqrt(v));
  const double d = dissipation(unit, p);
  const double f = discrete_energy(unit, p).total;
  return {-d + (p.m - 1.0) * (p.m - 1.0) * f * f, d, f};
}

}  // namespace aggdiff
