#pragma once

#include <functional>
#include <span>
#include <vector>

namespace aggdiff {

/// Equal-mass particle discretisation of a quantile function (pseudo-inverse
/// of the cumulative distribution). Positions are strictly increasing, each
/// particle carries mass 1/n, and the state is immutable once built.
class ParticleState {
 public:
  /// Throws InvalidInput if n < 2, any position is non-finite, or the
  /// positions are not strictly increasing.
  explicit ParticleState(std::vector<double> positions, double time = 0.0);

  std::span<const double> positions() const { return positions_; }
  const std::vector<double>& position_vector() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  double operator[](std::size_t i) const { return positions_[i]; }
  double mass_per_particle() const { return 1.0 / static_cast<double>(positions_.size()); }
  double time() const { return time_; }

  ParticleState with_time(double t) const;
  double min_gap() const;

 private:
  std::vector<double> positions_;
  double time_;
};

/// Mass fraction at the centre of particle i (0-based): (i + 1/2) / n.
double quantile_midpoint(std::size_t i, std::size_t n);

using QuantileFunction = std::function<double(double)>;

/// Samples q at the mass midpoints and shifts the result so the discrete
/// centre of mass is zero.
ParticleState from_quantile_function(const QuantileFunction& q, std::size_t n);

struct DensityNode {
  double x;    ///< interval midpoint
  double rho;  ///< mass per particle / gap
};

/// Piecewise-constant density between consecutive particles (n - 1 nodes).
std::vector<DensityNode> to_density(const ParticleState& s);

/// L2((0,1)) distance between the two quantile functions, which equals the
/// 2-Wasserstein distance of the underlying densities.
double wasserstein(const ParticleState& a, const ParticleState& b);

struct Moments {
  double center_of_mass;
  double second_moment;
  double lm_norm;
};

/// Centre of mass, second moment and the L^m norm of the reconstructed
/// piecewise-constant density.
Moments moments(const ParticleState& s, double m);
double second_moment(const ParticleState& s);
double center_of_mass(const ParticleState& s);
double max_density(const ParticleState& s);

/// Mass-preserving dilation rho_l(x) = l rho(l x), i.e. X -> X / l.
ParticleState dilate(const ParticleState& s, double lambda);
ParticleState translate(const ParticleState& s, double shift);

}  // namespace aggdiff
