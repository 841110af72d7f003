#pragma once

#include <cstddef>
#include <string>

#include "aggdiff/model.hpp"
#include "aggdiff/state.hpp"

namespace aggdiff {

/// Centered normal density with the given variance.
ParticleState gaussian_init(double variance, std::size_t n);

/// Uniform density on [-R, R].
ParticleState indicator_init(double radius, std::size_t n);

/// Dilation lambda * rho0(lambda x) of Cauchy's density rho0 = 1/(pi (1 + x^2)).
ParticleState cauchy_init(double lambda, std::size_t n);

/// Standard normal CDF and its inverse (bracketed root finding on the CDF).
double normal_cdf(double x);
double normal_quantile(double eta);

/// Optimal constant of the HLS inequality in the conformal case p = q = m,
/// for dimension `dim` and kernel homogeneity k.
double hls_constant(int dim, double k);

/// Parameters of the HLS optimiser rho(x) = c (lambda / (lambda^2 + x^2))^{1/m}
/// in one dimension with m = 2 / (2 + k).
struct HlsProfile {
  double c_hls;        ///< optimal HLS constant
  double c_star;       ///< amplitude of the critical point at unit mass
  double lambda_star;  ///< scale of the critical point at unit mass
  double c_scale;      ///< c0 / c_star
  double c0;           ///< amplitude actually used
  double lambda0;      ///< scale giving c0 unit mass
  double k;
  double m;

  double density(double x) const;
  /// Cumulative distribution of the unit-mass profile.
  double cdf(double x) const;
};

/// Throws InvalidInput unless k in (-1, 0) and m = 2 / (2 + k).
HlsProfile hls_profile(const PhysParams& p, double c_scale = 1.0);

struct HlsInit {
  ParticleState state;
  HlsProfile profile;
};

HlsInit hls_init(const PhysParams& p, double c_scale, std::size_t n);

/// Builds the initial state named by `spec`: gaussian:<variance>,
/// indicator:<R>, cauchy:<lambda> or hls:<c_scale>.
ParticleState make_initial_state(const std::string& spec, const PhysParams& p, std::size_t n);

}  // namespace aggdiff
