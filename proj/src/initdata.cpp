#include "aggdiff/initdata.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <vector>

namespace aggdiff {

namespace {

constexpr double kPi = std::numbers::pi;

/// Evaluates q on the lower half of the mass midpoints and mirrors, so the
/// result is exactly antisymmetric and its centre of mass exactly zero.
ParticleState symmetric_state(const QuantileFunction& lower_q, std::size_t n) {
  if (n < 2) throw InvalidInput("particle count must be at least 2");
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n / 2; ++i) {
    x[i] = lower_q(quantile_midpoint(i, n));
    x[n - 1 - i] = -x[i];
  }
  return ParticleState(std::move(x));
}

template <class F>
double solve_bracketed(F f, double lo, double hi, double abs_tol) {
  boost::uintmax_t max_iter = 200;
  auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
  return 0.5 * (a + b);
}

// Tail integral int_0^a sin(psi)^k d psi. With x = lambda cot(a) it is the
// mass beyond x of the HLS profile, up to normalisation.
double hls_tail(double k, double a) {
  if (a <= 0.0) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([k](double psi) { return std::pow(std::sin(psi), k); }, 0.0, a,
                              1e-13);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("normal quantile needs eta in (0, 1)");
  if (eta == 0.5) return 0.0;
  if (eta > 0.5) return -normal_quantile(1.0 - eta);
  return solve_bracketed([eta](double x) { return normal_cdf(x) - eta; }, -40.0, 0.0, 1e-13);
}

ParticleState gaussian_init(double variance, std::size_t n) {
  if (!(variance > 0.0)) throw InvalidInput("Gaussian variance must be positive");
  const double sigma = std::sqrt(variance);
  return symmetric_state([sigma](double eta) { return sigma * normal_quantile(eta); }, n);
}

ParticleState indicator_init(double radius, std::size_t n) {
  if (!(radius > 0.0)) throw InvalidInput("indicator radius must be positive");
  return from_quantile_function([radius](double eta) { return radius * (2.0 * eta - 1.0); }, n);
}

ParticleState cauchy_init(double lambda, std::size_t n) {
  if (!(lambda > 0.0)) throw InvalidInput("Cauchy dilation must be positive");
  return symmetric_state([lambda](double eta) { return std::tan(kPi * (eta - 0.5)) / lambda; }, n);
}

double hls_constant(int dim, double k) {
  const double nd = dim;
  return std::pow(kPi, -k / 2.0) * (std::tgamma((nd + k) / 2.0) / std::tgamma(nd + k / 2.0)) *
         std::pow(std::tgamma(nd / 2.0) / std::tgamma(nd), -(nd + k) / nd);
}

HlsProfile hls_profile(const PhysParams& p, double c_scale) {
  p.validate();
  if (!(p.k < 0.0)) throw InvalidInput("HLS initial data needs k in (-1, 0)");
  if (std::abs(p.m - 2.0 / (2.0 + p.k)) > 1e-12)
    throw InvalidInput("HLS initial data needs the conformal exponent m = 2/(2+k)");
  if (!(c_scale > 0.0)) throw InvalidInput("HLS amplitude multiplier must be positive");

  HlsProfile h{};
  h.k = p.k;
  h.m = p.m;
  h.c_hls = hls_constant(1, p.k);
  h.c_star = std::pow(kPi, -1.0 / p.m) * std::pow(p.chi * h.c_hls, 1.0 / (p.m - 2.0));
  h.c_scale = c_scale;
  h.c0 = c_scale * h.c_star;
  // Mass of c (l / (l^2 + x^2))^{1/m} is c l^{-k/2} times this integral.
  const double unit_mass = 2.0 * hls_tail(p.k, kPi / 2.0);
  h.lambda_star = std::pow(h.c_star * unit_mass, 2.0 / p.k);
  h.lambda0 = std::pow(h.c0 * unit_mass, 2.0 / p.k);
  return h;
}

double HlsProfile::density(double x) const {
  return c0 * std::pow(lambda0 / (lambda0 * lambda0 + x * x), 1.0 / m);
}

double HlsProfile::cdf(double x) const {
  if (x == 0.0) return 0.5;
  const double half = hls_tail(k, kPi / 2.0);
  const double tail = hls_tail(k, std::atan(lambda0 / std::abs(x))) / (2.0 * half);
  return x > 0.0 ? 1.0 - tail : tail;
}

HlsInit hls_init(const PhysParams& p, double c_scale, std::size_t n) {
  const HlsProfile h = hls_profile(p, c_scale);
  const double total = 2.0 * hls_tail(h.k, kPi / 2.0);
  const double k = h.k;
  auto lower_q = [&](double eta) {
    // Mass left of x = -lambda0 cot(a) is tail(a) / total.
    const double target = eta * total;
    const double a = solve_bracketed([&](double s) { return hls_tail(k, s) - target; }, 0.0,
                                     kPi / 2.0, 1e-15);
    return -h.lambda0 / std::tan(a);
  };
  return {symmetric_state(lower_q, n), h};
}

ParticleState make_initial_state(const std::string& spec, const PhysParams& p, std::size_t n) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidInput("initial data spec must be <kind>:<value>");
  const std::string kind = spec.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse the value in initial data spec '" + spec + "'");
  }
  if (kind == "gaussian") return gaussian_init(value, n);
  if (kind == "indicator") return indicator_init(value, n);
  if (kind == "cauchy") return cauchy_init(value, n);
  if (kind == "hls") return hls_init(p, value, n).state;
  throw InvalidInput("unknown initial data kind '" + kind + "'");
}

}  // namespace aggdiff
