#include "aggdiff/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aggdiff/model.hpp"

namespace aggdiff {

ParticleState::ParticleState(std::vector<double> positions, double time)
    : positions_(std::move(positions)), time_(time) {
  if (positions_.size() < 2) throw InvalidInput("a particle state needs at least two particles");
  if (!std::isfinite(time_) || time_ < 0.0) throw InvalidInput("state time must be finite and >= 0");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i]))
      throw InvalidInput("non-finite particle position at index " + std::to_string(i));
    if (i > 0 && !(positions_[i] > positions_[i - 1]))
      throw InvalidInput("particle positions must be strictly increasing (index " +
                         std::to_string(i) + ")");
  }
}

ParticleState ParticleState::with_time(double t) const { return ParticleState(positions_, t); }

double ParticleState::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < positions_.size(); ++i)
    g = std::min(g, positions_[i + 1] - positions_[i]);
  return g;
}

double quantile_midpoint(std::size_t i, std::size_t n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

ParticleState from_quantile_function(const QuantileFunction& q, std::size_t n) {
  if (n < 2) throw InvalidInput("particle count must be at least 2");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = q(quantile_midpoint(i, n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) throw InvalidInput("quantile function is not finite at a midpoint");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw InvalidInput("quantile function is not strictly increasing at the midpoints");
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  const double shift = sum / static_cast<double>(n);
  for (double& v : x) v -= shift;
  return ParticleState(std::move(x));
}

std::vector<DensityNode> to_density(const ParticleState& s) {
  const auto x = s.positions();
  const double dm = s.mass_per_particle();
  std::vector<DensityNode> out;
  out.reserve(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    out.push_back({0.5 * (x[i] + x[i + 1]), dm / (x[i + 1] - x[i])});
  return out;
}

double wasserstein(const ParticleState& a, const ParticleState& b) {
  if (a.size() != b.size())
    throw InvalidInput("wasserstein: states have different particle counts");
  const auto x = a.positions();
  const auto y = b.positions();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum * a.mass_per_particle());
}

double center_of_mass(const ParticleState& s) {
  double sum = 0.0;
  for (double v : s.positions()) sum += v;
  return sum * s.mass_per_particle();
}

double second_moment(const ParticleState& s) {
  double sum = 0.0;
  for (double v : s.positions()) sum += v * v;
  return sum * s.mass_per_particle();
}

double max_density(const ParticleState& s) { return s.mass_per_particle() / s.min_gap(); }

Moments moments(const ParticleState& s, double m) {
  if (m == 0.0) throw InvalidInput("L^m norm needs m != 0");
  const auto x = s.positions();
  const double dm = s.mass_per_particle();
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double gap = x[i + 1] - x[i];
    integral += std::pow(dm / gap, m) * gap;
  }
  return {center_of_mass(s), second_moment(s), std::pow(integral, 1.0 / m)};
}

ParticleState dilate(const ParticleState& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("dilation factor must be positive");
  std::vector<double> x(s.positions().begin(), s.positions().end());
  for (double& v : x) v /= lambda;
  return ParticleState(std::move(x), s.time());
}

ParticleState translate(const ParticleState& s, double shift) {
  std::vector<double> x(s.positions().begin(), s.positions().end());
  for (double& v : x) v += shift;
  return ParticleState(std::move(x), s.time());
}

}  // namespace aggdiff
