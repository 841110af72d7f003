#include "aggdiff/model.hpp"

#include <cmath>
#include <sstream>

namespace aggdiff {

void PhysParams::validate() const {
  std::ostringstream msg;
  if (!(m > 0.0) || !std::isfinite(m)) msg << "m must be positive (got " << m << "); ";
  if (!(k > -1.0 && k < 1.0)) msg << "k must lie in (-1, 1) (got " << k << "); ";
  if (!(chi > 0.0) || !std::isfinite(chi)) msg << "chi must be positive (got " << chi << "); ";
  const std::string s = msg.str();
  if (!s.empty()) throw InvalidInput("invalid physical parameters: " + s.substr(0, s.size() - 2));
}

PhysParams PhysParams::fair(double k, double chi, Frame frame) {
  return PhysParams{1.0 - k, k, chi, frame};
}

bool is_fair_competition(const PhysParams& p) {
  return std::abs(p.m + p.k - 1.0) <= kFairCompetitionTol;
}

Regime classify_regime(const PhysParams& p) {
  p.validate();
  if (is_fair_competition(p)) {
    FairCase c = p.k < 0.0 ? FairCase::PorousMedium
                 : p.k == 0.0 ? FairCase::Logarithmic
                              : FairCase::FastDiffusion;
    return {RegimeKind::FairCompetition, c};
  }
  const double excess = (p.m - 1.0) + p.k;
  return {excess > 0.0 ? RegimeKind::DiffusionDominated : RegimeKind::AttractionDominated,
          FairCase::NotApplicable};
}

double kernel_value(double k, double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) {
    if (k > 0.0) return 0.0;
    throw SingularConfiguration("kernel evaluated at x = 0 for k <= 0");
  }
  if (k == 0.0) return std::log(ax);
  return std::pow(ax, k) / k;
}

double entropy_value(double m, double rho) {
  if (!(rho >= 0.0)) throw InvalidInput("density value must be non-negative");
  if (m == 1.0) return rho == 0.0 ? 0.0 : rho * std::log(rho);
  return std::pow(rho, m) / (m - 1.0);
}

std::string to_string(RegimeKind r) {
  switch (r) {
    case RegimeKind::FairCompetition: return "FairCompetition";
    case RegimeKind::DiffusionDominated: return "DiffusionDominated";
    case RegimeKind::AttractionDominated: return "AttractionDominated";
  }
  return "?";
}

std::string to_string(FairCase c) {
  switch (c) {
    case FairCase::PorousMedium: return "PorousMedium";
    case FairCase::Logarithmic: return "Logarithmic";
    case FairCase::FastDiffusion: return "FastDiffusion";
    case FairCase::NotApplicable: return "NotApplicable";
  }
  return "?";
}

std::string to_string(Frame f) { return f == Frame::Rescaled ? "rescaled" : "original"; }

}  // namespace aggdiff
