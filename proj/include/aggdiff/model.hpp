#pragma once

#include <stdexcept>
#include <string>

namespace aggdiff {

/// Raised when a parameter or input violates its documented domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when particles coincide (or a kernel is evaluated at a singular
/// point), so that gaps or interaction terms are undefined.
class SingularConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Frame { Original = 0, Rescaled = 1 };

/// Model triple (m, k, chi) plus the choice of frame. The rescaled frame adds
/// the quadratic confinement |x|^2/2 to the free energy.
struct PhysParams {
  double m = 1.0;    ///< diffusion exponent, m > 0
  double k = 0.0;    ///< kernel homogeneity, -1 < k < 1
  double chi = 1.0;  ///< interaction strength, chi > 0
  Frame frame = Frame::Original;

  /// 0 in the original frame, 1 in the rescaled one.
  double confinement() const { return frame == Frame::Rescaled ? 1.0 : 0.0; }
  bool log_entropy() const { return m == 1.0; }
  bool log_kernel() const { return k == 0.0; }

  /// Throws InvalidInput unless m > 0, chi > 0 and -1 < k < 1.
  void validate() const;

  /// Fair-competition parameters m = 1 - k.
  static PhysParams fair(double k, double chi, Frame frame);
};

enum class RegimeKind { FairCompetition, DiffusionDominated, AttractionDominated };
enum class FairCase { PorousMedium, Logarithmic, FastDiffusion, NotApplicable };

struct Regime {
  RegimeKind regime;
  FairCase case_tag;
};

/// Tolerance on |m + k - 1| below which parameters count as fair competition.
inline constexpr double kFairCompetitionTol = 1e-12;

Regime classify_regime(const PhysParams& p);
bool is_fair_competition(const PhysParams& p);

/// W_k(x) = |x|^k / k, or log|x| when k == 0.
double kernel_value(double k, double x);

/// U_m(rho) = rho^m / (m - 1), or rho log rho when m == 1 (0 log 0 = 0).
double entropy_value(double m, double rho);

std::string to_string(RegimeKind r);
std::string to_string(FairCase c);
std::string to_string(Frame f);

}  // namespace aggdiff
