#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aggdiff/dynamics.hpp"
#include "aggdiff/model.hpp"
#include "aggdiff/state.hpp"

namespace aggdiff {

struct RateFit {
  double slope;      ///< d/dt log y
  double intercept;  ///< log y at t = 0
  double t0;
  double t1;
  double residual;   ///< root-mean-square misfit in log space
  std::size_t samples;
};

/// Least-squares fit of log y = slope t + intercept over samples with
/// t in [t0, t1]. Needs at least five samples, all with y > 0.
RateFit fit_exponential_rate(std::span<const double> t, std::span<const double> y, double t0,
                             double t1);

/// Default fit window: the central 80% of the leading run of positive
/// samples, with the last few samples before the end of the series dropped
/// (they sit next to the reference state of a distance-to-final series).
std::pair<double, double> default_rate_window(std::span<const double> t,
                                              std::span<const double> y);

/// W(rho(t), rho_final) for every recorded snapshot of a run.
std::vector<double> wasserstein_to_final(const RunOutcome& run);

/// |F(t) - F_final| for every recorded row of a run.
std::vector<double> relative_energy(const RunOutcome& run);

struct SweepRow {
  double k;
  double chi;
  RunStatus status;
  double final_time;
  double final_energy;
};

struct CriticalChi {
  double k;
  double chi_c;  ///< largest chi on the grid that reached Steady (NaN if none)
  double c_star_estimate() const { return 1.0 / chi_c; }
};

struct SweepResult {
  std::vector<SweepRow> grid;          ///< sorted by (k, chi)
  std::vector<CriticalChi> chi_c;      ///< sorted by k
  std::vector<std::string> warnings;   ///< non-monotone blow-up patterns
};

struct SweepOptions {
  int jobs = 1;
  /// Chains runs along decreasing k for each chi, starting each run from
  /// the previous steady state.
  bool warm_start = false;
};

/// Runs the fair-competition model m = 1 - k in the rescaled frame for every
/// (k, chi) pair and extracts the numerical critical strength per k.
SweepResult critical_chi_sweep(std::span<const double> k_grid, std::span<const double> chi_grid,
                               const NumParams& np, const std::string& init_spec, std::size_t n,
                               const SweepOptions& opts = {});

/// Inclusive grid min:max:step, values snapped to 12 decimals.
std::vector<double> parse_grid(const std::string& spec);

/// Maps a steady state of the rescaled flow back to the self-similar
/// solution of the original flow at time t.
ParticleState self_similar_reconstruct(const ParticleState& u, double k, double t);

}  // namespace aggdiff
