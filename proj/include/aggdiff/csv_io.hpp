#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aggdiff/analysis.hpp"
#include "aggdiff/dynamics.hpp"
#include "aggdiff/state.hpp"

namespace aggdiff {

/// Thrown when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric text with 17 significant digits.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Header `eta,X`, one row per particle.
void write_snapshot(const std::filesystem::path& path, const ParticleState& s);
ParticleState read_snapshot(const std::filesystem::path& path);

/// Header `x,rho`, one row per interval.
void write_density(const std::filesystem::path& path, const ParticleState& s);

/// One row per recorded sample, with the Wasserstein distance to the final
/// state and the relative energy appended as the last two columns.
void write_timeseries(const std::filesystem::path& path, const RunOutcome& run);

void write_sweep(const std::filesystem::path& path, const SweepResult& sweep);
void write_chi_c(const std::filesystem::path& path, const SweepResult& sweep);

}  // namespace aggdiff
