#include "aggdiff/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "aggdiff/initdata.hpp"

namespace aggdiff {

RateFit fit_exponential_rate(std::span<const double> t, std::span<const double> y, double t0,
                             double t1) {
  if (t.size() != y.size()) throw InvalidInput("rate fit: t and y differ in length");
  if (!(t0 < t1)) throw InvalidInput("rate fit: window needs t0 < t1");
  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(y[i] > 0.0)) throw InvalidInput("rate fit: non-positive value inside the window");
    ts.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  if (ts.size() < 5) throw InvalidInput("rate fit: fewer than 5 samples inside the window");

  const double cnt = static_cast<double>(ts.size());
  double mt = 0.0;
  double ml = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= cnt;
  ml /= cnt;
  double stt = 0.0;
  double stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
  }
  if (!(stt > 0.0)) throw InvalidInput("rate fit: all samples share one time");
  const double slope = stl / stt;
  const double intercept = ml - slope * mt;
  double sse = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = ls[i] - (slope * ts[i] + intercept);
    sse += e * e;
  }
  return {slope, intercept, t0, t1, std::sqrt(sse / cnt), ts.size()};
}

std::pair<double, double> default_rate_window(std::span<const double> t,
                                              std::span<const double> y) {
  std::size_t end = 0;
  while (end < y.size() && y[end] > 0.0) ++end;
  // Drop the tail next to the reference state.
  const std::size_t guard = std::max<std::size_t>(3, end / 20);
  end = end > guard ? end - guard : 0;
  if (end < 5) throw InvalidInput("rate fit: too few positive samples for a default window");
  const std::size_t skip = end / 10;
  return {t[skip], t[end - 1 - skip]};
}

std::vector<double> wasserstein_to_final(const RunOutcome& run) {
  std::vector<double> out;
  out.reserve(run.snapshots.size());
  for (const auto& s : run.snapshots) out.push_back(wasserstein(s, run.final_state));
  return out;
}

std::vector<double> relative_energy(const RunOutcome& run) {
  std::vector<double> out;
  out.reserve(run.trajectory.size());
  const double last = run.trajectory.back().energy.total;
  for (const auto& row : run.trajectory) out.push_back(std::abs(row.energy.total - last));
  return out;
}

namespace {

SweepRow summarize(double k, double chi, const RunOutcome& run) {
  return {k, chi, run.status, run.final_state.time(), run.trajectory.back().energy.total};
}

template <class Task>
void run_parallel(std::size_t count, int jobs, const Task& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult critical_chi_sweep(std::span<const double> k_grid, std::span<const double> chi_grid,
                               const NumParams& np, const std::string& init_spec, std::size_t n,
                               const SweepOptions& opts) {
  if (k_grid.empty() || chi_grid.empty()) throw InvalidInput("sweep grids must be non-empty");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()) ||
      !std::is_sorted(chi_grid.begin(), chi_grid.end()))
    throw InvalidInput("sweep grids must be ascending");
  np.validate();
  for (double k : k_grid)
    for (double chi : chi_grid) PhysParams::fair(k, chi, Frame::Rescaled).validate();

  SweepResult result;
  const std::size_t nk = k_grid.size();
  const std::size_t nc = chi_grid.size();
  result.grid.resize(nk * nc);

  if (!opts.warm_start) {
    run_parallel(nk * nc, opts.jobs, [&](std::size_t idx) {
      const double k = k_grid[idx / nc];
      const double chi = chi_grid[idx % nc];
      const PhysParams p = PhysParams::fair(k, chi, Frame::Rescaled);
      const RunOutcome run = evolve(make_initial_state(init_spec, p, n), p, np);
      result.grid[idx] = summarize(k, chi, run);
    });
  } else {
    run_parallel(nc, opts.jobs, [&](std::size_t c) {
      const double chi = chi_grid[c];
      std::optional<ParticleState> previous;
      for (std::size_t ki = nk; ki-- > 0;) {
        const double k = k_grid[ki];
        const PhysParams p = PhysParams::fair(k, chi, Frame::Rescaled);
        const ParticleState start =
            previous ? previous->with_time(0.0) : make_initial_state(init_spec, p, n);
        const RunOutcome run = evolve(start, p, np);
        result.grid[ki * nc + c] = summarize(k, chi, run);
        if (run.status == RunStatus::Steady)
          previous = run.final_state;
        else
          previous.reset();
      }
    });
  }

  std::sort(result.grid.begin(), result.grid.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.k != b.k ? a.k < b.k : a.chi < b.chi;
  });

  for (std::size_t ki = 0; ki < nk; ++ki) {
    double chi_c = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> first_blowup;
    for (std::size_t c = 0; c < nc; ++c) {
      const SweepRow& row = result.grid[ki * nc + c];
      if (row.status == RunStatus::Steady) {
        chi_c = row.chi;
        if (first_blowup && row.k < 0.0) {
          std::ostringstream w;
          w.precision(17);
          w << "k=" << row.k << ": Steady at chi=" << row.chi << " above BlowUp at chi="
            << *first_blowup;
          result.warnings.push_back(w.str());
        }
      } else if (row.status == RunStatus::BlowUp && !first_blowup) {
        first_blowup = row.chi;
      }
    }
    result.chi_c.push_back({k_grid[ki], chi_c});
  }
  return result;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse grid '" + spec + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw InvalidInput("grid must be <value> or <min>:<max>:<step>");
  const double lo = parts[0];
  const double hi = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || hi < lo) throw InvalidInput("grid needs step > 0 and max >= min");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
  return out;
}

ParticleState self_similar_reconstruct(const ParticleState& u, double k, double t) {
  if (k == 2.0) throw InvalidInput("self-similar scaling is undefined for k = 2");
  if (!(t >= 0.0)) throw InvalidInput("reconstruction time must be non-negative");
  const double factor = std::pow((2.0 - k) * t + 1.0, 1.0 / (2.0 - k));
  std::vector<double> x(u.positions().begin(), u.positions().end());
  for (double& v : x) v *= factor;
  return ParticleState(std::move(x), t);
}

}  // namespace aggdiff
