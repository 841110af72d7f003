#include "aggdiff/csv_io.hpp"

#include <fstream>
#include <sstream>

namespace aggdiff {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void check_written(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return columns[i];
  throw InvalidInput("column '" + name + "' not found");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw IoError("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      try {
        table.columns[i].push_back(std::stod(fields[i]));
      } catch (const std::exception&) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": non-numeric field");
      }
    }
  }
  return table;
}

void write_snapshot(const std::filesystem::path& path, const ParticleState& s) {
  auto os = open_out(path);
  os << "eta,X\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << format_number(quantile_midpoint(i, s.size())) << ',' << format_number(s[i]) << '\n';
  check_written(os, path);
}

ParticleState read_snapshot(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  return ParticleState(t.column("X"));
}

void write_density(const std::filesystem::path& path, const ParticleState& s) {
  auto os = open_out(path);
  os << "x,rho\n";
  for (const auto& node : to_density(s))
    os << format_number(node.x) << ',' << format_number(node.rho) << '\n';
  check_written(os, path);
}

void write_timeseries(const std::filesystem::path& path, const RunOutcome& run) {
  const auto w_final = wasserstein_to_final(run);
  const auto rel_energy = relative_energy(run);
  auto os = open_out(path);
  os << "t,energy,entropy,interaction,confinement,second_moment,com,min_gap,max_density,step_dist,"
        "wasserstein_to_final,relative_energy\n";
  for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
    const auto& r = run.trajectory[i];
    for (double v : {r.t, r.energy.total, r.energy.entropy, r.energy.interaction,
                     r.energy.confinement, r.second_moment, r.center_of_mass, r.min_gap,
                     r.max_density, r.step_dist, w_final[i]})
      os << format_number(v) << ',';
    os << format_number(rel_energy[i]) << '\n';
  }
  check_written(os, path);
}

void write_sweep(const std::filesystem::path& path, const SweepResult& sweep) {
  auto os = open_out(path);
  os << "k,chi,status,final_time,final_energy\n";
  for (const auto& r : sweep.grid)
    os << format_number(r.k) << ',' << format_number(r.chi) << ',' << to_string(r.status) << ','
       << format_number(r.final_time) << ',' << format_number(r.final_energy) << '\n';
  check_written(os, path);
}

void write_chi_c(const std::filesystem::path& path, const SweepResult& sweep) {
  auto os = open_out(path);
  os << "k,chi_c,c_star_estimate\n";
  for (const auto& c : sweep.chi_c)
    os << format_number(c.k) << ',' << format_number(c.chi_c) << ','
       << format_number(c.c_star_estimate()) << '\n';
  check_written(os, path);
}

}  // namespace aggdiff
