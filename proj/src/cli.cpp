#include "aggdiff/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "aggdiff/analysis.hpp"
#include "aggdiff/csv_io.hpp"
#include "aggdiff/dynamics.hpp"
#include "aggdiff/initdata.hpp"

namespace aggdiff {

namespace fs = std::filesystem;

namespace {

using Settings = std::map<std::string, std::string>;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

void write_config_echo(const fs::path& dir, const Settings& settings) {
  const fs::path path = dir / "config_echo.txt";
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& [key, value] : settings) os << key << '=' << value << '\n';
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

void write_outcome(const fs::path& dir, const RunOutcome& run) {
  const fs::path path = dir / "outcome.txt";
  std::ofstream os(path);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  os << "status=" << to_string(run.status) << '\n'
     << "final_time=" << format_number(run.final_state.time()) << '\n'
     << "accepted_steps=" << run.accepted_steps << '\n'
     << "halvings=" << run.halvings << '\n'
     << "final_dt=" << format_number(run.final_dt) << '\n'
     << "note=" << run.note << '\n';
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

/// Expands `--config FILE [--out DIR]` into the argument list that produced
/// FILE, with an optional replacement output directory.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.size() < 2) throw InvalidInput("--config needs a file argument");
  std::ifstream is(args[1]);
  if (!is) throw IoError("cannot read config file '" + args[1] + "'");
  Settings settings;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line without '=': " + line);
    settings[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (std::size_t i = 2; i < args.size(); i += 2) {
    if (args[i] != "--out" || i + 1 >= args.size())
      throw InvalidInput("only --out may follow --config");
    settings["out"] = args[i + 1];
  }
  const auto cmd = settings.find("command");
  if (cmd == settings.end()) throw InvalidInput("config file has no command entry");
  std::vector<std::string> out{cmd->second};
  for (const auto& [key, value] : settings) {
    if (key == "command") continue;
    if (key == "frame") {
      out.push_back(value == "rescaled" ? "--rescaled" : "--original");
    } else if (value == "true") {
      out.push_back("--" + key);
    } else if (value != "false") {
      out.push_back("--" + key + "=" + value);
    }
  }
  return out;
}

struct NumFlags {
  NumParams np;
  void add(CLI::App* app, bool with_stride) {
    app->add_option("--dt", np.dt, "time step")->capture_default_str();
    app->add_option("--tmax", np.t_max, "final time")->capture_default_str();
    app->add_option("--steady-tol", np.steady_tol, "steady-state tolerance")->capture_default_str();
    app->add_option("--newton-tol", np.newton_tol, "Newton residual tolerance")->capture_default_str();
    app->add_option("--max-halvings", np.max_halvings, "time-step halvings before blow-up")
        ->capture_default_str();
    if (with_stride)
      app->add_option("--snapshot-stride", np.snapshot_stride, "steps between recorded samples")
          ->capture_default_str();
  }
  void echo(Settings& s, bool with_stride) const {
    s["dt"] = format_number(np.dt);
    s["tmax"] = format_number(np.t_max);
    s["steady-tol"] = format_number(np.steady_tol);
    s["newton-tol"] = format_number(np.newton_tol);
    s["max-halvings"] = std::to_string(np.max_halvings);
    if (with_stride) s["snapshot-stride"] = std::to_string(np.snapshot_stride);
  }
};

}  // namespace

int parse_and_run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = (!raw_args.empty() && raw_args[0] == "--config") ? expand_config(raw_args) : raw_args;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Aggregation-diffusion gradient flows with quantile particles", "aggdiff"};
  app.require_subcommand(1);

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "run one simulation");
  PhysParams phys{1.5, -0.5, 0.2, Frame::Original};
  std::size_t n = 100;
  std::string init = "gaussian:0.32";
  std::string out_dir;
  NumFlags evolve_num;
  bool rescaled = false;
  evolve_cmd->add_option("--m", phys.m, "diffusion exponent")->required();
  evolve_cmd->add_option("--k", phys.k, "kernel homogeneity")->required();
  evolve_cmd->add_option("--chi", phys.chi, "interaction strength")->required();
  auto* resc_flag = evolve_cmd->add_flag("--rescaled", rescaled, "rescaled variables (r = 1)");
  auto* orig_flag = evolve_cmd->add_flag("--original", "original variables (r = 0, default)");
  resc_flag->excludes(orig_flag);
  evolve_cmd->add_option("--n", n, "particle count")->capture_default_str();
  evolve_cmd->add_option("--init", init, "gaussian:<var> | indicator:<R> | cauchy:<l> | hls:<c>")
      ->capture_default_str();
  evolve_cmd->add_option("--out", out_dir, "output directory")->required();
  evolve_num.add(evolve_cmd, true);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "critical-strength sweep, m = 1 - k, rescaled");
  std::string k_grid_spec;
  std::string chi_grid_spec;
  std::size_t sweep_n = 100;
  std::string sweep_init = "gaussian:0.32";
  std::string sweep_out;
  int jobs = 1;
  bool warm = false;
  NumFlags sweep_num;
  sweep_cmd->add_option("--k-grid", k_grid_spec, "min:max:step")->required();
  sweep_cmd->add_option("--chi-grid", chi_grid_spec, "min:max:step")->required();
  sweep_cmd->add_option("--n", sweep_n, "particle count")->capture_default_str();
  sweep_cmd->add_option("--init", sweep_init, "initial data")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep_cmd->add_flag("--warm-start", warm, "start each k from the previous steady state");
  sweep_num.add(sweep_cmd, false);

  // rate
  auto* rate_cmd = app.add_subcommand("rate", "fit an exponential rate to a timeseries column");
  std::string rate_in;
  std::string column = "wasserstein_to_final";
  std::optional<double> t0;
  std::optional<double> t1;
  std::string rate_out;
  rate_cmd->add_option("--in", rate_in, "timeseries CSV")->required();
  rate_cmd->add_option("--column", column, "column to fit")->capture_default_str();
  rate_cmd->add_option("--t0", t0, "window start");
  rate_cmd->add_option("--t1", t1, "window end");
  rate_cmd->add_option("--out", rate_out, "optional output directory");

  // reconstruct
  auto* recon_cmd =
      app.add_subcommand("reconstruct", "self-similar solution from a rescaled steady state");
  std::string recon_in;
  double recon_k = 0.0;
  double recon_t = 0.0;
  std::string recon_out;
  recon_cmd->add_option("--in", recon_in, "snapshot CSV (eta,X)")->required();
  recon_cmd->add_option("--k", recon_k, "kernel homogeneity")->required();
  recon_cmd->add_option("--t", recon_t, "time in original variables")->required();
  recon_cmd->add_option("--out", recon_out, "output directory")->required();

  try {
    std::vector<const char*> argv{"aggdiff"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : kExitUsage;
  }

  try {
    if (evolve_cmd->parsed()) {
      phys.frame = rescaled ? Frame::Rescaled : Frame::Original;
      phys.validate();
      evolve_num.np.validate();
      Settings s{{"command", "evolve"},  {"m", format_number(phys.m)},
                 {"k", format_number(phys.k)}, {"chi", format_number(phys.chi)},
                 {"frame", to_string(phys.frame)}, {"n", std::to_string(n)},
                 {"init", init},           {"out", out_dir}};
      evolve_num.echo(s, true);
      const ParticleState s0 = make_initial_state(init, phys, n);
      prepare_output_dir(out_dir);
      write_config_echo(out_dir, s);
      const RunOutcome run = evolve(s0, phys, evolve_num.np);
      write_timeseries(fs::path(out_dir) / "timeseries.csv", run);
      write_snapshot(fs::path(out_dir) / "snapshot_initial.csv", s0);
      write_snapshot(fs::path(out_dir) / "snapshot_final.csv", run.final_state);
      write_density(fs::path(out_dir) / "density_initial.csv", s0);
      write_density(fs::path(out_dir) / "density_final.csv", run.final_state);
      write_outcome(out_dir, run);
      out << "status=" << to_string(run.status) << " t=" << format_number(run.final_state.time())
          << " steps=" << run.accepted_steps << '\n';
    } else if (sweep_cmd->parsed()) {
      sweep_num.np.validate();
      const auto k_grid = parse_grid(k_grid_spec);
      const auto chi_grid = parse_grid(chi_grid_spec);
      Settings s{{"command", "sweep"},       {"k-grid", k_grid_spec},
                 {"chi-grid", chi_grid_spec}, {"n", std::to_string(sweep_n)},
                 {"init", sweep_init},        {"out", sweep_out},
                 {"jobs", std::to_string(jobs)}, {"warm-start", warm ? "true" : "false"}};
      sweep_num.echo(s, false);
      prepare_output_dir(sweep_out);
      write_config_echo(sweep_out, s);
      const SweepResult res = critical_chi_sweep(k_grid, chi_grid, sweep_num.np, sweep_init,
                                                 sweep_n, SweepOptions{jobs, warm});
      write_sweep(fs::path(sweep_out) / "sweep.csv", res);
      write_chi_c(fs::path(sweep_out) / "chi_c.csv", res);
      for (const auto& w : res.warnings) err << "warning: " << w << '\n';
      for (const auto& c : res.chi_c)
        out << "k=" << format_number(c.k) << " chi_c=" << format_number(c.chi_c) << '\n';
    } else if (rate_cmd->parsed()) {
      const CsvTable table = read_csv(rate_in);
      const auto& t = table.column("t");
      const auto& y = table.column(column);
      auto window = default_rate_window(t, y);
      if (t0) window.first = *t0;
      if (t1) window.second = *t1;
      const RateFit fit = fit_exponential_rate(t, y, window.first, window.second);
      const std::string record = format_number(fit.slope) + "," + format_number(fit.intercept) +
                                 "," + format_number(fit.t0) + "," + format_number(fit.t1) + "," +
                                 format_number(fit.residual);
      out << "slope,intercept,t0,t1,residual\n" << record << '\n';
      if (!rate_out.empty()) {
        Settings s{{"command", "rate"}, {"in", rate_in}, {"column", column}, {"out", rate_out}};
        if (t0) s["t0"] = format_number(*t0);
        if (t1) s["t1"] = format_number(*t1);
        prepare_output_dir(rate_out);
        write_config_echo(rate_out, s);
        std::ofstream os(fs::path(rate_out) / "rate.csv");
        os << "slope,intercept,t0,t1,residual\n" << record << '\n';
        if (!os.flush()) throw IoError("failed writing rate.csv");
      }
    } else if (recon_cmd->parsed()) {
      const ParticleState u = read_snapshot(recon_in);
      const ParticleState rec = self_similar_reconstruct(u, recon_k, recon_t);
      Settings s{{"command", "reconstruct"}, {"in", recon_in}, {"k", format_number(recon_k)},
                 {"t", format_number(recon_t)}, {"out", recon_out}};
      prepare_output_dir(recon_out);
      write_config_echo(recon_out, s);
      write_snapshot(fs::path(recon_out) / "snapshot_reconstructed.csv", rec);
      write_density(fs::path(recon_out) / "density_reconstructed.csv", rec);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}

}  // namespace aggdiff
