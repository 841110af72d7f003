#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggdiff/cli.hpp"
#include "aggdiff/csv_io.hpp"
#include "test_support.hpp"

using namespace aggdiff;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = parse_and_run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aggdiff_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  return line;
}

const std::vector<std::string> kSmallEvolve{"evolve", "--m",    "1.5",  "--k",   "-0.5",
                                            "--chi",  "0.2",    "--rescaled", "--n", "30",
                                            "--dt",   "1e-2",   "--tmax", "40",  "--init",
                                            "gaussian:0.32"};

}  // namespace

TEST_CASE("csv snapshot round trip is exact") {
  std::mt19937_64 rng(31);
  const ParticleState s = testing::random_state(rng, 25);
  const fs::path dir = scratch("snapshot");
  fs::create_directories(dir);
  write_snapshot(dir / "s.csv", s);
  CHECK(first_line(dir / "s.csv") == "eta,X");
  const ParticleState back = read_snapshot(dir / "s.csv");
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i] == s[i]);

  write_density(dir / "d.csv", s);
  const CsvTable d = read_csv(dir / "d.csv");
  CHECK(d.header == std::vector<std::string>{"x", "rho"});
  CHECK(d.column("rho").size() == s.size() - 1);
  CHECK_THROWS_AS(d.column("nope"), InvalidInput);
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("evolve writes its outputs") {
  const fs::path dir = scratch("evolve");
  auto args = kSmallEvolve;
  args.insert(args.end(), {"--out", dir.string()});
  const Result r = run(args);
  CHECK(r.code == 0);
  CHECK(r.out.find("status=Steady") != std::string::npos);
  for (const char* f : {"timeseries.csv", "snapshot_initial.csv", "snapshot_final.csv",
                        "density_initial.csv", "density_final.csv", "config_echo.txt",
                        "outcome.txt"})
    CHECK(fs::exists(dir / f));
  CHECK(first_line(dir / "timeseries.csv") ==
        "t,energy,entropy,interaction,confinement,second_moment,com,min_gap,max_density,"
        "step_dist,wasserstein_to_final,relative_energy");
  CHECK(first_line(dir / "snapshot_final.csv") == "eta,X");
  CHECK(first_line(dir / "density_final.csv") == "x,rho");
  const std::string echo = slurp(dir / "config_echo.txt");
  CHECK(echo.find("k=-0.5") != std::string::npos);
  CHECK(echo.find("frame=rescaled") != std::string::npos);

  SUBCASE("config replay reproduces the run bit for bit") {
    const fs::path again = scratch("evolve_replay");
    const Result rr = run({"--config", (dir / "config_echo.txt").string(), "--out",
                           again.string()});
    CHECK(rr.code == 0);
    for (const char* f : {"timeseries.csv", "snapshot_final.csv", "density_final.csv"})
      CHECK(slurp(dir / f) == slurp(again / f));
    fs::remove_all(again);
  }

  SUBCASE("rate fits a column of the timeseries") {
    const Result rr =
        run({"rate", "--in", (dir / "timeseries.csv").string(), "--t0", "0", "--t1", "1.5"});
    CHECK(rr.code == 0);
    CHECK(rr.out.rfind("slope,intercept,t0,t1,residual", 0) == 0);
    std::istringstream lines(rr.out);
    std::string header, values;
    std::getline(lines, header);
    std::getline(lines, values);
    CHECK(std::stod(values) < 0.0);

    const Result bad = run({"rate", "--in", (dir / "timeseries.csv").string(), "--column",
                            "no_such_column"});
    CHECK(bad.code == 2);
  }

  SUBCASE("reconstruct scales the final snapshot") {
    const fs::path rec = scratch("reconstruct");
    const Result rr = run({"reconstruct", "--in", (dir / "snapshot_final.csv").string(), "--k",
                           "-0.5", "--t", "2", "--out", rec.string()});
    CHECK(rr.code == 0);
    const ParticleState u = read_snapshot(dir / "snapshot_final.csv");
    const fs::path produced = rec / "snapshot_reconstructed.csv";
    REQUIRE(fs::exists(produced));
    const ParticleState x = read_snapshot(produced);
    const double factor = std::pow(2.5 * 2.0 + 1.0, 1.0 / 2.5);
    CHECK(x[0] == doctest::Approx(u[0] * factor).epsilon(1e-15));
    fs::remove_all(rec);
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep writes the grid and the critical strengths") {
  const fs::path dir = scratch("sweep");
  const Result r = run({"sweep", "--k-grid", "-0.5:0:0.5", "--chi-grid", "0.3:1.1:0.8", "--n",
                        "20", "--dt", "1e-2", "--tmax", "6", "--jobs", "2", "--out",
                        dir.string()});
  CHECK(r.code == 0);
  CHECK(first_line(dir / "sweep.csv") == "k,chi,status,final_time,final_energy");
  CHECK(first_line(dir / "chi_c.csv") == "k,chi_c,c_star_estimate");
  const CsvTable c = read_csv(dir / "chi_c.csv");
  REQUIRE(c.column("k").size() == 2);
  CHECK(c.column("k")[0] == -0.5);
  CHECK(c.column("chi_c")[1] == 0.3);
  fs::remove_all(dir);
}

TEST_CASE("usage and validation errors exit with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  auto args = kSmallEvolve;
  args.insert(args.end(), {"--out", scratch("err").string(), "--frobnicate"});
  CHECK(run(args).code == 2);
  CHECK(run({"evolve", "--m", "0", "--k", "0", "--chi", "1", "--out", scratch("err").string()})
            .code == 2);
  CHECK(run({"evolve", "--m", "1", "--k", "0", "--chi", "1", "--dt", "-1", "--out",
             scratch("err").string()})
            .code == 2);
  CHECK(run({"evolve", "--m", "1", "--k", "0", "--chi", "1", "--init", "weird:1", "--out",
             scratch("err").string()})
            .code == 2);
  CHECK(run({"evolve", "--m", "1", "--k", "0", "--chi", "1", "--rescaled", "--original", "--out",
             scratch("err").string()})
            .code == 2);
  fs::remove_all(scratch("err"));
}

TEST_CASE("unwritable outputs and unreadable inputs exit with code 3") {
  CHECK(run({"evolve", "--m", "1", "--k", "0", "--chi", "1", "--n", "4", "--tmax", "0.01",
             "--out", "/proc/aggdiff_cannot_write"})
            .code == 3);
  CHECK(run({"rate", "--in", "/nonexistent/timeseries.csv"}).code == 3);
  CHECK(run({"--config", "/nonexistent/config_echo.txt"}).code == 3);
}
