#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "aggdiff/initdata.hpp"
#include "aggdiff/state.hpp"

using namespace aggdiff;
using doctest::Approx;

namespace {

// Standard normal CDF from the Maclaurin series of erf, summed in long double.
double series_normal_cdf(double x) {
  const long double z = x / std::numbers::sqrt2;
  long double term = z;
  long double sum = z;
  for (int j = 1; j < 200; ++j) {
    term *= -z * z / j;
    sum += term / (2 * j + 1);
  }
  return static_cast<double>(0.5L + sum / std::sqrt(std::numbers::pi_v<long double>));
}

// CDF of the HLS optimiser: with x = lambda tan(theta) the mass element is
// proportional to cos(theta)^k, whose partial integral is a regularized
// incomplete beta function.
double hls_cdf_oracle(double x, double lambda, double k) {
  const double a = std::atan(std::abs(x) / lambda);
  const double tail = 0.5 * boost::math::ibeta((k + 1.0) / 2.0, 0.5, std::pow(std::cos(a), 2));
  return x <= 0.0 ? tail : 1.0 - tail;
}

}  // namespace

TEST_CASE("normal CDF and quantile") {
  for (double x : {-3.0, -1.0, -0.2, 0.0, 0.6, 2.5})
    CHECK(normal_cdf(x) == Approx(series_normal_cdf(x)).epsilon(1e-13));
  const double q = normal_quantile(0.75);
  CHECK(q == Approx(0.67448975).epsilon(1e-8));
  CHECK(series_normal_cdf(q) == Approx(0.75).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.125) == -normal_quantile(0.875));
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidInput);
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidInput);
}

TEST_CASE("gaussian initial data") {
  const ParticleState two = gaussian_init(1.0, 2);
  CHECK(two[1] == Approx(0.67448975).epsilon(1e-8));
  CHECK(two[0] == -two[1]);

  for (std::size_t n : {3u, 11u, 201u}) {
    const ParticleState s = gaussian_init(0.32, n);
    CHECK(s[n / 2] == 0.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(s[i] == -s[n - 1 - i]);
    CHECK(std::abs(center_of_mass(s)) <= 1e-12);
  }
  CHECK(second_moment(gaussian_init(0.32, 10000)) == Approx(0.32).epsilon(0.01));
  CHECK_THROWS_AS(gaussian_init(-1.0, 10), InvalidInput);
}

TEST_CASE("indicator initial data") {
  const ParticleState s = indicator_init(0.5, 2);
  CHECK(s[0] == Approx(-0.25));
  CHECK(s[1] == Approx(0.25));
  for (std::size_t n : {2u, 7u, 100u}) {
    const double r = 0.5;
    const double nn = static_cast<double>(n);
    const ParticleState u = indicator_init(r, n);
    CHECK(second_moment(u) == Approx(r * r / 3.0 * (1.0 - 1.0 / (nn * nn))).epsilon(1e-13));
    for (const auto& node : to_density(u)) CHECK(node.rho == Approx(1.0 / (2.0 * r)));
  }
}

TEST_CASE("cauchy initial data") {
  const ParticleState one = cauchy_init(1.0, 2);
  CHECK(one[0] == Approx(-1.0).epsilon(1e-15));
  CHECK(one[1] == Approx(1.0).epsilon(1e-15));
  const ParticleState two = cauchy_init(2.0, 2);
  CHECK(two[0] == Approx(-0.5).epsilon(1e-15));
  CHECK(two[1] == Approx(0.5).epsilon(1e-15));
  const ParticleState four = cauchy_init(1.0, 4);
  const double expected[] = {-2.41421356, -0.41421356, 0.41421356, 2.41421356};
  for (std::size_t i = 0; i < 4; ++i) CHECK(four[i] == Approx(expected[i]).epsilon(1e-8));
  const ParticleState many = cauchy_init(1.5, 101);
  for (std::size_t i = 0; i < 101; ++i) CHECK(many[i] == -many[100 - i]);
}

TEST_CASE("HLS constant and critical amplitude") {
  CHECK(hls_constant(1, -0.5) == Approx(std::tgamma(0.25) / std::tgamma(0.75)).epsilon(1e-14));
  CHECK(hls_constant(1, -0.5) == Approx(2.9587).epsilon(1e-4));

  const long double c = std::tgamma(0.25L) / std::tgamma(0.75L);
  const long double c_star =
      std::pow(std::numbers::pi_v<long double>, -0.75L) * std::pow(0.35L * c, -1.5L);
  const HlsProfile prof = hls_profile({4.0 / 3.0, -0.5, 0.35, Frame::Original});
  CHECK(prof.c_star == Approx(static_cast<double>(c_star)).epsilon(1e-13));
  CHECK(prof.c_star == Approx(0.402).epsilon(1e-3));
  CHECK(prof.c0 == prof.c_star);

  CHECK_THROWS_AS(hls_profile({1.5, -0.5, 0.35, Frame::Original}), InvalidInput);
  CHECK_THROWS_AS(hls_profile({1.0, 0.0, 0.35, Frame::Original}), InvalidInput);
}

TEST_CASE("HLS profile has unit mass and the incomplete-beta CDF") {
  for (double k : {-0.8, -0.5, -0.2}) {
    const double m = 2.0 / (2.0 + k);
    for (double cs : {0.4, 1.0, 1.1}) {
      const HlsProfile prof = hls_profile({m, k, 0.35, Frame::Original}, cs);
      const double mass = prof.c0 * std::pow(prof.lambda0, -k / 2.0) *
                          boost::math::beta(0.5, (k + 1.0) / 2.0);
      CHECK(mass == Approx(1.0).epsilon(1e-12));
      for (double x : {-50.0, -2.0, -0.3, 0.0, 0.1, 1.0, 30.0}) {
        const double xs = x * prof.lambda0;
        CHECK(prof.cdf(xs) == Approx(hls_cdf_oracle(xs, prof.lambda0, k)).epsilon(1e-11));
      }
      CHECK(prof.density(prof.lambda0) ==
            Approx(prof.c0 * std::pow(0.5 / prof.lambda0, 1.0 / m)).epsilon(1e-14));
    }
  }
}

TEST_CASE("HLS initial data inverts the CDF at the mass midpoints") {
  const PhysParams p{4.0 / 3.0, -0.5, 0.35, Frame::Original};
  for (double cs : {0.4, 1.0, 1.1}) {
    const std::size_t n = 200;
    const HlsInit init = hls_init(p, cs, n);
    const ParticleState& s = init.state;
    REQUIRE(s.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      CHECK(hls_cdf_oracle(s[i], init.profile.lambda0, p.k) == Approx(eta).epsilon(1e-9));
      CHECK(s[i] == -s[n - 1 - i]);
    }
    CHECK(std::abs(center_of_mass(s)) <= 1e-12);
  }
}

TEST_CASE("initial data from a spec string") {
  const PhysParams p{1.5, -0.5, 0.2, Frame::Rescaled};
  const ParticleState g = make_initial_state("gaussian:0.32", p, 10);
  const ParticleState g2 = gaussian_init(0.32, 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(g[i] == g2[i]);
  CHECK(make_initial_state("indicator:0.5", p, 4)[0] == indicator_init(0.5, 4)[0]);
  CHECK(make_initial_state("cauchy:2", p, 4)[3] == cauchy_init(2.0, 4)[3]);
  const PhysParams hp{4.0 / 3.0, -0.5, 0.35, Frame::Original};
  CHECK(make_initial_state("hls:0.4", hp, 6)[0] == hls_init(hp, 0.4, 6).state[0]);

  CHECK_THROWS_AS(make_initial_state("gauss:0.3", p, 10), InvalidInput);
  CHECK_THROWS_AS(make_initial_state("gaussian", p, 10), InvalidInput);
  CHECK_THROWS_AS(make_initial_state("gaussian:abc", p, 10), InvalidInput);
  CHECK_THROWS_AS(make_initial_state("indicator:-1", p, 10), InvalidInput);
  CHECK_THROWS_AS(make_initial_state("hls:1", p, 10), InvalidInput);
}
