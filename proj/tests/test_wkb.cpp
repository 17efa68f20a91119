#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "slspec/error.hpp"
#include "slspec/forward.hpp"
#include "slspec/wkb.hpp"

using namespace slspec;

TEST_CASE("action at the bottom is the whole-line integral of sqrt(Q)") {
  // 2 int_0^inf 1/(1+x^2) dx = pi
  CHECK(action(Potential::q1(), 0.0) == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(action(Potential::square_well(), 0.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("turning point of q1") {
  const Potential p = Potential::q1();
  CHECK(turning_point(p, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  for (double eta : {0.1, 0.3, 0.9}) CHECK(turning_point(p, eta) == doctest::Approx(std::sqrt(1 / eta - 1)).epsilon(1e-10));
  CHECK_THROWS_AS(turning_point(p, 1.5), Error);
}

TEST_CASE("action against tanh-sinh quadrature") {
  const Potential p = Potential::q1();
  for (double eta : {0.05, 0.4, 0.8}) {
    const double xp = std::sqrt(1 / eta - 1);
    const double ref = 2.0 * oracle::tanh_sinh(
                                 [&](double x) {
                                   const double s = 1 + x * x;
                                   return std::sqrt(std::max(0.0, 1 / (s * s) - eta * eta));
                                 },
                                 0.0, xp);
    CHECK(action(p, eta) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("quantized actions are spaced by pi / omega") {
  const WkbProfile prof = wkb_spectrum(Potential::q1(), 10.0);
  CHECK(prof.predicted_count == 10);
  REQUIRE(prof.eta.size() == 10);
  CHECK(prof.failures.empty());
  for (std::size_t j = 0; j < prof.eta.size(); ++j) {
    CHECK(std::abs(prof.action_values[j] - (j + 0.5) * M_PI / 10.0) < 1e-10);
    if (j > 0) CHECK(prof.eta[j] < prof.eta[j - 1]);
  }
  const SpacingReport r = spacing_check(prof, 10.0);
  CHECK(r.sufficient);
  CHECK(r.xi_gap_floor_ok);
  CHECK(r.max_action_gap_error < 1e-10);
}

TEST_CASE("theta_plus is positive and gives finite norming coefficients") {
  const WkbProfile prof = wkb_spectrum(Potential::q1(), 10.0);
  for (std::size_t j = 0; j < prof.eta.size(); ++j) {
    CHECK(prof.theta_plus[j] > 0.0);
    CHECK(prof.log_s[j] == doctest::Approx(prof.theta_plus[j] * 10.0));
    // upper bound exp(4/pi w^2 + pi/2 w) on s_n
    CHECK(prof.log_s[j] <= 4.0 / M_PI * 100.0 + M_PI / 2 * 10.0);
  }
}

TEST_CASE("WKB Dirichlet levels approach the shooting levels") {
  const Potential p = Potential::q1();
  double prev = 1e9;
  for (double w : {10.0, 20.0}) {
    const auto wk = wkb_dirichlet_levels(wkb_spectrum(p, w));
    const auto xi = eigenvalues(p, w);
    REQUIRE(wk.size() == xi.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) worst = std::max(worst, std::abs(wk[j] - xi[j]) / w);
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("too few levels is reported, not thrown") {
  const WkbProfile prof = wkb_spectrum(Potential::q1(), 1.0);
  const SpacingReport r = spacing_check(prof, 1.0);
  CHECK_FALSE(r.sufficient);
  CHECK(r.message == "insufficient levels");
}
