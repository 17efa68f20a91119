#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "slspec/error.hpp"
#include "slspec/forward.hpp"
#include "slspec/wkb.hpp"

using namespace slspec;

TEST_CASE("square well shooting matches the transcendental roots") {
  const Potential p = Potential::square_well();
  for (double w : {5.0, 10.0, 20.0}) {
    CAPTURE(w);
    REQUIRE(squarewell_phase_guard(w));
    const auto roots = oracle::squarewell_roots(w);
    const SpectralData sd = forward_spectrum(p, w);
    REQUIRE(sd.count() == static_cast<int>(roots.size()));
    for (int j = 0; j < sd.count(); ++j) {
      CHECK(std::abs(sd.xi[j] - roots[j]) < 1e-8);
      const double xi = roots[j];
      const double C = 2.0 * xi / (1.0 + xi) * (w * w - xi * xi);
      CHECK(std::abs(sd.C[j] / C - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("square well closed-form helpers") {
  CHECK(squarewell_phase_guard(10.0));
  CHECK_FALSE(squarewell_phase_guard(M_PI / 2 + 3 * M_PI + 0.1));
  const SpectralData sd = squarewell_oracle(10.0);
  const auto roots = oracle::squarewell_roots(10.0);
  REQUIRE(sd.count() == static_cast<int>(roots.size()));
  for (int j = 0; j < sd.count(); ++j) {
    CHECK(std::abs(squarewell_condition(10.0, sd.xi[j])) < 1e-8);
    CHECK(sd.xi[j] == doctest::Approx(roots[j]).epsilon(1e-10));
  }
}

TEST_CASE("q1 spectrum structure") {
  const Potential p = Potential::q1();
  for (double w : {10.0, 20.0}) {
    CAPTURE(w);
    const SpectralData sd = forward_spectrum(p, w);
    REQUIRE(sd.count() > 0);
    CHECK(sd.q0 == 1.0);
    for (int j = 0; j < sd.count(); ++j) {
      CHECK(sd.xi[j] > 0.0);
      CHECK(sd.xi[j] < w);
      CHECK(sd.C[j] > 0.0);
      if (j > 0) CHECK(sd.xi[j] - sd.xi[j - 1] >= 1.0 / (5.0 * w));
    }
    const auto [lo, hi] = calogero_bounds(p, w);
    CHECK(sd.count() >= lo);
    CHECK(sd.count() <= hi);
    // the levels odd under reflection are the Dirichlet ones
    const WkbProfile prof = wkb_spectrum(p, w);
    CHECK(static_cast<int>(wkb_dirichlet_levels(prof).size()) == sd.count());
  }
}

TEST_CASE("oscillation count is monotone and consistent with the levels") {
  const Potential p = Potential::q1();
  const double w = 10.0;
  const auto xi = eigenvalues(p, w);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    CHECK(eigen_count(p, w, xi[j] * (1 - 1e-6)) == static_cast<int>(xi.size() - j));
    CHECK(eigen_count(p, w, xi[j] * (1 + 1e-6)) == static_cast<int>(xi.size() - j - 1));
  }
}

TEST_CASE("characteristic values agree with the eigenfunction state") {
  const Potential p = Potential::q1();
  const SpectralData sd = forward_spectrum(p, 10.0);
  const auto C = characteristic_values(p, 10.0, sd.xi);
  for (int j = 0; j < sd.count(); ++j) {
    const EigenState st = eigen_state(p, 10.0, sd.xi[j]);
    CHECK(st.C == doctest::Approx(C[j]).epsilon(1e-10));
    CHECK(std::isfinite(st.log_abs_s));
  }
}

TEST_CASE("forward errors") {
  CHECK_THROWS_AS(eigenvalues(Potential::q1(), -1.0), Error);
  CHECK_THROWS_AS(eigenvalues(Potential::q1(), 0.0), Error);
}
