#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "slspec/forward.hpp"

using namespace slspec;
using cd = std::complex<double>;

namespace {

// Jost function of Q = 1 on [0, 1]: f = e^{ikx} beyond 1, matched to
// A e^{i kappa x} + B e^{-i kappa x} inside with kappa^2 = k^2 + w^2.
cd squarewell_jost(double w, cd k) {
  const cd kappa = std::sqrt(k * k + w * w);
  return std::exp(cd(0, 1) * k) * (std::cos(kappa) - cd(0, 1) * (k / kappa) * std::sin(kappa));
}

}  // namespace

TEST_CASE("zero potential gives F = 1") {
  JostOptions o;
  o.zero_potential = true;
  const JostSample s = jost(Potential::q1(), 10.0, cd(2.0, 0.5), o);
  CHECK(std::abs(s.F - 1.0) < 1e-14);
}

TEST_CASE("square well Jost function against the matched closed form") {
  const Potential p = Potential::square_well();
  for (cd k : {cd(3.0, 0.5), cd(0.0, 2.0), cd(7.0, 0.1)}) {
    CAPTURE(k);
    const JostSample s = jost(p, 5.0, k);
    const cd ref = squarewell_jost(5.0, k);
    CHECK(std::abs(s.F - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("q1 Jost function vanishes at the eigenvalues") {
  const Potential p = Potential::q1();
  const SpectralData sd = forward_spectrum(p, 10.0);
  // the factorial tail bound needs more terms than the default for small tau
  JostOptions o;
  o.n_max = 4000;
  for (int j = 0; j < sd.count(); ++j) {
    const JostSample at = jost(p, 10.0, cd(0.0, sd.xi[j]), o);
    const JostSample off = jost(p, 10.0, cd(0.0, sd.xi[j] * 1.05), o);
    CAPTURE(j);
    CHECK(std::abs(at.F) < 1e-3 * std::abs(off.F));
  }
}

TEST_CASE("F(i tau) tends to 1") {
  const Potential p = Potential::q1();
  // 1 - w^2 int Q / (2 tau) with int Q1 = pi / 4
  const double tau = 1e4;
  const JostSample s = jost(p, 10.0, cd(0.0, tau));
  CHECK(std::abs(s.F - 1.0) < 1e-2);
  CHECK(s.F.real() == doctest::Approx(1.0 - 100.0 * M_PI / 4.0 / (2.0 * tau)).epsilon(1e-4));
}

TEST_CASE("Jost identity for q1 at omega = 10") {
  const Potential p = Potential::q1();
  const SpectralData sd = forward_spectrum(p, 10.0);
  for (int j = 1; j + 1 < sd.count(); ++j) {
    CAPTURE(j);
    const JostIdentity id = jost_identity_check(p, 10.0, j, sd);
    CHECK(id.residual <= 1e-3);
  }
}

TEST_CASE("F(-k) is the conjugate of F(k) on the real axis") {
  const Potential p = Potential::q1();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.1, 30.0);
  for (int i = 0; i < 20; ++i) {
    const double k = U(rng);
    const cd a = jost(p, 10.0, cd(k, 0.0)).F, b = jost(p, 10.0, cd(-k, 0.0)).F;
    CHECK(std::abs(b - std::conj(a)) < 1e-10 * std::max(1.0, std::abs(a)));
  }
}
