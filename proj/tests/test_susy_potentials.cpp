#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rescat/analytic_potential.hpp"
#include "rescat/jost.hpp"
#include "rescat/numeric_util.hpp"
#include "rescat/wronskian.hpp"

using namespace rescat;

namespace {

AnalyticPotential fig1_one_res() { return AnalyticPotential::one_resonance(-0.1, -2.0, 1.0, 2.0); }

AnalyticPotential fig1_two_res() {
  return AnalyticPotential::two_resonance(-0.1, -2.0, -0.08, -3.0, 0.2, 0.1, 0.08, 0.05);
}

// Test-side oracle: the one-resonance phase shift as the sum of the two
// combined arctangents (resonance pair + background pair), each kept on a
// continuous branch by the two-argument form.
double one_res_phase_oracle(double a1, double a2, double b1, double b2, double k) {
  return -std::atan2(2.0 * a1 * k, a1 * a1 + a2 * a2 - k * k) -
         std::atan2(k * (b1 + b2), b1 * b2 - k * k);
}

// Test-side oracle: 4x4 Wronskian of sinh(b_i r - eta_i) as a direct
// determinant of the derivative rows, in extended precision.
long double direct_sinh_wronskian(const std::vector<double>& b,
                                  const std::vector<double>& eta, long double r) {
  long double m[4][4];
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const long double xi = b[q] * r - static_cast<long double>(eta[q]);
      long double coef = 1.0L;
      for (int t = 0; t < p; ++t) coef *= b[q];
      m[p][q] = coef * ((p % 2 == 0) ? std::sinh(xi) : std::cosh(xi));
    }
  // Gaussian elimination with partial pivoting.
  long double det = 1.0L;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int rr = c + 1; rr < 4; ++rr)
      if (std::abs(m[rr][c]) > std::abs(m[piv][c])) piv = rr;
    if (piv != c) {
      for (int q = 0; q < 4; ++q) std::swap(m[c][q], m[piv][q]);
      det = -det;
    }
    det *= m[c][c];
    for (int rr = c + 1; rr < 4; ++rr) {
      const long double f = m[rr][c] / m[c][c];
      for (int q = c; q < 4; ++q) m[rr][q] -= f * m[c][q];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("parameter validation enforces the stability sector") {
  CHECK_THROWS_AS(DarbouxChainSpec::one_resonance(0.1, -2.0, 1.0, 2.0), ParameterOrdering);
  CHECK_THROWS_AS(DarbouxChainSpec::one_resonance(-0.1, 0.5, 1.0, 2.0), ParameterOrdering);
  // |oscillation| must exceed |damping|
  CHECK_THROWS_AS(DarbouxChainSpec::one_resonance(-2.0, -0.1, 1.0, 2.0), ParameterOrdering);
  CHECK_THROWS_AS(DarbouxChainSpec::one_resonance(-0.1, -2.0, 1.0, 1.0), DegenerateRates);
  CHECK_THROWS_AS(DarbouxChainSpec::one_resonance(-0.1, -2.0, -1.0, 2.0), ParameterOrdering);
  CHECK_NOTHROW(DarbouxChainSpec::one_resonance(-0.1, -2.0, 1.0, 2.0));
  // the two-resonance set of the paper's figures is valid
  CHECK_NOTHROW(DarbouxChainSpec::two_resonance(-0.1, -2.0, -0.08, -3.0, 0.2, 0.1, 0.08, 0.05));
  // second pair must satisfy the same ordering rule
  CHECK_THROWS_AS(DarbouxChainSpec::two_resonance(-0.1, -2.0, -3.0, -0.08, 0.2, 0.1, 0.08, 0.05),
                  ParameterOrdering);
}

TEST_CASE("resonance momenta and energies") {
  const auto v1 = fig1_one_res();
  const Complex k_res = v1.resonance_momentum(0);
  CHECK(k_res.real() == doctest::Approx(2.0));
  CHECK(k_res.imag() == doctest::Approx(-0.1));
  const Complex e1 = v1.resonance_energy(0);
  CHECK(e1.real() == doctest::Approx(3.99).epsilon(1e-12));
  CHECK(e1.imag() == doctest::Approx(-0.4).epsilon(1e-12));

  const auto v2 = fig1_two_res();
  const Complex e2 = v2.resonance_energy(1);
  CHECK(e2.real() == doctest::Approx(8.9936).epsilon(1e-12));
  CHECK(e2.imag() == doctest::Approx(-0.48).epsilon(1e-12));
}

TEST_CASE("shift constants solve tanh(zeta) = 2 a1 b / (b^2 + a1^2 + a2^2)") {
  const auto v1 = fig1_one_res();
  const auto z = v1.shift_constants();
  REQUIRE(z.size() == 2);
  CHECK(std::tanh(z[0]) == doctest::Approx(2.0 * -0.1 * 1.0 / (1.0 + 0.01 + 4.0)).epsilon(1e-14));
  CHECK(std::tanh(z[1]) == doctest::Approx(2.0 * -0.1 * 2.0 / (4.0 + 0.01 + 4.0)).epsilon(1e-14));
  // frozen values, computed from the formula
  CHECK(z[0] == doctest::Approx(-0.0399413858238029).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(-0.0499791510556311).epsilon(1e-12));

  const auto v2 = fig1_two_res();
  const auto eta = v2.shift_constants();
  REQUIRE(eta.size() == 4);
  for (int i = 0; i < 4; ++i) {
    const double b = v2.spec().rates[i];
    const double expected = sinh_argument_shift(b, -0.1, -2.0) + sinh_argument_shift(b, -0.08, -3.0);
    CHECK(eta[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("empty chain gives the free potential and free wavefunction") {
  const auto spec = DarbouxChainSpec::free_particle();
  for (double r : {0.3, 1.0, 7.5}) CHECK(generic_wronskian_potential(spec, r) == 0.0);
  const Complex k(1.3, -0.2);
  for (double r : {0.5, 2.0}) {
    const Complex psi = analytic_wavefunction(spec, k, r);
    CHECK(std::abs(psi - std::sin(k * r)) < 1e-14);
  }
}

TEST_CASE("closed forms match the Wronskian-determinant oracle") {
  const auto v1 = fig1_one_res();
  const auto v2 = fig1_two_res();

  SUBCASE("one-resonance spot values") {
    // frozen via the determinant route
    CHECK(v1(1.0) == doctest::Approx(3.7152271748376).epsilon(1e-9));
    CHECK(v1(0.5) == doctest::Approx(12.2145240824251).epsilon(1e-9));
    CHECK(v1(1.0) == doctest::Approx(generic_wronskian_potential(v1.spec(), 1.0)).epsilon(1e-9));
    CHECK(v1(0.5) == doctest::Approx(generic_wronskian_potential(v1.spec(), 0.5)).epsilon(1e-9));
  }
  SUBCASE("two-resonance spot value") {
    CHECK(v2(3.0) == doctest::Approx(2.03045388627651).epsilon(1e-9));
    CHECK(v2(3.0) == doctest::Approx(generic_wronskian_potential(v2.spec(), 3.0)).epsilon(1e-9));
  }
  SUBCASE("100-point grid equivalence") {
    for (const auto* pot : {&v1, &v2}) {
      for (int i = 0; i < 100; ++i) {
        const double r = 0.05 + (10.0 - 0.05) * i / 99.0;
        const double closed = (*pot)(r);
        const double oracle = generic_wronskian_potential(pot->spec(), r);
        CHECK(std::abs(closed - oracle) <= 1e-8 * (1.0 + std::abs(closed)));
      }
    }
  }
  SUBCASE("potential is finite and decays") {
    for (const auto* pot : {&v1, &v2}) {
      for (double r = 0.01; r < 40.0; r += 0.37) CHECK(std::isfinite((*pot)(r)));
      CHECK(std::abs((*pot)(40.0)) < 1e-3);
      CHECK(std::abs((*pot)(200.0)) < 1e-30);
    }
  }
}

TEST_CASE("two-resonance Wronskian: closed form vs direct determinant at r = 2") {
  const auto v2 = fig1_two_res();
  const auto eta = v2.shift_constants();
  std::vector<long double> eta_l(eta.begin(), eta.end());
  const auto sw = detail::shifted_sinh_wronskian(v2.spec().rates, eta_l, 2.0L);
  const long double closed = sw.w * std::exp(sw.log_scale);
  const long double direct = direct_sinh_wronskian(v2.spec().rates, eta, 2.0L);
  CHECK(std::abs(static_cast<double>((closed - direct) / direct)) < 1e-9);
}

TEST_CASE("(ln W)'' closed form matches central finite differences") {
  auto check_fd = [](const AnalyticPotential& pot, double r) {
    const auto eta = pot.shift_constants();
    std::vector<long double> eta_l(eta.begin(), eta.end());
    auto ln_w = [&](long double rr) {
      const auto sw = detail::shifted_sinh_wronskian(pot.spec().rates, eta_l, rr);
      return static_cast<double>(std::log(std::abs(sw.w)) + sw.log_scale);
    };
    const double h = 1e-4;
    const double fd = (ln_w(r + h) - 2.0 * ln_w(r) + ln_w(r - h)) / (h * h);
    const auto sw = detail::shifted_sinh_wronskian(pot.spec().rates, eta_l, r);
    const long double lw1 = sw.w1 / sw.w;
    const double closed = static_cast<double>(sw.w2 / sw.w - lw1 * lw1);
    CHECK(std::abs(fd - closed) <= 1e-5 * std::abs(closed));
  };
  check_fd(fig1_two_res(), 2.0);
  check_fd(AnalyticPotential::two_resonance(-0.1, -2.0, -0.08, -3.0, 1.3, 0.7, 2.1, 0.35), 2.0);
}

TEST_CASE("Jost function") {
  const auto v1 = fig1_one_res();

  SUBCASE("empty chain is identically 1") {
    const auto spec = DarbouxChainSpec::free_particle();
    for (Complex k : {Complex(0.3, 0.0), Complex(2.0, -1.0)})
      CHECK(std::abs(jost_function(spec, k).value - 1.0) == 0.0);
  }
  SUBCASE("vanishes exactly at the resonance momentum") {
    CHECK(std::abs(jost_function(v1.spec(), Complex(2.0, -0.1)).value) < 1e-15);
    CHECK(std::abs(jost_function(v1.spec(), Complex(-2.0, -0.1)).value) < 1e-15);
  }
  SUBCASE("pole positions rejected") {
    CHECK_THROWS_AS(jost_function(v1.spec(), Complex(0.0, -1.0)), PoleOfJost);
    CHECK_THROWS_AS(jost_function(v1.spec(), Complex(0.0, -2.0)), PoleOfJost);
  }
  SUBCASE("unitarity on the real axis") {
    const double k = 1.7;
    const Complex s = jost_function(v1.spec(), Complex(-k, 0.0)).value /
                      jost_function(v1.spec(), Complex(k, 0.0)).value;
    CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
  }
  SUBCASE("unitarity property across random specs") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
      const double a1 = -u(rng) * 0.2, a2 = a1 - u(rng);
      const double b1 = u(rng), b2 = b1 + u(rng);
      const auto spec = DarbouxChainSpec::one_resonance(a1, a2, b1, b2);
      const double k = u(rng) * 3.0 + 0.01;
      const Complex s = jost_function(spec, Complex(-k, 0.0)).value /
                        jost_function(spec, Complex(k, 0.0)).value;
      CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
    }
  }
  SUBCASE("Newton refinement recovers the zeros from perturbed seeds") {
    for (const Complex alpha : v1.spec().alphas()) {
      Complex k = alpha + Complex(3e-2, -2e-2);
      for (int it = 0; it < 60; ++it) {
        const double h = 1e-7;
        const Complex f = jost_function(v1.spec(), k).value;
        const Complex df =
            (jost_function(v1.spec(), k + h).value - jost_function(v1.spec(), k - h).value) /
            (2.0 * h);
        k -= f / df;
        if (std::abs(f) < 1e-14) break;
      }
      CHECK(std::abs(k - alpha) < 1e-10);
    }
  }
}

TEST_CASE("exact phase shift") {
  const auto v1 = fig1_one_res();

  SUBCASE("threshold value is zero") {
    CHECK(exact_phase_shift(v1.spec(), 0.0) == 0.0);
    CHECK(exact_phase_shift(fig1_two_res().spec(), 0.0) == 0.0);
  }
  SUBCASE("frozen spot value") {
    CHECK(exact_phase_shift(v1.spec(), 2.0) == doctest::Approx(-0.346745348015562).epsilon(1e-12));
  }
  SUBCASE("matches the combined-arctangent closed form at 200 momenta") {
    for (int i = 0; i < 200; ++i) {
      const double k = 0.01 + i * 0.025;  // crosses both branch points
      const double oracle = one_res_phase_oracle(-0.1, -2.0, 1.0, 2.0, k);
      CHECK(exact_phase_shift(v1.spec(), k) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
  SUBCASE("matches the Jost-function route after unwrapping") {
    std::vector<double> ks, principal;
    for (double k = 0.01; k < 8.0; k += 0.01) ks.push_back(k);
    for (double k : ks) {
      const Complex s = jost_function(v1.spec(), Complex(-k, 0.0)).value /
                        jost_function(v1.spec(), Complex(k, 0.0)).value;
      principal.push_back(std::arg(s) / 2.0);  // -(i/2) log S on the principal branch
    }
    const auto unwrapped = unwrap_sequence(principal, kPi, 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i)
      CHECK(unwrapped[i] == doctest::Approx(exact_phase_shift(v1.spec(), ks[i])).epsilon(1e-8));
  }
  SUBCASE("continuity: no pi jumps across the grid") {
    double prev = exact_phase_shift(v1.spec(), 1e-4);
    for (double k = 1e-4; k < 6.0; k += 0.002) {
      const double cur = exact_phase_shift(v1.spec(), k);
      CHECK(std::abs(cur - prev) < 0.1);
      prev = cur;
    }
  }
}

TEST_CASE("analytic wavefunction") {
  const auto v1 = fig1_one_res();

  SUBCASE("solves the transformed equation (finite-difference residual)") {
    const Complex k(1.3, 0.0);
    const double h = 1e-3;
    for (double r : {0.8, 2.0, 4.0}) {
      const Complex pm = analytic_wavefunction(v1.spec(), k, r - h);
      const Complex p0 = analytic_wavefunction(v1.spec(), k, r);
      const Complex pp = analytic_wavefunction(v1.spec(), k, r + h);
      const Complex lap = (pp - 2.0 * p0 + pm) / (h * h);
      const Complex residual = lap + (k * k - v1(r)) * p0;
      const double scale = std::max({std::abs(pm), std::abs(p0), std::abs(pp)});
      CHECK(std::abs(residual) < 1e-5 * scale);
    }
  }
  SUBCASE("derivative matches finite differences") {
    const Complex k(0.9, -0.3);
    const double r = 1.7, h = 1e-4;
    const auto [psi, dpsi] = analytic_wavefunction_with_derivative(v1.spec(), k, r);
    const Complex fd = (analytic_wavefunction(v1.spec(), k, r + h) -
                        analytic_wavefunction(v1.spec(), k, r - h)) /
                       (2.0 * h);
    CHECK(std::abs(dpsi - fd) < 1e-6 * (1.0 + std::abs(psi)));
  }
  SUBCASE("asymptotic phase matches the exact phase shift") {
    for (double k : {0.7, 1.3, 2.0, 3.1}) {
      const double r1 = 20.0, r2 = 20.4;
      const double y1 = analytic_wavefunction(v1.spec(), Complex(k, 0.0), r1).real();
      const double y2 = analytic_wavefunction(v1.spec(), Complex(k, 0.0), r2).real();
      // y = A cos(delta) sin(kr) + A sin(delta) cos(kr)
      const double s1 = std::sin(k * r1), c1 = std::cos(k * r1);
      const double s2 = std::sin(k * r2), c2 = std::cos(k * r2);
      const double det = s1 * c2 - c1 * s2;
      const double ac = (y1 * c2 - y2 * c1) / det;
      const double as = (s1 * y2 - s2 * y1) / det;
      const double fitted = std::atan2(as, ac);
      const double exact = exact_phase_shift(v1.spec(), k);
      CHECK(std::abs(std::remainder(fitted - exact, kPi)) < 1e-6);
    }
  }
  SUBCASE("rejected at factorization momenta") {
    CHECK_THROWS_AS(analytic_wavefunction(v1.spec(), Complex(2.0, -0.1), 1.0), SingularWronskian);
  }
}
