#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrbox/errors.hpp"
#include "lrbox/smoothing.hpp"
#include "oracles.hpp"

using namespace lrbox;

namespace {

double moment(const KernelSpec& k, int p) {
  return oracle::simpson([&](double x) { return std::pow(x, p) * k.profile(x); }, -40.0, 40.0,
                         80000);
}

// Hermite kernel of order p as sum_j A_j He_{2j}(x) g(x) with A_j = (-1)^j / (j! 2^j),
// He_n the probabilists' Hermite polynomials.
double hermite_series(int order, double x) {
  double he_prev = 1.0, he = x;  // He_0, He_1
  double sum = 1.0;               // j = 0 term
  double a = 1.0;
  for (int n = 2; n <= order - 1; ++n) {
    const double next = x * he - (n - 1) * he_prev;
    he_prev = he;
    he = next;
    if (n % 2 == 0) {
      const int j = n / 2;
      a *= -1.0 / (2.0 * j);
      sum += a * he;
    }
  }
  return sum * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_SUITE("smoothing") {
  TEST_CASE("kernel values") {
    CHECK(KernelSpec::lorentzian(1.0)(0.0) == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(KernelSpec::lorentzian(0.5)(0.0) == doctest::Approx(2.0 / std::numbers::pi));
    CHECK(KernelSpec::gaussian(1.0)(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
    const auto h3 = KernelSpec::hermite(3, 1.0);
    for (double x : {0.0, 0.7, 1.9, 3.0}) {
      CHECK(h3.profile(x) == doctest::Approx(0.5 * (3.0 - x * x) * KernelSpec::gaussian(1.0).profile(x)));
    }
    CHECK(h3.label() == "hermite(3)");
    CHECK(KernelSpec::gaussian(0.1).label() == "gaussian");
    CHECK(KernelSpec::hermite(1, 0.3).profile(0.4) == doctest::Approx(KernelSpec::gaussian(0.3).profile(0.4)));
  }

  TEST_CASE("coefficients match the Hermite-series construction") {
    for (int p : {3, 5, 7, 9}) {
      const auto k = KernelSpec::hermite(p, 1.0);
      for (double x : {0.0, 0.3, 1.1, 2.5, 4.0}) {
        CHECK(k.profile(x) == doctest::Approx(hermite_series(p, x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("invalid kernels") {
    CHECK_THROWS_AS(KernelSpec::gaussian(0.0), DomainError);
    CHECK_THROWS_AS(KernelSpec::lorentzian(-1.0), DomainError);
    CHECK_THROWS_AS(KernelSpec::hermite(4, 1.0), DomainError);
    CHECK_THROWS_AS(KernelSpec::hermite(-1, 1.0), DomainError);
    CHECK_THROWS_AS(parse_kernel_family("boxcar"), ConfigError);
    CHECK(parse_kernel_family("hermite") == KernelFamily::hermite);
  }

  TEST_CASE("unit mass") {
    for (double eta : {0.05, 1.0, 3.0}) {
      for (const auto& k : {KernelSpec::gaussian(eta), KernelSpec::hermite(3, eta),
                            KernelSpec::hermite(5, eta)}) {
        const double m = oracle::simpson([&](double x) { return k(x); }, -40.0 * eta, 40.0 * eta, 80000);
        CHECK(std::abs(m - 1.0) < 1e-10);
      }
      // Lorentzian: x = eta tan(theta) maps the line onto (-pi/2, pi/2).
      const auto l = KernelSpec::lorentzian(eta);
      const double lim = 0.5 * std::numbers::pi - 1e-9;
      const double m = oracle::simpson(
          [&](double t) {
            const double c = std::cos(t);
            return l(eta * std::tan(t)) * eta / (c * c);
          },
          -lim, lim, 20000);
      CHECK(std::abs(m - 1.0) < 1e-8);
    }
  }

  TEST_CASE("moment table") {
    const auto g = KernelSpec::gaussian(1.0);
    CHECK(std::abs(moment(g, 1)) < 1e-8);
    CHECK(std::abs(moment(g, 2) - 1.0) < 1e-8);
    for (int p : {3, 5, 7}) {
      const auto k = KernelSpec::hermite(p, 1.0);
      for (int q = 1; q <= p; ++q) CHECK(std::abs(moment(k, q)) < 1e-8);
      CHECK(std::abs(moment(k, p + 1)) > 0.1);
    }
    CHECK(moment(KernelSpec::hermite(3, 1.0), 4) == doctest::Approx(-3.0).epsilon(1e-8));
  }

  TEST_CASE("positivity") {
    for (double x = -30.0; x <= 30.0; x += 0.37) {
      CHECK(KernelSpec::lorentzian(0.2)(x) > 0.0);
      CHECK(KernelSpec::gaussian(2.0)(x) >= 0.0);
    }
    CHECK(KernelSpec::hermite(3, 1.0)(2.0) < 0.0);
  }

  TEST_CASE("single weight reproduces the kernel") {
    const SpectralWeights sw{{1.0}, {0.0}};
    const std::vector<double> omegas{-1.0, 0.0, 0.25, 2.0};
    for (const auto& k : {KernelSpec::lorentzian(0.3), KernelSpec::gaussian(0.3),
                          KernelSpec::hermite(3, 0.3)}) {
      const auto a = smoothed_density(sw, k, omegas);
      for (std::size_t i = 0; i < omegas.size(); ++i) CHECK(a[i] == doctest::Approx(k(omegas[i])));
    }
  }

  TEST_CASE("order slope on a smooth synthetic density") {
    // Weights sampling f(w) = exp(-(w - 1)^2) on a fine grid; exact value at 1.3
    // from the quadrature of the same density (negligible grid error).
    SpectralWeights sw;
    const double h = 1e-3;
    for (double w = -10.0; w <= 12.0; w += h) {
      sw.frequencies.push_back(w);
      sw.weights.push_back(h * std::exp(-(w - 1.0) * (w - 1.0)));
    }
    const double omega = 1.3;
    const double exact = std::exp(-0.09);
    const std::vector<double> etas{0.05, 0.07, 0.1, 0.14, 0.2};
    CHECK(order_slope(sw, KernelFamily::gaussian, 1, omega, etas, exact).fit.slope ==
          doctest::Approx(2.0).epsilon(0.05));
    CHECK(order_slope(sw, KernelFamily::hermite, 3, omega, etas, exact).fit.slope ==
          doctest::Approx(4.0).epsilon(0.08));
    const auto lor = order_slope(sw, KernelFamily::lorentzian, 0, omega, etas, exact);
    CHECK(lor.fit.slope == doctest::Approx(1.0).epsilon(0.15));
    CHECK(lor.fit.points == etas.size());
  }
}
