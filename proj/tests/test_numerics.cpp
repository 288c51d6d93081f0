#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lo1d/numerics.hpp"

using namespace lo1d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
// erfcx(x) = (2/sqrt(pi)) int_0^inf exp(-t^2 - 2xt) dt, by a fixed composite
// Gauss-Legendre rule (independent of both erfc and the adaptive integrator).
double erfcx_oracle(double x) {
  double s = 0.0;
  const double top = 12.0, h = top / 400.0;
  for (int k = 0; k < 400; ++k)
    s += gauss_legendre_fixed<16>([x](double t) { return std::exp(-t * t - 2.0 * x * t); }, k * h, (k + 1) * h);
  return 2.0 / std::sqrt(std::numbers::pi) * s;
}
}  // namespace

TEST_CASE("integrate_1d reference integrals", "[numerics]") {
  CHECK_THAT(integrate_1d([](double r) { return std::exp(-r * r); }, {0.0, kInf}),
             WithinRel(std::sqrt(std::numbers::pi) / 2.0, 1e-10));
  CHECK_THAT(integrate_1d([](double r) { return 0.75 / std::sqrt(r); }, {0.0, 1.0}), WithinRel(1.5, 1e-9));
  CHECK(integrate_1d([](double) { return 0.0; }, {-3.0, 5.0}) == 0.0);
  CHECK_THAT(integrate_1d([](double r) { return std::exp(-std::abs(r)); }, {-kInf, kInf}), WithinRel(2.0, 1e-10));
}

TEST_CASE("integrate_1d is linear on random polynomials", "[numerics][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    double a[5], b[5];
    for (int i = 0; i < 5; ++i) {
      a[i] = rng.uniform(-3.0, 3.0);
      b[i] = rng.uniform(-3.0, 3.0);
    }
    auto poly = [](const double* c) {
      return [c](double x) { return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4]))); };
    };
    const double s = rng.uniform(-2.0, 2.0), t = rng.uniform(-2.0, 2.0);
    const Interval dom{rng.uniform(-2.0, 0.0), rng.uniform(0.5, 3.0)};
    const double If = integrate_1d(poly(a), dom), Ig = integrate_1d(poly(b), dom);
    const double Ih = integrate_1d([&](double x) { return s * poly(a)(x) + t * poly(b)(x); }, dom);
    const QuadratureSpec spec;
    const double tol = 3.0 * (spec.abs_tol + spec.rel_tol * (std::abs(s * If) + std::abs(t * Ig) + std::abs(Ih)));
    CHECK(std::abs(Ih - s * If - t * Ig) <= tol);
  }
}

TEST_CASE("integrate_2d", "[numerics]") {
  CHECK_THAT(integrate_2d([](double, double) { return 1.0; }, {0.0, 1.0}, {0.0, 1.0}), WithinRel(1.0, 1e-12));
  auto g = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  CHECK_THAT(integrate_2d([&](double x, double y) { return g(x) * g(y); }, {-kInf, kInf}, {-kInf, kInf}),
             WithinRel(1.0, 1e-8));
}

TEST_CASE("quadrature reports non-convergence", "[numerics]") {
  QuadratureSpec spec{1e-14, 1e-14, 3, 0.0};
  CHECK_THROWS_AS(integrate_1d([](double x) { return std::sin(1.0 / x); }, {1e-6, 1.0}, spec), NonConvergence);
  CHECK_THROWS_AS(integrate_1d([](double x) { return x; }, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("Gauss rules", "[numerics]") {
  const auto [x, w] = gauss_legendre(7);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 12);
  CHECK_THAT(s, WithinRel(2.0 / 13.0, 1e-14));
  const auto [hx, hw] = gauss_hermite(20);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < hx.size(); ++i) {
    m0 += hw[i];
    m2 += hw[i] * hx[i] * hx[i];
    m4 += hw[i] * std::pow(hx[i], 4);
  }
  const double sp = std::sqrt(std::numbers::pi);
  CHECK_THAT(m0, WithinRel(sp, 1e-13));
  CHECK_THAT(m2, WithinRel(sp / 2.0, 1e-13));
  CHECK_THAT(m4, WithinRel(0.75 * sp, 1e-13));
}

TEST_CASE("erfcx anchors", "[numerics]") {
  CHECK(erfcx(0.0) == 1.0);
  CHECK_THAT(erfcx(1.0), WithinRel(0.42758357615580705, 1e-12));
  CHECK_THAT(erfcx(1.0), WithinRel(erfcx_oracle(1.0), 1e-12));
  CHECK_THROWS_AS(erfcx(-1.0), InvalidArgument);
  CHECK(erfcx(kInf) == 0.0);
}

TEST_CASE("erfcx matches the Laplace integral on both branches", "[numerics][oracle]") {
  for (double x : {0.01, 0.3, 2.0, 3.99, 4.0, 4.01, 6.0, 10.0, 25.0, 50.0})
    CHECK_THAT(erfcx(x), WithinRel(erfcx_oracle(x), 1e-11));
}

TEST_CASE("erfcx sandwich", "[numerics][property]") {
  std::vector<double> xs{0.0};
  for (double x : log_grid(1e-3, 50.0, 499)) xs.push_back(x);
  const double sp = std::sqrt(std::numbers::pi);
  for (double x : xs) {
    const double lo = 2.0 / (sp * (x + std::sqrt(x * x + 2.0)));
    const double hi = 2.0 / (sp * (x + std::sqrt(x * x + 4.0 / std::numbers::pi)));
    const double v = erfcx(x);
    CHECK(v > lo);
    CHECK(v <= hi * (1.0 + 1e-14));
  }
  CHECK_THAT(erfcx(0.0), WithinRel(2.0 / (sp * std::sqrt(4.0 / std::numbers::pi)), 1e-12));
}

TEST_CASE("erfcx derivatives", "[numerics][property]") {
  for (double x = 0.05; x <= 10.0; x += 0.05) {
    const double h = 1e-5 * std::max(1.0, x);
    const double fd = (erfcx(x + h) - erfcx(x - h)) / (2.0 * h);
    CHECK_THAT(erfcx_d1(x), WithinRel(fd, 1e-6));
    CHECK_THAT(erfcx_d1(x), WithinRel(2.0 * x * erfcx(x) - 2.0 / std::sqrt(std::numbers::pi), 1e-9));
    const double fd2 = (erfcx_d1(x + h) - erfcx_d1(x - h)) / (2.0 * h);
    CHECK_THAT(erfcx_d2(x), WithinRel(fd2, 1e-5));
  }
}

TEST_CASE("find_root", "[numerics]") {
  CHECK_THAT(find_root([](double x) { return x - 1.0; }, {0.0, 2.0}, 1e-14), WithinAbs(1.0, 1e-12));
  CHECK_THAT(find_root([](double x) { return std::sin(std::numbers::pi * x); }, {0.5, 1.5}, 1e-14),
             WithinAbs(1.0, 1e-12));
  auto beta = [](double k) { return -(2.0 * k / std::numbers::pi) * std::sin(std::numbers::pi / k) + 4.0 / std::numbers::pi; };
  CHECK_THAT(find_root(beta, {1.0, 2.0}, 1e-14), WithinAbs(2.0, 1e-10));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}, 1e-12), NoBracket);
}

TEST_CASE("Rng streams are reproducible", "[numerics]") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(Rng::stream(5, 3).uniform() == Rng::stream(5, 3).uniform());
  CHECK(Rng::stream(5, 3).uniform() != Rng::stream(5, 4).uniform());
  CHECK(c.uniform() != Rng(5).uniform());
  const auto g = log_grid(1e-4, 1e4, 9);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 1e4);
  CHECK_THAT(g[4], WithinRel(1.0, 1e-14));
}
