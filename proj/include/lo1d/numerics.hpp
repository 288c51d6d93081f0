#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature in one and two
// dimensions, the scaled complementary error function, bracketed root finding
// and seeded random streams. Everything here is pure and reentrant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "lo1d/errors.hpp"

namespace lo1d {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSqrtPi = 1.7724538509055160273;  // sqrt(pi)

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  void validate() const {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw InvalidArgument("interval requires lo <= hi");
  }
};

/// Tolerances for the adaptive integrators. The defaults sit two orders of
/// magnitude below the 1e-6 relative slack used when verifying bounds.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
  double truncation_threshold = 1e-14;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
      throw InvalidArgument("quadrature spec requires abs_tol > 0, rel_tol > 0, max_subdivisions >= 1");
  }
  QuadratureSpec tightened(double factor) const {
    QuadratureSpec s = *this;
    s.abs_tol *= factor;
    s.rel_tol *= factor;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208931357730, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class G>
Panel gk21(G& g, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = g(c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = g(c - dx);
    f2[j] = g(c + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  evals += 21;
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resk *= h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs((resk - resg * h));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
  if (!std::isfinite(resk)) err = kInf;
  return {a, b, resk, err};
}

// Adaptive driver over a list of finite panels in the (possibly mapped)
// integration variable.
template <class G>
QuadratureResult adaptive(G& g, const std::vector<double>& cuts, const QuadratureSpec& spec) {
  std::priority_queue<Panel> heap;
  QuadratureResult out;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = gk21(g, cuts[i], cuts[i + 1], out.evaluations);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int subdivisions = 0;
  // Panels too narrow to bisect in floating point; kept at their estimate.
  double frozen_value = 0.0, frozen_err = 0.0;
  // Each panel's error estimate is floored at 50 ulp of its magnitude, so a
  // relative target below ~100 ulp is unreachable.
  const double rel = std::max(spec.rel_tol, 100.0 * std::numeric_limits<double>::epsilon());
  while (!heap.empty() && total_err > std::max(spec.abs_tol, rel * std::abs(total))) {
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: value " << total << ", error estimate " << total_err;
      throw NonConvergence(msg.str(), total, total_err);
    }
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-13 * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen_value += p.value;
      frozen_err += p.error;
      total_err -= p.error;
      continue;
    }
    Panel l = gk21(g, p.a, mid, out.evaluations);
    Panel r = gk21(g, mid, p.b, out.evaluations);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++subdivisions;
  }
  if (!std::isfinite(total)) throw NonConvergence("integrand produced a non-finite value", total, kInf);
  // Re-sum to remove drift from the incremental updates.
  double sum = frozen_value, err = frozen_err;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = std::max(err, 0.0);
  out.subdivisions = subdivisions;
  return out;
}

}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod integration of f over `domain`.
///
/// Infinite endpoints are mapped onto a finite range with r = o + t/(1-t)
/// (mirrored for a lower infinite end). `breakpoints` are optional interior
/// points where the integrand has kinks or narrow features; they seed the
/// initial panel list.
template <class F>
QuadratureResult quad(F&& f, Interval domain, const QuadratureSpec& spec = {},
                      std::span<const double> breakpoints = {}) {
  domain.validate();
  spec.validate();
  if (domain.lo == domain.hi) return {};
  std::vector<double> pts;
  for (double b : breakpoints)
    if (b > domain.lo && b < domain.hi && std::isfinite(b)) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  QuadratureResult total;
  auto accumulate = [&](const QuadratureResult& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.subdivisions += r.subdivisions;
  };

  const bool lo_inf = std::isinf(domain.lo);
  const bool hi_inf = std::isinf(domain.hi);
  double finite_lo = domain.lo;
  double finite_hi = domain.hi;
  if (lo_inf && hi_inf) {
    const double anchor = pts.empty() ? 0.0 : pts.front();
    finite_lo = anchor;
    finite_hi = pts.empty() ? 0.0 : pts.back();
  } else if (lo_inf) {
    finite_lo = pts.empty() ? domain.hi : pts.front();
  } else if (hi_inf) {
    finite_hi = pts.empty() ? domain.lo : pts.back();
  }

  // Split the tolerance budget evenly over the pieces that are present.
  const int pieces = (finite_hi > finite_lo ? 1 : 0) + (lo_inf ? 1 : 0) + (hi_inf ? 1 : 0);
  QuadratureSpec piece_spec = spec;
  piece_spec.abs_tol = spec.abs_tol / std::max(pieces, 1);

  if (finite_hi > finite_lo) {
    std::vector<double> cuts{finite_lo};
    for (double p : pts)
      if (p > finite_lo && p < finite_hi) cuts.push_back(p);
    cuts.push_back(finite_hi);
    accumulate(detail::adaptive(f, cuts, piece_spec));
  }
  if (hi_inf) {
    const double o = finite_hi;
    auto g = [&](double t) {
      const double s = 1.0 - t;
      return f(o + t / s) / (s * s);
    };
    accumulate(detail::adaptive(g, {0.0, 0.5, 1.0}, piece_spec));
  }
  if (lo_inf) {
    const double o = finite_lo;
    auto g = [&](double t) {
      const double s = 1.0 - t;
      return f(o - t / s) / (s * s);
    };
    accumulate(detail::adaptive(g, {0.0, 0.5, 1.0}, piece_spec));
  }
  return total;
}

/// Value-only convenience wrapper around quad().
template <class F>
double integrate_1d(F&& f, Interval domain, const QuadratureSpec& spec = {},
                    std::span<const double> breakpoints = {}) {
  return quad(std::forward<F>(f), domain, spec, breakpoints).value;
}

/// Nested adaptive integration of f(x, y) over x in `outer` and y in
/// `inner(x)`. The inner integrals run at a tolerance ten times tighter than
/// the outer one.
template <class F, class InnerDomain>
QuadratureResult quad_2d(F&& f, Interval outer, InnerDomain&& inner, const QuadratureSpec& spec = {},
                         std::span<const double> outer_breaks = {}, std::span<const double> inner_breaks = {}) {
  const QuadratureSpec inner_spec = spec.tightened(0.1);
  int inner_evals = 0;
  auto row = [&](double x) {
    const Interval iy = inner(x);
    if (!(iy.hi > iy.lo)) return 0.0;
    const QuadratureResult r = quad([&](double y) { return f(x, y); }, iy, inner_spec, inner_breaks);
    inner_evals += r.evaluations;
    return r.value;
  };
  QuadratureResult r = quad(row, outer, spec, outer_breaks);
  r.evaluations = inner_evals;
  return r;
}

template <class F>
double integrate_2d(F&& f, Interval x_domain, Interval y_domain, const QuadratureSpec& spec = {}) {
  return quad_2d(std::forward<F>(f), x_domain, [y_domain](double) { return y_domain; }, spec).value;
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Fixed-order Gauss-Legendre integration of f over [a, b].
template <int N, class F>
double gauss_legendre_fixed(F&& f, double a, double b) {
  static const auto rule = gauss_legendre(N);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += rule.second[i] * f(c + h * rule.first[i]);
  return s * h;
}

/// Nodes and weights of the n-point Gauss-Hermite rule for weight exp(-x^2);
/// exact for polynomials of degree 2n - 1. Newton iteration on the
/// orthonormal Hermite recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  std::vector<double> x(n), w(n);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * x[0];
    else if (i == 3) z = 1.91 * z - 0.91 * x[1];
    else z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  return {x, w};
}

// ---------------------------------------------------------------------------
// Scaled complementary error function erfcx(x) = exp(x^2) erfc(x), x >= 0.

namespace detail {

inline void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("erfcx requires x >= 0");
}

// I_k(x) = int_0^inf t^k exp(-t^2 - 2 x t) dt by its large-x expansion
// sum_m (-1)^m (k+2m)! / (m! (2x)^(k+2m+1)). Accurate to rounding for x >= 6.
inline double laplace_moment_asymptotic(int k, double x) {
  const double y = 2.0 * x;
  double term = 1.0 / y;  // m = 0: k! / y^(k+1)
  for (int j = 1; j <= k; ++j) term *= j / y;
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    // ratio term_m / term_{m-1} = -(k+2m)(k+2m-1) / (m y^2)
    const double next = -term * (k + 2.0 * m) * (k + 2.0 * m - 1.0) / (m * y * y);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// exp(x^2) erfc(x) for x >= 0 with relative error below 1e-12.
///
/// x < 4 uses the library erfc directly (exp(16) keeps the product in range);
/// x >= 4 uses the Laplace continued fraction evaluated with modified Lentz.
inline double erfcx(double x) {
  detail::require_nonnegative(x);
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  if (std::isinf(x)) return 0.0;
  // erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const double tiny = 1e-300;
  double f = x;
  double c = f, d = 0.0;
  for (int n = 1; n < 2000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    c = x + a / c;
    if (std::abs(d) < tiny) d = tiny;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (kSqrtPi * f);
}

/// d/dx erfcx(x) = 2x erfcx(x) - 2/sqrt(pi).
inline double erfcx_d1(double x) {
  detail::require_nonnegative(x);
  if (x < 6.0) return 2.0 * x * erfcx(x) - 2.0 / kSqrtPi;
  return -4.0 / kSqrtPi * detail::laplace_moment_asymptotic(1, x);
}

/// d^2/dx^2 erfcx(x) = (2 + 4x^2) erfcx(x) - 4x/sqrt(pi).
inline double erfcx_d2(double x) {
  detail::require_nonnegative(x);
  if (x < 6.0) return (2.0 + 4.0 * x * x) * erfcx(x) - 4.0 * x / kSqrtPi;
  return 8.0 / kSqrtPi * detail::laplace_moment_asymptotic(2, x);
}

// ---------------------------------------------------------------------------
// Root finding.

/// Brent's bracketed root finder (bisection with secant / inverse quadratic
/// steps). Returns x with |f(x)| <= tol.
template <class F>
double find_root(F&& f, Interval bracket, double tol) {
  bracket.validate();
  if (!bracket.finite()) throw InvalidArgument("find_root needs a finite bracket");
  double a = bracket.lo, b = bracket.hi;
  double fa = f(a), fb = f(b);
  if (std::abs(fa) <= tol) return a;
  if (std::abs(fb) <= tol) return b;
  if (fa * fb > 0.0) {
    std::ostringstream msg;
    msg << "no sign change on [" << a << ", " << b << "]: f(lo)=" << fa << ", f(hi)=" << fb;
    throw NoBracket(msg.str());
  }
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 500; ++it) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b, b = c, c = a;
      fa = fb, fb = fc, fc = fa;
    }
    const double xtol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= tol) return b;
    if (std::abs(m) <= xtol) break;
    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > xtol ? d : (m > 0 ? xtol : -xtol);
    fb = f(b);
  }
  if (std::abs(fb) <= tol) return b;
  std::ostringstream msg;
  msg << "root bracket collapsed at " << b << " with |f| = " << std::abs(fb) << " > " << tol;
  throw NonConvergence(msg.str(), b, std::abs(fb));
}

// ---------------------------------------------------------------------------
// Deterministic random streams.

/// Seeded 64-bit Mersenne Twister stream. The real-valued draws are built from
/// raw bits so sequences are identical across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent child stream `index` of this seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(mix(seed) ^ mix(index + 0x9e3779b97f4a7c15ULL)); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  /// Integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::mt19937_64 engine_;
};

/// Log-spaced grid of n points on [lo, hi], lo > 0.
inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace lo1d
