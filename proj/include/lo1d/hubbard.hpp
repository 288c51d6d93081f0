#pragma once

// Bethe-ansatz interpolation of the 1D Hubbard ground-state energy per site
// and the site-occupation Lieb-Oxford bound E_xc >= -(U/4) sum n_i^2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lo1d/errors.hpp"
#include "lo1d/numerics.hpp"

namespace lo1d::hubbard {

struct HubbardPoint {
  double n = 1.0;
  double t = 1.0;
  double u = 0.0;
  double kappa = 2.0;

  void validate() const {
    if (!(n >= 0.0 && n <= 2.0)) throw InvalidArgument("filling n must lie in [0, 2]");
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("hopping t must be positive");
    if (!(u >= 0.0) || !std::isfinite(u)) throw InvalidArgument("interaction U must be nonnegative");
    if (!(kappa >= 1.0 && kappa <= 2.0)) throw InvalidArgument("kappa must lie in [1, 2]");
  }
};

using OccupationVector = std::vector<double>;

namespace detail {
inline double lower_branch(double n, double t, double kappa) {
  return -(2.0 * t * kappa / std::numbers::pi) * std::sin(std::numbers::pi * n / kappa);
}
}  // namespace detail

/// e(n, t, U); the upper branch is e(2 - n) + U (n - 1).
inline double energy(const HubbardPoint& p) {
  p.validate();
  if (p.n <= 1.0) return detail::lower_branch(p.n, p.t, p.kappa);
  return detail::lower_branch(2.0 - p.n, p.t, p.kappa) + p.u * (p.n - 1.0);
}

/// f_n(kappa) = 2 sin(pi n / 2) - kappa sin(pi n / kappa).
inline double f_n(double n, double kappa) {
  if (!(n >= 0.0 && n <= 1.0)) throw InvalidArgument("f_n requires n in [0, 1]");
  if (!(kappa >= 1.0 && kappa <= 2.0)) throw InvalidArgument("f_n requires kappa in [1, 2]");
  if (kappa == 2.0) return 0.0;
  return 2.0 * std::sin(std::numbers::pi * n / 2.0) - kappa * std::sin(std::numbers::pi * n / kappa);
}

inline double hartree(double n, double u) { return u * n * n / 4.0; }

struct XcDecomposition {
  double e = 0.0;        // e(n, t, U)
  double e_free = 0.0;   // e(n, t, 0) at kappa = 2
  double e_h = 0.0;      // U n^2 / 4
  double e_xc = 0.0;     // e - e_free - e_h
  double kinetic = 0.0;  // (2t/pi) f_m(kappa), m = min(n, 2 - n)
  double f = 0.0;        // f_m(kappa)
};

inline XcDecomposition exchange_correlation(const HubbardPoint& p) {
  p.validate();
  XcDecomposition d;
  d.e = energy(p);
  d.e_free = energy({p.n, p.t, 0.0, 2.0});
  d.e_h = hartree(p.n, p.u);
  d.e_xc = d.e - d.e_free - d.e_h;
  d.f = f_n(std::min(p.n, 2.0 - p.n), p.kappa);
  d.kinetic = 2.0 * p.t / std::numbers::pi * d.f;
  return d;
}

struct PropositionReport {
  double e_xc = 0.0;      // sum_i e_xc(n_i)
  double bound = 0.0;     // -(U/4) sum n_i^2
  double slack = 0.0;     // e_xc - bound
  double min_site_slack = 0.0;
  double min_f = 0.0;
  bool holds = true;
};

/// Checks E_xc >= -(U/4) sum n_i^2 site by site.
inline PropositionReport verify_proposition(const OccupationVector& occ, double t, double u, double kappa,
                                            double tolerance = 1e-10) {
  PropositionReport r;
  r.min_site_slack = kInf;
  r.min_f = kInf;
  for (double n : occ) {
    const XcDecomposition d = exchange_correlation({n, t, u, kappa});
    const double b = -u * n * n / 4.0;
    r.e_xc += d.e_xc;
    r.bound += b;
    r.min_site_slack = std::min(r.min_site_slack, d.e_xc - b);
    r.min_f = std::min(r.min_f, d.f);
  }
  if (occ.empty()) r.min_site_slack = r.min_f = 0.0;
  r.slack = r.e_xc - r.bound;
  r.holds = r.slack >= -tolerance;
  return r;
}

/// Lieb-Wu half-filling energy per site in units of t:
///   -4 int_0^inf J0(x) J1(x) / (x (1 + exp(x U / 2t))) dx.
/// At U = 0 the integral is 2/pi in closed form, so e = -4/pi.
inline double lieb_wu_energy(double u_over_t) {
  if (!(u_over_t >= 0.0) || !std::isfinite(u_over_t)) throw InvalidArgument("U/t must be nonnegative");
  if (u_over_t == 0.0) return -4.0 / std::numbers::pi;
  const double a = 0.5 * u_over_t;
  auto g = [a](double x) {
    if (x == 0.0) return 0.25;  // J0 J1 / x -> 1/2, times 1/2
    const double ex = a * x;
    const double fermi = ex > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(ex));
    return std::cyl_bessel_j(0.0, x) * std::cyl_bessel_j(1.0, x) / x * fermi;
  };
  // Integrand decays like exp(-a x) / x^2; cut where the bound is negligible.
  const double reach = std::min(40.0 / a + 40.0, 2.0e4);
  std::vector<double> brk;
  for (double x = std::numbers::pi; x < reach; x += std::numbers::pi) brk.push_back(x);
  const QuadratureResult r = quad(g, {0.0, reach}, QuadratureSpec{1e-14, 1e-11, 20000, 0.0}, brk);
  return -4.0 * r.value;
}

/// kappa in [1, 2] with -(2 kappa/pi) sin(pi/kappa) = e_LW(U/t).
inline double beta_of_u(double u_over_t) {
  const double target = lieb_wu_energy(u_over_t);
  auto h = [target](double k) { return -(2.0 * k / std::numbers::pi) * std::sin(std::numbers::pi / k) - target; };
  const double h1 = h(1.0), h2 = h(2.0);
  if (std::abs(h2) <= 1e-13) return 2.0;
  if (std::abs(h1) <= 1e-13) return 1.0;
  if (h1 * h2 > 0.0) throw NoBracket("interpolation target leaves kappa in [1, 2]");
  return find_root(h, {1.0, 2.0}, 1e-14);
}

}  // namespace lo1d::hubbard
