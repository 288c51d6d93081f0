#pragma once

// Interaction energies of trial states. Both the pair expectation and the
// Hartree term reduce to one-dimensional integrals over the particle
// separation r = |x - y|:
//   <V> = 1/2 int v(|u|) C(u) du,   D = 1/2 int v(|u|) A(u) du,
// with C(u) = int P(s + u/2, s - u/2) ds the separation density of the pair
// density and A the autocorrelation of rho. For Gaussian-orbital states C and
// A are Gaussian mixtures; otherwise they are evaluated by quadrature along
// the line x - y = u.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lo1d/errors.hpp"
#include "lo1d/gaussian_mixture.hpp"
#include "lo1d/numerics.hpp"
#include "lo1d/potentials.hpp"
#include "lo1d/states.hpp"

namespace lo1d {

struct EnergyBreakdown {
  double expectation_v = 0.0;
  double hartree = 0.0;
  double i_xc = 0.0;
  double error = 0.0;  // combined quadrature error estimate
};

/// Quadrature settings for energy integrals: tight enough that the combined
/// error stays far below the 1e-6 bound-verification slack.
inline QuadratureSpec energy_quadrature() { return {1e-14, 1e-11, 8000, 0.0}; }

namespace detail {

/// 1/2 int_R v(|u|) m(u) du for a mixture m. Each component is integrated
/// on its own (a positive integrand, so a relative tolerance is meaningful)
/// and the weighted sum taken afterwards; antisymmetrized states carry
/// signed weights whose cancellation would otherwise put a noise floor under
/// the adaptive error estimate.
inline QuadratureResult mixture_pair_integral(const Potential& p, const GaussianMixture& m, const QuadratureSpec& spec) {
  if (m.empty()) return {};
  if (p.is<family::Contact>()) return {0.5 * m(0.0), 0.0, 1, 0};
  QuadratureSpec cs = spec;
  cs.rel_tol = std::min(spec.rel_tol, 1e-12);
  cs.abs_tol = 1e-300;
  QuadratureResult out;
  for (const auto& c : m.components()) {
    const double mu = std::abs(c.mean), sd = std::sqrt(c.variance);
    std::vector<double> brk;
    for (double k : {-8.0, -4.0, -1.0, 0.0, 1.0, 4.0, 8.0})
      if (mu + k * sd > 0.0) brk.push_back(mu + k * sd);
    auto g = [mu, v = c.variance](double r) { return 0.5 * (normal_pdf(r, mu, v) + normal_pdf(r, -mu, v)); };
    const QuadratureResult r = radial_integral(p, g, cs, brk, mu + 40.0 * sd);
    out.value += c.weight * r.value;
    out.error += std::abs(c.weight) * r.error;
    out.evaluations += r.evaluations;
  }
  return out;
}

/// 1/2 int_R v(|u|) g(u) du for an even function g supported in |u| <= reach
/// with structure on the scale `feature`.
template <class G>
QuadratureResult even_pair_integral(const Potential& p, G&& g, double reach, double feature,
                                    const QuadratureSpec& spec) {
  if (p.is<family::Contact>()) return {0.5 * g(0.0), 0.0, 1, 0};
  std::vector<double> brk;
  for (double b = feature; b < reach; b *= 2.0) brk.push_back(b);
  return radial_integral(p, std::forward<G>(g), spec, brk, reach);
}

}  // namespace detail

/// <psi| sum_{i<j} v(|x_i - x_j|) |psi>. Contact: int |psi(x,x)|^2 for N = 2,
/// in general 1/2 int P(x, x) dx.
inline QuadratureResult expectation_v_result(const TrialState& s, const Potential& p,
                                             const QuadratureSpec& spec = energy_quadrature()) {
  if (s.analytic()) return detail::mixture_pair_integral(p, s.separation_mixture(), spec);
  const Interval sup = s.support();
  return detail::even_pair_integral(
      p, [&s](double r) { return s.separation_density(r); }, sup.hi - sup.lo, s.feature_length(), spec);
}

inline double expectation_v(const TrialState& s, const Potential& p, const QuadratureSpec& spec = energy_quadrature()) {
  return expectation_v_result(s, p, spec).value;
}

/// D(rho, rho) = 1/2 int int rho(x) rho(y) v(|x - y|) dx dy for the exact
/// density of the state. Contact: 1/2 int rho^2.
inline QuadratureResult hartree_result(const TrialState& s, const Potential& p,
                                       const QuadratureSpec& spec = energy_quadrature()) {
  if (s.analytic()) {
    const GaussianMixture& rho = s.density_mixture();
    return detail::mixture_pair_integral(p, rho.autocorrelation(rho), spec);
  }
  const Interval sup = s.support();
  return detail::even_pair_integral(
      p, [&s](double r) { return s.density_autocorrelation(r); }, sup.hi - sup.lo, s.feature_length(), spec);
}

inline double hartree(const TrialState& s, const Potential& p, const QuadratureSpec& spec = energy_quadrature()) {
  return hartree_result(s, p, spec).value;
}

/// Same integrals by direct quadrature of the pair density and density along
/// x - y = u, ignoring any closed form. Used to cross-check the mixture route.
inline double expectation_v_numeric(const TrialState& s, const Potential& p,
                                    const QuadratureSpec& spec = energy_quadrature()) {
  const Interval sup = s.support();
  return detail::even_pair_integral(
             p, [&s](double r) { return s.separation_density_numeric(r); }, sup.hi - sup.lo, s.feature_length(), spec)
      .value;
}

inline double hartree_numeric(const TrialState& s, const Potential& p,
                              const QuadratureSpec& spec = energy_quadrature()) {
  const Interval sup = s.support();
  return detail::even_pair_integral(
             p, [&s](double r) { return s.density_autocorrelation_numeric(r); }, sup.hi - sup.lo, s.feature_length(),
             spec)
      .value;
}

/// Contact interaction of an N = 2 state straight from the wavefunction:
/// int |psi(x, x)|^2 dx.
inline double contact_diagonal_integral(const TrialState& s) {
  if (s.n_particles() != 2) throw InvalidArgument("diagonal integral defined for two particles");
  const Interval sup = s.support();
  return integrate_1d(
      [&s](double x) {
        const double xy[2] = {x, x};
        const double v = s.wavefunction(xy);
        return v * v;
      },
      sup, QuadratureSpec{1e-14, 1e-11, 4000, 0.0});
}

namespace detail {

// Centred cubic B-spline, support [-2, 2].
inline double bspline3(double t) {
  t = std::abs(t);
  if (t >= 2.0) return 0.0;
  if (t >= 1.0) {
    const double u = 2.0 - t;
    return u * u * u / 6.0;
  }
  return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
}

}  // namespace detail

/// D(rho, rho) for a grid profile. The density autocorrelation
/// A(r) = int rho(s) rho(s + r) ds is sampled at the lags r = k dx by the
/// trapezoid rule (spectrally accurate for smooth densities that vanish at
/// the grid ends), interpolated by the even cubic spline through those
/// samples, and integrated against v. O(n^2) for the lag sums.
inline double hartree(const DensityProfile& d, const Potential& p) {
  d.validate();
  if (p.is<family::Contact>()) return 0.5 * density_power_integral(d, 2.0);
  const std::size_t n = d.size();
  const double h = d.dx;
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += d.values[i] * d.values[i + k];
    c[k] = h * s;
  }
  // B-spline coefficients b with (b_{k-1} + 4 b_k + b_{k+1}) / 6 = c_k,
  // b_{-1} = b_1 by symmetry and b_n = 0 (Thomas algorithm).
  std::vector<double> b(n, 0.0);
  {
    std::vector<double> diag(n, 4.0 / 6.0), upper(n, 1.0 / 6.0), rhs = c;
    upper[0] = 2.0 / 6.0;  // row 0 sees b_{-1} + b_1 = 2 b_1
    for (std::size_t k = 1; k < n; ++k) {
      const double m = (1.0 / 6.0) / diag[k - 1];
      diag[k] -= m * upper[k - 1];
      rhs[k] -= m * rhs[k - 1];
    }
    b[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) b[k] = (rhs[k] - upper[k] * b[k + 1]) / diag[k];
  }
  auto coef = [&](std::ptrdiff_t k) {
    const auto a = static_cast<std::size_t>(std::abs(k));
    return a < n ? b[a] : 0.0;
  };
  auto A = [&](double r) {
    const double t = r / h;
    const auto j = static_cast<std::ptrdiff_t>(std::floor(t));
    double s = 0.0;
    for (std::ptrdiff_t k = j - 1; k <= j + 2; ++k) s += coef(k) * detail::bspline3(t - static_cast<double>(k));
    return s;
  };
  // One past the last nonzero lag; the spline reaches two knots further.
  std::size_t last = n;
  while (last > 0 && c[last - 1] == 0.0) --last;
  if (last == 0) return 0.0;
  const double reach = (static_cast<double>(last) + 2.0) * h;
  const QuadratureSpec near_spec{1e-14, 1e-11, 4000, 0.0};
  double total = 0.0;
  const std::size_t segments = last + 2;
  const std::size_t near = std::min<std::size_t>(segments, 8);
  // Segments near r = 0 may hold the singular or rapidly varying part of v.
  std::vector<double> brk;
  for (std::size_t j = 1; j < near; ++j) brk.push_back(static_cast<double>(j) * h);
  total += radial_integral(p, A, near_spec, brk, static_cast<double>(near) * h).value;
  double sigma = kInf;
  if (const auto* a = std::get_if<family::ApproxContact>(&p.family())) sigma = a->sigma;
  for (std::size_t j = near; j < segments; ++j) {
    const double lo = static_cast<double>(j) * h, hi = std::min(lo + h, reach);
    if (lo >= sigma) break;
    const double top = std::min(hi, sigma);
    total += gauss_legendre_fixed<16>([&](double r) { return value(p, r) * A(r); }, lo, top);
  }
  return total;
}

/// I_xc = <V> - D with the breakdown.
inline EnergyBreakdown i_xc(const TrialState& s, const Potential& p, const QuadratureSpec& spec = energy_quadrature()) {
  const QuadratureResult v = expectation_v_result(s, p, spec);
  const QuadratureResult h = hartree_result(s, p, spec);
  return {v.value, h.value, v.value - h.value, v.error + h.error};
}

/// Energies for the shifted interaction v - c: the pair sum loses
/// c N(N-1)/2, the Hartree term c N^2/2, so I_xc gains c N/2.
inline EnergyBreakdown shifted(const EnergyBreakdown& e, double c, int n_particles) {
  EnergyBreakdown out = e;
  out.expectation_v -= c * n_particles * (n_particles - 1) / 2.0;
  out.hartree -= c * n_particles * n_particles / 2.0;
  out.i_xc = out.expectation_v - out.hartree;
  return out;
}

/// alpha(r, z) = int_{z-r}^{z+r} rho.
inline double alpha_profile(const TrialState& s, double r, double z) {
  if (!(r >= 0.0)) throw InvalidArgument("alpha_profile requires r >= 0");
  if (std::isinf(r)) return s.n_particles();
  return s.mass_between(z - r, z + r);
}

/// int alpha(r, z)^2 dz.
inline double alpha_square_integral(const TrialState& s, double r) {
  const Interval sup = s.support();
  return integrate_1d(
      [&](double z) {
        const double a = alpha_profile(s, r, z);
        return a * a;
      },
      {sup.lo - r, sup.hi + r}, QuadratureSpec{1e-13, 1e-10, 4000, 0.0});
}

}  // namespace lo1d
