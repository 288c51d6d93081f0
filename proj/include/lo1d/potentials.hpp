#pragma once

// Pair-interaction potentials on the half line r = |x - y| >= 0 together with
// their derivatives, the two moments of v'' that drive the Lieb-Oxford
// estimates, and a grid certifier for the moment growth conditions
//   int_0^g v'' r^2 dr <= c1 ln(1 + c2 g),   int_g^inf v'' r dr <= c3 / g.

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lo1d/errors.hpp"
#include "lo1d/numerics.hpp"

namespace lo1d {

namespace family {
/// Dirac interaction delta(x - y) with unit strength.
struct Contact {};
/// Triangle 2/sigma - 2r/sigma^2 on [0, sigma], zero beyond; unit integral.
struct ApproxContact {
  double sigma = 1.0;
};
/// 1 / sqrt(r^2 + eps^2).
struct SoftCoulomb {
  double epsilon = 1.0;
};
/// Soft Coulomb shifted by eps/sqrt(2), which makes it convex on [0, inf).
struct ConvexSoftCoulomb {
  double epsilon = 1.0;
};
/// (sqrt(pi) / 2 beta) erfcx(r / 2 beta): thin-wire Coulomb interaction.
struct RegularizedCoulomb {
  double beta = 1.0;
};
/// r^(eps - 1), 0 < eps < 1.
struct Homogeneous {
  double epsilon = 0.5;
};
}  // namespace family

using PotentialFamily = std::variant<family::Contact, family::ApproxContact, family::SoftCoulomb,
                                     family::ConvexSoftCoulomb, family::RegularizedCoulomb, family::Homogeneous>;

class Potential {
 public:
  static Potential contact() { return Potential(family::Contact{}); }
  static Potential approx_contact(double sigma) { return Potential(family::ApproxContact{sigma}); }
  static Potential soft_coulomb(double eps) { return Potential(family::SoftCoulomb{eps}); }
  static Potential convex_soft_coulomb(double eps) { return Potential(family::ConvexSoftCoulomb{eps}); }
  static Potential regularized_coulomb(double beta) { return Potential(family::RegularizedCoulomb{beta}); }
  static Potential homogeneous(double eps) { return Potential(family::Homogeneous{eps}); }

  explicit Potential(PotentialFamily f) : family_(f) { validate(); }

  const PotentialFamily& family() const { return family_; }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(family_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(family_);
  }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Contact>) return "Contact";
          else if constexpr (std::is_same_v<T, family::ApproxContact>) return "ApproxContact";
          else if constexpr (std::is_same_v<T, family::SoftCoulomb>) return "SoftCoulomb";
          else if constexpr (std::is_same_v<T, family::ConvexSoftCoulomb>) return "ConvexSoftCoulomb";
          else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) return "RegularizedCoulomb";
          else return "Homogeneous";
        },
        family_);
  }

  /// Named parameters, e.g. {"sigma": 0.5}.
  std::map<std::string, double> params() const {
    return std::visit(
        [](const auto& f) -> std::map<std::string, double> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Contact>) return {};
          else if constexpr (std::is_same_v<T, family::ApproxContact>) return {{"sigma", f.sigma}};
          else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) return {{"beta", f.beta}};
          else return {{"epsilon", f.epsilon}};
        },
        family_);
  }

  /// "Family(key=value)" label used in reports.
  std::string label() const {
    std::ostringstream s;
    s << name();
    const auto p = params();
    if (!p.empty()) {
      s << '(';
      bool first = true;
      for (const auto& [k, v] : p) {
        s << (first ? "" : ",") << k << '=' << v;
        first = false;
      }
      s << ')';
    }
    return s.str();
  }

  /// Length over which the potential varies; 1 for the scale-free families.
  double natural_length() const {
    return std::visit(
        [](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ApproxContact>) return f.sigma;
          else if constexpr (std::is_same_v<T, family::SoftCoulomb> || std::is_same_v<T, family::ConvexSoftCoulomb>)
            return f.epsilon;
          else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) return f.beta;
          else return 1.0;
        },
        family_);
  }

  /// Convex on [0, inf) with v -> 0 at infinity (the hypotheses of the
  /// constant-gamma moment bound).
  bool convex_decaying() const { return !is<family::SoftCoulomb>() && !is<family::Contact>(); }

  bool operator==(const Potential& o) const { return label() == o.label(); }

 private:
  void validate() const {
    std::visit(
        [](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ApproxContact>) {
            if (!(f.sigma > 0.0) || !std::isfinite(f.sigma)) throw InvalidArgument("ApproxContact requires sigma > 0");
          } else if constexpr (std::is_same_v<T, family::SoftCoulomb> ||
                               std::is_same_v<T, family::ConvexSoftCoulomb>) {
            if (!(f.epsilon > 0.0) || !std::isfinite(f.epsilon))
              throw InvalidArgument("soft Coulomb potentials require epsilon > 0");
          } else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) {
            if (!(f.beta > 0.0) || !std::isfinite(f.beta)) throw InvalidArgument("RegularizedCoulomb requires beta > 0");
          } else if constexpr (std::is_same_v<T, family::Homogeneous>) {
            if (!(f.epsilon > 0.0 && f.epsilon < 1.0))
              throw InvalidArgument("Homogeneous requires an exponent epsilon in (0, 1)");
          }
        },
        family_);
  }

  PotentialFamily family_;
};

struct Assumption1Constants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;

  void validate() const {
    if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0)) throw InvalidArgument("Assumption 1 constants must be positive");
  }
};

struct MomentValues {
  double gamma = 0.0;
  double second_moment = 0.0;      // int_0^gamma v'' r^2 dr
  double first_moment_tail = 0.0;  // int_gamma^inf v'' r dr
};

namespace detail {

inline double shift_convex(double eps) { return eps / std::numbers::sqrt2; }

// Soft Coulomb kernel f(u) = (u^2 + e^2)^(-1/2) and derivatives.
inline double sc_value(double u, double e) { return 1.0 / std::sqrt(u * u + e * e); }
inline double sc_d1(double u, double e) {
  const double q = u * u + e * e;
  return -u / (q * std::sqrt(q));
}
inline double sc_d2(double u, double e) {
  const double q = u * u + e * e;
  return (2.0 * u * u - e * e) / (q * q * std::sqrt(q));
}

// (1 - e^{-y}(1 + y + y^2/2)) without cancellation.
inline double taylor_remainder3(double y) {
  if (y > 1.0) return -std::expm1(-y) - std::exp(-y) * (y + 0.5 * y * y);
  double term = y * y * y / 6.0, sum = term;
  for (int k = 4; k < 40; ++k) {
    term *= y / k;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-y) * sum;
}

}  // namespace detail

/// v(r). Contact has no pointwise value.
inline double value(const Potential& p, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("potential evaluated at r < 0");
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Contact>) throw ContactNotPointwise();
        else if constexpr (std::is_same_v<T, family::ApproxContact>)
          return r <= f.sigma ? 2.0 / f.sigma - 2.0 * r / (f.sigma * f.sigma) : 0.0;
        else if constexpr (std::is_same_v<T, family::SoftCoulomb>) return detail::sc_value(r, f.epsilon);
        else if constexpr (std::is_same_v<T, family::ConvexSoftCoulomb>)
          return detail::sc_value(r + detail::shift_convex(f.epsilon), f.epsilon);
        else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>)
          return kSqrtPi / (2.0 * f.beta) * erfcx(r / (2.0 * f.beta));
        else return std::pow(r, f.epsilon - 1.0);
      },
      p.family());
}

inline double deriv1(const Potential& p, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("potential derivative evaluated at r < 0");
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Contact>) throw ContactNotPointwise();
        else if constexpr (std::is_same_v<T, family::ApproxContact>)
          return r < f.sigma ? -2.0 / (f.sigma * f.sigma) : 0.0;
        else if constexpr (std::is_same_v<T, family::SoftCoulomb>) return detail::sc_d1(r, f.epsilon);
        else if constexpr (std::is_same_v<T, family::ConvexSoftCoulomb>)
          return detail::sc_d1(r + detail::shift_convex(f.epsilon), f.epsilon);
        else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>)
          return kSqrtPi / (4.0 * f.beta * f.beta) * erfcx_d1(r / (2.0 * f.beta));
        else {
          if (r == 0.0) throw InvalidArgument("homogeneous potential derivative requires r > 0");
          return (f.epsilon - 1.0) * std::pow(r, f.epsilon - 2.0);
        }
      },
      p.family());
}

inline double deriv2(const Potential& p, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("potential derivative evaluated at r < 0");
  return std::visit(
      [r](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Contact>) throw ContactNotPointwise();
        else if constexpr (std::is_same_v<T, family::ApproxContact>) throw DistributionalDerivative();
        else if constexpr (std::is_same_v<T, family::SoftCoulomb>) return detail::sc_d2(r, f.epsilon);
        else if constexpr (std::is_same_v<T, family::ConvexSoftCoulomb>)
          return detail::sc_d2(r + detail::shift_convex(f.epsilon), f.epsilon);
        else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) {
          const double b = f.beta;
          return kSqrtPi / (8.0 * b * b * b) * erfcx_d2(r / (2.0 * b));
        } else {
          if (r == 0.0) throw InvalidArgument("homogeneous potential derivative requires r > 0");
          return (f.epsilon - 1.0) * (f.epsilon - 2.0) * std::pow(r, f.epsilon - 3.0);
        }
      },
      p.family());
}

/// int_0^gamma v'' r^2 dr.
///
/// Evaluated from v'(g) g^2 - 2 g v(g) + 2 int_0^g v. For the soft Coulomb
/// families that identity cancels to O(g^3) or worse below the softening
/// length, so there the analytic integrand is integrated with a 32-point
/// Gauss-Legendre rule instead (v'' is analytic on a disc of radius ~eps).
/// The regularized Coulomb potential has no elementary antiderivative; its
/// moment uses the Laplace form erfcx(x) = (2/sqrt(pi)) int e^{-t^2-2xt} dt,
/// which gives int_0^g v'' r^2 = int_0^inf e^{-t^2} 2 q(g t / beta) / t dt with
/// q(y) = 1 - e^{-y}(1 + y + y^2/2) >= 0.
inline double second_moment(const Potential& p, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("second_moment requires gamma >= 0");
  if (gamma == 0.0) return 0.0;
  return std::visit(
      [gamma, &p](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Contact>) {
          throw ContactNotPointwise();
        } else if constexpr (std::is_same_v<T, family::ApproxContact>) {
          // v'' = 2 delta(r - sigma) / sigma^2; the atom sits inside [0, gamma] once gamma >= sigma.
          return gamma >= f.sigma ? 2.0 : 0.0;
        } else if constexpr (std::is_same_v<T, family::SoftCoulomb> ||
                             std::is_same_v<T, family::ConvexSoftCoulomb>) {
          const double e = f.epsilon;
          const double a = std::is_same_v<T, family::ConvexSoftCoulomb> ? detail::shift_convex(e) : 0.0;
          if (gamma < 0.25 * e)
            return gauss_legendre_fixed<32>([&](double r) { return detail::sc_d2(r + a, e) * r * r; }, 0.0, gamma);
          const double b = gamma + a;
          const double integral_v = std::asinh(b / e) - std::asinh(a / e);
          return detail::sc_d1(b, e) * gamma * gamma - 2.0 * gamma * detail::sc_value(b, e) + 2.0 * integral_v;
        } else if constexpr (std::is_same_v<T, family::RegularizedCoulomb>) {
          const double k = gamma / f.beta;
          QuadratureSpec tight{1e-30, 1e-13, 4000, 0.0};
          auto integrand = [k](double t) {
            if (t == 0.0) return 0.0;
            return std::exp(-t * t) * 2.0 * detail::taylor_remainder3(k * t) / t;
          };
          const double brk[] = {0.5, 1.0, 2.0, 4.0};
          return quad(integrand, {0.0, 8.0}, tight, brk).value;
        } else {
          const double e = f.epsilon;
          return (e - 1.0) * (e - 2.0) / e * std::pow(gamma, e);
        }
      },
      p.family());
}

/// int_gamma^inf v'' r dr = v(gamma) - gamma v'(gamma).
inline double first_moment_tail(const Potential& p, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("first_moment_tail requires gamma >= 0");
  return std::visit(
      [gamma, &p](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Contact>) {
          throw ContactNotPointwise();
        } else if constexpr (std::is_same_v<T, family::ApproxContact>) {
          return gamma < f.sigma ? 2.0 / f.sigma : 0.0;
        } else if constexpr (std::is_same_v<T, family::Homogeneous>) {
          if (gamma == 0.0) return kInf;
          return (2.0 - f.epsilon) * std::pow(gamma, f.epsilon - 1.0);
        } else {
          return value(p, gamma) - gamma * deriv1(p, gamma);
        }
      },
      p.family());
}

inline MomentValues moments(const Potential& p, double gamma) {
  return {gamma, second_moment(p, gamma), first_moment_tail(p, gamma)};
}

/// int_0^inf v(r) dr, finite only for the approximate contact potential.
inline double integral_value(const Potential& p) {
  if (const auto* a = std::get_if<family::ApproxContact>(&p.family())) {
    (void)a;
    return 1.0;
  }
  if (p.is<family::Contact>()) return 1.0;
  throw DivergentIntegral(p.label() + ": int_0^inf v dr diverges (v decays no faster than 1/r)");
}

/// v(0) where finite.
inline double value_at_zero(const Potential& p) {
  if (p.is<family::Homogeneous>()) throw DivergentIntegral("homogeneous potential is singular at r = 0");
  return value(p, 0.0);
}

/// The constants established for the two logarithmic families:
/// convex soft Coulomb (2, sqrt(2)/eps, 2), regularized Coulomb (4, sqrt(pi)/(4 beta), 4).
inline Assumption1Constants theorem_constants(const Potential& p) {
  if (const auto* f = std::get_if<family::ConvexSoftCoulomb>(&p.family()))
    return {2.0, std::numbers::sqrt2 / f->epsilon, 2.0};
  if (const auto* f = std::get_if<family::RegularizedCoulomb>(&p.family()))
    return {4.0, kSqrtPi / (4.0 * f->beta), 4.0};
  throw IncompatibleSpec(p.label() + " has no established moment constants");
}

/// Alternate constants that also appear for the two families: c2 = 2/eps for
/// the convex soft Coulomb potential and the tighter c3 = 3 for the
/// regularized Coulomb potential.
inline Assumption1Constants alternate_constants(const Potential& p) {
  if (const auto* f = std::get_if<family::ConvexSoftCoulomb>(&p.family())) return {2.0, 2.0 / f->epsilon, 2.0};
  if (const auto* f = std::get_if<family::RegularizedCoulomb>(&p.family())) return {4.0, kSqrtPi / (4.0 * f->beta), 3.0};
  throw IncompatibleSpec(p.label() + " has no alternate moment constants");
}

struct Assumption1Report {
  bool passed = true;
  bool convex = true;
  double max_violation_second = 0.0;  // max over grid of (moment - bound) / bound, clipped at 0
  double max_violation_tail = 0.0;
  std::vector<double> offending_gamma;
  /// Smallest c1 certified on the grid for the given c2, and smallest c3.
  double min_c1 = 0.0;
  double min_c3 = 0.0;
};

/// Default certification grid: 200 log-spaced points on [1e-4, 1e4] times the
/// potential's natural length.
inline std::vector<double> default_gamma_grid(const Potential& p, int n = 200) {
  const double L = p.natural_length();
  return log_grid(1e-4 * L, 1e4 * L, n);
}

/// Checks the moment growth conditions on every grid point. Rounding slack
/// is 1e-12 relative.
inline Assumption1Report certify_assumption1(const Potential& p, const Assumption1Constants& c,
                                             const std::vector<double>& gamma_grid) {
  c.validate();
  if (p.is<family::Contact>()) throw IncompatibleSpec("contact potential has no moments");
  Assumption1Report rep;
  constexpr double slack = 1e-12;
  // v''(0) = 0 for the convex soft Coulomb shift; allow its rounding error
  double curvature_floor = 0.0;
  if (!p.is<family::ApproxContact>() && !p.is<family::Homogeneous>()) {
    const double L = p.natural_length();
    curvature_floor = 1e-12 * value(p, 0.0) / (L * L);
  }
  for (double g : gamma_grid) {
    if (!(g > 0.0)) throw InvalidArgument("certification grid must be positive");
    const double m2 = second_moment(p, g);
    const double m1 = first_moment_tail(p, g);
    const double b2 = c.c1 * std::log1p(c.c2 * g);
    const double b1 = c.c3 / g;
    const double v2 = (m2 - b2) / b2;
    const double v1 = (m1 - b1) / b1;
    rep.max_violation_second = std::max(rep.max_violation_second, v2);
    rep.max_violation_tail = std::max(rep.max_violation_tail, v1);
    if (v2 > slack || v1 > slack || !std::isfinite(m1)) rep.offending_gamma.push_back(g);
    rep.min_c1 = std::max(rep.min_c1, m2 / std::log1p(c.c2 * g));
    rep.min_c3 = std::max(rep.min_c3, m1 * g);
    if (!p.is<family::ApproxContact>() && deriv2(p, g) < -curvature_floor) rep.convex = false;
  }
  if (!p.is<family::ApproxContact>() && !p.is<family::Homogeneous>() && deriv2(p, 0.0) < -curvature_floor)
    rep.convex = false;
  rep.passed = rep.offending_gamma.empty() && rep.convex;
  return rep;
}

/// Throwing form of certify_assumption1.
inline Assumption1Report require_assumption1(const Potential& p, const Assumption1Constants& c,
                                             const std::vector<double>& gamma_grid) {
  Assumption1Report rep = certify_assumption1(p, c, gamma_grid);
  if (!rep.passed) {
    std::ostringstream msg;
    msg << p.label() << " fails the moment conditions";
    if (!rep.convex) msg << " (not convex)";
    if (!rep.offending_gamma.empty()) {
      msg << " at gamma =";
      for (std::size_t i = 0; i < rep.offending_gamma.size() && i < 10; ++i) msg << ' ' << rep.offending_gamma[i];
      if (rep.offending_gamma.size() > 10) msg << " ... (" << rep.offending_gamma.size() << " points)";
    }
    throw CertificationFailed(msg.str());
  }
  return rep;
}

/// int_0^inf v(r) g(r) dr for a smooth weight g that is negligible beyond
/// `g_extent`. Handles the kink of the approximate contact potential and the
/// integrable r^(eps-1) singularity of the homogeneous one (via r = t^(1/eps)).
template <class G>
QuadratureResult radial_integral(const Potential& p, G&& g, const QuadratureSpec& spec,
                                 std::vector<double> breakpoints = {}, double g_extent = kInf) {
  if (p.is<family::Contact>()) throw ContactNotPointwise();
  double hi = g_extent;
  if (const auto* a = std::get_if<family::ApproxContact>(&p.family())) hi = std::min(hi, a->sigma);
  if (!(hi > 0.0)) return {};
  if (const auto* h = std::get_if<family::Homogeneous>(&p.family())) {
    const double e = h->epsilon;
    const double split = std::min(hi, breakpoints.empty() ? 1.0 : std::max(breakpoints.front(), 1e-300));
    // int_0^split r^(e-1) g(r) dr = (1/e) int_0^(split^e) g(t^(1/e)) dt
    std::vector<double> inner;
    for (double b : breakpoints)
      if (b > 0.0 && b < split) inner.push_back(std::pow(b, e));
    QuadratureResult near = quad([&](double t) { return g(std::pow(t, 1.0 / e)) / e; }, {0.0, std::pow(split, e)}, spec, inner);
    QuadratureResult far;
    if (hi > split) far = quad([&](double r) { return std::pow(r, e - 1.0) * g(r); }, {split, hi}, spec, breakpoints);
    near.value += far.value;
    near.error += far.error;
    near.evaluations += far.evaluations;
    return near;
  }
  return quad([&](double r) { return value(p, r) * g(r); }, {0.0, hi}, spec, breakpoints);
}

}  // namespace lo1d
