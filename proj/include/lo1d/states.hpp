#pragma once

// Few-particle trial wavefunctions (N = 2, 3), their one-body densities
// sampled on uniform grids, L^p density functionals and the centred
// Hardy-Littlewood maximal operator.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lo1d/errors.hpp"
#include "lo1d/format.hpp"
#include "lo1d/gaussian_mixture.hpp"
#include "lo1d/numerics.hpp"

namespace lo1d {

enum class Symmetry { Symmetric, Antisymmetric };

inline std::string to_string(Symmetry s) { return s == Symmetry::Symmetric ? "symmetric" : "antisymmetric"; }

inline Symmetry symmetry_from_string(const std::string& s) {
  if (s == "symmetric" || s == "SymmetricSpatial") return Symmetry::Symmetric;
  if (s == "antisymmetric" || s == "AntisymmetricSpatial") return Symmetry::Antisymmetric;
  throw InvalidArgument("unknown symmetry '" + s + "'");
}

namespace state_family {
/// (Anti)symmetrized product of Gaussian orbitals phi_c with phi_c^2 the
/// normal density of mean c and standard deviation `width`.
struct GaussianProduct {
  std::vector<double> centers;
  double width = 1.0;
};
/// (Anti)symmetrized product of harmonic-oscillator eigenfunctions
/// h_k(x) = w^(-1/2) psi_k((x - center) / w), k = first_level, first_level + 1, ...
struct HermiteSlater {
  int first_level = 0;
  double center = 0.0;
  double width = 1.0;
};
/// Correlated two-particle geminal phi(X) chi(x1 - x2) with X the centre of
/// mass: phi^2 = N(X; center, cm_width^2) and
/// chi(u) = exp(-(u - d)^2 / 4s^2) +- exp(-(u + d)^2 / 4s^2).
/// The softening length epsilon is carried as the scale of the interaction the
/// pair is meant to model; the shape is fixed by the four variational lengths.
struct SoftCoulombGroundPair {
  double epsilon = 1.0;
  double center = 0.0;
  double cm_width = 1.0;
  double offset = 1.0;
  double rel_width = 0.5;
};
}  // namespace state_family

using StateFamily =
    std::variant<state_family::GaussianProduct, state_family::HermiteSlater, state_family::SoftCoulombGroundPair>;

namespace detail {

/// Normalized Hermite function psi_k(xi) via the stable three-term recurrence.
inline double hermite_function(int k, double xi) {
  double p0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  if (k == 0) return p0;
  double p1 = std::numbers::sqrt2 * xi * p0;
  for (int j = 1; j < k; ++j) {
    const double p2 = std::sqrt(2.0 / (j + 1)) * xi * p1 - std::sqrt(static_cast<double>(j) / (j + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

struct Permutation {
  std::array<int, 3> map{};
  int sign = 1;
};

inline std::vector<Permutation> permutations(int n) {
  std::array<int, 3> a{0, 1, 2};
  std::vector<Permutation> out;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (a[i] > a[j]) ++inv;
    out.push_back({a, inv % 2 ? -1 : 1});
  } while (std::next_permutation(a.begin(), a.begin() + n));
  return out;
}

}  // namespace detail

class TrialState {
 public:
  static TrialState gaussian_product(std::vector<double> centers, double width, Symmetry sym) {
    const auto n = static_cast<int>(centers.size());
    return TrialState(n, sym, state_family::GaussianProduct{std::move(centers), width});
  }
  static TrialState hermite_slater(int n_particles, double width, Symmetry sym, double center = 0.0,
                                   int first_level = 0) {
    return TrialState(n_particles, sym, state_family::HermiteSlater{first_level, center, width});
  }
  static TrialState soft_coulomb_pair(double epsilon, Symmetry sym, double center, double cm_width, double offset,
                                      double rel_width) {
    return TrialState(2, sym, state_family::SoftCoulombGroundPair{epsilon, center, cm_width, offset, rel_width});
  }
  /// Pair with default variational lengths tied to epsilon.
  static TrialState soft_coulomb_pair(double epsilon, Symmetry sym) {
    return soft_coulomb_pair(epsilon, sym, 0.0, 1.0, 1.0 + epsilon, 0.5 + 0.5 * epsilon);
  }

  TrialState(int n_particles, Symmetry sym, StateFamily family)
      : n_(n_particles), sym_(sym), family_(std::move(family)) {
    if (n_ < 2 || n_ > 3) throw InvalidArgument("trial states have 2 or 3 particles");
    build();
  }

  int n_particles() const { return n_; }
  Symmetry symmetry() const { return sym_; }
  const StateFamily& family() const { return family_; }

  std::string family_name() const {
    switch (family_.index()) {
      case 0: return "GaussianProduct";
      case 1: return "HermiteSlater";
      default: return "SoftCoulombGroundPair";
    }
  }

  /// Flat parameter vector in the family's canonical order.
  std::vector<double> params() const {
    if (const auto* g = std::get_if<state_family::GaussianProduct>(&family_)) {
      std::vector<double> p = g->centers;
      p.push_back(g->width);
      return p;
    }
    if (const auto* h = std::get_if<state_family::HermiteSlater>(&family_))
      return {static_cast<double>(h->first_level), h->center, h->width};
    const auto& c = std::get<state_family::SoftCoulombGroundPair>(family_);
    return {c.epsilon, c.center, c.cm_width, c.offset, c.rel_width};
  }

  std::string describe() const {
    std::ostringstream s;
    s << family_name() << "[N=" << n_ << "," << to_string(sym_);
    for (double p : params()) s << ',' << format_number(p);
    s << ']';
    return s.str();
  }

  /// True when density and pair statistics are exact Gaussian mixtures.
  bool analytic() const { return rho_mix_.has_value(); }
  const GaussianMixture& density_mixture() const { return rho_mix_.value(); }
  /// Distribution of x1 - x2 under the pair density (total mass N(N-1)).
  const GaussianMixture& separation_mixture() const { return sep_mix_.value(); }

  /// psi(x_1, ..., x_N), normalized.
  double wavefunction(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw InvalidArgument("wavefunction needs one coordinate per particle");
    if (const auto* c = std::get_if<state_family::SoftCoulombGroundPair>(&family_)) {
      const double X = 0.5 * (x[0] + x[1]), u = x[0] - x[1];
      const double s2 = c->rel_width * c->rel_width;
      const double sgn = sym_ == Symmetry::Symmetric ? 1.0 : -1.0;
      const double chi = std::exp(-(u - c->offset) * (u - c->offset) / (4.0 * s2)) +
                         sgn * std::exp(-(u + c->offset) * (u + c->offset) / (4.0 * s2));
      return std::sqrt(normal_pdf(X, c->center, c->cm_width * c->cm_width)) * chi / std::sqrt(chi_norm_);
    }
    double sum = 0.0;
    for (const auto& p : perms_) {
      double t = sym_ == Symmetry::Antisymmetric ? p.sign : 1.0;
      for (int i = 0; i < n_; ++i) t *= orbital(p.map[i], x[i]);
      sum += t;
    }
    return sum / std::sqrt(z_);
  }

  /// rho(x) = N int |psi(x, x2, ...)|^2 dx2 ...
  double density_at(double x) const {
    if (rho_mix_) return (*rho_mix_)(x);
    std::array<double, 3> phi{};
    for (int a = 0; a < n_; ++a) phi[a] = orbital(a, x);
    double s = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) s += k1_[a][b] * phi[a] * phi[b];
    return n_ * s / z_;
  }

  /// P(x, y) = N(N-1) int |psi(x, y, x3, ...)|^2 dx3 ..., normalized to N(N-1).
  double pair_density(double x, double y) const {
    if (std::holds_alternative<state_family::SoftCoulombGroundPair>(family_)) {
      const std::array<double, 2> xy{x, y};
      const double w = wavefunction(xy);
      return 2.0 * w * w;
    }
    std::array<double, 3> px{}, py{};
    for (int a = 0; a < n_; ++a) {
      px[a] = orbital(a, x);
      py[a] = orbital(a, y);
    }
    double s = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const double xab = px[a] * px[b];
        if (xab == 0.0) continue;
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) s += k2_[a][b][c][d] * xab * py[c] * py[d];
      }
    return n_ * (n_ - 1) * s / z_;
  }

  /// Interval outside which rho and the pair density are below ~1e-30 of
  /// their peak.
  Interval support() const {
    if (rho_mix_) return rho_mix_->extent(12.0);
    const auto& h = std::get<state_family::HermiteSlater>(family_);
    const double reach = h.width * (12.0 + std::sqrt(2.0 * (h.first_level + n_) + 1.0));
    return {h.center - reach, h.center + reach};
  }

  /// Smallest length over which rho changes appreciably.
  double feature_length() const {
    if (rho_mix_) return rho_mix_->min_std();
    const auto& h = std::get<state_family::HermiteSlater>(family_);
    return h.width / std::sqrt(2.0 * (h.first_level + n_) + 1.0);
  }

  /// Mass of rho in [a, b].
  double mass_between(double a, double b) const {
    if (b <= a) return 0.0;
    if (rho_mix_) return rho_mix_->mass_between(a, b);
    const Interval s = support();
    const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
    if (hi <= lo) return 0.0;
    return integrate_1d([this](double x) { return density_at(x); }, {lo, hi}, QuadratureSpec{1e-13, 1e-11, 4000, 0.0});
  }

  /// Separation density C(u) = int P(s + u/2, s - u/2) ds; P normalized to
  /// N(N-1), so C has total mass N(N-1).
  double separation_density(double u) const {
    if (sep_mix_) return (*sep_mix_)(u);
    return separation_density_numeric(u);
  }

  /// Density autocorrelation A(u) = int rho(s + u/2) rho(s - u/2) ds.
  double density_autocorrelation(double u) const {
    if (rho_mix_) return rho_mix_->autocorrelation(*rho_mix_)(u);
    return density_autocorrelation_numeric(u);
  }

  /// Quadrature of the pair density along the line x - y = u, bypassing any
  /// closed form. Oscillator states use Gauss-Hermite in the centre of mass,
  /// which is exact there.
  double separation_density_numeric(double u) const {
    return along_line(u, [this](double x, double y) { return pair_density(x, y); });
  }

  double density_autocorrelation_numeric(double u) const {
    return along_line(u, [this](double x, double y) { return density_at(x) * density_at(y); });
  }

  /// State with density lambda rho(lambda x).
  TrialState dilated(double lambda) const {
    if (!(lambda > 0.0)) throw InvalidArgument("dilation factor must be positive");
    return std::visit(
        [&](const auto& f) -> TrialState {
          using T = std::decay_t<decltype(f)>;
          T g = f;
          if constexpr (std::is_same_v<T, state_family::GaussianProduct>) {
            for (double& c : g.centers) c /= lambda;
            g.width /= lambda;
          } else if constexpr (std::is_same_v<T, state_family::HermiteSlater>) {
            g.center /= lambda;
            g.width /= lambda;
          } else {
            g.epsilon /= lambda;
            g.center /= lambda;
            g.cm_width /= lambda;
            g.offset /= lambda;
            g.rel_width /= lambda;
          }
          return TrialState(n_, sym_, g);
        },
        family_);
  }

  /// State with density rho(x - shift).
  TrialState translated(double shift) const {
    return std::visit(
        [&](const auto& f) -> TrialState {
          using T = std::decay_t<decltype(f)>;
          T g = f;
          if constexpr (std::is_same_v<T, state_family::GaussianProduct>) {
            for (double& c : g.centers) c += shift;
          } else {
            g.center += shift;
          }
          return TrialState(n_, sym_, g);
        },
        family_);
  }

 private:
  template <class F>
  double along_line(double u, F&& f) const {
    if (const auto* h = std::get_if<state_family::HermiteSlater>(&family_)) {
      // f(c + u/2, c - u/2) = poly(c) exp(-2 (c - center)^2 / w^2) exp(-u^2 / 2w^2)
      static const auto rule = gauss_hermite(40);
      const double scale = h->width / std::numbers::sqrt2;
      double s = 0.0;
      for (std::size_t i = 0; i < rule.first.size(); ++i) {
        const double z = rule.first[i];
        const double c = h->center + scale * z;
        s += rule.second[i] * std::exp(z * z) * f(c + 0.5 * u, c - 0.5 * u);
      }
      return s * scale;
    }
    const Interval sup = support();
    const double half = 0.5 * std::abs(u);
    const Interval dom{sup.lo + half, sup.hi - half};
    if (!(dom.hi > dom.lo)) return 0.0;
    std::vector<double> brk;
    if (rho_mix_)
      for (const auto& c : rho_mix_->components()) brk.push_back(c.mean);
    return quad([&](double c) { return f(c + 0.5 * u, c - 0.5 * u); }, dom, QuadratureSpec{1e-14, 1e-11, 4000, 0.0}, brk)
        .value;
  }

  double orbital(int a, double x) const {
    if (const auto* g = std::get_if<state_family::GaussianProduct>(&family_)) {
      const double d = x - g->centers[a];
      const double w2 = g->width * g->width;
      return std::pow(2.0 * std::numbers::pi * w2, -0.25) * std::exp(-d * d / (4.0 * w2));
    }
    const auto& h = std::get<state_family::HermiteSlater>(family_);
    return detail::hermite_function(h.first_level + a, (x - h.center) / h.width) / std::sqrt(h.width);
  }

  void build() {
    if (const auto* c = std::get_if<state_family::SoftCoulombGroundPair>(&family_)) {
      build_pair(*c);
      return;
    }
    std::array<std::array<double, 3>, 3> S{};
    if (const auto* g = std::get_if<state_family::GaussianProduct>(&family_)) {
      if (!(g->width > 0.0) || !std::isfinite(g->width)) throw InvalidArgument("orbital width must be positive");
      for (double c : g->centers)
        if (!std::isfinite(c)) throw InvalidArgument("orbital centers must be finite");
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
          const double d = g->centers[a] - g->centers[b];
          S[a][b] = std::exp(-d * d / (8.0 * g->width * g->width));
        }
    } else {
      const auto& h = std::get<state_family::HermiteSlater>(family_);
      if (!(h.width > 0.0) || !std::isfinite(h.width)) throw InvalidArgument("oscillator width must be positive");
      if (h.first_level < 0 || h.first_level > 40) throw InvalidArgument("oscillator level out of range [0, 40]");
      for (int a = 0; a < n_; ++a) S[a][a] = 1.0;
    }

    perms_ = detail::permutations(n_);
    const bool anti = sym_ == Symmetry::Antisymmetric;
    z_ = 0.0;
    k1_ = {};
    k2_ = {};
    for (const auto& p : perms_)
      for (const auto& q : perms_) {
        const double sg = anti ? p.sign * q.sign : 1.0;
        double all = sg, from1 = sg, from2 = sg;
        for (int i = 0; i < n_; ++i) all *= S[p.map[i]][q.map[i]];
        for (int i = 1; i < n_; ++i) from1 *= S[p.map[i]][q.map[i]];
        for (int i = 2; i < n_; ++i) from2 *= S[p.map[i]][q.map[i]];
        z_ += all;
        k1_[p.map[0]][q.map[0]] += from1;
        k2_[p.map[0]][q.map[0]][p.map[1]][q.map[1]] += from2;
      }
    // Z = N! det(S) or N! perm(S); a vanishing determinant means the
    // antisymmetrized orbitals are (numerically) linearly dependent.
    double fact = 1.0;
    for (int i = 2; i <= n_; ++i) fact *= i;
    if (!(z_ > 1e-10 * fact))
      throw InvalidArgument("antisymmetrized orbitals are linearly dependent (overlap determinant " +
                            format_number(z_ / fact) + ")");
    if (const auto* g = std::get_if<state_family::GaussianProduct>(&family_)) {
      const double w2 = g->width * g->width;
      GaussianMixture rho, sep;
      auto mid = [&](int a, int b) { return 0.5 * (g->centers[a] + g->centers[b]); };
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
          if (k1_[a][b] != 0.0) rho.add(n_ * k1_[a][b] * S[a][b] / z_, mid(a, b), w2);
          for (int c = 0; c < n_; ++c)
            for (int d = 0; d < n_; ++d) {
              const double k = k2_[a][b][c][d];
              if (k == 0.0) continue;
              sep.add(n_ * (n_ - 1) * k * S[a][b] * S[c][d] / z_, mid(a, b) - mid(c, d), 2.0 * w2);
            }
        }
      rho_mix_ = rho.merged();
      sep_mix_ = sep.merged();
    }
  }

  void build_pair(const state_family::SoftCoulombGroundPair& c) {
    if (n_ != 2) throw InvalidArgument("the correlated pair family has exactly two particles");
    for (double v : {c.epsilon, c.cm_width, c.rel_width})
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("pair lengths must be positive");
    if (!(c.offset >= 0.0) || !std::isfinite(c.center)) throw InvalidArgument("pair offset must be nonnegative");
    const double s2 = c.rel_width * c.rel_width;
    const double sgn = sym_ == Symmetry::Symmetric ? 1.0 : -1.0;
    const double e = std::exp(-c.offset * c.offset / (2.0 * s2));
    const double denom = 2.0 * (1.0 + sgn * e);
    if (!(denom > 1e-8)) throw InvalidArgument("antisymmetric pair needs a nonzero offset");
    chi_norm_ = std::sqrt(2.0 * std::numbers::pi * s2) * denom;
    // Normalized distribution of u = x1 - x2: weights q_k on means m_k, variance s^2.
    const std::array<double, 3> q{1.0 / denom, 1.0 / denom, sgn * 2.0 * e / denom};
    const std::array<double, 3> m{c.offset, -c.offset, 0.0};
    const double a2 = c.cm_width * c.cm_width;
    GaussianMixture rho, sep;
    for (int k = 0; k < 3; ++k) {
      if (q[k] == 0.0) continue;
      // x1 = X + u/2; rho counts both particles, which gives the factor 2
      // (the x2 marginal is the mirror image and coincides after summing +-d).
      rho.add(2.0 * q[k], c.center + 0.5 * m[k], a2 + 0.25 * s2);
      sep.add(2.0 * q[k], m[k], s2);
    }
    rho_mix_ = rho.merged();
    sep_mix_ = sep.merged();
    z_ = 1.0;
  }

  int n_;
  Symmetry sym_;
  StateFamily family_;
  std::vector<detail::Permutation> perms_;
  double z_ = 1.0;
  double chi_norm_ = 1.0;
  std::array<std::array<double, 3>, 3> k1_{};
  std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3> k2_{};
  std::optional<GaussianMixture> rho_mix_;
  std::optional<GaussianMixture> sep_mix_;
};

// ---------------------------------------------------------------------------
// Grid-sampled densities

/// Piecewise-linear density on the uniform grid x0 + i dx, zero outside it.
struct DensityProfile {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  int n_particles = 0;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double x_end() const { return values.empty() ? x0 : x(values.size() - 1); }

  /// Trapezoid mass, exact for the piecewise-linear interpolant.
  double mass() const {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * dx;
  }

  double operator()(double x) const {
    if (values.empty() || x < x0 || x > x_end()) return 0.0;
    const double t = (x - x0) / dx;
    const auto i = std::min(static_cast<std::size_t>(t), values.size() - 2);
    const double f = t - static_cast<double>(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
  }

  double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

  void validate() const {
    if (!(dx > 0.0) || !std::isfinite(x0)) throw InvalidArgument("profile grid needs dx > 0");
    if (values.size() < 2) throw InvalidArgument("profile needs at least two points");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("profile values must be finite and nonnegative");
  }

  void write_csv(std::ostream& out) const {
    out << "x,rho\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << format_number(x(i)) << ',' << format_number(values[i]) << '\n';
  }
};

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n_points = 4097;

  void validate() const {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("grid needs lo < hi");
    if (n_points < 2) throw InvalidArgument("grid needs at least two points");
  }
};

/// At least 4097 points (2^k + 1, for Richardson halving) covering the
/// state's support with spacing no larger than an eighth of its feature length.
inline GridSpec default_grid(const TrialState& s) {
  const Interval e = s.support();
  const double target = s.feature_length() / 8.0;
  std::size_t n = 4097;
  while ((e.hi - e.lo) / static_cast<double>(n - 1) > target && n < (std::size_t{1} << 20) + 1) n = 2 * n - 1;
  return {e.lo, e.hi, n};
}

/// Samples rho on the grid; values below 1e-14 of the peak are set to zero.
inline DensityProfile density(const TrialState& s, const GridSpec& g) {
  g.validate();
  DensityProfile d;
  d.x0 = g.lo;
  d.dx = (g.hi - g.lo) / static_cast<double>(g.n_points - 1);
  d.n_particles = s.n_particles();
  d.values.resize(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) d.values[i] = std::max(0.0, s.density_at(d.x(i)));
  const double cut = 1e-14 * d.max_value();
  for (double& v : d.values)
    if (v < cut) v = 0.0;
  const double m = d.mass();
  if (std::abs(m - s.n_particles()) > 1e-6 * s.n_particles())
    throw NormalizationDrift("density of " + s.describe() + " integrates to " + format_number(m) + " on the grid");
  return d;
}

inline DensityProfile density(const TrialState& s) { return density(s, default_grid(s)); }

/// Profile from raw samples (no mass check).
inline DensityProfile make_profile(double x0, double dx, std::vector<double> values, int n_particles) {
  DensityProfile d{x0, dx, std::move(values), n_particles};
  d.validate();
  return d;
}

/// Trapezoid integral of g(rho(x)) over the grid. When halving the step
/// changes the result by more than 1e-8 relative, one Richardson step is
/// applied.
template <class G>
double integrate_profile(const DensityProfile& d, G&& g) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  auto trap = [&](std::size_t stride) {
    const std::size_t last = (n - 1) / stride * stride;
    double s = 0.5 * (g(d.values[0]) + g(d.values[last]));
    for (std::size_t i = stride; i < last; i += stride) s += g(d.values[i]);
    return s * d.dx * static_cast<double>(stride);
  };
  const double fine = trap(1);
  if ((n - 1) % 2 != 0 || n < 5) return fine;
  const double coarse = trap(2);
  if (std::abs(fine - coarse) <= 1e-8 * std::abs(fine)) return fine;
  return fine + (fine - coarse) / 3.0;
}

/// int rho^p dx.
inline double density_power_integral(const DensityProfile& d, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("density_power_integral requires p >= 1");
  if (p == 1.0) return integrate_profile(d, [](double r) { return r; });
  if (p == 2.0) return integrate_profile(d, [](double r) { return r * r; });
  return integrate_profile(d, [p](double r) { return r > 0.0 ? std::pow(r, p) : 0.0; });
}

// ---------------------------------------------------------------------------
// Maximal operator

namespace detail {

/// max over t in [0, h] of (m0 + a t + b t^2) / (r0 + t), r0 >= 0.
inline double max_quadratic_ratio(double m0, double a, double b, double r0, double h) {
  auto f = [&](double t) { return (m0 + a * t + b * t * t) / (r0 + t); };
  double best = f(h);
  if (r0 > 0.0) best = std::max(best, f(0.0));
  else best = std::max(best, a);  // t -> 0 limit with m0 = 0
  if (b != 0.0) {
    // d/dt = 0  <=>  b t^2 + 2 b r0 t + (a r0 - m0) = 0
    const double disc = r0 * r0 - (a * r0 - m0) / b;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {-r0 + sq, -r0 - sq})
        if (t > 0.0 && t < h) best = std::max(best, f(t));
    }
  }
  return best;
}

inline std::vector<double> cumulative_mass(const DensityProfile& d) {
  std::vector<double> F(d.size(), 0.0);
  for (std::size_t i = 1; i < d.size(); ++i) F[i] = F[i - 1] + 0.5 * d.dx * (d.values[i - 1] + d.values[i]);
  return F;
}

}  // namespace detail

/// (M rho)(x_i) = sup_{r>0} (1/2r) int_{x_i-r}^{x_i+r} rho, exact for the
/// piecewise-linear interpolant (zero outside the grid). O(n^2).
inline DensityProfile maximal_function(const DensityProfile& d) {
  d.validate();
  const auto n = static_cast<std::ptrdiff_t>(d.size());
  const double h = d.dx;
  const auto F = detail::cumulative_mass(d);
  auto val = [&](std::ptrdiff_t j) { return (j >= 0 && j < n) ? d.values[j] : 0.0; };
  auto cum = [&](std::ptrdiff_t j) { return F[std::clamp<std::ptrdiff_t>(j, 0, n - 1)]; };
  DensityProfile out = d;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double best = d.values[i];
    const std::ptrdiff_t kmax = std::max(i, n - 1 - i);
    for (std::ptrdiff_t k = 0; k < kmax; ++k) {
      // Radius r = (k + t) h; the right end crosses segment [i+k, i+k+1] and
      // the left end segment [i-k-1, i-k]. Off-grid segments carry zero.
      const std::ptrdiff_t jr = i + k, jl = i - k - 1;
      const bool rin = jr + 1 < n, lin = jl >= 0;
      const double r0v = rin ? val(jr) : 0.0, r1v = rin ? val(jr + 1) : 0.0;
      const double l0v = lin ? val(jl + 1) : 0.0, l1v = lin ? val(jl) : 0.0;
      const double m0 = cum(i + k) - cum(i - k);
      const double a = r0v + l0v;
      const double b = (r1v - r0v + l1v - l0v) / (2.0 * h);
      best = std::max(best, 0.5 * detail::max_quadratic_ratio(m0, a, b, k * h, h));
    }
    out.values[i] = best;
  }
  return out;
}

/// M_p = (2^p 2p / (p - 1))^(1/p), the L^p operator norm bound of M.
inline double maximal_constant(double p) {
  if (!(p > 1.0)) throw InvalidArgument("maximal constant requires p > 1");
  return std::pow(std::pow(2.0, p) * 2.0 * p / (p - 1.0), 1.0 / p);
}

struct MaximalCheck {
  double p = 2.0;
  double ratio = 0.0;  // ||M rho||_p / ||rho||_p
  double bound = 0.0;  // M_p
  bool holds = true;
};

/// ||M rho||_p / ||rho||_p compared against M_p. The off-grid tails of M rho
/// (where rho = 0 but M rho ~ mass / 2|x|) are integrated exactly in the
/// sense of the piecewise-linear interpolant.
inline MaximalCheck lp_maximal_constant_check(const DensityProfile& d, double p) {
  const double bound = maximal_constant(p);
  const DensityProfile m = maximal_function(d);
  double num = 0.0;
  {
    // plain trapezoid: M rho has kinks, so no extrapolation
    const std::size_t n = m.size();
    double s = 0.5 * (std::pow(m.values.front(), p) + std::pow(m.values.back(), p));
    for (std::size_t i = 1; i + 1 < n; ++i) s += std::pow(m.values[i], p);
    num = s * m.dx;
  }
  const auto F = detail::cumulative_mass(d);
  const auto n = static_cast<std::ptrdiff_t>(d.size());
  const double total = F.back(), h = d.dx;
  // Right tail: x > x_R, sup over y <= x_R of mass[y, x_R] / 2(x - y).
  auto right = [&](double x) {
    const double dist = x - d.x_end();
    double best = 0.0;
    for (std::ptrdiff_t j = 0; j + 1 < n; ++j) {
      // y = x_{j+1} - t on segment j
      const double T = total - F[j + 1];
      const double a = d.values[j + 1], b = (d.values[j] - d.values[j + 1]) / (2.0 * h);
      const double r0 = dist + (d.x_end() - d.x(j + 1));
      best = std::max(best, detail::max_quadratic_ratio(T, a, b, r0, h));
    }
    return std::pow(0.5 * best, p);
  };
  auto left = [&](double x) {
    const double dist = d.x0 - x;
    double best = 0.0;
    for (std::ptrdiff_t j = 0; j + 1 < n; ++j) {
      // y = x_j + t on segment j
      const double T = F[j];
      const double a = d.values[j], b = (d.values[j + 1] - d.values[j]) / (2.0 * h);
      const double r0 = dist + (d.x(j) - d.x0);
      best = std::max(best, detail::max_quadratic_ratio(T, a, b, r0, h));
    }
    return std::pow(0.5 * best, p);
  };
  const QuadratureSpec tail_spec{1e-12 * std::max(num, 1e-300), 1e-9, 2000, 0.0};
  const double L = d.x_end() - d.x0;
  const double brk_r[] = {d.x_end() + L, d.x_end() + 10.0 * L};
  const double brk_l[] = {d.x0 - 10.0 * L, d.x0 - L};
  num += quad(right, {d.x_end(), kInf}, tail_spec, brk_r).value;
  num += quad(left, {-kInf, d.x0}, tail_spec, brk_l).value;
  const double den = density_power_integral(d, p);
  MaximalCheck c;
  c.p = p;
  c.bound = bound;
  c.ratio = den > 0.0 ? std::pow(num / den, 1.0 / p) : 0.0;
  c.holds = c.ratio <= bound * (1.0 + 1e-12);
  return c;
}

// ---------------------------------------------------------------------------
// Random trial states

struct RandomStateOptions {
  double min_width = 0.1;
  double max_width = 10.0;
  /// Centers drawn uniformly within +- spread * width.
  double spread = 3.0;
  /// Minimum overlap determinant for antisymmetrized Gaussian orbitals.
  double min_overlap_det = 1e-4;
};

/// One random state: family, N and symmetry drawn uniformly, lengths
/// log-uniform in [min_width, max_width].
inline TrialState random_state(Rng& rng, const RandomStateOptions& o = {}) {
  const int n = rng.coin() ? 3 : 2;
  const Symmetry sym = rng.coin() ? Symmetry::Symmetric : Symmetry::Antisymmetric;
  const double w = rng.log_uniform(o.min_width, o.max_width);
  const double u = rng.uniform();
  if (u < 0.6) {
    for (int attempt = 0;; ++attempt) {
      std::vector<double> c(n);
      for (double& x : c) x = rng.uniform(-o.spread, o.spread) * w;
      if (sym == Symmetry::Symmetric) return TrialState::gaussian_product(c, w, sym);
      // determinant of the overlap matrix
      std::array<std::array<double, 3>, 3> S{};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) S[a][b] = std::exp(-(c[a] - c[b]) * (c[a] - c[b]) / (8.0 * w * w));
      const double det = n == 2 ? 1.0 - S[0][1] * S[0][1]
                                : 1.0 - S[0][1] * S[0][1] - S[0][2] * S[0][2] - S[1][2] * S[1][2] +
                                      2.0 * S[0][1] * S[0][2] * S[1][2];
      if (det >= o.min_overlap_det || attempt > 100) return TrialState::gaussian_product(c, w, sym);
    }
  }
  if (u < 0.8) {
    const int level = static_cast<int>(rng.integer(0, 2));
    return TrialState::hermite_slater(n, w, sym, rng.uniform(-1.0, 1.0) * w, level);
  }
  const double eps = rng.log_uniform(o.min_width, o.max_width);
  const double a = rng.log_uniform(o.min_width, o.max_width);
  const double s = rng.log_uniform(o.min_width, o.max_width);
  const double d = rng.uniform(0.2, 3.0) * s;
  return TrialState::soft_coulomb_pair(eps, sym, rng.uniform(-1.0, 1.0) * a, a, d, s);
}

/// Deterministic suite of `count` states; state i depends only on (seed, i).
inline std::vector<TrialState> random_states(std::uint64_t seed, std::size_t count, const RandomStateOptions& o = {}) {
  std::vector<TrialState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, i);
    out.push_back(random_state(rng, o));
  }
  return out;
}

}  // namespace lo1d
