#pragma once

// Lower bounds on I_xc expressed through density functionals, and the
// harness that checks I_xc >= RHS for trial states.

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lo1d/energies.hpp"
#include "lo1d/errors.hpp"
#include "lo1d/format.hpp"
#include "lo1d/potentials.hpp"
#include "lo1d/states.hpp"

namespace lo1d {

enum class BoundId {
  ContactDirect,
  DirectCS,
  HS1D,
  Lemma2,
  Thm3A,
  Thm3B,
  Rasanen,
  Lundholm,
  Thm4,
  LiftedLO,
  ApproxContactDirect,
};

inline std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::ContactDirect: return "ContactDirect";
    case BoundId::DirectCS: return "DirectCS";
    case BoundId::HS1D: return "HS1D";
    case BoundId::Lemma2: return "Lemma2";
    case BoundId::Thm3A: return "Thm3A";
    case BoundId::Thm3B: return "Thm3B";
    case BoundId::Rasanen: return "Rasanen";
    case BoundId::Lundholm: return "Lundholm";
    case BoundId::Thm4: return "Thm4";
    case BoundId::LiftedLO: return "LiftedLO";
    case BoundId::ApproxContactDirect: return "ApproxContactDirect";
  }
  return "?";
}

inline BoundId bound_id_from_string(const std::string& s) {
  for (BoundId id : {BoundId::ContactDirect, BoundId::DirectCS, BoundId::HS1D, BoundId::Lemma2, BoundId::Thm3A,
                     BoundId::Thm3B, BoundId::Rasanen, BoundId::Lundholm, BoundId::Thm4, BoundId::LiftedLO,
                     BoundId::ApproxContactDirect})
    if (to_string(id) == s) return id;
  throw InvalidArgument("unknown bound '" + s + "'");
}

/// Every bound except the conjectured reference form is a theorem.
inline bool is_proven(BoundId id) { return id != BoundId::Rasanen; }

inline constexpr double kEulerGamma = 0.57721566490153286;

struct BoundSpec {
  BoundId id = BoundId::ContactDirect;
  Potential potential = Potential::contact();
  /// Moment constants for Thm3A/Thm3B/LiftedLO; the established constants of
  /// the potential when empty.
  std::optional<Assumption1Constants> constants;
  double gamma = 1.0;  // Lemma2
  /// Thm3B; when empty alpha = N.
  std::optional<double> alpha;
  /// LiftedLO shift; when empty c = v(0).
  std::optional<double> shift;
  double k1 = 1.5 - 0.577;  // Rasanen
  double k2 = 2.0 / std::numbers::pi;

  std::string label() const {
    std::ostringstream s;
    s << to_string(id);
    switch (id) {
      case BoundId::Lemma2: s << "(gamma=" << format_number(gamma) << ')'; break;
      case BoundId::Thm3B: s << "(alpha=" << (alpha ? format_number(*alpha) : std::string("N")) << ')'; break;
      case BoundId::LiftedLO:
        if (shift) s << "(c=" << format_number(*shift) << ')';
        break;
      case BoundId::Rasanen: s << "(K1=" << format_number(k1) << ",K2=" << format_number(k2) << ')'; break;
      default: break;
    }
    if (constants && (id == BoundId::Thm3A || id == BoundId::Thm3B || id == BoundId::LiftedLO))
      s << "[c1=" << format_number(constants->c1) << ",c2=" << format_number(constants->c2)
        << ",c3=" << format_number(constants->c3) << ']';
    return s.str();
  }

  Assumption1Constants resolved_constants() const { return constants ? *constants : theorem_constants(potential); }

  /// Throws IncompatibleSpec unless the bound applies to the potential.
  void validate() const {
    auto need = [&](bool ok, const char* what) {
      if (!ok) throw IncompatibleSpec(to_string(id) + " requires " + what + ", got " + potential.label());
    };
    const bool thm3 = potential.is<family::ConvexSoftCoulomb>() || potential.is<family::RegularizedCoulomb>();
    switch (id) {
      case BoundId::ContactDirect: need(potential.is<family::Contact>(), "the contact potential"); break;
      case BoundId::DirectCS:
      case BoundId::HS1D:
      case BoundId::ApproxContactDirect:
        need(potential.is<family::ApproxContact>(), "a potential with finite int v (ApproxContact)");
        break;
      case BoundId::Lemma2:
        need(potential.convex_decaying(), "a convex potential vanishing at infinity");
        if (!(gamma >= 0.0)) throw IncompatibleSpec("Lemma2 requires gamma >= 0");
        break;
      case BoundId::Thm3A:
      case BoundId::Thm3B:
      case BoundId::LiftedLO:
        need(thm3, "ConvexSoftCoulomb or RegularizedCoulomb");
        if (constants) constants->validate();
        if (alpha && !(*alpha > 0.0)) throw IncompatibleSpec("Thm3B requires alpha > 0");
        if (shift && !(*shift > 0.0)) throw IncompatibleSpec("LiftedLO requires c > 0");
        break;
      case BoundId::Rasanen:
        need(potential.is<family::SoftCoulomb>() || potential.is<family::ConvexSoftCoulomb>(), "a soft Coulomb potential");
        break;
      case BoundId::Lundholm:
      case BoundId::Thm4: need(potential.is<family::Homogeneous>(), "the homogeneous potential r^(eps-1)"); break;
    }
  }
};

// ---------------------------------------------------------------------------
// Right-hand sides

/// -1/2 int rho^2.
inline double rhs_contact_direct(const DensityProfile& d) { return -0.5 * density_power_integral(d, 2.0); }

/// -int_0^inf v dr * int rho^2.
inline double rhs_direct_cs(const DensityProfile& d, const Potential& p) {
  return -integral_value(p) * density_power_integral(d, 2.0);
}

/// The Hainzl-Seiringer form, 16 times the Cauchy-Schwarz one.
inline double rhs_hs1d(const DensityProfile& d, const Potential& p) { return 16.0 * rhs_direct_cs(d, p); }

/// -int rho^2 for the approximate contact potential: the gamma -> inf limit
/// of the constant-gamma bound.
inline double rhs_approx_contact_direct(const DensityProfile& d) { return -density_power_integral(d, 2.0); }

/// -1/2 int rho^2 int_0^gamma v'' r^2 - 1/2 N int_gamma^inf v'' r.
inline double rhs_lemma2(const DensityProfile& d, const Potential& p, double gamma) {
  if (std::isinf(gamma)) {
    // tail moment vanishes; the second moment saturates at its limit
    if (p.is<family::ApproxContact>()) return rhs_approx_contact_direct(d);
    throw DivergentIntegral(p.label() + ": int_0^inf v'' r^2 dr diverges");
  }
  const double m2 = second_moment(p, gamma);
  const double m1 = first_moment_tail(p, gamma);
  if (std::isinf(m1)) return -kInf;
  return -0.5 * density_power_integral(d, 2.0) * m2 - 0.5 * d.n_particles * m1;
}

inline double thm3_a1(const Assumption1Constants& c) { return c.c1 * (std::numbers::ln2 + 3.0) + c.c3; }

/// -8 int rho^2 [A1 + c1 ln(1 + c2 e^-3 / rho)], with rho = 0 contributing 0.
inline double rhs_thm3a(const DensityProfile& d, const Assumption1Constants& c) {
  c.validate();
  const double a1 = thm3_a1(c);
  const double k = c.c2 * std::exp(-3.0);
  return -8.0 * integrate_profile(d, [&](double r) {
    if (r <= 0.0) return 0.0;
    return r * r * (a1 + c.c1 * std::log1p(k / r));
  });
}

/// -1/2 int rho^2 [N c3 / alpha + c1 ln(1 + alpha c2 / int rho^2)].
inline double rhs_thm3b(double rho2, int n_particles, const Assumption1Constants& c, double alpha) {
  c.validate();
  if (!(alpha > 0.0)) throw InvalidArgument("Thm3B requires alpha > 0");
  if (rho2 <= 0.0) return 0.0;
  return -0.5 * rho2 * (n_particles * c.c3 / alpha + c.c1 * std::log1p(alpha * c.c2 / rho2));
}

inline double rhs_thm3b(const DensityProfile& d, const Assumption1Constants& c, double alpha) {
  return rhs_thm3b(density_power_integral(d, 2.0), d.n_particles, c, alpha);
}

/// -(c1 c2 c3 / 2c) int rho^2 - c N / 2.
inline double rhs_lifted_lo(const DensityProfile& d, const Assumption1Constants& c, double shift) {
  c.validate();
  if (!(shift > 0.0)) throw InvalidArgument("LiftedLO requires c > 0");
  return -(c.c1 * c.c2 * c.c3 / (2.0 * shift)) * density_power_integral(d, 2.0) - 0.5 * shift * d.n_particles;
}

/// Conjectured reference form -int rho^2 (K1 + ln(K2 / (eps rho))).
inline double rhs_rasanen(const DensityProfile& d, double eps, double k1 = 1.5 - 0.577,
                          double k2 = 2.0 / std::numbers::pi) {
  if (!(eps > 0.0)) throw InvalidArgument("Rasanen bound requires eps > 0");
  return -integrate_profile(d, [&](double r) {
    if (r <= 0.0) return 0.0;
    return r * r * (k1 + std::log(k2 / (eps * r)));
  });
}

inline double lundholm_coefficient(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("Lundholm coefficient requires 0 < eps < 1");
  return std::pow(2.0, 2.0 - eps) * (2.0 - eps) * (2.0 - eps) / (eps * (1.0 - eps));
}

/// -2^(2-eps) (2-eps)^2 / (eps (1-eps)) int rho^(2-eps).
inline double rhs_lundholm(const DensityProfile& d, double eps) {
  return -lundholm_coefficient(eps) * density_power_integral(d, 2.0 - eps);
}

/// Coefficients (on int rho^2, on N) of the two-term bound for r^(eps-1).
struct Thm4Coefficients {
  double density_stated = 0.0;   // 1/eps + eps - 3
  double particle_stated = 0.0;  // 1 - eps/2
  double density_direct = 0.0;   // 1/2 int_0^1 v'' r^2 = 1/eps + (eps - 3)/2
  double particle_direct = 0.0;  // 1/2 int_1^inf v'' r = 1 - eps/2
};

inline Thm4Coefficients thm4_coefficients(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("Thm4 requires 0 < eps < 1");
  const Potential p = Potential::homogeneous(eps);
  return {1.0 / eps + eps - 3.0, 1.0 - 0.5 * eps, 0.5 * second_moment(p, 1.0), 0.5 * first_moment_tail(p, 1.0)};
}

struct Thm4Rhs {
  double stated = 0.0;  // with the coefficients as stated
  double direct = 0.0;  // from the moment integrals at gamma = 1 (verified)
  double coefficient_gap = 0.0;
};

inline Thm4Rhs rhs_thm4(const DensityProfile& d, double eps) {
  const Thm4Coefficients k = thm4_coefficients(eps);
  const double rho2 = density_power_integral(d, 2.0);
  const double n = d.n_particles;
  return {-k.density_stated * rho2 - k.particle_stated * n, -k.density_direct * rho2 - k.particle_direct * n,
          k.density_stated - k.density_direct};
}

// ---------------------------------------------------------------------------
// Verification

enum class Status { Holds, ViolatedBeyondTolerance };

inline std::string to_string(Status s) { return s == Status::Holds ? "Holds" : "ViolatedBeyondTolerance"; }

struct BoundReport {
  std::string state_id;
  std::string state;  // description
  std::string bound_id;
  std::string potential;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  Status status = Status::Holds;
  bool proven = true;
  std::optional<double> rhs_alternate;  // Thm4 with the stated coefficients
  std::string note;
};

inline std::string potential_params(const Potential& p) {
  std::ostringstream s;
  bool first = true;
  for (const auto& [k, v] : p.params()) {
    s << (first ? "" : ";") << k << '=' << format_number(v);
    first = false;
  }
  return s.str();
}

/// Right-hand side of `spec` for the profile. For Thm4 the verified (direct)
/// value is returned and the stated-coefficient value goes to `alternate`.
inline double evaluate_rhs(const BoundSpec& spec, const DensityProfile& d, std::optional<double>* alternate = nullptr,
                           std::string* note = nullptr) {
  spec.validate();
  switch (spec.id) {
    case BoundId::ContactDirect: return rhs_contact_direct(d);
    case BoundId::DirectCS: return rhs_direct_cs(d, spec.potential);
    case BoundId::HS1D: return rhs_hs1d(d, spec.potential);
    case BoundId::ApproxContactDirect: return rhs_approx_contact_direct(d);
    case BoundId::Lemma2: return rhs_lemma2(d, spec.potential, spec.gamma);
    case BoundId::Thm3A: return rhs_thm3a(d, spec.resolved_constants());
    case BoundId::Thm3B:
      return rhs_thm3b(d, spec.resolved_constants(), spec.alpha ? *spec.alpha : static_cast<double>(d.n_particles));
    case BoundId::LiftedLO:
      return rhs_lifted_lo(d, spec.resolved_constants(), spec.shift ? *spec.shift : value_at_zero(spec.potential));
    case BoundId::Rasanen: {
      const auto& prm = spec.potential.params();
      if (note) *note = "conjectured reference bound";
      return rhs_rasanen(d, prm.at("epsilon"), spec.k1, spec.k2);
    }
    case BoundId::Lundholm: return rhs_lundholm(d, spec.potential.as<family::Homogeneous>().epsilon);
    case BoundId::Thm4: {
      const Thm4Rhs r = rhs_thm4(d, spec.potential.as<family::Homogeneous>().epsilon);
      if (alternate) *alternate = r.stated;
      if (note && std::abs(r.coefficient_gap) > 1e-9)
        *note = "stated density coefficient differs from the moment integral by " + format_number(r.coefficient_gap);
      return r.direct;
    }
  }
  return 0.0;
}

/// Relative slack tolerance of the verification.
inline constexpr double kVerifyTolerance = 1e-6;

/// Builds the report from precomputed energies and profile.
inline BoundReport verify_with(const std::string& state_id, const TrialState& s, const DensityProfile& d,
                               const EnergyBreakdown& e, const BoundSpec& spec,
                               double rel_tolerance = kVerifyTolerance) {
  BoundReport r;
  r.state_id = state_id;
  r.state = s.describe();
  r.bound_id = spec.label();
  r.potential = spec.potential.name();
  r.params = potential_params(spec.potential);
  r.proven = is_proven(spec.id);
  r.lhs = e.i_xc;
  r.rhs = evaluate_rhs(spec, d, &r.rhs_alternate, &r.note);
  r.slack = r.lhs - r.rhs;
  const double scale = std::max({std::abs(r.lhs), std::isfinite(r.rhs) ? std::abs(r.rhs) : 0.0,
                                 static_cast<double>(s.n_particles())});
  r.tolerance = rel_tolerance * scale;
  r.status = r.slack >= -r.tolerance ? Status::Holds : Status::ViolatedBeyondTolerance;
  return r;
}

inline BoundReport verify(const TrialState& s, const BoundSpec& spec, const std::string& state_id = "s0",
                          double rel_tolerance = kVerifyTolerance) {
  spec.validate();
  const DensityProfile d = density(s);
  return verify_with(state_id, s, d, i_xc(s, spec.potential), spec, rel_tolerance);
}

/// Lemma2 gamma grid: 20 points, log-spaced over [1e-3, 1e3] times the
/// potential's length, with gamma = 0 first when the tail moment is finite there.
inline std::vector<double> lemma2_gamma_grid(const Potential& p) {
  const double L = p.natural_length();
  if (p.is<family::Homogeneous>()) return log_grid(1e-3 * L, 1e3 * L, 20);
  std::vector<double> g{0.0};
  for (double x : log_grid(1e-3 * L, 1e3 * L, 19)) g.push_back(x);
  return g;
}

/// The proven bounds of the soundness sweep for one potential.
inline std::vector<BoundSpec> proven_bounds_for(const Potential& p) {
  std::vector<BoundSpec> out;
  auto add = [&](BoundId id) {
    BoundSpec b;
    b.id = id;
    b.potential = p;
    out.push_back(b);
    return &out.back();
  };
  if (p.is<family::Contact>()) add(BoundId::ContactDirect);
  if (p.is<family::ApproxContact>()) {
    add(BoundId::DirectCS);
    add(BoundId::HS1D);
    add(BoundId::ApproxContactDirect);
  }
  if (p.convex_decaying())
    for (double g : lemma2_gamma_grid(p)) add(BoundId::Lemma2)->gamma = g;
  if (p.is<family::ConvexSoftCoulomb>() || p.is<family::RegularizedCoulomb>()) {
    add(BoundId::Thm3A);
    for (double a : {0.1, 1.0, 10.0}) add(BoundId::Thm3B)->alpha = a;
    add(BoundId::Thm3B);  // alpha = N
    add(BoundId::LiftedLO);
  }
  if (p.is<family::Homogeneous>()) {
    add(BoundId::Lundholm);
    add(BoundId::Thm4);
  }
  return out;
}

/// Potentials of the default soundness sweep.
inline std::vector<Potential> default_sweep_potentials() {
  return {Potential::contact(),
          Potential::approx_contact(1.0),
          Potential::convex_soft_coulomb(1.0),
          Potential::regularized_coulomb(1.0),
          Potential::homogeneous(0.1),
          Potential::homogeneous(0.5),
          Potential::homogeneous(0.9)};
}

struct BatchItem {
  std::string state_id;
  TrialState state;
};

/// Verifies every (state, bound) pair. Energies are computed once per
/// (state, potential) and the profile once per state. States are spread over
/// `jobs` threads; the output is sorted by (state_id, bound label, potential).
inline std::vector<BoundReport> run_batch(const std::vector<BatchItem>& items, const std::vector<BoundSpec>& specs,
                                          int jobs = 1, double rel_tolerance = kVerifyTolerance) {
  for (const auto& s : specs) s.validate();
  // distinct potentials in first-seen order
  std::vector<Potential> pots;
  std::vector<std::size_t> pot_of(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto it = std::find(pots.begin(), pots.end(), specs[i].potential);
    if (it == pots.end()) {
      pots.push_back(specs[i].potential);
      it = pots.end() - 1;
    }
    pot_of[i] = static_cast<std::size_t>(it - pots.begin());
  }
  auto work = [&](std::size_t k) {
    const auto& item = items[k];
    const DensityProfile d = density(item.state);
    std::vector<EnergyBreakdown> e;
    e.reserve(pots.size());
    for (const auto& p : pots) e.push_back(i_xc(item.state, p));
    std::vector<BoundReport> out;
    out.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i)
      out.push_back(verify_with(item.state_id, item.state, d, e[pot_of[i]], specs[i], rel_tolerance));
    return out;
  };
  std::vector<std::vector<BoundReport>> per_item(items.size());
  jobs = std::max(1, jobs);
  if (jobs == 1 || items.size() < 2) {
    for (std::size_t k = 0; k < items.size(); ++k) per_item[k] = work(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = static_cast<std::size_t>(t); k < items.size(); k += static_cast<std::size_t>(jobs))
            per_item[k] = work(k);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& ep : errors)
      if (ep) std::rethrow_exception(ep);
  }
  std::vector<BoundReport> all;
  for (auto& v : per_item)
    for (auto& r : v) all.push_back(std::move(r));
  std::stable_sort(all.begin(), all.end(), [](const BoundReport& a, const BoundReport& b) {
    if (a.state_id != b.state_id) return a.state_id < b.state_id;
    if (a.potential != b.potential) return a.potential < b.potential;
    if (a.params != b.params) return a.params < b.params;
    return a.bound_id < b.bound_id;
  });
  return all;
}

/// Zero-padded ids "s000", "s001", ... for a state list.
inline std::vector<BatchItem> label_states(const std::vector<TrialState>& states) {
  std::vector<BatchItem> out;
  const int width = std::max<int>(3, static_cast<int>(std::to_string(states.size()).size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::string id = std::to_string(i);
    id = "s" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(id.size(), width), '0') + id;
    out.push_back({id, states[i]});
  }
  return out;
}

struct BatchSummary {
  std::size_t checks = 0;
  std::size_t violations = 0;       // among proven bounds
  std::size_t reference_fails = 0;  // conjectured bounds that fail
  double min_relative_slack = kInf;
};

inline BatchSummary summarize(const std::vector<BoundReport>& reports) {
  BatchSummary s;
  for (const auto& r : reports) {
    ++s.checks;
    if (r.status == Status::ViolatedBeyondTolerance) {
      if (r.proven) ++s.violations;
      else ++s.reference_fails;
    }
    if (r.proven && std::isfinite(r.rhs)) {
      const double scale = r.tolerance / kVerifyTolerance;
      s.min_relative_slack = std::min(s.min_relative_slack, r.slack / scale);
    }
  }
  return s;
}

}  // namespace lo1d
