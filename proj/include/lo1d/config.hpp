#pragma once

// JSON run configuration. Every section is optional; missing keys take the
// defaults of the default suite.
//
// {
//   "seed": 20240607, "jobs": 1, "tolerance": 1e-6, "out": "lo1d_out",
//   "verify":   {"random_states": 200, "states": [...], "potentials": [...],
//                "bounds": [...], "reference_bounds": [...]},
//   "moments":  {"potentials": [...], "gamma_points": 200, "gamma_range": [1e-4, 1e4]},
//   "optimize": {"potentials": [...], "families": [...], "budget": 2000},
//   "hubbard":  {"grid": 200, "random_vectors": 10000, "max_sites": 16, "u": 4,
//                "u_over_t_max": 100, "u_over_t_points": 101},
//   "maximal":  {"p": 2, "random_profiles": 100, "points": 257}
// }
//
// Potentials: {"family": "ConvexSoftCoulomb", "epsilon": 1}; families Contact,
// ApproxContact (sigma), SoftCoulomb, ConvexSoftCoulomb, Homogeneous (epsilon),
// RegularizedCoulomb (beta).
// States: {"family": "GaussianProduct", "centers": [..], "width": w, "symmetry": "antisymmetric"},
//         {"family": "HermiteSlater", "n_particles": 2, "width": w, "center": 0, "first_level": 0, ...},
//         {"family": "SoftCoulombGroundPair", "epsilon": e, "center": 0, "cm_width": a,
//          "offset": d, "rel_width": s, ...}.
// Bounds: {"id": "Lemma2", "potential": {...}, "gamma": 1}, plus "alpha", "shift",
//         "constants": {"c1", "c2", "c3"}, "k1", "k2" where they apply.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lo1d/bounds.hpp"
#include "lo1d/errors.hpp"
#include "lo1d/explore.hpp"
#include "lo1d/potentials.hpp"
#include "lo1d/states.hpp"

namespace lo1d {

using json = nlohmann::json;

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline double need_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(where + " needs a numeric '" + key + "'");
  return j.at(key).get<double>();
}

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

}  // namespace detail

/// The bare Coulomb interaction 1/r is a recognized request that no module
/// can serve; it is reported separately from malformed input.
class CoulombRequest : public ConfigError {
 public:
  CoulombRequest()
      : ConfigError(
            "pure Coulomb potential 1/r: int_0^gamma v''(r) r^2 dr = +inf for every gamma > 0, "
            "so the moment conditions cannot hold; use a regularized family") {}
};

inline Potential parse_potential(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw ConfigError("potential needs a 'family' string");
  const std::string f = j.at("family").get<std::string>();
  const std::string where = "potential " + f;
  try {
    if (f == "Contact") {
      detail::only_keys(j, {"family"}, where);
      return Potential::contact();
    }
    if (f == "ApproxContact") {
      detail::only_keys(j, {"family", "sigma"}, where);
      return Potential::approx_contact(detail::need_number(j, "sigma", where));
    }
    if (f == "SoftCoulomb" || f == "ConvexSoftCoulomb" || f == "Homogeneous") {
      detail::only_keys(j, {"family", "epsilon"}, where);
      const double e = detail::need_number(j, "epsilon", where);
      if (f == "SoftCoulomb") return Potential::soft_coulomb(e);
      if (f == "ConvexSoftCoulomb") return Potential::convex_soft_coulomb(e);
      return Potential::homogeneous(e);
    }
    if (f == "RegularizedCoulomb") {
      detail::only_keys(j, {"family", "beta"}, where);
      return Potential::regularized_coulomb(detail::need_number(j, "beta", where));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (f == "Coulomb") throw CoulombRequest();
  throw ConfigError("unknown potential family '" + f + "'");
}

inline json potential_to_json(const Potential& p) {
  json j = {{"family", p.name()}};
  for (const auto& [k, v] : p.params()) j[k] = v;
  return j;
}

inline TrialState parse_state(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw ConfigError("state needs a 'family' string");
  const std::string f = j.at("family").get<std::string>();
  const std::string where = "state " + f;
  try {
    const Symmetry sym = symmetry_from_string(detail::get_or<std::string>(j, "symmetry", "symmetric"));
    if (f == "GaussianProduct") {
      detail::only_keys(j, {"family", "symmetry", "centers", "width"}, where);
      if (!j.contains("centers")) throw ConfigError(where + " needs 'centers'");
      return TrialState::gaussian_product(j.at("centers").get<std::vector<double>>(),
                                          detail::need_number(j, "width", where), sym);
    }
    if (f == "HermiteSlater") {
      detail::only_keys(j, {"family", "symmetry", "n_particles", "width", "center", "first_level"}, where);
      return TrialState::hermite_slater(detail::get_or<int>(j, "n_particles", 2), detail::need_number(j, "width", where),
                                        sym, detail::get_or<double>(j, "center", 0.0),
                                        detail::get_or<int>(j, "first_level", 0));
    }
    if (f == "SoftCoulombGroundPair") {
      detail::only_keys(j, {"family", "symmetry", "epsilon", "center", "cm_width", "offset", "rel_width"}, where);
      const double e = detail::need_number(j, "epsilon", where);
      if (!j.contains("cm_width")) return TrialState::soft_coulomb_pair(e, sym);
      return TrialState::soft_coulomb_pair(e, sym, detail::get_or<double>(j, "center", 0.0),
                                           detail::need_number(j, "cm_width", where),
                                           detail::need_number(j, "offset", where),
                                           detail::need_number(j, "rel_width", where));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("unknown state family '" + f + "'");
}

inline BoundSpec parse_bound(const json& j) {
  detail::only_keys(j, {"id", "potential", "gamma", "alpha", "shift", "constants", "k1", "k2"}, "bound");
  if (!j.contains("id") || !j.at("id").is_string()) throw ConfigError("bound needs an 'id' string");
  BoundSpec b;
  try {
    b.id = bound_id_from_string(j.at("id").get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!j.contains("potential")) throw ConfigError("bound " + to_string(b.id) + " needs a 'potential'");
  b.potential = parse_potential(j.at("potential"));
  b.gamma = detail::get_or<double>(j, "gamma", b.gamma);
  if (j.contains("alpha")) b.alpha = detail::get_or<double>(j, "alpha", 0.0);
  if (j.contains("shift")) b.shift = detail::get_or<double>(j, "shift", 0.0);
  if (j.contains("constants")) {
    const json& c = j.at("constants");
    detail::only_keys(c, {"c1", "c2", "c3"}, "constants");
    b.constants = Assumption1Constants{detail::need_number(c, "c1", "constants"),
                                       detail::need_number(c, "c2", "constants"),
                                       detail::need_number(c, "c3", "constants")};
  }
  b.k1 = detail::get_or<double>(j, "k1", b.k1);
  b.k2 = detail::get_or<double>(j, "k2", b.k2);
  try {
    b.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return b;
}

struct VerifyConfig {
  std::size_t random_states = 200;
  std::vector<TrialState> states;
  std::vector<Potential> potentials = default_sweep_potentials();
  std::vector<BoundSpec> bounds;  // empty: every proven bound of each potential
  std::vector<BoundSpec> reference_bounds;
};

inline std::vector<Potential> default_moment_potentials() {
  std::vector<Potential> out;
  for (double e : {0.1, 1.0, 10.0}) out.push_back(Potential::convex_soft_coulomb(e));
  for (double b : {0.1, 1.0, 10.0}) out.push_back(Potential::regularized_coulomb(b));
  out.push_back(Potential::soft_coulomb(1.0));
  out.push_back(Potential::approx_contact(1.0));
  for (double e : {0.1, 0.5, 0.9}) out.push_back(Potential::homogeneous(e));
  return out;
}

struct MomentsConfig {
  std::vector<Potential> potentials = default_moment_potentials();
  int gamma_points = 200;
  double gamma_lo = 1e-4;  // times the natural length
  double gamma_hi = 1e4;
};

struct OptimizeConfig {
  std::vector<Potential> potentials = {Potential::contact(), Potential::approx_contact(1.0),
                                       Potential::convex_soft_coulomb(1.0), Potential::regularized_coulomb(1.0)};
  std::vector<std::string> families = {"gaussian_pair_symmetric", "gaussian_pair_antisymmetric", "hermite_pair",
                                       "correlated_pair_symmetric"};
  int budget = 2000;
};

struct HubbardConfig {
  int grid = 200;
  int random_vectors = 10000;
  int max_sites = 16;
  double t = 1.0;
  double u = 4.0;
  double u_over_t_max = 100.0;
  int u_over_t_points = 101;
};

struct MaximalConfig {
  double p = 2.0;
  int random_profiles = 100;
  int points = 257;
};

struct Config {
  std::uint64_t seed = 20240607;
  int jobs = 1;
  double tolerance = kVerifyTolerance;
  std::string out = "lo1d_out";
  VerifyConfig verify;
  MomentsConfig moments;
  OptimizeConfig optimize;
  HubbardConfig hubbard;
  MaximalConfig maximal;
  json raw = json::object();  // the input with overrides applied, for the digest
};

namespace detail {

inline std::vector<Potential> parse_potentials(const json& j, const char* where) {
  if (!j.is_array()) throw ConfigError(std::string(where) + ": 'potentials' must be a list");
  std::vector<Potential> out;
  for (const auto& p : j) out.push_back(parse_potential(p));
  return out;
}

inline void check_positive(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace detail

/// Builds a validated configuration from parsed JSON. Rasanen may only
/// appear among the reference bounds.
inline Config parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::only_keys(j, {"seed", "jobs", "tolerance", "out", "verify", "moments", "optimize", "hubbard", "maximal"},
                    "config");
  Config c;
  c.raw = j;
  c.seed = detail::get_or<std::uint64_t>(j, "seed", c.seed);
  c.jobs = detail::get_or<int>(j, "jobs", c.jobs);
  c.tolerance = detail::get_or<double>(j, "tolerance", c.tolerance);
  c.out = detail::get_or<std::string>(j, "out", c.out);
  detail::check_positive(c.jobs >= 1, "jobs must be >= 1");
  detail::check_positive(c.tolerance > 0.0, "tolerance must be positive");

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    detail::only_keys(v, {"random_states", "states", "potentials", "bounds", "reference_bounds"}, "verify");
    c.verify.random_states = detail::get_or<std::size_t>(v, "random_states", v.contains("states") ? 0 : 200);
    if (v.contains("states")) {
      if (!v.at("states").is_array()) throw ConfigError("verify: 'states' must be a list");
      for (const auto& s : v.at("states")) c.verify.states.push_back(parse_state(s));
    }
    if (v.contains("potentials")) c.verify.potentials = detail::parse_potentials(v.at("potentials"), "verify");
    if (v.contains("bounds")) {
      if (!v.at("bounds").is_array()) throw ConfigError("verify: 'bounds' must be a list");
      for (const auto& b : v.at("bounds")) {
        BoundSpec spec = parse_bound(b);
        if (!is_proven(spec.id))
          throw ConfigError(to_string(spec.id) + " is a conjectured bound and cannot be in the proven set; "
                                                  "list it under 'reference_bounds'");
        c.verify.bounds.push_back(spec);
      }
    }
    if (v.contains("reference_bounds")) {
      if (!v.at("reference_bounds").is_array()) throw ConfigError("verify: 'reference_bounds' must be a list");
      for (const auto& b : v.at("reference_bounds")) c.verify.reference_bounds.push_back(parse_bound(b));
    }
  }
  if (j.contains("moments")) {
    const json& m = j.at("moments");
    detail::only_keys(m, {"potentials", "gamma_points", "gamma_range"}, "moments");
    if (m.contains("potentials")) c.moments.potentials = detail::parse_potentials(m.at("potentials"), "moments");
    c.moments.gamma_points = detail::get_or<int>(m, "gamma_points", c.moments.gamma_points);
    if (m.contains("gamma_range")) {
      const auto r = detail::get_or<std::vector<double>>(m, "gamma_range", {});
      if (r.size() != 2) throw ConfigError("moments: 'gamma_range' needs two numbers");
      c.moments.gamma_lo = r[0];
      c.moments.gamma_hi = r[1];
    }
    detail::check_positive(c.moments.gamma_points >= 1, "moments: gamma_points must be >= 1");
    detail::check_positive(c.moments.gamma_lo > 0.0 && c.moments.gamma_hi >= c.moments.gamma_lo,
                           "moments: gamma_range needs 0 < lo <= hi");
  }
  if (j.contains("optimize")) {
    const json& o = j.at("optimize");
    detail::only_keys(o, {"potentials", "families", "budget"}, "optimize");
    if (o.contains("potentials")) c.optimize.potentials = detail::parse_potentials(o.at("potentials"), "optimize");
    c.optimize.families = detail::get_or<std::vector<std::string>>(o, "families", c.optimize.families);
    c.optimize.budget = detail::get_or<int>(o, "budget", c.optimize.budget);
    for (const auto& f : c.optimize.families) try {
        (void)state_template(f);
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    detail::check_positive(c.optimize.budget >= 50, "optimize: budget must be >= 50");
  }
  if (j.contains("hubbard")) {
    const json& h = j.at("hubbard");
    detail::only_keys(h, {"grid", "random_vectors", "max_sites", "t", "u", "u_over_t_max", "u_over_t_points"},
                      "hubbard");
    auto& hc = c.hubbard;
    hc.grid = detail::get_or<int>(h, "grid", hc.grid);
    hc.random_vectors = detail::get_or<int>(h, "random_vectors", hc.random_vectors);
    hc.max_sites = detail::get_or<int>(h, "max_sites", hc.max_sites);
    hc.t = detail::get_or<double>(h, "t", hc.t);
    hc.u = detail::get_or<double>(h, "u", hc.u);
    hc.u_over_t_max = detail::get_or<double>(h, "u_over_t_max", hc.u_over_t_max);
    hc.u_over_t_points = detail::get_or<int>(h, "u_over_t_points", hc.u_over_t_points);
    detail::check_positive(hc.grid >= 2 && hc.random_vectors >= 0 && hc.max_sites >= 1 && hc.t > 0.0 &&
                               hc.u >= 0.0 && hc.u_over_t_max >= 0.0 && hc.u_over_t_points >= 1,
                           "hubbard: grid >= 2, max_sites >= 1, t > 0, u >= 0 required");
  }
  if (j.contains("maximal")) {
    const json& m = j.at("maximal");
    detail::only_keys(m, {"p", "random_profiles", "points"}, "maximal");
    c.maximal.p = detail::get_or<double>(m, "p", c.maximal.p);
    c.maximal.random_profiles = detail::get_or<int>(m, "random_profiles", c.maximal.random_profiles);
    c.maximal.points = detail::get_or<int>(m, "points", c.maximal.points);
    detail::check_positive(c.maximal.p > 1.0, "maximal: p must exceed 1");
    detail::check_positive(c.maximal.random_profiles >= 0 && c.maximal.points >= 5, "maximal: points must be >= 5");
  }
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(f, nullptr, true, true);  // comments allowed
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace lo1d
