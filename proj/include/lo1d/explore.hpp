#pragma once

// Derivative-free search for the trial state maximizing
//   lambda(theta) = -I_xc(psi_theta) / int rho_theta^2,
// the empirical constant of the conjectured form I_xc >= -C int rho^2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lo1d/bounds.hpp"
#include "lo1d/energies.hpp"
#include "lo1d/errors.hpp"
#include "lo1d/numerics.hpp"
#include "lo1d/potentials.hpp"
#include "lo1d/states.hpp"

namespace lo1d {

/// A parametrized family of trial states with box bounds on theta.
struct StateTemplate {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<double> lo;
  std::vector<double> hi;
  std::function<TrialState(const std::vector<double>&)> make;

  std::size_t dim() const { return lo.size(); }
};

/// Named families:
///   gaussian_pair_symmetric / gaussian_pair_antisymmetric: (separation, width)
///   gaussian_triple_symmetric / gaussian_triple_antisymmetric: (gap1, gap2, width)
///   hermite_pair / hermite_triple: (width), lowest oscillator levels, antisymmetric
///   correlated_pair_symmetric / correlated_pair_antisymmetric: (cm_width, offset, rel_width)
inline StateTemplate state_template(const std::string& name) {
  auto sym_of = [&](const std::string& n) {
    return n.ends_with("antisymmetric") ? Symmetry::Antisymmetric : Symmetry::Symmetric;
  };
  if (name == "gaussian_pair_symmetric" || name == "gaussian_pair_antisymmetric") {
    const Symmetry s = sym_of(name);
    return {name, {"separation", "width"}, {0.5, 0.25}, {20.0, 4.0}, [s](const std::vector<double>& t) {
              return TrialState::gaussian_product({-0.5 * t[0], 0.5 * t[0]}, t[1], s);
            }};
  }
  if (name == "gaussian_triple_symmetric" || name == "gaussian_triple_antisymmetric") {
    const Symmetry s = sym_of(name);
    return {name, {"gap1", "gap2", "width"}, {0.5, 0.5, 0.25}, {20.0, 20.0, 4.0}, [s](const std::vector<double>& t) {
              return TrialState::gaussian_product({0.0, t[0], t[0] + t[1]}, t[2], s);
            }};
  }
  if (name == "hermite_pair" || name == "hermite_triple") {
    const int n = name == "hermite_pair" ? 2 : 3;
    return {name, {"width"}, {0.1}, {10.0}, [n](const std::vector<double>& t) {
              return TrialState::hermite_slater(n, t[0], Symmetry::Antisymmetric);
            }};
  }
  if (name == "correlated_pair_symmetric" || name == "correlated_pair_antisymmetric") {
    const Symmetry s = sym_of(name);
    return {name,
            {"cm_width", "offset", "rel_width"},
            {0.1, 0.1, 0.1},
            {10.0, 20.0, 10.0},
            [s](const std::vector<double>& t) { return TrialState::soft_coulomb_pair(1.0, s, 0.0, t[0], t[1], t[2]); }};
  }
  throw InvalidArgument("unknown state family '" + name + "'");
}

inline std::vector<std::string> state_template_names() {
  return {"gaussian_pair_symmetric",   "gaussian_pair_antisymmetric",   "gaussian_triple_symmetric",
          "gaussian_triple_antisymmetric", "hermite_pair",              "hermite_triple",
          "correlated_pair_symmetric", "correlated_pair_antisymmetric"};
}

struct SearchProblem {
  Potential potential = Potential::contact();
  StateTemplate family;
  int budget = 2000;
};

struct TracePoint {
  std::vector<double> theta;
  double ratio = 0.0;
  int evaluation = 0;
};

struct SearchResult {
  std::vector<double> best_theta;
  double best_ratio = -kInf;
  int evaluations_used = 0;
  std::vector<TracePoint> trace;  // successive incumbents
};

/// int rho^2 of the state: twice the contact Hartree energy.
inline double density_square_integral(const TrialState& s) { return 2.0 * hartree(s, Potential::contact()); }

/// -I_xc / int rho^2.
inline double lo_ratio(const TrialState& s, const Potential& p) {
  return -i_xc(s, p).i_xc / density_square_integral(s);
}

namespace detail {

class Objective {
 public:
  Objective(const SearchProblem& p) : problem_(p) {}

  double operator()(const std::vector<double>& theta) {
    ++count_;
    double r = 0.0;
    try {
      r = lo_ratio(problem_.family.make(theta), problem_.potential);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "objective failed at theta = (";
      for (std::size_t i = 0; i < theta.size(); ++i) msg << (i ? ", " : "") << theta[i];
      msg << "): " << e.what();
      throw ObjectiveEvaluationFailed(msg.str());
    }
    if (!std::isfinite(r)) throw ObjectiveEvaluationFailed("objective is not finite");
    if (r > best_.best_ratio) {
      best_.best_ratio = r;
      best_.best_theta = theta;
      best_.trace.push_back({theta, r, count_});
    }
    return r;
  }

  int count() const { return count_; }
  SearchResult& result() { return best_; }

 private:
  const SearchProblem& problem_;
  int count_ = 0;
  SearchResult best_;
};

inline std::vector<double> clamp_to_box(std::vector<double> x, const StateTemplate& t) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], t.lo[i], t.hi[i]);
  return x;
}

/// Nelder-Mead maximization inside the box (trial points are clamped),
/// coefficients reflection 1, expansion 2, contraction 0.5, shrink 0.5.
/// Initial simplex: x0 plus 5% of the box width along each axis.
inline void nelder_mead(Objective& f, const StateTemplate& t, std::vector<double> x0, int budget) {
  const std::size_t n = t.dim();
  const int stop = f.count() + budget;
  std::vector<std::vector<double>> pts{x0};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    const double step = 0.05 * (t.hi[i] - t.lo[i]);
    x[i] = x[i] + step <= t.hi[i] ? x[i] + step : x[i] - step;
    pts.push_back(x);
  }
  std::vector<double> val;
  for (const auto& p : pts) {
    if (f.count() >= stop) return;
    val.push_back(-f(p));  // minimize the negative
  }
  auto order = [&] {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto i : idx) {
      p2.push_back(pts[i]);
      v2.push_back(val[i]);
    }
    pts = std::move(p2);
    val = std::move(v2);
  };
  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double c) {
    // a + c (b - a), clamped
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + c * (b[i] - a[i]);
    return clamp_to_box(x, t);
  };
  while (f.count() < stop) {
    order();
    if (std::abs(val.back() - val.front()) <= 1e-13 * (std::abs(val.front()) + 1e-300)) {
      double spread = 0.0;
      for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(pts.back()[i] - pts.front()[i]) / (t.hi[i] - t.lo[i]));
      if (spread < 1e-9) return;  // converged
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i] / static_cast<double>(n);
    const auto& worst = pts.back();
    const auto xr = affine(centroid, worst, -1.0);
    const double fr = -f(xr);
    if (fr < val.front()) {
      if (f.count() >= stop) return;
      const auto xe = affine(centroid, worst, -2.0);
      const double fe = -f(xe);
      if (fe < fr) {
        pts.back() = xe;
        val.back() = fe;
      } else {
        pts.back() = xr;
        val.back() = fr;
      }
      continue;
    }
    if (fr < val[n - 1]) {
      pts.back() = xr;
      val.back() = fr;
      continue;
    }
    if (f.count() >= stop) return;
    const bool outside = fr < val.back();
    const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, worst, 0.5);
    const double fc = -f(xc);
    if (fc < (outside ? fr : val.back())) {
      pts.back() = xc;
      val.back() = fc;
      continue;
    }
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (f.count() >= stop) return;
      pts[k] = affine(pts.front(), pts[k], 0.5);
      val[k] = -f(pts[k]);
    }
  }
}

}  // namespace detail

/// Nelder-Mead with max(1, budget / 200) restarts from seeded random points
/// in the box. Restart k draws from Rng::stream(seed, k); the incumbent is the
/// first point reaching the best ratio, restarts taken in index order.
inline SearchResult optimize(const SearchProblem& problem, std::uint64_t seed, int jobs = 1) {
  if (problem.budget < 50) throw InvalidArgument("search budget must be at least 50 evaluations");
  const StateTemplate& t = problem.family;
  if (t.lo.size() != t.hi.size() || t.lo.empty()) throw InvalidArgument("state template needs a box");
  for (std::size_t i = 0; i < t.dim(); ++i)
    if (!(t.lo[i] < t.hi[i])) throw InvalidArgument("state template box needs lo < hi");
  const int restarts = std::max(1, problem.budget / 200);
  std::vector<SearchResult> parts(static_cast<std::size_t>(restarts));
  auto run = [&](int k) {
    const int share = problem.budget / restarts + (k < problem.budget % restarts ? 1 : 0);
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
    std::vector<double> x0(t.dim());
    for (std::size_t i = 0; i < t.dim(); ++i) x0[i] = rng.uniform(t.lo[i], t.hi[i]);
    detail::Objective f(problem);
    detail::nelder_mead(f, t, x0, share);
    SearchResult r = f.result();
    r.evaluations_used = f.count();
    parts[static_cast<std::size_t>(k)] = std::move(r);
  };
  jobs = std::max(1, std::min(jobs, restarts));
  if (jobs == 1) {
    for (int k = 0; k < restarts; ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        try {
          for (int k = j; k < restarts; k += jobs) run(k);
        } catch (...) {
          errs[static_cast<std::size_t>(j)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  SearchResult out;
  int offset = 0;
  for (const auto& r : parts) {
    for (const auto& tp : r.trace)
      if (tp.ratio > out.best_ratio) {
        out.best_ratio = tp.ratio;
        out.best_theta = tp.theta;
        out.trace.push_back({tp.theta, tp.ratio, tp.evaluation + offset});
      }
    offset += r.evaluations_used;
  }
  out.evaluations_used = offset;
  return out;
}

struct ConstantRow {
  std::string potential;
  std::string family;
  double best_ratio = 0.0;
  std::vector<double> best_theta;
  int evaluations = 0;
  /// I_xc / RHS of the logarithmic bound at the maximizer, for potentials it covers.
  std::optional<double> thm3a_fraction;
};

/// Best empirical ratio per (potential, family), in input order.
inline std::vector<ConstantRow> constant_table(const std::vector<Potential>& potentials,
                                               const std::vector<std::string>& families, int budget,
                                               std::uint64_t seed, int jobs = 1) {
  std::vector<ConstantRow> rows;
  for (const auto& p : potentials)
    for (const auto& name : families) {
      SearchProblem prob{p, state_template(name), budget};
      const SearchResult r = optimize(prob, seed, jobs);
      ConstantRow row{p.label(), name, r.best_ratio, r.best_theta, r.evaluations_used, std::nullopt};
      if (p.is<family::ConvexSoftCoulomb>() || p.is<family::RegularizedCoulomb>()) {
        const TrialState s = prob.family.make(r.best_theta);
        const double lhs = i_xc(s, p).i_xc;
        const double rhs = rhs_thm3a(density(s), theorem_constants(p));
        row.thm3a_fraction = rhs < 0.0 ? lhs / rhs : 0.0;
      }
      rows.push_back(std::move(row));
    }
  return rows;
}

}  // namespace lo1d
