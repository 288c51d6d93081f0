#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lo1d/numerics.hpp"

namespace lo1d {

struct GaussianComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 1.0;
};

inline double normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

/// Signed linear combination of normal densities. Used for one-body densities
/// of Gaussian-orbital states and for the distribution of particle separations
/// entering pair and Hartree energies.
class GaussianMixture {
 public:
  GaussianMixture() = default;
  explicit GaussianMixture(std::vector<GaussianComponent> c) : components_(std::move(c)) {}

  const std::vector<GaussianComponent>& components() const { return components_; }
  bool empty() const { return components_.empty(); }

  void add(double weight, double mean, double variance) { components_.push_back({weight, mean, variance}); }

  double operator()(double x) const {
    double s = 0.0;
    for (const auto& c : components_) s += c.weight * normal_pdf(x, c.mean, c.variance);
    return s;
  }

  double mass() const {
    double s = 0.0;
    for (const auto& c : components_) s += c.weight;
    return s;
  }

  /// Mass in [a, b].
  double mass_between(double a, double b) const {
    double s = 0.0;
    for (const auto& c : components_) {
      const double sd = std::sqrt(2.0 * c.variance);
      s += c.weight * 0.5 * (std::erf((b - c.mean) / sd) - std::erf((a - c.mean) / sd));
    }
    return s;
  }

  /// Exact integral of the square, sum_ij w_i w_j N(m_i - m_j; 0, v_i + v_j).
  double square_integral() const { return autocorrelation(*this)(0.0); }

  /// Distribution of x - y for x ~ this, y ~ other: u -> int f(s + u) g(s) ds.
  GaussianMixture autocorrelation(const GaussianMixture& other) const {
    GaussianMixture out;
    out.components_.reserve(components_.size() * other.components_.size());
    for (const auto& a : components_)
      for (const auto& b : other.components_) out.add(a.weight * b.weight, a.mean - b.mean, a.variance + b.variance);
    return out.merged();
  }

  /// Combine components with identical mean and variance.
  GaussianMixture merged() const {
    std::vector<GaussianComponent> c = components_;
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
      return a.variance != b.variance ? a.variance < b.variance : a.mean < b.mean;
    });
    std::vector<GaussianComponent> out;
    for (const auto& x : c) {
      if (!out.empty()) {
        auto& y = out.back();
        const double scale = std::max({1.0, std::abs(x.mean), std::abs(y.mean)});
        if (std::abs(y.variance - x.variance) <= 1e-14 * x.variance && std::abs(y.mean - x.mean) <= 1e-14 * scale) {
          y.weight += x.weight;
          continue;
        }
      }
      out.push_back(x);
    }
    std::erase_if(out, [](const auto& x) { return x.weight == 0.0; });
    return GaussianMixture(std::move(out));
  }

  GaussianMixture scaled(double factor) const {
    GaussianMixture out = *this;
    for (auto& c : out.components_) c.weight *= factor;
    return out;
  }

  GaussianMixture operator-(const GaussianMixture& o) const {
    GaussianMixture out = *this;
    for (const auto& c : o.components_) out.add(-c.weight, c.mean, c.variance);
    return out.merged();
  }

  /// Smallest interval holding every component's mean +- k standard deviations.
  Interval extent(double k) const {
    Interval e{kInf, -kInf};
    for (const auto& c : components_) {
      const double s = std::sqrt(c.variance);
      e.lo = std::min(e.lo, c.mean - k * s);
      e.hi = std::max(e.hi, c.mean + k * s);
    }
    if (components_.empty()) e = {0.0, 0.0};
    return e;
  }

  double min_std() const {
    double s = kInf;
    for (const auto& c : components_) s = std::min(s, std::sqrt(c.variance));
    return s;
  }

  /// Folded onto r >= 0: g(r) = f(r) + f(-r).
  double folded(double r) const { return (*this)(r) + (*this)(-r); }

  /// Points on r >= 0 where the folded mixture has structure: each |mean| and
  /// |mean| +- 4, 8 standard deviations.
  std::vector<double> folded_breakpoints() const {
    std::vector<double> pts;
    for (const auto& c : components_) {
      const double m = std::abs(c.mean), s = std::sqrt(c.variance);
      for (double k : {-8.0, -4.0, 0.0, 4.0, 8.0}) {
        const double p = m + k * s;
        if (p > 0.0) pts.push_back(p);
      }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

 private:
  std::vector<GaussianComponent> components_;
};

}  // namespace lo1d
