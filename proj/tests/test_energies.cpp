#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lo1d/energies.hpp"

using namespace lo1d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kSp = std::sqrt(std::numbers::pi);

std::vector<Potential> smooth_potentials() {
  return {Potential::approx_contact(0.7), Potential::soft_coulomb(0.5), Potential::convex_soft_coulomb(1.0),
          Potential::regularized_coulomb(0.3), Potential::homogeneous(0.5)};
}

std::vector<TrialState> sample_states() {
  return {TrialState::gaussian_product({0.0, 0.0}, 1.0, Symmetry::Symmetric),
          TrialState::gaussian_product({-1.0, 0.5}, 0.6, Symmetry::Antisymmetric),
          TrialState::gaussian_product({-1.0, 0.2, 1.7}, 0.8, Symmetry::Symmetric),
          TrialState::hermite_slater(2, 1.0, Symmetry::Antisymmetric),
          TrialState::hermite_slater(3, 0.7, Symmetry::Symmetric, 0.3, 1),
          TrialState::soft_coulomb_pair(1.0, Symmetry::Symmetric)};
}

}  // namespace

TEST_CASE("contact energies of the symmetric Gaussian pair", "[energies]") {
  const TrialState s = TrialState::gaussian_product({0.0, 0.0}, 1.0, Symmetry::Symmetric);
  const Potential c = Potential::contact();
  CHECK_THAT(expectation_v(s, c), WithinRel(1.0 / (2.0 * kSp), 1e-12));
  CHECK_THAT(contact_diagonal_integral(s), WithinRel(1.0 / (2.0 * kSp), 1e-10));
  CHECK_THAT(hartree(s, c), WithinRel(1.0 / kSp, 1e-12));
  CHECK_THAT(i_xc(s, c).i_xc, WithinRel(-1.0 / (2.0 * kSp), 1e-12));
  CHECK_THAT(hartree(density(s), c), WithinRel(1.0 / kSp, 1e-9));
}

TEST_CASE("contact energies of antisymmetric states", "[energies]") {
  for (const TrialState& s : {TrialState::gaussian_product({-0.3, 0.9}, 0.5, Symmetry::Antisymmetric),
                              TrialState::hermite_slater(2, 1.7, Symmetry::Antisymmetric, 0.0, 1),
                              TrialState::soft_coulomb_pair(2.0, Symmetry::Antisymmetric)}) {
    const Potential c = Potential::contact();
    CHECK(std::abs(expectation_v(s, c)) <= 1e-12);
    CHECK(std::abs(contact_diagonal_integral(s)) <= 1e-12);
    const double rho2 = density_power_integral(density(s), 2.0);
    CHECK_THAT(i_xc(s, c).i_xc, WithinAbs(-0.5 * rho2, 1e-9));
  }
}

TEST_CASE("approximate contact converges to contact", "[energies][oracle]") {
  const TrialState s = TrialState::gaussian_product({-0.5, 0.5}, 1.0, Symmetry::Symmetric);
  // v_sigma has unit integral on the half-line, so v_sigma(x - y) -> 2 delta(x - y)
  const double target = 2.0 * expectation_v(s, Potential::contact());
  std::vector<double> seq;
  for (double sigma : {1.0, 0.1, 0.01}) seq.push_back(expectation_v(s, Potential::approx_contact(sigma)));
  CHECK(std::abs(seq[2] - seq[1]) < 1e-3);
  CHECK(std::abs(seq[2] - target) < std::abs(seq[1] - target));
  CHECK_THAT(seq[2], WithinAbs(target, 1e-3));
}

TEST_CASE("profile Hartree term", "[energies]") {
  const DensityProfile u = make_profile(0.0, 0.01, std::vector<double>(101, 2.0), 2);
  CHECK_THAT(hartree(u, Potential::contact()), WithinRel(2.0, 1e-14));
  const DensityProfile zero = make_profile(0.0, 0.01, std::vector<double>(101, 0.0), 2);
  for (const auto& p : smooth_potentials()) CHECK(hartree(zero, p) == 0.0);
  // cross-check against the exact density route
  for (const auto& s : sample_states())
    for (const auto& p : smooth_potentials()) {
      CAPTURE(s.describe(), p.label());
      CHECK_THAT(hartree(density(s), p), WithinRel(hartree(s, p), 1e-8));
    }
}

TEST_CASE("mixture and quadrature routes agree", "[energies][oracle]") {
  for (const auto& s : sample_states()) {
    if (!s.analytic()) continue;
    for (const auto& p : smooth_potentials()) {
      CAPTURE(s.describe(), p.label());
      CHECK_THAT(expectation_v(s, p), WithinRel(expectation_v_numeric(s, p), 1e-8));
      CHECK_THAT(hartree(s, p), WithinRel(hartree_numeric(s, p), 1e-8));
    }
  }
}

TEST_CASE("contact expectation from the diagonal pair density", "[energies][oracle]") {
  for (const auto& s : sample_states()) {
    const Interval e = s.support();
    const double diag = 0.5 * integrate_1d([&](double x) { return s.pair_density(x, x); }, e,
                                           QuadratureSpec{1e-14, 1e-11, 4000, 0.0});
    CAPTURE(s.describe());
    CHECK_THAT(expectation_v(s, Potential::contact()), WithinAbs(diag, 1e-10));
  }
}

TEST_CASE("energy identities", "[energies][property]") {
  const auto states = random_states(41, 30);
  for (const auto& s : states)
    for (const auto& p : smooth_potentials()) {
      const EnergyBreakdown e = i_xc(s, p);
      CHECK(e.i_xc == e.expectation_v - e.hartree);
      CHECK(e.hartree > 0.0);
      CHECK(e.expectation_v >= 0.0);
    }
}

TEST_CASE("shifted interaction", "[energies]") {
  for (double beta : {0.3, 1.0}) {
    const Potential p = Potential::regularized_coulomb(beta);
    const double c = kSp / (2.0 * beta);
    CHECK_THAT(value_at_zero(p), WithinRel(c, 1e-14));
    for (const TrialState& s : {TrialState::gaussian_product({0.0, 1.0}, 0.5, Symmetry::Symmetric),
                                TrialState::gaussian_product({0.0, 1.0, 2.0}, 0.5, Symmetry::Antisymmetric)}) {
      const EnergyBreakdown e = i_xc(s, p);
      const EnergyBreakdown sh = shifted(e, c, s.n_particles());
      CHECK_THAT(sh.i_xc - e.i_xc, WithinRel(c * s.n_particles() / 2.0, 1e-12));
      // the pair sum of a constant c is c N(N-1)/2
      CHECK_THAT(0.5 * s.separation_mixture().mass(),
                 WithinRel(s.n_particles() * (s.n_particles() - 1) / 2.0, 1e-12));
    }
  }
}

TEST_CASE("relabeling and translation invariance", "[energies][property]") {
  const TrialState s = TrialState::gaussian_product({-0.7, 1.3}, 0.9, Symmetry::Symmetric);
  for (double u : {0.2, 1.0, 2.5})
    CHECK_THAT(s.separation_density_numeric(-u), WithinAbs(s.separation_density_numeric(u), 1e-10));
  for (const auto& st : sample_states()) {
    const TrialState t = st.translated(3.7);
    for (const auto& p : smooth_potentials()) {
      CHECK_THAT(expectation_v(t, p), WithinRel(expectation_v(st, p), 1e-8));
      CHECK_THAT(hartree(t, p), WithinRel(hartree(st, p), 1e-8));
    }
  }
}

TEST_CASE("alpha profile", "[energies]") {
  const TrialState s = TrialState::gaussian_product({-1.0, 2.0}, 0.8, Symmetry::Symmetric);
  CHECK(alpha_profile(s, kInf, 0.3) == 2.0);
  CHECK(alpha_profile(s, 0.0, 0.3) == 0.0);
  CHECK_THROWS_AS(alpha_profile(s, -1.0, 0.0), InvalidArgument);
  for (const auto& st : random_states(5, 12)) {
    const double rho2 = density_power_integral(density(st), 2.0);
    for (double r : {0.1, 1.0, 10.0}) CHECK(alpha_square_integral(st, r) <= 4.0 * r * r * rho2 * (1.0 + 1e-9));
  }
}
