#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "susy_graphene/chain.hpp"
#include "susy_graphene/errors.hpp"
#include "susy_graphene/observables.hpp"

using namespace susy;
using testsupport::rel_err;

namespace {

const ModelSpec kOsc = ModelSpec::oscillator(1.0, 1.0);
const ModelSpec kMorse = ModelSpec::morse(1.0, 1.0, 6.0);

ChainState fig2() { return build_chain(kOsc, {{-0.2, 0.0}}); }

Grid config_grid(const ModelSpec& m, std::size_t n) {
  return m.kind == ModelKind::Morse ? Grid(-4.0, 25.0, n) : Grid(-22.0, 18.0, n);
}

std::vector<double> sampled(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> out(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) out[i] = f(g.x(i));
  return out;
}

// Interior extrema of samples whose magnitude exceeds `floor` times the peak.
std::vector<double> extrema(const std::vector<double>& v, double floor) {
  double peak = 0.0;
  for (double t : v) peak = std::max(peak, std::abs(t));
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if ((v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0.0 && std::abs(v[i]) > floor * peak) out.push_back(v[i]);
  }
  return out;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("ground-state spinor has no upper component") {
  for (const ChainState& c : {fig2(), build_chain(kMorse, {{-5.5, -1.5}}), ChainState(kOsc)}) {
    const SpinorState s = assemble_spinor(c, 0);
    CHECK(s.upper_vanishes);
    CHECK(s.dirac_energy == 0.0);
    const auto psi0 = eigenfunction_k(c, 0);
    for (double x : {-3.0, -1.0, 0.5, 2.0}) {
      CHECK(s.upper(x) == 0.0);
      CHECK(rel_err(s.lower(x), psi0(x)) < 1e-15);
      CHECK(probability_current(s, x) == 0.0);
      CHECK(rel_err(probability_density(s, x), psi0(x) * psi0(x)) < 1e-15);
    }
  }
}

TEST_CASE("first excited spinor of the oscillator example") {
  // upper = psi_0^- / sqrt2, lower = (L1+ psi_0^- / sqrt(omega/5)) / sqrt2 with L1+ = -d/dx + W1.
  const ChainState c = fig2();
  const SpinorState s = assemble_spinor(c, 1);
  CHECK(rel_err(s.dirac_energy, std::sqrt(0.2)) < 1e-15);
  for (double x : {-5.0, -2.5, -0.3, 1.7}) {
    const ValueDeriv p = base_eigenfunction(kOsc, 0, x);
    const double lifted = (-p.deriv + superpotential_k(c, x) * p.value) / std::sqrt(0.2);
    CHECK(rel_err(s.upper(x), p.value / std::sqrt(2.0)) < 1e-14);
    CHECK(rel_err(s.lower(x), lifted / std::sqrt(2.0)) < 1e-12);
  }
}

TEST_CASE("assembled spinors are normalized") {
  const std::vector<ChainState> chains = {fig2(), build_chain(kOsc, {{-0.2, 0.0}, {-3.0, 1.5}}),
                                          build_chain(kMorse, {{-5.5, -1.5}}),
                                          build_chain(kMorse, {{-5.5, -1.5}, {-11.0, -0.5}})};
  for (const ChainState& c : chains) {
    const Grid g = config_grid(c.model(), 4001);
    for (std::size_t n = 0; n <= 5; ++n) {
      const SpinorState s = assemble_spinor(c, n);
      const double norm = simpson(sampled(g, [&](double x) { return probability_density(s, x); }), g.spacing());
      CAPTURE(c.depth());
      CAPTURE(n);
      CHECK(std::abs(norm - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("current is bounded by the density") {
  UnitSystem u;
  u.e_charge = 1.7;
  u.v_fermi = 0.6;
  const ChainState c = build_chain(ModelSpec::oscillator(1.0, 1.0, u), {{-0.2, 0.3}});
  for (std::size_t n = 0; n <= 4; ++n) {
    const SpinorState s = assemble_spinor(c, n);
    for (double x = -8.0; x <= 4.0; x += 0.25) {
      CHECK(std::abs(probability_current(s, x)) <= 0.5 * 1.7 * 0.6 * probability_density(s, x) * (1.0 + 1e-15));
    }
  }
}

TEST_CASE("density is symmetric about the well centre for nu = 0 chains") {
  const std::vector<ChainState> chains = {fig2(), build_chain(kOsc, {{-1.7, 0.0}})};
  for (const ChainState& c : chains) {
    for (std::size_t n = 0; n <= 4; ++n) {
      const SpinorState s = assemble_spinor(c, n);
      double worst = 0.0;
      for (double d = 0.0; d <= 6.0; d += 0.1) {
        worst = std::max(worst, std::abs(probability_density(s, -2.0 + d) - probability_density(s, -2.0 - d)));
      }
      CAPTURE(c.depth());
      CAPTURE(n);
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("level-1 current: one lobe of each sign, odd about the centre") {
  const SpinorState s = assemble_spinor(fig2(), 1);
  const Grid g(-22.0, 18.0, 4001);
  const auto j = sampled(g, [&](double x) { return probability_current(s, x); });
  const auto ext = extrema(j, 0.05);
  REQUIRE(ext.size() == 2);
  CHECK(ext[0] * ext[1] < 0.0);
  CHECK(rel_err(std::abs(ext[0]), std::abs(ext[1])) < 1e-6);
  for (double d : {0.4, 1.3, 2.5}) CHECK(std::abs(probability_current(s, -2.0 + d) + probability_current(s, -2.0 - d)) < 1e-12);
  // Level n carries 2n lobes.
  for (std::size_t n = 2; n <= 3; ++n) {
    const SpinorState t = assemble_spinor(fig2(), n);
    CHECK(extrema(sampled(g, [&](double x) { return probability_current(t, x); }), 0.05).size() == 2 * n);
  }
}

TEST_CASE("dirac_energy") {
  UnitSystem u;
  CHECK(dirac_energy(u, 0.0) == 0.0);
  u.hbar = 2.0;
  u.v_fermi = 3.0;
  CHECK(dirac_energy(u, 4.0) == 12.0);
  CHECK_THROWS_AS(dirac_energy(u, -1e-3), DomainError);
  // E_{n+1} = sqrt(omega (n + 1/5)) for the oscillator example.
  const ChainState c = fig2();
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(rel_err(assemble_spinor(c, n + 1).dirac_energy, std::sqrt(n + 0.2)) < 1e-14);
  }
}

TEST_CASE("Dirac energies increase with the level") {
  for (const ChainState& c : {fig2(), build_chain(kMorse, {{-5.5, -1.5}, {-11.0, -0.5}})}) {
    double prev = -1.0;
    for (std::size_t n = 0; n <= 5; ++n) {
      const double e = assemble_spinor(c, n).dirac_energy;
      CHECK(e > prev);
      prev = e;
    }
  }
}

TEST_CASE("spinor index out of range") {
  CHECK_THROWS_AS(assemble_spinor(build_chain(kMorse, {{-5.5, -1.5}}), 7), std::out_of_range);
}

}  // TEST_SUITE
