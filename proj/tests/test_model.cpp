#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "susy_graphene/errors.hpp"
#include "susy_graphene/model.hpp"

using namespace susy;
using testsupport::rel_err;

namespace {

double grid_norm(const ModelSpec& m, std::size_t n, double lo, double hi) {
  const Grid g(lo, hi, 40001);
  std::vector<double> f(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double v = base_eigenfunction(m, n, g.x(i)).value;
    f[i] = v * v;
  }
  return simpson(f, g.spacing());
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("superpotential and potentials") {
  const ModelSpec osc = ModelSpec::oscillator(1.0, 0.0);
  CHECK(superpotential_w0(osc, 0.0) == 0.0);
  CHECK(base_potential(osc, Partner::Minus, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  const ModelSpec morse = ModelSpec::morse(1.0, 1.0, 6.0);
  CHECK(superpotential_w0(morse, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(superpotential_w0(morse, 60.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(base_potential(morse, Partner::Minus, 60.0) == doctest::Approx(36.0).epsilon(1e-14));
  CHECK(superpotential_w0(ModelSpec::morse(0.7, 3.3, 6.0), 200.0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("V+- = W0^2 +- W0' and the partner difference") {
  testsupport::Draws d(21);
  for (const ModelSpec& m : {ModelSpec::oscillator(1.3, 0.7), ModelSpec::morse(1.2, 0.8, 4.5)}) {
    for (int i = 0; i < 200; ++i) {
      const double x = d.uniform(-3.0, 8.0);
      const double w = superpotential_w0(m, x);
      const double wp = superpotential_w0_prime(m, x);
      const double vm = base_potential(m, Partner::Minus, x);
      const double vp = base_potential(m, Partner::Plus, x);
      CHECK(std::abs(vm - (w * w - wp)) <= 1e-12 * std::max(1.0, std::abs(vm)));
      CHECK(std::abs(vp - vm - 2.0 * wp) <= 1e-12 * std::max(1.0, std::abs(vp)));
      // Analytic W0' against differences of W0.
      CHECK(std::abs(wp - testsupport::richardson_d1([&](double t) { return superpotential_w0(m, t); }, x, 0.05)) <
            1e-9 * std::max(1.0, std::abs(wp)));
    }
  }
}

TEST_CASE("potential jet matches differences of V-") {
  for (const ModelSpec& m : {ModelSpec::oscillator(1.0, 1.0), ModelSpec::morse(1.0, 1.0, 6.0)}) {
    for (double x : {-1.3, 0.4, 2.2}) {
      const auto jet = base_potential_jet(m, x, 3);
      auto v = [&](double t) { return base_potential(m, Partner::Minus, t); };
      auto v1 = [&](double t) { return base_potential_jet(m, t, 1)[1]; };
      CHECK(jet[0] == doctest::Approx(v(x)).epsilon(1e-14));
      CHECK(rel_err(jet[1], testsupport::richardson_d1(v, x, 0.05)) < 1e-8);
      CHECK(rel_err(jet[2], testsupport::richardson_d2(v, x, 0.05)) < 1e-7);
      CHECK(std::abs(jet[3] - testsupport::richardson_d2(v1, x, 0.05)) < 1e-7 * std::max(1.0, std::abs(jet[3])));
    }
  }
}

TEST_CASE("base magnetic field") {
  const ModelSpec osc = ModelSpec::oscillator(1.0, 2.0);
  for (double x : {-7.0, 0.0, 3.0}) CHECK(base_field(osc, x) == doctest::Approx(0.5).epsilon(1e-15));
  UnitSystem u;
  u.c = 3.0;
  u.hbar = 2.0;
  u.e_charge = 1.5;
  const ModelSpec morse = ModelSpec::morse(1.4, 0.9, 6.0, u);
  // B(0) = B0 = D alpha c hbar / e.
  CHECK(rel_err(base_field(morse, 0.0), 0.9 * 1.4 * 3.0 * 2.0 / 1.5) < 1e-14);
  CHECK(rel_err(base_field(morse, 2.0 + 1.0 / 1.4) / base_field(morse, 2.0), std::exp(-1.0)) < 1e-14);
}

TEST_CASE("base spectra") {
  const auto osc = base_spectrum(ModelSpec::oscillator(1.0, 0.5), 3);
  REQUIRE(osc.size() == 4);
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(osc[n].schrodinger_energy == doctest::Approx(static_cast<double>(n)));
    CHECK(osc[n].dirac_energy == doctest::Approx(std::sqrt(static_cast<double>(n))));
  }
  const ModelSpec morse = ModelSpec::morse(1.0, 1.0, 6.0);
  CHECK(base_energy(morse, 1) == doctest::Approx(11.0));
  CHECK(bound_state_count(morse) == 6);
  CHECK(bound_state_count(ModelSpec::morse(1.0, 1.0, 5.5)) == 6);
  CHECK(bound_state_count(ModelSpec::morse(2.0, 1.0, 6.0)) == 3);
  // Clamped to the bound states.
  CHECK(base_spectrum(morse, 20).size() == 6);
  CHECK_THROWS_AS(base_eigenfunction(morse, 6, 0.0), ModelError);
}

TEST_CASE("invalid models") {
  CHECK_THROWS_AS(ModelSpec::oscillator(0.0, 1.0), ModelError);
  CHECK_THROWS_AS(ModelSpec::oscillator(-1.0, 1.0), ModelError);
  CHECK_THROWS_AS(ModelSpec::morse(1.0, 1.0, 0.0), ModelError);
  CHECK_THROWS_AS(ModelSpec::morse(1.0, -1.0, 3.0), ModelError);
  CHECK_THROWS_AS(ModelSpec::morse(0.0, 1.0, 3.0), ModelError);
  UnitSystem u;
  u.v_fermi = 0.0;
  CHECK_THROWS_AS(ModelSpec::oscillator(1.0, 1.0, u), ModelError);
}

TEST_CASE("eigenfunctions are normalized") {
  for (std::size_t n = 0; n < 4; ++n) {
    CAPTURE(n);
    CHECK(std::abs(grid_norm(ModelSpec::oscillator(1.0, 1.0), n, -22.0, 18.0) - 1.0) < 1e-10);
    CHECK(std::abs(grid_norm(ModelSpec::oscillator(2.5, -1.0), n, -12.0, 14.0) - 1.0) < 1e-10);
    CHECK(std::abs(grid_norm(ModelSpec::morse(1.0, 1.0, 6.0), n, -4.0, 25.0) - 1.0) < 1e-10);
    CHECK(std::abs(grid_norm(ModelSpec::morse(1.3, 2.0, 5.1), n, -4.0, 25.0) - 1.0) < 1e-10);
  }
}

TEST_CASE("L0- annihilates the ground state") {
  for (const ModelSpec& m : {ModelSpec::oscillator(1.0, 1.0), ModelSpec::morse(1.0, 1.0, 6.0)}) {
    const Grid g = default_grid(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i) {
      const double x = g.x(i);
      const ValueDeriv p = base_eigenfunction(m, 0, x);
      worst = std::max(worst, std::abs(p.deriv + superpotential_w0(m, x) * p.value));
      // ...and the analytic derivative against a stencil.
      const double fd = testsupport::d1_5([&](double t) { return base_eigenfunction(m, 0, t).value; }, x, 1e-3);
      CHECK(std::abs(fd - p.deriv) < 1e-8);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Schrodinger residual of the base eigenfunctions") {
  for (const ModelSpec& m : {ModelSpec::oscillator(1.0, 1.0), ModelSpec::morse(1.0, 1.0, 6.0)}) {
    const Grid g = default_grid(m, 801);
    for (std::size_t n = 0; n < 4; ++n) {
      auto psi = [&](double t) { return base_eigenfunction(m, n, t).value; };
      double worst = 0.0;
      double peak = 0.0;
      for (std::size_t i = 1; i + 1 < g.n_points; ++i) {
        const double x = g.x(i);
        const double r = -testsupport::d2_5(psi, x, 1e-3) + (base_potential(m, Partner::Minus, x) - base_energy(m, n)) * psi(x);
        worst = std::max(worst, std::abs(r));
        peak = std::max(peak, std::abs(psi(x)));
      }
      CAPTURE(n);
      CHECK(worst <= 1e-6 * peak);
    }
  }
}

TEST_CASE("Morse bound-state count follows k - alpha n > 0") {
  for (double k : {0.5, 1.0, 2.9, 3.0, 6.0, 7.25}) {
    const ModelSpec m = ModelSpec::morse(1.0, 1.0, k);
    const std::size_t count = bound_state_count(m);
    CHECK(count == static_cast<std::size_t>(std::ceil(k)));
    CHECK(k - static_cast<double>(count - 1) > 0.0);
    CHECK(k - static_cast<double>(count) <= 0.0);
  }
}

TEST_CASE("coordinates and default grids") {
  const ModelSpec osc = ModelSpec::oscillator(2.0, 3.0);
  CHECK(osc.well_center() == doctest::Approx(-3.0));
  CHECK(osc.zeta(-3.0) == doctest::Approx(0.0));
  CHECK(osc.zeta(-2.0) == doctest::Approx(1.0));
  const Grid go = default_grid(osc);
  CHECK(go.x_min == doctest::Approx(-3.0 - 10.0 / std::sqrt(2.0)));
  CHECK(go.x_max == doctest::Approx(-3.0 + 10.0 / std::sqrt(2.0)));
  CHECK(go.n_points == 4001);
  const ModelSpec morse = ModelSpec::morse(1.0, 1.0, 6.0);
  const Grid gm = default_grid(morse);
  CHECK(gm.x_min == doctest::Approx(-std::log(24.0) - 2.0));
  CHECK(gm.x_max == doctest::Approx(12.0));
  CHECK(morse.morse_z(0.0) == doctest::Approx(2.0));
}

}  // TEST_SUITE
