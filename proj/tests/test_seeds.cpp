#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "susy_graphene/chain.hpp"
#include "susy_graphene/errors.hpp"
#include "susy_graphene/seeds.hpp"
#include "susy_graphene/specfun.hpp"

using namespace susy;
using testsupport::rel_err;

namespace {

const ModelSpec kOsc = ModelSpec::oscillator(1.0, 1.0);
const ModelSpec kMorse = ModelSpec::morse(1.0, 1.0, 6.0);

double log_abs(const ScaledPair& p) { return std::log(std::abs(p.value)) + p.log_scale; }

bool level1_nodeless(const ModelSpec& m, double eps, double nu) {
  SeedSolution s = make_seed(m, eps, nu);
  return certify_nodeless(s, default_grid(m));
}

bool level2_builds(const ModelSpec& m, double eps1, double nu1, double eps2, double nu2) {
  try {
    build_chain(m, {{eps1, nu1}, {eps2, nu2}});
    return true;
  } catch (const ChainError&) {
    return false;
  }
}

// Step a fraction of the local length scale, set by sqrt|V - sigma| and by
// how fast the exponential prefactor turns (|W0|). Four Richardson levels: a
// deeper tableau hits the ~1e-14 relative noise of u where ln u ~ 130.
double local_step(const ModelSpec& m, double sigma, double x) {
  const double v = std::abs(base_potential(m, Partner::Minus, x) - sigma);
  return 0.4 / (1.0 + std::sqrt(v) + std::abs(superpotential_w0(m, x)));
}

// The grids of the bundled configs.
Grid config_grid(const ModelSpec& m) {
  return m.kind == ModelKind::Morse ? Grid(-4.0, 25.0, 401) : Grid(-22.0, 18.0, 401);
}

}  // namespace

TEST_SUITE("seeds") {

TEST_CASE("oscillator seed at epsilon = 0 is the ground-state Gaussian") {
  const SeedSolution s = oscillator_seed(kOsc, 0.0, 0.0);
  const double ref = s.value(-2.0);
  for (double x : {-9.0, -4.5, -2.0, 0.3, 5.0}) {
    const double z = kOsc.zeta(x);
    CHECK(rel_err(s.value(x) / ref, std::exp(-0.5 * z * z)) < 1e-13);
  }
  // nu drops out at a = 0.
  const SeedSolution t = oscillator_seed(kOsc, 0.0, 0.7);
  CHECK(rel_err(t.value(1.1), s.value(1.1)) < 1e-14);
}

TEST_CASE("oscillator seed log-derivative is the worked W1 for eps1 = -omega/5") {
  // W1 = (omega/2)(x + 2k/omega) (-1 + (2/5) M(11/10, 3/2, zeta^2) / M(1/10, 1/2, zeta^2)).
  const SeedSolution s = oscillator_seed(kOsc, -0.2, 0.0);
  for (double x : {-8.0, -3.1, -2.0, -0.4, 2.5, 6.0}) {
    const double z2 = kOsc.zeta(x) * kOsc.zeta(x);
    const double ratio = specfun::kummer_m(1.1, 1.5, z2).rescaled(specfun::kummer_m(0.1, 0.5, z2).log_abs()) /
                         specfun::kummer_m(0.1, 0.5, z2).rescaled(specfun::kummer_m(0.1, 0.5, z2).log_abs());
    const double w1 = 0.5 * (x + 2.0) * (-1.0 + 0.4 * ratio);
    CAPTURE(x);
    CHECK(std::abs(s.evaluate(x).log_derivative() - w1) < 1e-12 * std::max(1.0, std::abs(w1)));
  }
}

TEST_CASE("oscillator seed with nu = 0 is even in zeta") {
  for (double eps : {-0.2, -1.7, -3.2}) {
    const SeedSolution s = oscillator_seed(kOsc, eps, 0.0);
    const double c = kOsc.well_center();
    const double d = 0.37 * std::sqrt(2.0);  // zeta = +-0.37
    CHECK(rel_err(s.value(c + d), s.value(c - d)) < 1e-12);
  }
}

TEST_CASE("Morse seed matches its closed form") {
  const double eps = -5.5;
  const double s_ = std::sqrt(36.0 + 5.5);
  const double a = -6.0 + s_;
  const double b = 1.0 + 2.0 * s_;
  for (double nu : {-1.5, 1.0, 5.0}) {
    const double c = 12.0 * (1.0 + 1.0 / nu);
    const SeedSolution seed = morse_seed(kMorse, eps, nu);
    double first = 0.0;
    for (double x : {-3.0, -1.0, 0.5, 3.0, 9.0}) {
      const double z = kMorse.morse_z(x);
      const auto m = specfun::kummer_m(a, b, z);
      const auto u = specfun::tricomi_u(a, b, z);
      const double ref = std::max(m.log_abs(), u.log_abs());
      const double bracket = m.rescaled(ref) + c * u.rescaled(ref);
      const double want = -0.5 * z - s_ * x + ref + std::log(std::abs(bracket));
      const double got = log_abs(seed.evaluate(x));
      if (x == -3.0) first = got - want;
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs((got - want) - first) < 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
  // nu = -1 kills the U branch entirely.
  const SeedSolution pure = morse_seed(kMorse, eps, -1.0);
  const double z = kMorse.morse_z(0.7);
  const double want = -0.5 * z - s_ * 0.7 + specfun::kummer_m(a, b, z).log_abs();
  const double ref = log_abs(pure.evaluate(-2.0)) -
                     (-0.5 * kMorse.morse_z(-2.0) + s_ * 2.0 + specfun::kummer_m(a, b, kMorse.morse_z(-2.0)).log_abs());
  CHECK(std::abs(log_abs(pure.evaluate(0.7)) - ref - want) < 1e-12 * std::abs(want));
}

TEST_CASE("Morse seed asymptotic slope as x -> +inf") {
  const double s_ = std::sqrt(41.5);
  auto slope = [](const SeedSolution& seed) {
    // Least-squares slope of ln|u| on [20, 30].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
      const double x = 20.0 + 10.0 * i / (n - 1);
      const double y = log_abs(seed.evaluate(x));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  // Decaying branch only when the U coefficient vanishes; otherwise U ~ z^{1-b} wins.
  CHECK(std::abs(slope(morse_seed(kMorse, -5.5, -1.0)) + s_) < 1e-6);
  CHECK(std::abs(slope(morse_seed(kMorse, -5.5, -1.5)) - s_) < 1e-6);
}

TEST_CASE("seed construction errors") {
  CHECK_THROWS_AS(morse_seed(kMorse, -5.5, 0.0), ModelError);
  CHECK_THROWS_AS(morse_seed(kMorse, 0.5, -1.5), ModelError);
  CHECK_THROWS_AS(oscillator_seed(kOsc, 0.1, 0.0), ModelError);
}

TEST_CASE("seeds solve the shifted Schrodinger equation") {
  struct Case {
    ModelSpec m;
    double sigma, nu;
  };
  const std::vector<Case> cases = {{kOsc, -0.2, 0.0},  {kOsc, -0.2, 0.6},   {kOsc, -3.2, 1.5},
                                   {kOsc, 0.0, 0.0},   {kMorse, -5.5, -1.5}, {kMorse, -16.5, -0.5},
                                   {kMorse, -5.5, -1.0}, {kMorse, 0.0, 2.0}};
  for (const Case& c : cases) {
    const SeedSolution s = make_seed(c.m, c.sigma, c.nu);
    const Grid g = config_grid(c.m);
    for (std::size_t i = 1; i + 1 < g.n_points; ++i) {
      const double x = g.x(i);
      const double ref = s.evaluate(x).log_scale;
      auto u = [&](double t) {
        const ScaledPair p = s.evaluate(t);
        return p.value * std::exp(p.log_scale - ref);
      };
      const double h = local_step(c.m, c.sigma, x);
      const double u0 = u(x);
      const double res = -testsupport::richardson_d2(u, x, h, 4) + (base_potential(c.m, Partner::Minus, x) - c.sigma) * u0;
      const double du = testsupport::richardson_d1(u, x, h, 4);
      const ScaledPair p = s.evaluate(x);
      CAPTURE(c.sigma);
      CAPTURE(c.nu);
      CAPTURE(x);
      CHECK(std::abs(res) <= 1e-6 * std::max(std::abs(u0), std::exp(-ref)));
      CHECK(std::abs(p.deriv - du) <= 1e-7 * std::max(std::abs(du), std::abs(p.value)));
    }
  }
}

TEST_CASE("nu enters linearly and the two branches are independent") {
  const double x1 = -3.3;
  const double x2 = 0.8;
  {
    const SeedSolution u0 = oscillator_seed(kOsc, -0.2, 0.0);
    const SeedSolution u1 = oscillator_seed(kOsc, -0.2, 1.0);
    const SeedSolution uh = oscillator_seed(kOsc, -0.2, 0.5);
    for (double x : {x1, x2, 4.0}) CHECK(rel_err(uh.value(x), 0.5 * (u0.value(x) + u1.value(x))) < 1e-12);
    auto wr = [&](double x) { return u0.value(x) * u1.deriv(x) - u0.deriv(x) * u1.value(x); };
    CHECK(std::abs(wr(x1)) > 1e-3);
    CHECK(rel_err(wr(x2), wr(x1)) < 1e-9);  // Abel: constant Wronskian
  }
  {
    // u_nu = u_M + (2k/alpha)(1 + 1/nu) u_U with u_M the nu = -1 seed.
    const SeedSolution um = morse_seed(kMorse, -5.5, -1.0);
    const SeedSolution u1 = morse_seed(kMorse, -5.5, 1.0);     // coefficient 24
    const SeedSolution u3 = morse_seed(kMorse, -5.5, -1.5);    // coefficient 4
    for (double x : {-1.0, 0.5, 2.0}) {
      const double want = um.value(x) + (4.0 / 24.0) * (u1.value(x) - um.value(x));
      CHECK(rel_err(u3.value(x), want) < 1e-11);
    }
    auto wr = [&](double x) { return um.value(x) * u1.deriv(x) - um.deriv(x) * u1.value(x); };
    CHECK(std::abs(wr(0.0)) > 1e-6);
    CHECK(rel_err(wr(2.0), wr(-1.0)) < 1e-8);
  }
}

TEST_CASE("nu ranges of the first transformation") {
  for (double nu : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    CAPTURE(nu);
    CHECK(level1_nodeless(kOsc, -0.2, nu));
  }
  for (double nu : {-2.0, -1.5, 1.5, 2.0}) {
    CAPTURE(nu);
    CHECK_FALSE(level1_nodeless(kOsc, -0.2, nu));
  }
  for (double nu : {-3.0, -1.5, -1.0, 1.0, 5.0}) {
    CAPTURE(nu);
    CHECK(level1_nodeless(kMorse, -5.5, nu));
  }
  for (double nu : {-0.9, -0.5, -0.1}) {
    CAPTURE(nu);
    CHECK_FALSE(level1_nodeless(kMorse, -5.5, nu));
  }
}

TEST_CASE("nu ranges of the second transformation") {
  for (double nu : {-5.0, -3.0, -1.5, -1.01, 1.01, 1.5, 3.0}) {
    CAPTURE(nu);
    CHECK(level2_builds(kOsc, -0.2, 0.0, -3.0, nu));
  }
  for (double nu : {-0.99, -0.5, 0.0, 0.5, 0.99}) {
    CAPTURE(nu);
    CHECK_FALSE(level2_builds(kOsc, -0.2, 0.0, -3.0, nu));
  }
  for (double nu : {-0.99, -0.9, -0.5, -0.1, -0.01}) {
    CAPTURE(nu);
    CHECK(level2_builds(kMorse, -5.5, -1.5, -11.0, nu));
  }
  for (double nu : {-5.0, -1.5, -1.01, 0.01, 1.0, 5.0}) {
    CAPTURE(nu);
    CHECK_FALSE(level2_builds(kMorse, -5.5, -1.5, -11.0, nu));
  }
}

TEST_CASE("scan_nodes on synthetic functions") {
  const Grid g(0.0, 1.0, 101);
  auto wrap = [](auto f) {
    return ScaledFunction([f](double x) { return ScaledPair{f(x), 0.0, 0.0}; });
  };
  const NodeScan clean = scan_nodes(wrap([](double x) { return 1.0 + x * x; }), g);
  CHECK(clean.nodeless);
  CHECK(clean.sign_changes == 0);
  const NodeScan one = scan_nodes(wrap([](double x) { return x - 0.3123; }), g);
  CHECK_FALSE(one.nodeless);
  CHECK(one.sign_changes == 1);
  // Two roots 2e-6 apart fall between samples; the refinement finds them.
  const NodeScan hidden = scan_nodes(wrap([](double x) { return (x - 0.51234) * (x - 0.51234) - 1e-12; }), g);
  CHECK_FALSE(hidden.nodeless);
  CHECK(hidden.sign_changes == 2);
  // A positive but shallow dip is fine.
  const NodeScan shallow = scan_nodes(wrap([](double x) { return (x - 0.51234) * (x - 0.51234) + 1e-9; }), g);
  CHECK(shallow.nodeless);
  CHECK(shallow.min_relative_dip < 1e-3);
  // A tangential zero cannot be told apart from a node pair.
  CHECK_THROWS_AS(scan_nodes(wrap([](double x) { return (x - 0.51234) * (x - 0.51234); }), g), InconclusiveError);
}

TEST_CASE("certify_nodeless records the verdict") {
  SeedSolution good = oscillator_seed(kOsc, -0.2, 0.0);
  CHECK_FALSE(good.nodeless_certified);
  CHECK(certify_nodeless(good, default_grid(kOsc)));
  CHECK(good.nodeless_certified);
  SeedSolution bad = oscillator_seed(kOsc, -0.2, 2.0);
  CHECK_FALSE(certify_nodeless(bad, default_grid(kOsc)));
  CHECK_FALSE(bad.nodeless_certified);
}

TEST_CASE("scaled seeds") {
  const SeedSolution s = morse_seed(kMorse, -5.5, -1.5);
  const SeedSolution t = s.scaled(7.3);
  for (double x : {-2.0, 1.0, 6.0}) {
    CHECK(rel_err(t.value(x), 7.3 * s.value(x)) < 1e-14);
    CHECK(rel_err(t.evaluate(x).log_derivative(), s.evaluate(x).log_derivative()) < 1e-14);
  }
}

}  // TEST_SUITE
