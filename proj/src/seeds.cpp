#include "susy_graphene/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "susy_graphene/errors.hpp"
#include "susy_graphene/specfun.hpp"

namespace susy {

namespace {

using specfun::SpecialValue;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nonpositive(double epsilon_sum) {
  if (!std::isfinite(epsilon_sum) || epsilon_sum > 0.0) {
    throw ModelError("seed energy must be finite and <= 0, got " + std::to_string(epsilon_sum));
  }
}

// Scaled values brought to a common reference.
double at(const SpecialValue& v, double ref) { return v.rescaled(ref); }

}  // namespace

double ScaledPair::plain_value() const noexcept {
  return log_scale == 0.0 ? value : value * std::exp(log_scale);
}

double ScaledPair::plain_deriv() const noexcept {
  return log_scale == 0.0 ? deriv : deriv * std::exp(log_scale);
}

ScaledPair rebalanced(ScaledPair p) noexcept {
  const double mag = std::max(std::abs(p.value), std::abs(p.deriv));
  if (mag == 0.0 || !std::isfinite(mag) || (mag > 1e-100 && mag < 1e100)) return p;
  int e = 0;
  std::frexp(mag, &e);
  p.value = std::ldexp(p.value, -e);
  p.deriv = std::ldexp(p.deriv, -e);
  p.log_scale += e * std::log(2.0);
  return p;
}

SeedSolution SeedSolution::scaled(double factor) const {
  SeedSolution out = *this;
  out.evaluate = [inner = evaluate, factor](double x) {
    ScaledPair p = inner(x);
    p.value *= factor;
    p.deriv *= factor;
    return p;
  };
  return out;
}

SeedSolution oscillator_seed(const ModelSpec& m, double epsilon_sum, double nu) {
  if (m.kind != ModelKind::Oscillator) throw ModelError("oscillator_seed needs an oscillator model");
  require_nonpositive(epsilon_sum);
  if (!std::isfinite(nu)) throw ModelError("nu must be finite");
  const double a = -epsilon_sum / (2.0 * m.omega);
  // a = 0: Gamma(a) has a pole, the nu-branch drops out and u = e^{-zeta^2/2}.
  const double gamma_coef = a == 0.0 ? 0.0 : 2.0 * nu * specfun::gamma_ratio(a + 0.5, a);
  const double dzeta = std::sqrt(0.5 * m.omega);

  SeedSolution s;
  s.model = m;
  s.epsilon = epsilon_sum;
  s.epsilon_sum = epsilon_sum;
  s.nu = nu;
  s.evaluate = [m, a, gamma_coef, dzeta](double x) {
    const double zeta = m.zeta(x);
    const double z = zeta * zeta;
    if (a == 0.0) return ScaledPair{1.0, -dzeta * zeta, -0.5 * z};
    const SpecialValue m1 = specfun::kummer_m(a, 0.5, z);
    const SpecialValue m1p = specfun::kummer_m_deriv(a, 0.5, z);
    double ref = std::max(m1.log_scale, m1p.log_scale);
    SpecialValue m2{0.0, 0.0}, m2p{0.0, 0.0};
    if (gamma_coef != 0.0) {
      m2 = specfun::kummer_m(a + 0.5, 1.5, z);
      m2p = specfun::kummer_m_deriv(a + 0.5, 1.5, z);
      ref = std::max({ref, m2.log_scale, m2p.log_scale});
    }
    const double f = at(m1, ref) + gamma_coef * zeta * at(m2, ref);
    const double df = 2.0 * zeta * at(m1p, ref) + gamma_coef * (at(m2, ref) + 2.0 * z * at(m2p, ref));
    return rebalanced({f, dzeta * (df - zeta * f), ref - 0.5 * z});
  };
  return s;
}

SeedSolution morse_seed(const ModelSpec& m, double epsilon_sum, double nu) {
  if (m.kind != ModelKind::Morse) throw ModelError("morse_seed needs a Morse model");
  require_nonpositive(epsilon_sum);
  if (nu == 0.0 || !std::isfinite(nu)) throw ModelError("Morse seed needs a finite nu != 0");
  const double k = m.k_wave;
  const double alpha = m.alpha;
  const double s_exp = std::sqrt(k * k - epsilon_sum);
  const double a = (s_exp - k) / alpha;
  const double b = 1.0 + 2.0 * s_exp / alpha;
  const double c = 2.0 * k / alpha * (1.0 + 1.0 / nu);
  const double log_z0 = std::log(2.0 * m.d_strength / alpha);

  SeedSolution s;
  s.model = m;
  s.epsilon = epsilon_sum;
  s.epsilon_sum = epsilon_sum;
  s.nu = nu;
  s.evaluate = [=](double x) {
    const double z = std::exp(log_z0 - alpha * x);
    const SpecialValue mv = specfun::kummer_m(a, b, z);
    const SpecialValue mp = specfun::kummer_m_deriv(a, b, z);
    double ref = std::max(mv.log_scale, mp.log_scale);
    SpecialValue uv{0.0, 0.0}, up{0.0, 0.0};
    if (c != 0.0) {
      const auto pair = specfun::tricomi_u_with_deriv(a, b, z);
      uv = pair.first;
      up = pair.second;
      ref = std::max({ref, uv.log_scale, up.log_scale});
    }
    const double f = at(mv, ref) + c * at(uv, ref);
    const double df = at(mp, ref) + c * at(up, ref);
    const double value = f;
    const double deriv = (0.5 * alpha * z - s_exp) * f - alpha * z * df;
    return rebalanced({value, deriv, ref - 0.5 * z - s_exp * x});
  };
  return s;
}

SeedSolution make_seed(const ModelSpec& m, double epsilon_sum, double nu) {
  return m.kind == ModelKind::Oscillator ? oscillator_seed(m, epsilon_sum, nu)
                                         : morse_seed(m, epsilon_sum, nu);
}

NodeScan scan_nodes(const ScaledFunction& f, const Grid& grid) {
  const std::size_t n = grid.n_points;
  std::vector<double> logs(n);
  std::vector<int> signs(n);
  parallel_for(n, [&](std::size_t i) {
    const ScaledPair p = f(grid.x(i));
    signs[i] = p.value > 0.0 ? 1 : (p.value < 0.0 ? -1 : 0);
    logs[i] = p.value == 0.0 ? kNegInf : std::log(std::abs(p.value)) + p.log_scale;
  });

  NodeScan scan;
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] == 0 || (i > 0 && signs[i] != signs[i - 1])) ++scan.sign_changes;
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (signs[i] == 0 || !(logs[i] <= logs[i - 1] && logs[i] <= logs[i + 1])) continue;
    if (signs[i - 1] != signs[i] || signs[i + 1] != signs[i]) continue;  // already counted
    // Golden-section search for the minimum of log|f| on [x_{i-1}, x_{i+1}].
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = grid.x(i - 1);
    double hi = grid.x(i + 1);
    bool crossed = false;
    auto probe = [&](double x) {
      const ScaledPair p = f(x);
      const int sg = p.value > 0.0 ? 1 : (p.value < 0.0 ? -1 : 0);
      if (sg != signs[i]) crossed = true;
      return p.value == 0.0 ? kNegInf : std::log(std::abs(p.value)) + p.log_scale;
    };
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = probe(x1);
    double f2 = probe(x2);
    double best = std::min({logs[i], f1, f2});
    for (int it = 0; it < 60 && !crossed; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = probe(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = probe(x2);
      }
      best = std::min({best, f1, f2});
    }
    if (crossed) {
      scan.sign_changes += 2;
      continue;
    }
    const double dip = std::exp(best - std::max(logs[i - 1], logs[i + 1]));
    scan.min_relative_dip = std::min(scan.min_relative_dip, dip);
    if (dip < 1e-10) {
      throw InconclusiveError("near-zero minimum of the seed at x = " + std::to_string(0.5 * (lo + hi)) +
                              " cannot be separated from a node");
    }
  }
  scan.nodeless = scan.sign_changes == 0;
  return scan;
}

bool certify_nodeless(SeedSolution& s, const Grid& grid) {
  s.nodeless_certified = scan_nodes(s.evaluate, grid).nodeless;
  return s.nodeless_certified;
}

}  // namespace susy
