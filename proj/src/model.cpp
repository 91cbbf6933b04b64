#include "susy_graphene/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "susy_graphene/errors.hpp"
#include "susy_graphene/specfun.hpp"

namespace susy {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double oscillator_norm(const ModelSpec& m, std::size_t n) {
  // N_n^2 = sqrt(omega / 2 pi) / (2^n n!)
  const double log_n2 = 0.5 * std::log(m.omega / (2.0 * std::numbers::pi)) -
                        static_cast<double>(n) * std::numbers::ln2 -
                        specfun::log_gamma(static_cast<double>(n) + 1.0);
  return std::exp(0.5 * log_n2);
}

ValueDeriv oscillator_state(const ModelSpec& m, std::size_t n, double x) {
  const double zeta = m.zeta(x);
  const double g = oscillator_norm(m, n) * std::exp(-0.5 * zeta * zeta);
  const double hn = specfun::hermite(static_cast<unsigned>(n), zeta);
  const double hn1 = n == 0 ? 0.0 : specfun::hermite(static_cast<unsigned>(n - 1), zeta);
  const double scale = std::sqrt(0.5 * m.omega);
  return {g * hn, scale * g * (-zeta * hn + 2.0 * static_cast<double>(n) * hn1)};
}

ValueDeriv morse_state(const ModelSpec& m, std::size_t n, double x) {
  const double nn = static_cast<double>(n);
  const double s = m.k_wave / m.alpha - nn;
  const double z = m.morse_z(x);
  const double log_norm = 0.5 * (std::log(2.0 * m.alpha * s) + specfun::log_gamma(nn + 1.0) -
                                 specfun::log_gamma(2.0 * m.k_wave / m.alpha - nn + 1.0));
  const double log_z = std::log(2.0 * m.d_strength / m.alpha) - m.alpha * x;
  // N z^s e^{-z/2}, assembled in log space so z^s cannot overflow.
  const double envelope = std::exp(log_norm + s * log_z - 0.5 * z);
  const double lag = specfun::laguerre(static_cast<unsigned>(n), 2.0 * s, z);
  const double value = envelope * lag;
  const double lag_prev = n == 0 ? 0.0 : specfun::laguerre(static_cast<unsigned>(n - 1), 2.0 * s + 1.0, z);
  const double deriv = -m.alpha * ((s - 0.5 * z) * value - envelope * z * lag_prev);
  return {value, deriv};
}

}  // namespace

void UnitSystem::validate() const {
  if (!positive_finite(hbar) || !positive_finite(c) || !positive_finite(e_charge) ||
      !positive_finite(v_fermi)) {
    throw ModelError("unit constants must be strictly positive");
  }
}

ModelSpec ModelSpec::oscillator(double omega, double k_wave, UnitSystem units) {
  ModelSpec m;
  m.kind = ModelKind::Oscillator;
  m.omega = omega;
  m.k_wave = k_wave;
  m.units = units;
  m.validate();
  return m;
}

ModelSpec ModelSpec::morse(double alpha, double d_strength, double k_wave, UnitSystem units) {
  ModelSpec m;
  m.kind = ModelKind::Morse;
  m.alpha = alpha;
  m.d_strength = d_strength;
  m.k_wave = k_wave;
  m.units = units;
  m.validate();
  return m;
}

void ModelSpec::validate() const {
  units.validate();
  if (!std::isfinite(k_wave)) throw ModelError("k must be finite");
  switch (kind) {
    case ModelKind::Oscillator:
      if (!positive_finite(omega)) throw ModelError("oscillator requires omega > 0");
      break;
    case ModelKind::Morse:
      if (!positive_finite(alpha)) throw ModelError("Morse requires alpha > 0");
      if (!positive_finite(d_strength)) throw ModelError("Morse requires D > 0");
      if (!(k_wave > 0.0)) throw ModelError("Morse requires k > 0 for bound states");
      break;
  }
}

double ModelSpec::zeta(double x) const noexcept {
  return std::sqrt(0.5 * omega) * (x + 2.0 * k_wave / omega);
}

double ModelSpec::morse_z(double x) const noexcept {
  return 2.0 * d_strength / alpha * std::exp(-alpha * x);
}

double ModelSpec::well_center() const noexcept { return -2.0 * k_wave / omega; }

double superpotential_w0(const ModelSpec& m, double x) {
  if (m.kind == ModelKind::Oscillator) return 0.5 * m.omega * x + m.k_wave;
  return m.k_wave - m.d_strength * std::exp(-m.alpha * x);
}

double superpotential_w0_prime(const ModelSpec& m, double x) {
  if (m.kind == ModelKind::Oscillator) return 0.5 * m.omega;
  return m.alpha * m.d_strength * std::exp(-m.alpha * x);
}

double base_potential(const ModelSpec& m, Partner sign, double x) {
  const double pm = sign == Partner::Plus ? 1.0 : -1.0;
  if (m.kind == ModelKind::Oscillator) {
    const double y = x + 2.0 * m.k_wave / m.omega;
    return 0.25 * m.omega * m.omega * y * y + pm * 0.5 * m.omega;
  }
  const double e = std::exp(-m.alpha * x);
  const double d = m.d_strength;
  return m.k_wave * m.k_wave + d * d * e * e - 2.0 * d * (m.k_wave - pm * 0.5 * m.alpha) * e;
}

std::vector<double> base_potential_jet(const ModelSpec& m, double x, std::size_t order) {
  std::vector<double> jet(order + 1, 0.0);
  jet[0] = base_potential(m, Partner::Minus, x);
  if (m.kind == ModelKind::Oscillator) {
    if (order >= 1) jet[1] = 0.5 * m.omega * m.omega * (x + 2.0 * m.k_wave / m.omega);
    if (order >= 2) jet[2] = 0.5 * m.omega * m.omega;
    return jet;
  }
  const double e = std::exp(-m.alpha * x);
  const double d = m.d_strength;
  const double c1 = 2.0 * d * (m.k_wave + 0.5 * m.alpha) * e;
  const double c2 = d * d * e * e;
  double f1 = 1.0;
  double f2 = 1.0;
  for (std::size_t j = 1; j <= order; ++j) {
    f1 *= -m.alpha;
    f2 *= -2.0 * m.alpha;
    jet[j] = c2 * f2 - c1 * f1;
  }
  return jet;
}

double base_field(const ModelSpec& m, double x) {
  return m.units.field_factor() * superpotential_w0_prime(m, x);
}

std::size_t bound_state_count(const ModelSpec& m) {
  if (m.kind == ModelKind::Oscillator) return std::numeric_limits<std::size_t>::max();
  // n with k - alpha n > 0.
  const double ratio = m.k_wave / m.alpha;
  if (!(ratio > 0.0)) return 0;
  const double c = std::ceil(ratio);
  return static_cast<std::size_t>(c);
}

double base_energy(const ModelSpec& m, std::size_t n) {
  const double nn = static_cast<double>(n);
  if (m.kind == ModelKind::Oscillator) return m.omega * nn;
  return m.alpha * nn * (2.0 * m.k_wave - m.alpha * nn);
}

ValueDeriv base_eigenfunction(const ModelSpec& m, std::size_t n, double x) {
  if (n >= bound_state_count(m)) {
    throw ModelError("level " + std::to_string(n) + " is not a bound state");
  }
  return m.kind == ModelKind::Oscillator ? oscillator_state(m, n, x) : morse_state(m, n, x);
}

std::vector<SpectrumEntry> base_spectrum(const ModelSpec& m, std::size_t n_max) {
  m.validate();
  const std::size_t count = bound_state_count(m);
  if (count == 0) throw ModelError("Morse well has no bound state");
  const std::size_t top = std::min(n_max, count - 1);
  std::vector<SpectrumEntry> out;
  out.reserve(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    SpectrumEntry entry;
    entry.n = n;
    entry.schrodinger_energy = base_energy(m, n);
    entry.dirac_energy = m.units.hbar * m.units.v_fermi * std::sqrt(entry.schrodinger_energy);
    entry.eigenfunction = [m, n](double x) { return base_eigenfunction(m, n, x).value; };
    out.push_back(std::move(entry));
  }
  return out;
}

Grid default_grid(const ModelSpec& m, std::size_t n_points) {
  if (m.kind == ModelKind::Oscillator) {
    const double c = m.well_center();
    const double half = 10.0 / std::sqrt(m.omega);
    return Grid(c - half, c + half, n_points);
  }
  const double lo = -std::log(4.0 * m.k_wave / m.d_strength) / m.alpha - 2.0;
  return Grid(lo, 12.0 / m.alpha, n_points);
}

}  // namespace susy
