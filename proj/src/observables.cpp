#include "susy_graphene/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "susy_graphene/errors.hpp"

namespace susy {

namespace {

constexpr double kHalfRoot = std::numbers::sqrt2 / 2.0;

}  // namespace

SpinorValue spinor_at(const ChainState& c, std::size_t n, const ChainSample& s) {
  const std::size_t k = c.depth();
  const auto states = level_states(c, k, n + 1);
  if (n >= states.size()) throw std::out_of_range("no spinor level " + std::to_string(n));
  const LevelState& st = states[n];
  const ValueDeriv lower = eigenfunction_at(c, k, n, s);
  if (st.origin_level == k && k > 0) return {0.0, lower.value};
  if (k == 0) {
    if (n == 0) return {0.0, lower.value};
    // Partner state L0^- psi_n / sqrt(E_n) of H^+.
    const double upper = (lower.deriv + s.superpotential[0] * lower.value) / std::sqrt(st.energy);
    return {kHalfRoot * upper, kHalfRoot * lower.value};
  }
  const double upper = eigenfunction_at(c, k - 1, *st.parent, s).value;
  return {kHalfRoot * upper, kHalfRoot * lower.value};
}

SpinorState assemble_spinor(const ChainState& c, std::size_t n) {
  const std::size_t k = c.depth();
  const auto states = level_states(c, k, n + 1);
  if (n >= states.size()) throw std::out_of_range("no spinor level " + std::to_string(n));
  SpinorState out;
  out.k_wave = c.model().k_wave;
  out.level = n;
  out.units = c.model().units;
  out.schrodinger_energy = states[n].energy;
  out.dirac_energy = dirac_energy(out.units, states[n].energy);
  out.upper_vanishes = (k == 0 && n == 0) || (k > 0 && states[n].origin_level == k);
  out.lower = [c, n](double x) { return spinor_at(c, n, c.sample(x)).lower; };
  if (out.upper_vanishes) {
    out.upper = [](double) { return 0.0; };
  } else {
    out.upper = [c, n](double x) { return spinor_at(c, n, c.sample(x)).upper; };
  }
  return out;
}

double probability_density(const SpinorValue& v) noexcept { return v.upper * v.upper + v.lower * v.lower; }

double probability_density(const SpinorState& s, double x) {
  return probability_density(SpinorValue{s.upper(x), s.lower(x)});
}

double probability_current(const SpinorValue& v, const UnitSystem& units) noexcept {
  return units.e_charge * units.v_fermi * v.upper * v.lower;
}

double probability_current(const SpinorState& s, double x) {
  if (s.upper_vanishes) return 0.0;
  return probability_current(SpinorValue{s.upper(x), s.lower(x)}, s.units);
}

double dirac_energy(const UnitSystem& units, double schrodinger_energy) {
  if (!(schrodinger_energy >= 0.0)) {
    throw DomainError("negative Schrodinger energy " + std::to_string(schrodinger_energy));
  }
  return units.hbar * units.v_fermi * std::sqrt(schrodinger_energy);
}

}  // namespace susy
