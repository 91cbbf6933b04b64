#pragma once

// Dirac spinors of the deformed problem and the quantities measured on them.
// Level n >= 1 pairs psi_n^{(k)} (lower, the i-multiplied entry) with the
// level k-1 state that L_k^+ lifts onto it (upper); each enters with 1/sqrt(2)
// so the spinor as a whole is normalized. Level 0 has upper = 0.

#include <cstddef>
#include <functional>

#include "susy_graphene/chain.hpp"
#include "susy_graphene/model.hpp"

namespace susy {

struct SpinorState {
  double k_wave = 0.0;
  std::size_t level = 0;
  double schrodinger_energy = 0.0;
  double dirac_energy = 0.0;
  UnitSystem units;
  bool upper_vanishes = false;
  std::function<double(double)> upper;
  std::function<double(double)> lower;
};

struct SpinorValue {
  double upper = 0.0;
  double lower = 0.0;
};

SpinorState assemble_spinor(const ChainState& c, std::size_t n);

/// Both components of spinor n from a precomputed chain sample.
SpinorValue spinor_at(const ChainState& c, std::size_t n, const ChainSample& s);

/// rho = upper^2 + lower^2.
double probability_density(const SpinorState& s, double x);
double probability_density(const SpinorValue& v) noexcept;

/// j = e v_F upper lower.
double probability_current(const SpinorState& s, double x);
double probability_current(const SpinorValue& v, const UnitSystem& units) noexcept;

/// E = hbar v_F sqrt(E_schrodinger); throws DomainError for negative input.
double dirac_energy(const UnitSystem& units, double schrodinger_energy);

}  // namespace susy
