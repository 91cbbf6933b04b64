#pragma once

// The two base shape-invariant systems: the oscillator obtained from a
// constant field and the Morse well from an exponentially decaying one.
// Everything is in natural units; UnitSystem only scales B and E.

#include <cstddef>
#include <functional>
#include <vector>

#include "susy_graphene/grid.hpp"

namespace susy {

struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;
  double e_charge = 1.0;
  double v_fermi = 1.0;

  void validate() const;
  /// c*hbar/e, the factor between W' and the magnetic field.
  double field_factor() const noexcept { return c * hbar / e_charge; }
};

enum class ModelKind { Oscillator, Morse };
enum class Partner { Plus, Minus };

struct ModelSpec {
  ModelKind kind = ModelKind::Oscillator;
  double k_wave = 0.0;
  double omega = 1.0;       // oscillator
  double alpha = 1.0;       // Morse
  double d_strength = 1.0;  // Morse
  UnitSystem units;

  static ModelSpec oscillator(double omega, double k_wave, UnitSystem units = {});
  static ModelSpec morse(double alpha, double d_strength, double k_wave, UnitSystem units = {});

  /// Throws ModelError on non-positive omega/alpha/D or, for Morse, k <= 0.
  void validate() const;

  /// Oscillator coordinate zeta = sqrt(omega/2) (x + 2k/omega).
  double zeta(double x) const noexcept;
  /// Morse coordinate z = (2D/alpha) e^{-alpha x}.
  double morse_z(double x) const noexcept;
  /// Centre of the oscillator well, -2k/omega.
  double well_center() const noexcept;
};

struct ValueDeriv {
  double value = 0.0;
  double deriv = 0.0;
};

double superpotential_w0(const ModelSpec& m, double x);
double superpotential_w0_prime(const ModelSpec& m, double x);

/// V^{+-} = W0^2 +- W0'.
double base_potential(const ModelSpec& m, Partner sign, double x);

/// d^j V^-/dx^j at x for j = 0..order.
std::vector<double> base_potential_jet(const ModelSpec& m, double x, std::size_t order);

/// B0 = (c hbar / e) W0'.
double base_field(const ModelSpec& m, double x);

/// Number of normalizable levels of H^-: n with k - alpha n > 0 for Morse,
/// unbounded (SIZE_MAX) for the oscillator.
std::size_t bound_state_count(const ModelSpec& m);

/// E_n^- (omega n, or alpha n (2k - alpha n)).
double base_energy(const ModelSpec& m, std::size_t n);

/// Normalized psi_n^- and its analytic derivative.
ValueDeriv base_eigenfunction(const ModelSpec& m, std::size_t n, double x);

struct SpectrumEntry {
  std::size_t n = 0;
  double schrodinger_energy = 0.0;
  double dirac_energy = 0.0;
  std::function<double(double)> eigenfunction;
};

/// Levels n = 0..n_max of H^-, clamped to the bound-state count.
/// Throws ModelError when the Morse well holds no bound state.
std::vector<SpectrumEntry> base_spectrum(const ModelSpec& m, std::size_t n_max);

/// Grid covering the well: centre +- 10/sqrt(omega) for the oscillator,
/// [-(1/alpha) ln(4k/D) - 2, 12/alpha] for Morse.
Grid default_grid(const ModelSpec& m, std::size_t n_points = 4001);

}  // namespace susy
