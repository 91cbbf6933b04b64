#pragma once

// Shifted-energy solutions of the base Schrodinger equation, used as
// transformation functions of the Darboux chain.

#include <cstddef>
#include <functional>

#include "susy_graphene/grid.hpp"
#include "susy_graphene/model.hpp"

namespace susy {

/// (value, deriv) * exp(log_scale). Seeds grow like e^{zeta^2/2} or e^{z/2},
/// so the common exponential is carried separately.
struct ScaledPair {
  double value = 0.0;
  double deriv = 0.0;
  double log_scale = 0.0;

  /// Logarithmic derivative u'/u (scale free).
  double log_derivative() const noexcept { return deriv / value; }
  double plain_value() const noexcept;
  double plain_deriv() const noexcept;
};

/// Moves the magnitude of (value, deriv) into log_scale.
ScaledPair rebalanced(ScaledPair p) noexcept;

using ScaledFunction = std::function<ScaledPair(double)>;

struct SeedSolution {
  ModelSpec model;
  double epsilon = 0.0;      // epsilon_i of the chain step using this seed
  double epsilon_sum = 0.0;  // energy of the base equation it solves
  double nu = 0.0;
  std::size_t level = 1;
  bool nodeless_certified = false;
  ScaledFunction evaluate;

  double value(double x) const { return evaluate(x).plain_value(); }
  double deriv(double x) const { return evaluate(x).plain_deriv(); }
  /// The same seed multiplied by a constant factor.
  SeedSolution scaled(double factor) const;
};

/// u = e^{-zeta^2/2} (M(a, 1/2, zeta^2) + 2 nu Gamma(a+1/2)/Gamma(a) zeta M(a+1/2, 3/2, zeta^2)),
/// a = -epsilon_sum / (2 omega). Throws ModelError for epsilon_sum > 0.
SeedSolution oscillator_seed(const ModelSpec& m, double epsilon_sum, double nu);

/// u = e^{-z/2} e^{-s x} (M(a, b, z) + (2k/alpha)(1 + 1/nu) U(a, b, z)),
/// z = (2D/alpha) e^{-alpha x}, s = sqrt(k^2 - epsilon_sum), a = (s - k)/alpha,
/// b = 1 + 2s/alpha. Throws ModelError for nu = 0 or epsilon_sum > 0.
SeedSolution morse_seed(const ModelSpec& m, double epsilon_sum, double nu);

/// Dispatches on the model kind.
SeedSolution make_seed(const ModelSpec& m, double epsilon_sum, double nu);

/// Outcome of scanning a function for zeros.
struct NodeScan {
  bool nodeless = false;
  std::size_t sign_changes = 0;
  /// Smallest refined local minimum of |u| relative to its neighbouring samples.
  double min_relative_dip = 1.0;
};

/// Scans f on the grid. Every discrete local minimum of |f| is refined by a
/// 60-step golden-section search on log|f|; a sign change anywhere means a
/// node. Throws InconclusiveError when a refined minimum falls below 1e-10 of
/// its neighbours without a sign change being found.
NodeScan scan_nodes(const ScaledFunction& f, const Grid& grid);

/// Certifies the seed on the grid and records the result in nodeless_certified.
bool certify_nodeless(SeedSolution& s, const Grid& grid);

}  // namespace susy
