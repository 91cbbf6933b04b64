#pragma once

// k-step Darboux chain built from the base model. All chain quantities at a
// point follow algebraically from the seeds there:
//   W_i = u_i^{(i-1)}' / u_i^{(i-1)},  W_i' = V_{i-1} - eps_i - W_i^2,
//   V_i = 2 W_i^2 - (V_{i-1} - eps_i),  u_j^{(i)} = -u_j^{(i-1)}' + W_i u_j^{(i-1)},
// with u'' replaced through the Schrodinger equation at every step.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "susy_graphene/grid.hpp"
#include "susy_graphene/model.hpp"
#include "susy_graphene/seeds.hpp"

namespace susy {

struct ChainStep {
  double epsilon = 0.0;
  double nu = 0.0;
  SeedSolution seed;  // base-equation solution at the cumulative energy
};

/// Everything the chain determines at one abscissa. Index i is the chain
/// level: potential[0] = V^-, superpotential[0] = W0, and for i >= 1
/// superpotential[i] = W_i. propagated[i][j] holds u_j^{(i)} for j > i.
struct ChainSample {
  double x = 0.0;
  std::vector<double> potential;
  std::vector<double> superpotential;
  std::vector<double> superpotential_prime;
  std::vector<std::vector<ScaledPair>> propagated;
};

/// One eigenstate of a chain level. origin_level = 0 means the lifted base
/// state psi_{base_index}^-; origin_level = s >= 1 means the lifted ground
/// state 1/u_s^{(s-1)}. parent is the index of the state in level - 1 that
/// L^+ maps onto this one (empty for the level's own ground state).
struct LevelState {
  std::size_t origin_level = 0;
  std::size_t base_index = 0;
  double energy = 0.0;
  std::optional<std::size_t> parent;
};

class ChainState {
 public:
  /// Depth-0 chain: the base model itself. Certification and ground-state
  /// quadrature use `work_grid` (the model's default grid when omitted).
  explicit ChainState(const ModelSpec& model, std::optional<Grid> work_grid = std::nullopt);

  const ModelSpec& model() const noexcept;
  std::size_t depth() const noexcept;
  const std::vector<ChainStep>& steps() const noexcept;
  const Grid& work_grid() const noexcept;
  /// Sum of epsilon_i.
  double cumulative_shift() const noexcept;
  /// Energy of u_j^{(i)} with respect to H_i: sum of eps_{i+1..j}.
  double propagated_energy(std::size_t i, std::size_t j) const;

  ChainSample sample(double x) const;
  /// u_j^{(i)} at x (0 <= i < j <= depth).
  ScaledPair propagated(std::size_t i, std::size_t j, double x) const;

  /// False when 1/u_level^{(level-1)} is not square integrable.
  bool ground_normalizable(std::size_t level) const;
  /// ln of the constant that normalizes 1/u_level^{(level-1)}.
  double ground_log_norm(std::size_t level) const;

  /// The first `depth` steps.
  ChainState truncated(std::size_t depth) const;
  /// Same chain with the seed of `step` (1-based) multiplied by `factor`.
  ChainState with_scaled_seed(std::size_t step, double factor) const;

  // Implementation detail shared with the free functions.
  struct Impl;
  explicit ChainState(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const Impl& impl() const noexcept { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Adds a step. Throws ChainError on ordering violations, invalid seeds, or a
/// node in the new transformation function u_{k+1}^{(k)}.
ChainState extend_chain(const ChainState& c, double epsilon_next, double nu_next);

/// Applies extend_chain for every (epsilon, nu) pair in order.
ChainState build_chain(const ModelSpec& m, const std::vector<std::pair<double, double>>& steps,
                       std::optional<Grid> work_grid = std::nullopt);

/// V_k by the superpotential recursion.
double potential_k(const ChainState& c, double x);
/// V_k = V^- - 2 (ln W(u_1..u_k))'' - sum eps, with Wronskian derivatives from
/// the Taylor jets of the seeds.
double potential_k_wronskian(const ChainState& c, double x);
/// W_k (W0 at depth 0).
double superpotential_k(const ChainState& c, double x);
/// B_k = (c hbar / e) W_k'.
double field_k(const ChainState& c, double x);
/// B_k = -B_{k-1} + (c hbar / e) (ln W[u_{k-1}^{(k-2)}, u_k^{(k-2)}])''.
double field_k_recursive(const ChainState& c, double x);

/// sign and ln|.| of a real number.
struct SignedLog {
  int sign = 0;
  double log_abs = 0.0;
};
/// Wronskian of the base seeds u_1^{(0)}..u_k^{(0)} by determinant.
SignedLog wronskian_determinant(const ChainState& c, double x);
/// (-1)^{k(k-1)/2} prod_j u_j^{(j-1)}, which equals the Wronskian.
SignedLog wronskian_crum(const ChainState& c, double x);

/// States of chain level `level` in ascending energy, at most `count`.
std::vector<LevelState> level_states(const ChainState& c, std::size_t level, std::size_t count);

/// Levels 0..n_max of H_k (fewer when the Morse well runs out of states).
std::vector<SpectrumEntry> spectrum_k(const ChainState& c, std::size_t n_max);

/// Normalized n-th eigenfunction of chain level `level` and its derivative,
/// evaluated from a precomputed sample.
ValueDeriv eigenfunction_at(const ChainState& c, std::size_t level, std::size_t n,
                            const ChainSample& s);
/// Handle for the n-th eigenfunction of H_k. Throws std::out_of_range when n
/// is beyond the spectrum.
std::function<double(double)> eigenfunction_k(const ChainState& c, std::size_t n);
/// Normalized 1/u_k^{(k-1)}; throws NonNormalizableError when it is not square integrable.
std::function<double(double)> ground_state_k(const ChainState& c);

}  // namespace susy
