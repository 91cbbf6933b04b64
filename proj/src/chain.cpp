#include "susy_graphene/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "susy_graphene/errors.hpp"

namespace susy {

struct ChainState::Impl {
  ModelSpec model;
  Grid grid;
  std::vector<ChainStep> steps;
  // Per level (index 0 unused): normalizability and ln N of 1/u_level^{(level-1)}.
  std::vector<bool> ground_ok{false};
  std::vector<double> ground_log_norm{0.0};
};

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Tail cut for the ground-state quadrature: integrand below 1e-15 of its peak.
constexpr double kTailLog = -34.5;
constexpr int kMaxTailChunks = 8;

std::string step_label(double epsilon, double nu) {
  return "(epsilon = " + std::to_string(epsilon) + ", nu = " + std::to_string(nu) + ")";
}

double log_abs(const ScaledPair& p) { return std::log(std::abs(p.value)) + p.log_scale; }

// ln of int (1/u)^2 dx for u = u_level^{(level-1)}, with the grid extended until
// the integrand has decayed on both sides. Empty result: not square integrable.
std::optional<double> log_ground_integral(const ChainState& c, std::size_t level) {
  const Grid& g = c.work_grid();
  const double h = g.spacing();
  const long n = static_cast<long>(g.n_points);
  auto density = [&](long i) {
    const double x = g.x_min + static_cast<double>(i) * h;
    return -2.0 * log_abs(c.propagated(level - 1, level, x));
  };
  std::deque<double> logs;
  {
    std::vector<double> first(g.n_points);
    parallel_for(g.n_points, [&](std::size_t i) {
      first[i] = -2.0 * log_abs(c.propagated(level - 1, level, g.x(i)));
    });
    logs.assign(first.begin(), first.end());
  }
  long lo = 0;
  long hi = n - 1;
  auto peak = [&] { return *std::max_element(logs.begin(), logs.end()); };
  for (int side : {-1, 1}) {
    int chunks = 0;
    while (true) {
      const double edge = side < 0 ? logs.front() : logs.back();
      if (edge < peak() + kTailLog) break;
      if (chunks == kMaxTailChunks) return std::nullopt;
      ++chunks;
      std::vector<double> extra(static_cast<std::size_t>(n - 1));
      parallel_for(extra.size(), [&](std::size_t j) {
        const long offset = static_cast<long>(j) + 1;
        extra[j] = density(side < 0 ? lo - offset : hi + offset);
      });
      const double new_edge = extra.back();
      if (!(new_edge < edge)) return std::nullopt;  // not decaying
      for (double v : extra) {
        if (side < 0) {
          logs.push_front(v);
        } else {
          logs.push_back(v);
        }
      }
      (side < 0 ? lo : hi) += side * (n - 1);
    }
  }
  const double top = peak();
  if (!std::isfinite(top)) return std::nullopt;
  std::vector<double> values(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) values[i] = std::exp(logs[i] - top);
  return top + std::log(simpson(values, h));
}

void finish_level(ChainState::Impl& impl, std::size_t level) {
  impl.ground_ok.resize(level + 1, false);
  impl.ground_log_norm.resize(level + 1, std::numeric_limits<double>::quiet_NaN());
  ChainState view(std::shared_ptr<const ChainState::Impl>(&impl, [](const ChainState::Impl*) {}));
  const auto integral = log_ground_integral(view, level);
  impl.ground_ok[level] = integral.has_value();
  impl.ground_log_norm[level] = integral ? -0.5 * *integral : std::numeric_limits<double>::quiet_NaN();
}

// det of the k x k matrix formed by the listed rows of d (row-major by row index).
double determinant(const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& rows) {
  const std::size_t k = rows.size();
  std::vector<std::vector<double>> a(k);
  for (std::size_t r = 0; r < k; ++r) a[r] = d[rows[r]];
  double det = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t cc = col; cc < k; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  return det;
}

struct WronskianJet {
  double w0 = 0.0;  // determinant with scaled columns
  double w1 = 0.0;  // first derivative, same scaling
  double w2 = 0.0;  // second derivative, same scaling
  double log_scale = 0.0;
};

WronskianJet wronskian_jet(const ChainState& c, double x) {
  const std::size_t k = c.depth();
  if (k == 0) throw Error("Wronskian needs chain depth >= 1");
  const auto jet = base_potential_jet(c.model(), x, k);
  // d[m][j] = m-th derivative of u_{j+1}^{(0)}, m = 0..k+1.
  std::vector<std::vector<double>> d(k + 2, std::vector<double>(k, 0.0));
  WronskianJet out;
  for (std::size_t j = 0; j < k; ++j) {
    const ScaledPair p = c.steps()[j].seed.evaluate(x);
    const double sigma = c.propagated_energy(0, j + 1);
    d[0][j] = p.value;
    d[1][j] = p.deriv;
    // u^{(m+2)} = sum_l C(m,l) q^{(l)} u^{(m-l)}, q = V^- - sigma.
    for (std::size_t m = 0; m + 2 <= k + 1; ++m) {
      double acc = 0.0;
      double binom = 1.0;
      for (std::size_t l = 0; l <= m; ++l) {
        const double q = l == 0 ? jet[0] - sigma : jet[l];
        acc += binom * q * d[m - l][j];
        binom = binom * static_cast<double>(m - l) / static_cast<double>(l + 1);
      }
      d[m + 2][j] = acc;
    }
    double scale = 0.0;
    for (std::size_t m = 0; m < k; ++m) scale = std::max(scale, std::abs(d[m][j]));
    for (std::size_t m = 0; m < k + 2; ++m) d[m][j] /= scale;
    out.log_scale += p.log_scale + std::log(scale);
  }
  std::vector<std::size_t> rows(k);
  for (std::size_t r = 0; r < k; ++r) rows[r] = r;
  out.w0 = determinant(d, rows);
  rows[k - 1] = k;
  out.w1 = determinant(d, rows);
  rows[k - 1] = k + 1;
  out.w2 = determinant(d, rows);
  if (k >= 2) {
    rows[k - 2] = k - 1;
    rows[k - 1] = k;
    out.w2 += determinant(d, rows);
  }
  return out;
}

}  // namespace

ChainState::ChainState(const ModelSpec& model, std::optional<Grid> work_grid) {
  model.validate();
  auto impl = std::make_shared<Impl>();
  impl->model = model;
  impl->grid = work_grid ? *work_grid : default_grid(model);
  impl_ = std::move(impl);
}

const ModelSpec& ChainState::model() const noexcept { return impl_->model; }
std::size_t ChainState::depth() const noexcept { return impl_->steps.size(); }
const std::vector<ChainStep>& ChainState::steps() const noexcept { return impl_->steps; }
const Grid& ChainState::work_grid() const noexcept { return impl_->grid; }

double ChainState::cumulative_shift() const noexcept {
  double total = 0.0;
  for (const auto& s : impl_->steps) total += s.epsilon;
  return total;
}

double ChainState::propagated_energy(std::size_t i, std::size_t j) const {
  if (!(i < j && j <= depth())) throw std::out_of_range("propagated index out of range");
  double total = 0.0;
  for (std::size_t l = i + 1; l <= j; ++l) total += impl_->steps[l - 1].epsilon;
  return total;
}

ChainSample ChainState::sample(double x) const {
  const std::size_t k = depth();
  const ModelSpec& m = impl_->model;
  ChainSample s;
  s.x = x;
  s.potential.assign(k + 1, 0.0);
  s.superpotential.assign(k + 1, 0.0);
  s.superpotential_prime.assign(k + 1, 0.0);
  s.potential[0] = base_potential(m, Partner::Minus, x);
  s.superpotential[0] = superpotential_w0(m, x);
  s.superpotential_prime[0] = superpotential_w0_prime(m, x);
  s.propagated.assign(k, std::vector<ScaledPair>(k + 1));
  for (std::size_t j = 1; j <= k; ++j) s.propagated[0][j] = impl_->steps[j - 1].seed.evaluate(x);

  for (std::size_t i = 1; i <= k; ++i) {
    const ScaledPair& u = s.propagated[i - 1][i];
    const double w = u.deriv / u.value;
    if (u.value == 0.0 || !std::isfinite(w)) {
      throw SingularityError("transformation function of level " + std::to_string(i) +
                             " vanishes at x = " + std::to_string(x));
    }
    const double eps = impl_->steps[i - 1].epsilon;
    const double shifted = s.potential[i - 1] - eps;
    const double wp = shifted - w * w;
    s.superpotential[i] = w;
    s.superpotential_prime[i] = wp;
    s.potential[i] = 2.0 * w * w - shifted;
    if (i == k) break;
    for (std::size_t j = i + 1; j <= k; ++j) {
      const ScaledPair& p = s.propagated[i - 1][j];
      const double sigma = propagated_energy(i - 1, j);
      ScaledPair q;
      q.value = -p.deriv + w * p.value;
      q.deriv = -(s.potential[i - 1] - sigma) * p.value + wp * p.value + w * p.deriv;
      q.log_scale = p.log_scale;
      s.propagated[i][j] = rebalanced(q);
    }
  }
  return s;
}

ScaledPair ChainState::propagated(std::size_t i, std::size_t j, double x) const {
  if (!(i < j && j <= depth())) throw std::out_of_range("propagated index out of range");
  return sample(x).propagated[i][j];
}

bool ChainState::ground_normalizable(std::size_t level) const {
  if (level == 0 || level > depth()) throw std::out_of_range("chain level out of range");
  return impl_->ground_ok[level];
}

double ChainState::ground_log_norm(std::size_t level) const {
  if (level == 0 || level > depth()) throw std::out_of_range("chain level out of range");
  return impl_->ground_log_norm[level];
}

ChainState ChainState::truncated(std::size_t new_depth) const {
  if (new_depth > depth()) throw std::out_of_range("truncation deeper than the chain");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->steps.resize(new_depth);
  impl->ground_ok.resize(new_depth + 1);
  impl->ground_log_norm.resize(new_depth + 1);
  return ChainState(std::shared_ptr<const Impl>(std::move(impl)));
}

ChainState ChainState::with_scaled_seed(std::size_t step, double factor) const {
  if (step == 0 || step > depth()) throw std::out_of_range("seed index out of range");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->steps[step - 1].seed = impl->steps[step - 1].seed.scaled(factor);
  for (std::size_t level = step; level <= depth(); ++level) finish_level(*impl, level);
  return ChainState(std::shared_ptr<const Impl>(std::move(impl)));
}

ChainState extend_chain(const ChainState& c, double epsilon_next, double nu_next) {
  const std::size_t k = c.depth();
  const std::string label = step_label(epsilon_next, nu_next);
  if (!std::isfinite(epsilon_next) || !std::isfinite(nu_next)) {
    throw ChainError("non-finite chain step " + label, k + 1, epsilon_next, nu_next);
  }
  if (k == 0 && epsilon_next > 0.0) {
    throw ChainError("first factorization energy must be <= 0 " + label, 1, epsilon_next, nu_next);
  }
  if (k > 0 && !(epsilon_next < c.steps().back().epsilon)) {
    throw ChainError("factorization energies must strictly decrease " + label, k + 1, epsilon_next,
                     nu_next);
  }
  ChainStep step;
  step.epsilon = epsilon_next;
  step.nu = nu_next;
  try {
    step.seed = make_seed(c.model(), c.cumulative_shift() + epsilon_next, nu_next);
  } catch (const Error& e) {
    throw ChainError(std::string("cannot build seed ") + label + ": " + e.what(), k + 1, epsilon_next,
                     nu_next);
  }
  step.seed.epsilon = epsilon_next;
  step.seed.level = k + 1;

  auto impl = std::make_shared<ChainState::Impl>(c.impl());
  impl->steps.push_back(std::move(step));
  ChainState next{std::shared_ptr<const ChainState::Impl>(impl)};
  NodeScan scan;
  try {
    scan = scan_nodes([&](double x) { return next.propagated(k, k + 1, x); }, impl->grid);
  } catch (const Error& e) {
    throw ChainError(std::string("node certification failed for step ") + label + ": " + e.what(), k + 1,
                     epsilon_next, nu_next);
  }
  if (!scan.nodeless) {
    throw ChainError("transformation function of step " + std::to_string(k + 1) + " " + label + " has " +
                         std::to_string(scan.sign_changes) + " node(s); the new potential would be singular",
                     k + 1, epsilon_next, nu_next);
  }
  impl->steps.back().seed.nodeless_certified = true;
  finish_level(*impl, k + 1);
  return next;
}

ChainState build_chain(const ModelSpec& m, const std::vector<std::pair<double, double>>& steps,
                       std::optional<Grid> work_grid) {
  ChainState c(m, work_grid);
  for (const auto& [eps, nu] : steps) c = extend_chain(c, eps, nu);
  return c;
}

double potential_k(const ChainState& c, double x) { return c.sample(x).potential.back(); }

double potential_k_wronskian(const ChainState& c, double x) {
  if (c.depth() == 0) return base_potential(c.model(), Partner::Minus, x);
  const WronskianJet w = wronskian_jet(c, x);
  const double r1 = w.w1 / w.w0;
  const double log_second = w.w2 / w.w0 - r1 * r1;
  return base_potential(c.model(), Partner::Minus, x) - 2.0 * log_second - c.cumulative_shift();
}

double superpotential_k(const ChainState& c, double x) { return c.sample(x).superpotential.back(); }

double field_k(const ChainState& c, double x) {
  return c.model().units.field_factor() * c.sample(x).superpotential_prime.back();
}

double field_k_recursive(const ChainState& c, double x) {
  const std::size_t k = c.depth();
  const double factor = c.model().units.field_factor();
  if (k == 0) return base_field(c.model(), x);
  const ChainSample s = c.sample(x);
  // B_1 = (c hbar/e) (ln u_1)'' with u'' from the base equation.
  const ScaledPair& u = s.propagated[0][1];
  const double r = u.deriv / u.value;
  double b = factor * ((s.potential[0] - c.steps()[0].epsilon) - r * r);
  for (std::size_t level = 2; level <= k; ++level) {
    const ScaledPair& f = s.propagated[level - 2][level - 1];
    const ScaledPair& g = s.propagated[level - 2][level];
    const double eps = c.steps()[level - 1].epsilon;
    // Scale factors of f and g cancel in the logarithmic derivatives.
    const double w = f.value * g.deriv - f.deriv * g.value;
    const double w1 = -eps * f.value * g.value;
    const double w2 = -eps * (f.deriv * g.value + f.value * g.deriv);
    b = -b + factor * (w2 / w - (w1 / w) * (w1 / w));
  }
  return b;
}

SignedLog wronskian_determinant(const ChainState& c, double x) {
  const WronskianJet w = wronskian_jet(c, x);
  if (w.w0 == 0.0) return {0, kNegInf};
  return {w.w0 > 0.0 ? 1 : -1, std::log(std::abs(w.w0)) + w.log_scale};
}

SignedLog wronskian_crum(const ChainState& c, double x) {
  const std::size_t k = c.depth();
  if (k == 0) throw Error("Wronskian needs chain depth >= 1");
  const ChainSample s = c.sample(x);
  SignedLog out{((k * (k - 1) / 2) % 2 == 0) ? 1 : -1, 0.0};
  for (std::size_t j = 1; j <= k; ++j) {
    const ScaledPair& p = s.propagated[j - 1][j];
    if (p.value == 0.0) return {0, kNegInf};
    if (p.value < 0.0) out.sign = -out.sign;
    out.log_abs += log_abs(p);
  }
  return out;
}

std::vector<LevelState> level_states(const ChainState& c, std::size_t level, std::size_t count) {
  if (level > c.depth()) throw std::out_of_range("chain level out of range");
  std::vector<LevelState> out;
  if (level == 0) {
    const std::size_t avail = std::min(count, bound_state_count(c.model()));
    for (std::size_t m = 0; m < avail; ++m) out.push_back({0, m, base_energy(c.model(), m), std::nullopt});
    return out;
  }
  if (count == 0) return out;
  if (c.ground_normalizable(level)) out.push_back({level, 0, 0.0, std::nullopt});
  const double eps = c.steps()[level - 1].epsilon;
  // One extra parent state covers the one L^+ annihilates when eps = 0.
  const auto previous = level_states(c, level - 1, count + 1);
  for (std::size_t idx = 0; idx < previous.size() && out.size() < count; ++idx) {
    const double e = previous[idx].energy - eps;
    if (!(e > 0.0)) continue;  // L^+ annihilates the state at the factorization energy
    out.push_back({previous[idx].origin_level, previous[idx].base_index, e, idx});
  }
  return out;
}

std::vector<SpectrumEntry> spectrum_k(const ChainState& c, std::size_t n_max) {
  const std::size_t k = c.depth();
  const auto states = level_states(c, k, n_max + 1);
  const UnitSystem& u = c.model().units;
  std::vector<SpectrumEntry> out;
  out.reserve(states.size());
  for (std::size_t n = 0; n < states.size(); ++n) {
    SpectrumEntry e;
    e.n = n;
    e.schrodinger_energy = states[n].energy;
    e.dirac_energy = u.hbar * u.v_fermi * std::sqrt(states[n].energy);
    e.eigenfunction = eigenfunction_k(c, n);
    out.push_back(std::move(e));
  }
  return out;
}

ValueDeriv eigenfunction_at(const ChainState& c, std::size_t level, std::size_t n, const ChainSample& s) {
  const auto states = level_states(c, level, n + 1);
  if (n >= states.size()) {
    throw std::out_of_range("level " + std::to_string(level) + " has no eigenstate " + std::to_string(n));
  }
  const LevelState& st = states[n];
  double value = 0.0;
  double deriv = 0.0;
  double energy = 0.0;
  std::size_t start = 1;
  if (st.origin_level == 0) {
    const ValueDeriv base = base_eigenfunction(c.model(), st.base_index, s.x);
    value = base.value;
    deriv = base.deriv;
    energy = base_energy(c.model(), st.base_index);
  } else {
    // Normalized 1/u with (1/u)' = -W (1/u).
    const std::size_t g = st.origin_level;
    const ScaledPair& u = s.propagated[g - 1][g];
    const double mag = std::exp(c.ground_log_norm(g) - log_abs(u));
    value = u.value > 0.0 ? mag : -mag;
    deriv = -s.superpotential[g] * value;
    start = g + 1;
  }
  for (std::size_t i = start; i <= level; ++i) {
    const double lifted = energy - c.steps()[i - 1].epsilon;
    const double inv = 1.0 / std::sqrt(lifted);
    const double w = s.superpotential[i];
    const double wp = s.superpotential_prime[i];
    const double nv = (-deriv + w * value) * inv;
    const double nd = (-(s.potential[i - 1] - energy) * value + wp * value + w * deriv) * inv;
    value = nv;
    deriv = nd;
    energy = lifted;
  }
  return {value, deriv};
}

std::function<double(double)> eigenfunction_k(const ChainState& c, std::size_t n) {
  const std::size_t k = c.depth();
  if (n >= level_states(c, k, n + 1).size()) {
    throw std::out_of_range("chain has no eigenstate " + std::to_string(n));
  }
  return [c, k, n](double x) { return eigenfunction_at(c, k, n, c.sample(x)).value; };
}

std::function<double(double)> ground_state_k(const ChainState& c) {
  const std::size_t k = c.depth();
  if (k == 0) return [m = c.model()](double x) { return base_eigenfunction(m, 0, x).value; };
  if (!c.ground_normalizable(k)) {
    throw NonNormalizableError("ground state 1/u of chain level " + std::to_string(k) +
                               " is not square integrable");
  }
  return [c, k](double x) {
    const ChainSample s = c.sample(x);
    const ScaledPair& u = s.propagated[k - 1][k];
    const double mag = std::exp(c.ground_log_norm(k) - log_abs(u));
    return u.value > 0.0 ? mag : -mag;
  };
}

}  // namespace susy
