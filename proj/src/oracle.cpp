#include "susy_graphene/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "susy_graphene/errors.hpp"

namespace susy {

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.xs.size() != b.xs.size()) throw GridMismatchError("fields have different lengths");
  for (std::size_t i = 0; i < a.xs.size(); ++i) {
    if (a.xs[i] != b.xs[i]) throw GridMismatchError("fields are sampled on different abscissae");
  }
}

// Number of eigenvalues below lambda (Sturm sequence of the LDL^T pivots).
std::size_t count_below(const std::vector<double>& diag, double off2, double lambda) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    q = diag[i] - lambda - (i == 0 ? 0.0 : off2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(lambda) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

// Solves (T - shift) x = b in place for T = tridiag(off, diag, off), using
// Gaussian elimination with partial pivoting (LAPACK gttrf/gttrs layout).
void solve_shifted(const std::vector<double>& diag, double off, double shift, std::vector<double>& b) {
  const std::size_t n = diag.size();
  std::vector<double> dl(n, off), d(n), du(n, off), du2(n, 0.0);
  std::vector<bool> swapped(n, false);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
  const double tiny = std::numeric_limits<double>::epsilon() *
                      (std::abs(off) + *std::max_element(d.begin(), d.end(),
                                                         [](double a, double c) { return std::abs(a) < std::abs(c); }));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  // Forward: apply L^{-1} P.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      const double tmp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tmp - dl[i] * b[i];
    } else {
      b[i + 1] -= dl[i] * b[i];
    }
  }
  // Backward with U (diag d, super du, du2).
  b[n - 1] /= d[n - 1];
  if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t ii = n - 2; ii-- > 0;) {
    b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
  }
}

}  // namespace

DiagonalizationResult diagonalize(const ScalarField& v, std::size_t m_lowest) {
  const Grid grid = v.uniform_grid();
  const std::size_t n = grid.n_points - 2;
  if (m_lowest == 0 || m_lowest > n) throw Error("requested eigenpair count out of range");
  const double h = grid.spacing();
  const double off = -1.0 / (h * h);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 / (h * h) + v.values[i + 1];

  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double d : diag) {
    lo = std::min(lo, d - 2.0 * std::abs(off));
    hi = std::max(hi, d + 2.0 * std::abs(off));
  }

  DiagonalizationResult out;
  out.grid = grid;
  const double off2 = off * off;
  double lower = lo;
  for (std::size_t k = 0; k < m_lowest; ++k) {
    double a = lower;
    double b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_below(diag, off2, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
    }
    const double lambda = 0.5 * (a + b);
    out.eigenvalues.push_back(lambda);
    lower = a;
  }

  for (std::size_t k = 0; k < m_lowest; ++k) {
    const double lambda = out.eigenvalues[k];
    std::vector<double> x(n);
    // Deterministic, non-symmetric start vector.
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i) + k);
    bool converged = false;
    for (int it = 0; it < 12 && !converged; ++it) {
      std::vector<double> y = x;
      solve_shifted(diag, off, lambda, y);
      for (std::size_t j = 0; j < k; ++j) {
        const auto& prev = out.eigenvectors[j];
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += prev[i + 1] * y[i] * h;
        for (std::size_t i = 0; i < n; ++i) y[i] -= dot * prev[i + 1];
      }
      double norm = 0.0;
      for (double t : y) norm += t * t * h;
      norm = std::sqrt(norm);
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      for (double& t : y) t /= norm;
      double change = 0.0;
      double flipped = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        change = std::max(change, std::abs(y[i] - x[i]));
        flipped = std::max(flipped, std::abs(y[i] + x[i]));
      }
      const double scale = *std::max_element(y.begin(), y.end(),
                                             [](double p, double q) { return std::abs(p) < std::abs(q); });
      converged = it > 0 && std::min(change, flipped) <= 1e-12 * std::abs(scale);
      x = std::move(y);
    }
    if (!converged) throw ConvergenceError("inverse iteration did not converge for eigenvalue " + std::to_string(k));
    double peak = 0.0;
    for (double t : x) peak = std::max(peak, std::abs(t));
    for (double t : x) {
      if (std::abs(t) > 1e-3 * peak) {
        if (t < 0.0) {
          for (double& s : x) s = -s;
        }
        break;
      }
    }
    if (std::abs(x.front()) > 1e-6 * peak || std::abs(x.back()) > 1e-6 * peak) {
      out.warnings.push_back("eigenvector " + std::to_string(k) +
                             " does not vanish at the grid edges; enlarge the domain");
    }
    std::vector<double> full(grid.n_points, 0.0);
    std::copy(x.begin(), x.end(), full.begin() + 1);
    out.eigenvectors.push_back(std::move(full));
  }
  return out;
}

double residual(const ScalarField& v, const ScalarField& psi, double energy) {
  require_same_grid(v, psi);
  const Grid grid = v.uniform_grid();
  const double h = grid.spacing();
  double peak = 0.0;
  for (double p : psi.values) peak = std::max(peak, std::abs(p));
  if (peak == 0.0) throw Error("residual of an identically zero function");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
    const double d2 = (psi.values[i + 1] - 2.0 * psi.values[i] + psi.values[i - 1]) / (h * h);
    worst = std::max(worst, std::abs(-d2 + (v.values[i] - energy) * psi.values[i]));
  }
  return worst / peak;
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const Grid grid = f.uniform_grid();
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f.values[i] * g.values[i];
  return simpson(prod, grid.spacing());
}

}  // namespace susy
