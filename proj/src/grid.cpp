#include "susy_graphene/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "susy_graphene/errors.hpp"

namespace susy {

Grid::Grid(double lo, double hi, std::size_t n) : x_min(lo), x_max(hi), n_points(n) {
  if (n < 3) throw Error("grid needs at least 3 points");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error("grid bounds must be finite with x_max > x_min");
  }
}

double Grid::x(std::size_t i) const noexcept {
  // Interpolate from both ends so the last point is exactly x_max.
  const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
  return x_min * (1.0 - t) + x_max * t;
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
  return xs;
}

ScalarField::ScalarField(std::vector<double> x, std::vector<double> v)
    : xs(std::move(x)), values(std::move(v)) {
  if (xs.size() != values.size()) throw GridMismatchError("abscissae and values differ in length");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw GridMismatchError("abscissae must be strictly increasing");
  }
}

Grid ScalarField::uniform_grid() const {
  if (xs.size() < 3) throw GridMismatchError("field has fewer than 3 samples");
  Grid g(xs.front(), xs.back(), xs.size());
  const double h = g.spacing();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - g.x(i)) > 1e-9 * h) throw GridMismatchError("field is not on a uniform grid");
  }
  return g;
}

unsigned worker_threads() {
  unsigned n = 0;
  if (const char* env = std::getenv("SUSY_GRAPHENE_THREADS")) {
    try {
      n = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(1, n / 64));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> sample_points(const std::vector<double>& xs,
                                  const std::function<double(double)>& f) {
  std::vector<double> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = f(xs[i]); });
  return out;
}

double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  const std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;  // Simpson over [0, last]
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < last; ++i) (i % 2 == 1 ? odd : even) += f[i];
  double total = h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[last]);
  if (last != n - 1) total += 0.5 * h * (f[n - 2] + f[n - 1]);
  return total;
}

ScalarField sample(const Grid& grid, const std::function<double(double)>& f) {
  auto xs = grid.points();
  auto values = sample_points(xs, f);
  return ScalarField(std::move(xs), std::move(values));
}

}  // namespace susy
