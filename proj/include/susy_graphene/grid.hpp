#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace susy {

/// Uniform grid on [x_min, x_max] with n_points samples (endpoints included).
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_points = 3;

  Grid() = default;
  Grid(double lo, double hi, std::size_t n);

  double spacing() const noexcept { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const noexcept;
  std::vector<double> points() const;
};

/// A function sampled on a strictly increasing set of abscissae.
struct ScalarField {
  std::vector<double> xs;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(std::vector<double> x, std::vector<double> v);

  std::size_t size() const noexcept { return xs.size(); }
  /// Recovers the uniform grid; throws GridMismatchError if the spacing is not uniform.
  Grid uniform_grid() const;
};

/// Samples f on every grid point. Work is split over SUSY_GRAPHENE_THREADS
/// threads (0 or unset = hardware concurrency); results do not depend on the split.
ScalarField sample(const Grid& grid, const std::function<double(double)>& f);
std::vector<double> sample_points(const std::vector<double>& xs,
                                  const std::function<double(double)>& f);

/// Composite Simpson rule for samples at uniform spacing h; an even sample
/// count closes with a trapezoid on the last panel.
double simpson(const std::vector<double>& f, double h);

/// Thread count from SUSY_GRAPHENE_THREADS.
unsigned worker_threads();

/// Runs body(i) for i in [0, n) across worker_threads().
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace susy
