#pragma once

// Brute-force checks that share no code with the analytic construction:
// a finite-difference Hamiltonian with Dirichlet ends, its lowest eigenpairs,
// stencil residuals and Simpson inner products.

#include <cstddef>
#include <string>
#include <vector>

#include "susy_graphene/grid.hpp"

namespace susy {

struct DiagonalizationResult {
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // full grid, zero at both ends, sum v^2 h = 1
  Grid grid;
  std::vector<std::string> warnings;              // boundary leaks
};

/// Lowest m eigenpairs of the tridiagonal matrix with diagonal 2/h^2 + V(x_i)
/// and off-diagonal -1/h^2 on the interior points. Eigenvalues by Sturm
/// bisection, eigenvectors by inverse iteration (pivoted tridiagonal LU).
/// The first component above 1e-3 of the maximum is made positive. Throws
/// ConvergenceError when inverse iteration stalls.
DiagonalizationResult diagonalize(const ScalarField& v, std::size_t m_lowest);

/// max over interior points of |(-D2 + V - E) psi| / max|psi|, D2 the 3-point stencil.
double residual(const ScalarField& v, const ScalarField& psi, double energy);

/// Simpson approximation of int f g dx (trapezoid on the last panel for an even count).
double inner_product(const ScalarField& f, const ScalarField& g);

}  // namespace susy
