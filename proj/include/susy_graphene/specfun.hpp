#pragma once

// Real-argument special functions used by the closed-form seeds and
// eigenfunctions: Kummer M (1F1), Tricomi U, log-gamma, Hermite and
// generalized Laguerre polynomials.

#include <utility>

namespace susy::specfun {

/// A real number stored as value * exp(log_scale), so that e^z-sized results
/// never overflow. log_scale is 0 unless scaling was needed.
struct SpecialValue {
  double value = 0.0;
  double log_scale = 0.0;

  /// Collapses to a plain double; may overflow to +-inf.
  double to_double() const noexcept;
  /// ln|value * exp(log_scale)|; -inf for zero.
  double log_abs() const noexcept;
  int sign() const noexcept;
  /// value * exp(log_scale - reference).
  double rescaled(double reference) const noexcept;
};

/// Moves large or tiny mantissas into log_scale. Zero maps to {0, 0}.
SpecialValue normalized(double value, double log_scale) noexcept;

/// Confluent hypergeometric function 1F1(a; b; z).
///
/// Scaled power series for z >= 0 (all terms share a sign once n > -a, so the
/// sum is stable well past z = 30), Kummer's transformation for z < 0, and
/// the large-z asymptotic expansion when it converges to full precision and
/// the recessive branch is negligible. Throws DomainError when b is a
/// non-positive integer.
SpecialValue kummer_m(double a, double b, double z);

/// d/dz 1F1(a; b; z) = (a/b) 1F1(a+1; b+1; z).
SpecialValue kummer_m_deriv(double a, double b, double z);

/// Tricomi confluent hypergeometric function U(a, b, z) for z > 0.
///
/// a = 0 gives 1; non-positive integer a gives the terminating polynomial;
/// a > 0 uses the asymptotic series when it converges to machine precision
/// and otherwise a double-exponential quadrature of
/// U = Gamma(a)^-1 * int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt,
/// which holds for every real b. Negative non-integer a is reached by the
/// three-term recurrence in a. Throws DomainError for z <= 0.
SpecialValue tricomi_u(double a, double b, double z);

/// d/dz U(a, b, z) = -a U(a+1, b+1, z).
SpecialValue tricomi_u_deriv(double a, double b, double z);

/// U and dU/dz together; for a > 0 both come from one quadrature pass.
std::pair<SpecialValue, SpecialValue> tricomi_u_with_deriv(double a, double b, double z);

/// ln|Gamma(x)| (Lanczos, g = 607/128, with reflection below 1/2).
/// Throws DomainError at the poles x = 0, -1, -2, ...
double log_gamma(double x);

/// Sign of Gamma(x) for x not a pole.
int gamma_sign(double x);

/// Gamma(x)/Gamma(y) evaluated in log space.
double gamma_ratio(double x, double y);

/// Physicists' Hermite polynomial H_n(x), upward recurrence.
double hermite(unsigned n, double x);

/// Generalized Laguerre polynomial L_n^(alpha)(x), upward recurrence.
double laguerre(unsigned n, double alpha, double x);

bool is_nonpositive_integer(double x) noexcept;

}  // namespace susy::specfun
