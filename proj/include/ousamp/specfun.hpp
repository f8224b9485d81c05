// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar special functions used by the threshold formulas and by the
// discount-integral expression for noisy samples.
//
//   G(x) = (sqrt(pi)/2) e^{x^2} erf(x) / x,   G(0) = 1, strictly increasing
//   K(x) = (sqrt(pi)/2) e^{-x^2} erfi(x) / x, K(0) = 1, strictly decreasing
//   1F1(1; 1/2; z) = 1 + 2z G(sqrt z)  (z >= 0)
//                  = 1 - 2|z| K(sqrt|z|)  (z < 0)
//
// All functions are pure and thread-safe.

namespace ousamp::specfun {

/// Largest |x| for which erfi and G are representable.
inline constexpr double kMaxErfiArg = 26.6;
/// Largest |z| accepted by kummer_1f1_1_half.
inline constexpr double kMaxKummerArg = 650.0;

double erf(double x) noexcept;

/// Imaginary error function. Throws DomainOverflow for |x| > kMaxErfiArg.
double erfi(double x);

/// Dawson's integral F(x) = e^{-x^2} int_0^x e^{t^2} dt.
double dawson(double x) noexcept;

double g_func(double x);
double k_func(double x);

/// G'(x) and K'(x); used for Newton polishing.
double g_deriv(double x);
double k_deriv(double x);

/// Inverse of G on [1, G(kMaxErfiArg)]. Throws DomainError for y < 1.
double g_inv(double y);
/// Inverse of K on (0, 1]. Throws DomainError outside.
double k_inv(double y);

/// 1F1(1; 1/2; z). Throws DomainOverflow for |z| > kMaxKummerArg.
double kummer_1f1_1_half(double z);

/// 1F1(1; 1/2; a) / 1F1(1; 1/2; b) for 0 <= a, b. Evaluated in scaled form,
/// so it stays finite when both arguments are far beyond kMaxKummerArg.
double kummer_1f1_1_half_ratio(double a, double b);

}  // namespace ousamp::specfun
