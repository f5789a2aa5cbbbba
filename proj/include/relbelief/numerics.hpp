#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace relbelief::numerics {

/// Natural log of the gamma function for x > 0 (Lanczos, g = 671/128).
/// Throws std::domain_error for x <= 0 or non-finite x.
double ln_gamma(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
///
/// Evaluated by continued fraction (modified Lentz) with the usual switch to
/// the complementary fraction when x > (a + 1) / (a + b + 2).
/// Throws std::domain_error unless a, b > 0 and 0 <= x <= 1.
double reg_inc_beta(double a, double b, double x);

/// 1 − I_x(a, b), computed without cancellation when I_x(a, b) is near 1.
double reg_inc_beta_complement(double a, double b, double x);

double student_t_cdf(double nu, double t);
/// Upper tail P(T > t); keeps full relative precision far in the tail.
double student_t_sf(double nu, double t);

double f_cdf(double d1, double d2, double x);
/// Upper tail P(F > x).
double f_sf(double d1, double d2, double x);

double normal_cdf(double z);
double normal_sf(double z);

// Log densities. Scale parameters are variances unless named `scale`.
double ln_normal_pdf(double x, double mean, double variance);
double ln_student_t_pdf(double x, double location, double scale, double nu);
double ln_f_pdf(double x, double d1, double d2);
double ln_gamma_rate_pdf(double x, double shape, double rate);
double ln_beta_pdf(double x, double a, double b);

/// Index of the largest value; ties go to the lowest index.
/// Throws std::invalid_argument on empty input or a NaN entry.
std::size_t argmax_first(std::span<const double> values);

/// Fixed-order Gauss–Legendre rule on [a, b]. Orders 1..64 are supported.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int order = 16);

/// Bisection for a sign change of f on [lo, hi]. Stops when the bracket
/// stops shrinking in floating point or after max_iter halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi, int max_iter = 400);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace relbelief::numerics
