#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's special functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

namespace detail {

inline double simpson(double fa, double fm, double fb, double a, double b) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                        int depth = 50) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return detail::adaptive(f, a, b, fa, fm, fb, detail::simpson(fa, fm, fb, a, b), tol, depth);
}

/// Composite integration over equal panels, each adaptive; robust for peaked integrands.
inline double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                               double tol = 1e-14) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) sum += integrate(f, a + i * h, a + (i + 1) * h, tol / panels);
    return sum;
}

/// ln(k!) as an exact sum of logarithms.
inline double ln_factorial(int k) {
    double s = 0.0;
    for (int i = 2; i <= k; ++i) s += std::log(static_cast<double>(i));
    return s;
}

/// Maclaurin series of erf, accurate for |x| <= 3.
inline double erf_series(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

/// erfc by its continued fraction, evaluated backwards; accurate for x >= 2.
inline double erfc_fraction(double x) {
    double t = x;
    for (int k = 400; k >= 1; --k) t = x + 0.5 * k / t;
    return std::exp(-x * x) / (std::sqrt(std::numbers::pi) * t);
}

/// Φ(z): the Taylor series near zero, the continued fraction in the tails.
inline double normal_cdf_series(double z) {
    const double x = z / std::numbers::sqrt2;
    if (x <= -2.0) return 0.5 * erfc_fraction(-x);
    if (x >= 2.0) return 1.0 - 0.5 * erfc_fraction(x);
    return 0.5 * (1.0 + erf_series(x));
}

inline double normal_sf_series(double z) { return z >= 0.0 ? normal_cdf_series(-z) : 1.0 - normal_cdf_series(z); }

/// Student-t density with the normalizing constant from std::lgamma.
inline double t_density(double nu, double t) {
    const double c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
    return std::exp(c - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

inline double t_cdf_quadrature(double nu, double t) {
    const double half = integrate([&](double u) { return t_density(nu, u); }, 0.0, std::fabs(t));
    return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

inline double f_density(double d1, double d2, double x) {
    if (x <= 0.0) return 0.0;
    const double lb = std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) - std::lgamma(0.5 * (d1 + d2));
    return std::exp(0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(x) -
                    0.5 * (d1 + d2) * std::log1p(d1 * x / d2) - lb);
}

inline double f_cdf_quadrature(double d1, double d2, double x) {
    return integrate_panels([&](double u) { return f_density(d1, d2, u); }, 0.0, x, 64);
}

/// I_x(a, b) by quadrature of the beta density; needs a, b >= 1.
inline double inc_beta_quadrature(double a, double b, double x) {
    const double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto dens = [&](double u) {
        if (u <= 0.0 || u >= 1.0) return (u <= 0.0 && a == 1.0) || (u >= 1.0 && b == 1.0) ? std::exp(-lb) : 0.0;
        return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - lb);
    };
    return integrate_panels(dens, 0.0, x, 64);
}

/// Central difference with step h.
inline double central_difference(const std::function<double(double)>& f, double h = 1e-5) {
    return (f(h) - f(-h)) / (2.0 * h);
}

/// Five-point stencil at 0; truncation error O(h⁴).
inline double five_point(const std::function<double(double)>& f, double h) {
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

/// |a − b| / max(|a|, |b|, floor): relative error that stays meaningful near zero.
inline double rel_error(double a, double b, double floor = 1e-3) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

/// Relative mismatch between an analytic derivative and the five-point
/// estimate. The floor 1e-3·max(1, |f(0)|) keeps derivatives that vanish to
/// first order from being judged against pure rounding noise.
inline double derivative_mismatch(double analytic, const std::function<double(double)>& f, double h) {
    const double numeric = five_point(f, h);
    const double floor = 1e-3 * std::max(1.0, std::fabs(f(0.0)));
    return std::fabs(numeric - analytic) / std::max(std::fabs(analytic), floor);
}

}  // namespace oracle
