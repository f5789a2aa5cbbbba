#include "relbelief/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relbelief::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// Returns {I_x(a,b), 1 − I_x(a,b)} with y = 1 − x supplied by the caller so
// that neither tail loses precision to cancellation.
std::pair<double, double> inc_beta_pair(double a, double b, double x, double y) {
    if (x <= 0.0) return {0.0, 1.0};
    if (y <= 0.0) return {1.0, 0.0};
    const double ln_front = a * std::log(x) + b * std::log(y) - ln_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = std::exp(ln_front) * beta_continued_fraction(a, b, x) / a;
        return {lower, 1.0 - lower};
    }
    const double upper = std::exp(ln_front) * beta_continued_fraction(b, a, y) / b;
    return {1.0 - upper, upper};
}

void check_inc_beta_args(double a, double b, double x) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "reg_inc_beta: shape parameters must be positive and finite");
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
}

// Upper tail of Student-t at |t|, i.e. P(T > |t|).
double student_abs_tail(double nu, double t) {
    require(nu > 0.0, "student_t: degrees of freedom must be positive");
    require(!std::isnan(t), "student_t: t is NaN");
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    const double x = nu / (nu + t2);
    const double y = t2 / (nu + t2);
    return 0.5 * inc_beta_pair(0.5 * nu, 0.5, x, y).first;
}

std::pair<double, double> f_pair(double d1, double d2, double x) {
    require(d1 > 0.0 && d2 > 0.0, "f distribution: degrees of freedom must be positive");
    require(x >= 0.0 && !std::isnan(x), "f distribution: x must be nonnegative");
    if (std::isinf(x)) return {1.0, 0.0};
    const double denom = d1 * x + d2;
    return inc_beta_pair(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom);
}

struct LegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

LegendreRule make_legendre(int n) {
    LegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

const LegendreRule& legendre(int order) {
    static const std::array<LegendreRule, 65> rules = [] {
        std::array<LegendreRule, 65> all;
        for (int n = 1; n <= 64; ++n) all[n] = make_legendre(n);
        return all;
    }();
    if (order < 1 || order > 64) throw std::invalid_argument("gauss_legendre: order must be in [1, 64]");
    return rules[order];
}

}  // namespace

double ln_gamma(double x) {
    require(x > 0.0 && std::isfinite(x), "ln_gamma: argument must be positive and finite");
    if (x == 1.0 || x == 2.0) return 0.0;
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double ln_beta(double a, double b) {
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

double reg_inc_beta(double a, double b, double x) {
    check_inc_beta_args(a, b, x);
    return inc_beta_pair(a, b, x, 1.0 - x).first;
}

double reg_inc_beta_complement(double a, double b, double x) {
    check_inc_beta_args(a, b, x);
    return inc_beta_pair(a, b, x, 1.0 - x).second;
}

double student_t_cdf(double nu, double t) {
    const double tail = student_abs_tail(nu, t);
    return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_sf(double nu, double t) {
    const double tail = student_abs_tail(nu, t);
    return t > 0.0 ? tail : 1.0 - tail;
}

double f_cdf(double d1, double d2, double x) { return f_pair(d1, d2, x).first; }

double f_sf(double d1, double d2, double x) { return f_pair(d1, d2, x).second; }

double normal_cdf(double z) {
    require(!std::isnan(z), "normal_cdf: z is NaN");
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_sf(double z) {
    require(!std::isnan(z), "normal_sf: z is NaN");
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double ln_normal_pdf(double x, double mean, double variance) {
    require(variance > 0.0, "ln_normal_pdf: variance must be positive");
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

double ln_student_t_pdf(double x, double location, double scale, double nu) {
    require(scale > 0.0 && nu > 0.0, "ln_student_t_pdf: scale and nu must be positive");
    const double z = (x - location) / scale;
    return ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
           std::log(scale) - 0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double ln_f_pdf(double x, double d1, double d2) {
    require(d1 > 0.0 && d2 > 0.0, "ln_f_pdf: degrees of freedom must be positive");
    require(x > 0.0, "ln_f_pdf: x must be positive");
    return 0.5 * (d1 * std::log(d1 * x) + d2 * std::log(d2) - (d1 + d2) * std::log(d1 * x + d2)) -
           std::log(x) - ln_beta(0.5 * d1, 0.5 * d2);
}

double ln_gamma_rate_pdf(double x, double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "ln_gamma_rate_pdf: shape and rate must be positive");
    require(x > 0.0, "ln_gamma_rate_pdf: x must be positive");
    return shape * std::log(rate) - ln_gamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double ln_beta_pdf(double x, double a, double b) {
    require(a > 0.0 && b > 0.0, "ln_beta_pdf: shape parameters must be positive");
    require(x > 0.0 && x < 1.0, "ln_beta_pdf: x must lie in (0, 1)");
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - ln_beta(a, b);
}

std::size_t argmax_first(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax_first: empty input");
    std::size_t best = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) throw std::invalid_argument("argmax_first: NaN entry at index " + std::to_string(i));
        if (values[i] > values[best]) best = i;
    }
    return best;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int order) {
    const LegendreRule& rule = legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int max_iter) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw std::domain_error("bisect: no sign change on the bracket");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace relbelief::numerics
