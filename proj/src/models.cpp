#include "relbelief/models.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "relbelief/numerics.hpp"

namespace relbelief {

namespace {

using numerics::ln_gamma;

constexpr double kCoverage = 1.0 - 1e-6;
constexpr int kCellOrder = 16;
constexpr int kCoverageOrder = 64;
constexpr int kTensorOrder = 8;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

// ln of the density of s² given σ²: (n − 1)s²/σ² ~ χ²_{n−1}.
double ln_s2_given_sigma(int n, double s_sq, double sigma_sq) {
    const double k = 0.5 * (n - 1);
    const double y = (n - 1) * s_sq / sigma_sq;
    return std::log((n - 1) / sigma_sq) + (k - 1.0) * std::log(y) - 0.5 * y - k * std::numbers::ln2 - ln_gamma(k);
}

double ln_binomial_pmf(int n, int t, double theta) {
    const double ln_choose = ln_gamma(n + 1.0) - ln_gamma(t + 1.0) - ln_gamma(n - t + 1.0);
    const double a = t == 0 ? 0.0 : t * std::log(theta);
    const double b = t == n ? 0.0 : (n - t) * std::log1p(-theta);
    return ln_choose + a + b;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Per-cell prior mass and likelihood-weighted mass on one axis, from the
// same Gauss–Legendre rule so that a constant likelihood passes through exactly.
struct CellIntegrals {
    std::vector<double> labels;
    std::vector<double> mass;
    std::vector<double> weighted;
};

template <class LnPrior, class LnLik>
CellIntegrals integrate_cells(const Axis& axis, LnPrior ln_prior, LnLik ln_lik) {
    CellIntegrals out;
    const double width = (axis.hi - axis.lo) / static_cast<double>(axis.cells);
    for (std::size_t i = 0; i < axis.cells; ++i) {
        const double a = axis.lo + width * static_cast<double>(i);
        const double b = i + 1 == axis.cells ? axis.hi : axis.lo + width * static_cast<double>(i + 1);
        const double mass = numerics::gauss_legendre([&](double u) { return std::exp(ln_prior(u)); }, a, b, kCellOrder);
        const double weighted =
            numerics::gauss_legendre([&](double u) { return std::exp(ln_prior(u) + ln_lik(u)); }, a, b, kCellOrder);
        out.labels.push_back(0.5 * (a + b));
        out.mass.push_back(mass);
        out.weighted.push_back(weighted);
    }
    return out;
}

GridExport finish_1d(const CellIntegrals& cells, double coverage) {
    if (coverage < kCoverage) throw std::invalid_argument("grid_export: axis holds less than 1 - 1e-6 of the prior");
    std::vector<CellLabel> labels;
    std::vector<double> mass;
    std::vector<double> cond;
    for (std::size_t i = 0; i < cells.mass.size(); ++i) {
        if (!(cells.mass[i] > 0.0)) continue;
        labels.emplace_back(cells.labels[i]);
        mass.push_back(cells.mass[i]);
        cond.push_back(cells.weighted[i] / cells.mass[i]);
    }
    double sum = 0.0;
    for (double m : mass) sum += m;
    for (double& m : mass) m /= sum;
    GridExport out{ParamGrid(std::move(labels), std::move(mass)), std::move(cond), {}, coverage};
    return out;
}

}  // namespace

void LocationNormalModel::validate() const {
    require(n >= 1, "LocationNormalModel: n must be at least 1");
    require(std::isfinite(xbar) && std::isfinite(mu0), "LocationNormalModel: xbar and mu0 must be finite");
    require(positive(sigma0_sq), "LocationNormalModel: sigma0_sq must be positive");
}

void BernoulliBetaModel::validate() const {
    require(n >= 1, "BernoulliBetaModel: n must be at least 1");
    require(t >= 0 && t <= n, "BernoulliBetaModel: t must lie in [0, n]");
    require(positive(alpha0) && positive(beta0), "BernoulliBetaModel: alpha0 and beta0 must be positive");
}

void LocationScaleModel::validate() const {
    require(n >= 2, "LocationScaleModel: n must be at least 2");
    require(std::isfinite(xbar) && std::isfinite(mu0), "LocationScaleModel: xbar and mu0 must be finite");
    require(positive(s_sq), "LocationScaleModel: s_sq must be positive");
    require(positive(tau0_sq) && positive(alpha0) && positive(beta0),
            "LocationScaleModel: tau0_sq, alpha0 and beta0 must be positive");
}

void Axis::validate() const {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "Axis: need finite lo < hi");
    require(cells >= 1, "Axis: need at least one cell");
}

double ln_ratio_direction(const LocationNormalModel& model, double mu1, double sigma1_sq) {
    model.validate();
    require(sigma1_sq >= 0.0 && std::isfinite(sigma1_sq), "ln_ratio_direction: sigma1_sq must be nonnegative");
    const double v0 = 1.0 / model.n + model.sigma0_sq;
    const double v1 = 1.0 / model.n + sigma1_sq;
    const double d0 = model.xbar - model.mu0;
    const double d1 = model.xbar - mu1;
    return 0.5 * std::log(v0 / v1) - 0.5 * (d1 * d1 / v1 - d0 * d0 / v0);
}

double sup_ratio(const LocationNormalModel& model) { return std::exp(ln_ratio_direction(model, model.xbar, 0.0)); }

NormalCurve predictive_curve(const LocationNormalModel& model) {
    model.validate();
    return NormalCurve{model.mu0, 1.0 / model.n + model.sigma0_sq, model.xbar};
}

double beta_binomial_lpmf(int n, int t, double alpha, double beta) {
    require(n >= 0 && t >= 0 && t <= n, "beta_binomial_lpmf: t must lie in [0, n]");
    require(positive(alpha) && positive(beta), "beta_binomial_lpmf: alpha and beta must be positive");
    return ln_gamma(n + 1.0) - ln_gamma(t + 1.0) - ln_gamma(n - t + 1.0) + ln_gamma(alpha + beta) - ln_gamma(alpha) -
           ln_gamma(beta) + ln_gamma(t + alpha) + ln_gamma(n - t + beta) - ln_gamma(n + alpha + beta);
}

double beta_binomial_lpmf(const BernoulliBetaModel& model, int t) {
    model.validate();
    return beta_binomial_lpmf(model.n, t, model.alpha0, model.beta0);
}

double sup_ratio(const BernoulliBetaModel& model) {
    model.validate();
    const double x = static_cast<double>(model.t) / model.n;
    return std::exp(ln_binomial_pmf(model.n, model.t, x) - beta_binomial_lpmf(model, model.t));
}

double beta_ratio_direction(const BernoulliBetaModel& model, double alpha1, double beta1) {
    model.validate();
    return std::exp(beta_binomial_lpmf(model.n, model.t, alpha1, beta1) - beta_binomial_lpmf(model, model.t));
}

DiscreteCurve predictive_curve(const BernoulliBetaModel& model) {
    model.validate();
    DiscreteCurve curve;
    curve.observed = static_cast<std::size_t>(model.t);
    for (int t = 0; t <= model.n; ++t) curve.mass.push_back(std::exp(beta_binomial_lpmf(model, t)));
    return curve;
}

double upper_tail(const BernoulliBetaModel& model) {
    const DiscreteCurve curve = predictive_curve(model);
    double tail = 0.0;
    for (std::size_t t = curve.observed; t < curve.mass.size(); ++t) tail += curve.mass[t];
    return tail;
}

ScaledFCurve s2_curve(const LocationScaleModel& model, double alpha, double beta) {
    model.validate();
    require(positive(alpha) && positive(beta), "s2_curve: alpha and beta must be positive");
    return ScaledFCurve{beta / alpha, model.n - 1.0, 2.0 * alpha, model.s_sq};
}

ScaledFCurve s2_curve(const LocationScaleModel& model) { return s2_curve(model, model.alpha0, model.beta0); }

double ln_s2_density(const LocationScaleModel& model, double alpha, double beta) {
    return predictive_log_density(s2_curve(model, alpha, beta), model.s_sq);
}

double s2_predictive_ratio(const LocationScaleModel& model, double alpha1, double beta1) {
    return std::exp(ln_s2_density(model, alpha1, beta1) - ln_s2_density(model, model.alpha0, model.beta0));
}

double rb1_s2_max(const LocationScaleModel& model) {
    model.validate();
    const double k = 0.5 * (model.n - 1);
    const double a = model.alpha0;
    const double b = model.beta0;
    return std::exp(ln_gamma(a) - ln_gamma(a + k) - a * std::log(b) - k - k * std::log(model.s_sq) +
                    (k + a) * std::log(k * model.s_sq + b));
}

double sigma_tilde_sq(const LocationScaleModel& model, double tau_sq, double alpha, double beta,
                      SigmaTildeConvention convention) {
    model.validate();
    require(positive(tau_sq) && positive(alpha) && positive(beta), "sigma_tilde_sq: parameters must be positive");
    const double n = model.n;
    const double nu = n + 2.0 * alpha - 1.0;
    const double spread = 2.0 * beta + (n - 1.0) * model.s_sq;
    if (convention == SigmaTildeConvention::exact) return (n * tau_sq + 1.0) * spread / (n * nu);
    return (tau_sq * (n * tau_sq + 1.0) * spread + 1.0) / (n * tau_sq * nu);
}

StudentTCurve xbar_curve(const LocationScaleModel& model, SigmaTildeConvention convention) {
    const double scale_sq = sigma_tilde_sq(model, model.tau0_sq, model.alpha0, model.beta0, convention);
    return StudentTCurve{model.mu0, std::sqrt(scale_sq), model.n + 2.0 * model.alpha0 - 1.0, model.xbar};
}

double ln_xbar_cond_density(const LocationScaleModel& model, double mu, double tau_sq, double alpha, double beta,
                            SigmaTildeConvention convention) {
    const double scale = std::sqrt(sigma_tilde_sq(model, tau_sq, alpha, beta, convention));
    return numerics::ln_student_t_pdf(model.xbar, mu, scale, model.n + 2.0 * alpha - 1.0);
}

double xbar_cond_predictive_ratio(const LocationScaleModel& model, double mu1, double tau1_sq,
                                  SigmaTildeConvention convention) {
    const double num = ln_xbar_cond_density(model, mu1, tau1_sq, model.alpha0, model.beta0, convention);
    const double den = ln_xbar_cond_density(model, model.mu0, model.tau0_sq, model.alpha0, model.beta0, convention);
    return std::exp(num - den);
}

double ln_joint_density(const LocationScaleModel& model, double mu, double tau_sq, double alpha, double beta) {
    model.validate();
    require(positive(tau_sq) && positive(alpha) && positive(beta), "ln_joint_density: parameters must be positive");
    const double n = model.n;
    const double k = 0.5 * (n - 1.0);
    const double v = tau_sq + 1.0 / n;
    const double d = model.xbar - mu;
    const double big_b = beta + k * model.s_sq + d * d / (2.0 * v);
    const double shape = alpha + 0.5 * n;
    return -0.5 * std::log(2.0 * std::numbers::pi * v) + k * std::log(k) + (k - 1.0) * std::log(model.s_sq) +
           alpha * std::log(beta) - ln_gamma(k) - ln_gamma(alpha) + ln_gamma(shape) - shape * std::log(big_b);
}

namespace {

double ln_beta_posterior(const LocationScaleModel& m) {
    const double d = m.xbar - m.mu0;
    return std::log(m.beta0 + 0.5 * (m.n - 1) * m.s_sq + m.n * d * d / (2.0 * (m.n * m.tau0_sq + 1.0)));
}

}  // namespace

double rb_joint(const LocationScaleModel& model, double sigma_sq) {
    model.validate();
    require(positive(sigma_sq), "rb_joint: sigma_sq must be positive");
    const double n = model.n;
    const double a = model.alpha0;
    return std::exp(0.5 * std::log(n * model.tau0_sq + 1.0) - a * std::log(model.beta0) + ln_gamma(a) -
                    ln_gamma(a + 0.5 * n) + (a + 0.5 * n) * ln_beta_posterior(model) - 0.5 * n * std::log(sigma_sq) -
                    0.5 * (n - 1.0) * model.s_sq / sigma_sq);
}

double integrated_worst_case(const LocationScaleModel& model) {
    model.validate();
    const double n = model.n;
    const double ln_base = std::log(model.beta0 + 0.5 * (n - 1.0) * model.s_sq);
    return std::exp(0.5 * std::log(n * model.tau0_sq + 1.0) +
                    (model.alpha0 + 0.5 * n) * (ln_beta_posterior(model) - ln_base));
}

GridExport grid_export(const LocationNormalModel& model, const Axis& mu_axis) {
    model.validate();
    mu_axis.validate();
    const double sd0 = std::sqrt(model.sigma0_sq);
    auto ln_prior = [&](double mu) { return numerics::ln_normal_pdf(mu, model.mu0, model.sigma0_sq); };
    auto ln_lik = [&](double mu) { return numerics::ln_normal_pdf(model.xbar, mu, 1.0 / model.n); };
    const double coverage = numerics::normal_cdf((mu_axis.hi - model.mu0) / sd0) -
                            numerics::normal_cdf((mu_axis.lo - model.mu0) / sd0);
    return finish_1d(integrate_cells(mu_axis, ln_prior, ln_lik), coverage);
}

GridExport grid_export(const BernoulliBetaModel& model, const Axis& theta_axis) {
    model.validate();
    theta_axis.validate();
    require(theta_axis.lo >= 0.0 && theta_axis.hi <= 1.0, "grid_export: theta axis must lie in [0, 1]");
    auto ln_prior = [&](double th) { return numerics::ln_beta_pdf(th, model.alpha0, model.beta0); };
    auto ln_lik = [&](double th) { return ln_binomial_pmf(model.n, model.t, th); };
    const double coverage = numerics::reg_inc_beta(model.alpha0, model.beta0, theta_axis.hi) -
                            numerics::reg_inc_beta(model.alpha0, model.beta0, theta_axis.lo);
    return finish_1d(integrate_cells(theta_axis, ln_prior, ln_lik), coverage);
}

GridExport grid_export(const LocationScaleModel& model, const Axis& sigma_sq_axis) {
    model.validate();
    sigma_sq_axis.validate();
    require(sigma_sq_axis.lo >= 0.0, "grid_export: sigma_sq axis must be nonnegative");
    const double v = model.tau0_sq + 1.0 / model.n;
    auto ln_prior = [&](double s2) {
        return numerics::ln_gamma_rate_pdf(1.0 / s2, model.alpha0, model.beta0) - 2.0 * std::log(s2);
    };
    auto ln_lik = [&](double s2) {
        return numerics::ln_normal_pdf(model.xbar, model.mu0, s2 * v) + ln_s2_given_sigma(model.n, model.s_sq, s2);
    };
    const CellIntegrals cells = integrate_cells(sigma_sq_axis, ln_prior, ln_lik);
    // No closed-form gamma distribution function here: measure coverage with a high-order rule per cell.
    double coverage = 0.0;
    const double width = (sigma_sq_axis.hi - sigma_sq_axis.lo) / static_cast<double>(sigma_sq_axis.cells);
    for (std::size_t i = 0; i < sigma_sq_axis.cells; ++i) {
        const double a = sigma_sq_axis.lo + width * static_cast<double>(i);
        coverage += numerics::gauss_legendre([&](double u) { return std::exp(ln_prior(u)); }, a, a + width,
                                             kCoverageOrder);
    }
    return finish_1d(cells, coverage);
}

GridExport grid_export(const LocationScaleModel& model, const Axis& mu_axis, const Axis& lambda_axis) {
    model.validate();
    mu_axis.validate();
    lambda_axis.validate();
    require(lambda_axis.lo >= 0.0, "grid_export: lambda axis must be nonnegative");
    const double mu_w = (mu_axis.hi - mu_axis.lo) / static_cast<double>(mu_axis.cells);
    const double la_w = (lambda_axis.hi - lambda_axis.lo) / static_cast<double>(lambda_axis.cells);

    auto ln_prior = [&](double mu, double la) {
        return numerics::ln_normal_pdf(mu, model.mu0, model.tau0_sq / la) +
               numerics::ln_gamma_rate_pdf(la, model.alpha0, model.beta0);
    };
    auto ln_lik = [&](double mu, double la) {
        return numerics::ln_normal_pdf(model.xbar, mu, 1.0 / (model.n * la)) +
               ln_s2_given_sigma(model.n, model.s_sq, 1.0 / la);
    };

    const std::size_t nm = mu_axis.cells;
    const std::size_t nl = lambda_axis.cells;
    std::vector<double> mass(nm * nl);
    std::vector<double> weighted(nm * nl);
    double coverage = 0.0;
    for (std::size_t j = 0; j < nl; ++j) {
        const double la0 = lambda_axis.lo + la_w * static_cast<double>(j);
        for (std::size_t i = 0; i < nm; ++i) {
            const double mu0 = mu_axis.lo + mu_w * static_cast<double>(i);
            double m = 0.0;
            double w = 0.0;
            auto inner = [&](double la, bool lik) {
                return numerics::gauss_legendre(
                    [&](double mu) { return std::exp(ln_prior(mu, la) + (lik ? ln_lik(mu, la) : 0.0)); }, mu0,
                    mu0 + mu_w, kTensorOrder);
            };
            m = numerics::gauss_legendre([&](double la) { return inner(la, false); }, la0, la0 + la_w, kTensorOrder);
            w = numerics::gauss_legendre([&](double la) { return inner(la, true); }, la0, la0 + la_w, kTensorOrder);
            mass[i * nl + j] = m;
            weighted[i * nl + j] = w;
            coverage += m;
        }
    }
    if (coverage < kCoverage) throw std::invalid_argument("grid_export: axes hold less than 1 - 1e-6 of the prior");

    std::vector<CellLabel> labels;
    std::vector<double> kept_mass;
    std::vector<double> cond;
    XiGroups groups(nl);
    for (std::size_t i = 0; i < nm; ++i) {
        for (std::size_t j = 0; j < nl; ++j) {
            const double m = mass[i * nl + j];
            if (!(m > 0.0)) continue;
            const double mu_mid = mu_axis.lo + mu_w * (static_cast<double>(i) + 0.5);
            const double la_mid = lambda_axis.lo + la_w * (static_cast<double>(j) + 0.5);
            labels.emplace_back("(" + format_number(mu_mid) + "," + format_number(la_mid) + ")");
            groups[j].push_back(kept_mass.size());
            kept_mass.push_back(m);
            cond.push_back(weighted[i * nl + j] / m);
        }
    }
    double total = 0.0;
    for (double m : kept_mass) total += m;
    for (double& m : kept_mass) m /= total;
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    return GridExport{ParamGrid(std::move(labels), std::move(kept_mass)), std::move(cond), std::move(groups), coverage};
}

}  // namespace relbelief
