#pragma once

// Conjugate families with closed-form prior predictives: location normal,
// Bernoulli with a beta prior, and location-scale normal with a
// normal-gamma prior.

#include <cstddef>
#include <vector>

#include "relbelief/belief.hpp"
#include "relbelief/conflict.hpp"

namespace relbelief {

/// x̄ from n draws of N(μ, 1) with μ ~ N(mu0, sigma0_sq).
struct LocationNormalModel {
    int n = 1;
    double xbar = 0.0;
    double mu0 = 0.0;
    double sigma0_sq = 1.0;

    void validate() const;
};

/// t successes in n Bernoulli(θ) trials with θ ~ beta(alpha0, beta0).
struct BernoulliBetaModel {
    int n = 1;
    int t = 0;
    double alpha0 = 1.0;
    double beta0 = 1.0;

    void validate() const;
};

/// n draws of N(μ, σ²) summarized by (x̄, s²), with μ | σ² ~ N(mu0, tau0_sq σ²)
/// and σ⁻² ~ gamma_rate(alpha0, beta0).
struct LocationScaleModel {
    int n = 2;
    double xbar = 0.0;
    double s_sq = 1.0;
    double mu0 = 0.0;
    double tau0_sq = 1.0;
    double alpha0 = 1.0;
    double beta0 = 1.0;

    void validate() const;
};

// Location normal.

/// log m_Q(x̄)/m(x̄) for Q = N(mu1, sigma1_sq); sigma1_sq = 0 is the point mass at mu1.
double ln_ratio_direction(const LocationNormalModel& model, double mu1, double sigma1_sq);
/// Supremum over all Q, attained at the point mass at x̄.
double sup_ratio(const LocationNormalModel& model);
NormalCurve predictive_curve(const LocationNormalModel& model);

// Bernoulli.

double beta_binomial_lpmf(int n, int t, double alpha, double beta);
double beta_binomial_lpmf(const BernoulliBetaModel& model, int t);
/// Supremum over all Q, attained at the point mass at x̄ = t / n (0 ln 0 = 0).
double sup_ratio(const BernoulliBetaModel& model);
double beta_ratio_direction(const BernoulliBetaModel& model, double alpha1, double beta1);
DiscreteCurve predictive_curve(const BernoulliBetaModel& model);
/// P(T >= t) under the prior predictive.
double upper_tail(const BernoulliBetaModel& model);

// Location-scale normal.

/// Prior predictive of s²: (beta/alpha) F(n − 1, 2 alpha).
ScaledFCurve s2_curve(const LocationScaleModel& model, double alpha, double beta);
ScaledFCurve s2_curve(const LocationScaleModel& model);
double ln_s2_density(const LocationScaleModel& model, double alpha, double beta);
/// Ratio of the s² predictive densities under gamma_rate(alpha1, beta1) and the base prior.
double s2_predictive_ratio(const LocationScaleModel& model, double alpha1, double beta1);
/// Relative belief ratio of σ² = s² given s² alone; the worst case over marginal directions.
double rb1_s2_max(const LocationScaleModel& model);

/// Scale² of the conditional predictive of x̄ given s², x̄ ~ μ + σ̃ t_ν with
/// ν = n + 2α − 1.
///   exact:     (nτ² + 1)(2β + (n − 1)s²) / (n ν)
///   published: {τ²(nτ² + 1)(2β + (n − 1)s²) + 1} / (nτ² ν)
/// The two agree only to first order; the published form reproduces the
/// tabulated location-perturbation ratios, the exact form is the true
/// conditional density.
enum class SigmaTildeConvention { exact, published };

double sigma_tilde_sq(const LocationScaleModel& model, double tau_sq, double alpha, double beta,
                      SigmaTildeConvention convention);
StudentTCurve xbar_curve(const LocationScaleModel& model, SigmaTildeConvention convention);
double ln_xbar_cond_density(const LocationScaleModel& model, double mu, double tau_sq, double alpha, double beta,
                            SigmaTildeConvention convention);
/// Ratio of the conditional predictives of x̄ given s² under μ | σ² ~ N(mu1, tau1_sq σ²)
/// and under the base conditional prior.
double xbar_cond_predictive_ratio(const LocationScaleModel& model, double mu1, double tau1_sq,
                                  SigmaTildeConvention convention);

/// log of the joint prior predictive density of (x̄, s²) under
/// μ | σ² ~ N(mu, tau_sq σ²), σ⁻² ~ gamma_rate(alpha, beta).
double ln_joint_density(const LocationScaleModel& model, double mu, double tau_sq, double alpha, double beta);

/// RB((x̄, σ²) | x): the largest relative belief ratio of θ = (μ, σ²) at fixed σ².
double rb_joint(const LocationScaleModel& model, double sigma_sq);
/// ∫ RB((x̄, σ²) | x) Π₁(dσ⁻²) in closed form.
double integrated_worst_case(const LocationScaleModel& model);

// Grid export.

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t cells = 1;

    void validate() const;
};

struct GridExport {
    ParamGrid grid;
    std::vector<double> cond_predictive;
    XiGroups groups;        // level sets of the second coordinate on two-axis grids
    double coverage = 1.0;  // prior mass inside the axes before renormalizing

    BeliefState state() const { return BeliefState(grid, cond_predictive); }
};

/// Cells of ψ = μ with m(x̄ | cell) averaged against the prior over each cell.
/// Throws std::invalid_argument when the axis holds less than 1 − 1e-6 of the prior.
GridExport grid_export(const LocationNormalModel& model, const Axis& mu_axis);
/// Cells of ψ = θ.
GridExport grid_export(const BernoulliBetaModel& model, const Axis& theta_axis);
/// Cells of ψ = σ², with m(x̄, s² | cell).
GridExport grid_export(const LocationScaleModel& model, const Axis& sigma_sq_axis);
/// Cells of θ = (μ, λ = σ⁻²) in μ-major order, grouped by λ cell.
GridExport grid_export(const LocationScaleModel& model, const Axis& mu_axis, const Axis& lambda_axis);

}  // namespace relbelief
