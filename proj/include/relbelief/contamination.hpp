#pragma once

// ε-contamination analysis of relative belief inferences: Huber bounds on
// posterior content, robustness of credible regions, exact contaminated
// paths and their Gâteaux derivatives at ε = 0.

#include <cstddef>
#include <span>
#include <vector>

#include "relbelief/belief.hpp"

namespace relbelief {

enum class DirectionKind {
    marginal,     // Q replaces the marginal prior of ψ; m(x | ψ) is inherited
    conditional,  // Q replaces the conditional prior given ψ; the marginal stays Π_Ψ
    full,         // Q supplies both its own marginal and conditional predictives
};

/// A contaminating measure Q on the grid.
class Direction {
public:
    static Direction marginal(std::vector<double> mass);
    static Direction conditional(std::vector<double> cond_predictive_q);
    static Direction full(std::vector<double> mass, std::vector<double> cond_predictive_q);

    DirectionKind kind() const noexcept { return kind_; }
    /// Q's marginal on the grid; empty for the conditional kind.
    std::span<const double> mass() const noexcept { return mass_; }
    /// m_Q(x | ψ_i); empty for the marginal kind.
    std::span<const double> cond_predictive_q() const noexcept { return cond_q_; }

    /// Throws std::invalid_argument when the direction does not fit the grid.
    void check_aligned(const BeliefState& state) const;

private:
    Direction(DirectionKind kind, std::vector<double> mass, std::vector<double> cond_q);

    DirectionKind kind_;
    std::vector<double> mass_;
    std::vector<double> cond_q_;
};

/// m_Q(x) = Σ w_i m_Q(x | ψ_i) with w the direction's marginal on Ψ.
double q_prior_predictive(const BeliefState& state, const Direction& q);

/// m_Q(x) / m(x). Over point-mass marginal directions its supremum is max RB.
double m_q_over_m(const BeliefState& state, const Direction& q);

struct HuberBounds {
    double content = 0.0;  // Π(A | x)
    double upper = 0.0;
    double lower = 0.0;
    double delta = 0.0;
    double r_A = 0.0;   // sup of RB over A
    double r_Ac = 0.0;  // sup of RB over the complement
};

/// Upper and lower posterior content of A over all ε-contaminations of the
/// marginal prior. A must be a nonempty proper subset; 0 <= ε < 1.
HuberBounds huber_bounds(const BeliefState& state, std::span<const std::size_t> cells, double epsilon);

/// Closed-form spread δ of the γ-relative belief region, written through the
/// largest ratio RB(ψ(x) | x), the region's content and the largest ratio
/// outside the region. Throws std::domain_error when the region is the whole grid.
double delta_credible(const BeliefState& state, double gamma, double epsilon);

enum class ContentConstraint {
    at_most_region,  // Π(A | x) <= γ*(x) and r(A) = r(Ψ)
    equal_to_gamma,  // Π(A | x) = γ against the set {RB >= c} of content exactly γ >= 1/2
};

struct OptimalityResult {
    bool degenerate = false;  // region is the whole grid: no comparison made
    double region_delta = 0.0;
    double min_delta = 0.0;
    std::vector<std::size_t> argmin;  // lexicographically smallest minimizer
    std::size_t admissible = 0;       // number of sets meeting the constraint
};

/// Exhaustive search over all nonempty proper subsets of a grid with at most
/// 20 cells for the set minimizing δ under the chosen content constraint.
/// The subset space may be split across `workers` threads; the result does
/// not depend on the split.
OptimalityResult optimality_search(const BeliefState& state, double gamma, double epsilon,
                                   ContentConstraint constraint = ContentConstraint::at_most_region,
                                   unsigned workers = 1);

/// Relative belief ratio at ψ under the contaminated prior, 0 <= ε < 1.
double contaminated_rb(const BeliefState& state, std::size_t psi, const Direction& q, double epsilon);

/// Gâteaux derivative of RB(ψ | x) in the direction Q.
double gateaux_rb(const BeliefState& state, std::size_t psi, const Direction& q);

/// |1 − m_Q(x)/m(x)|: first-order relative change of every ratio (marginal kind).
double relative_sensitivity_rb(const BeliefState& state, const Direction& q);

/// Derivative of the strength Π(RB <= RB(ψ0) | x) (marginal kind).
double gateaux_strength_marginal(const BeliefState& state, std::size_t psi0, const Direction& q);

/// Derivative of the posterior mass at ψ0.
double gateaux_map(const BeliefState& state, std::size_t psi0, const Direction& q);

/// (m_Q/m) |1 − q(ψ0 | x)/π(ψ0 | x)|: first-order relative change of the posterior mass at ψ0.
double relative_sensitivity_map(const BeliefState& state, std::size_t psi0, const Direction& q);

/// Derivative of the strength under a conditional-prior perturbation. On a
/// grid the ratios have a discrete distribution, so the derivative is zero.
/// Throws std::domain_error when ψ0 shares its ratio with a cell the direction
/// separates from it (the strength jumps and has no derivative).
double gateaux_strength_conditional(const BeliefState& state, std::size_t psi0, const Direction& q);

/// Largest ε such that the ordering of the contaminated ratios against ψ0
/// (and hence the conditional-perturbation strength) is unchanged for all
/// |ε| below it. Returns 1 when the ordering never changes.
double conditional_strength_threshold(const BeliefState& state, std::size_t psi0, const Direction& q);

/// Contaminated quantities as analytic functions of ε on (−1, 1). Negative ε
/// is a signed perturbation; it is allowed so that derivatives at 0 can be
/// checked with central differences.
namespace path {

/// ε_x = ε m_Q / ((1 − ε) m + ε m_Q).
double contamination_weight(const BeliefState& state, const Direction& q, double epsilon);
double rb(const BeliefState& state, std::size_t psi, const Direction& q, double epsilon);
double posterior_mass(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon);
/// Π_ε(RB_ε <= RB_ε(ψ0) | x) for a marginal direction.
double strength_marginal(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon);
/// Π(RB_ε <= RB_ε(ψ0) | x) under the base posterior for a conditional direction.
double strength_conditional(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon);

}  // namespace path

}  // namespace relbelief
