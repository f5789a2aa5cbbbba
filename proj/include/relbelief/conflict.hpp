#pragma once

// Prior-data conflict checks: tail probabilities of the prior predictive
// density at the observed statistic, and the worst-case sensitivity ratios
// they are tied to.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "relbelief/belief.hpp"
#include "relbelief/contamination.hpp"

namespace relbelief {

/// Probability masses on an ordered support; `observed` indexes the support.
struct DiscreteCurve {
    std::vector<double> mass;
    std::size_t observed = 0;
};

struct NormalCurve {
    double mean = 0.0;
    double variance = 1.0;
    double observed = 0.0;
};

/// location + scale · t_nu
struct StudentTCurve {
    double location = 0.0;
    double scale = 1.0;
    double nu = 1.0;
    double observed = 0.0;
};

/// scale · F(d1, d2)
struct ScaledFCurve {
    double scale = 1.0;
    double d1 = 1.0;
    double d2 = 1.0;
    double observed = 1.0;
};

using PredictiveCurve = std::variant<DiscreteCurve, NormalCurve, StudentTCurve, ScaledFCurve>;

enum class ConflictComponent { whole_prior, marginal_pi1, conditional_pi2 };

struct ConflictReport {
    double tail_probability = 0.0;
    double worst_case_ratio = 0.0;
    ConflictComponent component = ConflictComponent::whole_prior;
};

/// Log predictive density (or log mass) of the curve at a support point.
double predictive_log_density(const PredictiveCurve& curve, double t);

/// M_T(m_T(t) <= m_T(observed)): the predictive probability of statistic
/// values no more probable than the one observed.
///
/// Discrete curves compare masses exactly. Normal and Student-t curves use
/// the two-sided tail. The scaled F curve locates the second point of equal
/// density by bisection on the log density and adds both tails.
/// Throws std::invalid_argument when the observation lies outside the support
/// or discrete masses do not sum to 1 within 1e-10.
double tail_probability(const PredictiveCurve& curve);

/// The check of the marginal prior π1, applied to the predictive of V(T).
double hierarchical_tail_pi1(const PredictiveCurve& v_curve);

/// The check of π2(· | θ1), applied to the conditional predictive of T given V(T(x)).
double hierarchical_tail_pi2(const PredictiveCurve& conditional_curve);

/// sup over Q of m_Q(x)/m(x) on a grid: the largest relative belief ratio.
double worst_case_ratio(const BeliefState& state);

struct Factorization {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

/// Joint ratio against the product of the conditional and marginal factors.
/// Throws std::invalid_argument unless every argument is positive and finite.
Factorization factorization_ratio(double joint_num, double joint_den, double cond_num, double cond_den,
                                  double marg_num, double marg_den);

/// Partition of a θ-level grid into the level sets of ς = Ξ(θ).
using XiGroups = std::vector<std::vector<std::size_t>>;

/// Σ_ς Π_Ξ(ς) max_{θ : Ξ(θ) = ς} RB(θ | x), the bound on m_Q(x)/m(x) over
/// directions that keep the Ξ marginal. Throws std::invalid_argument unless
/// the groups partition the grid.
double conditional_bound(const BeliefState& state, const XiGroups& groups);

/// Total variation between the Ξ marginals of the prior and of a marginal direction.
double xi_marginal_distance(const BeliefState& state, const XiGroups& groups, const Direction& q);

/// m_Q(x)/m(x) for a direction that must share the Ξ marginal with the prior.
/// Throws std::invalid_argument when the marginals differ by more than 1e-10
/// in total variation.
double admissible_ratio(const BeliefState& state, const XiGroups& groups, const Direction& q);

}  // namespace relbelief
