#include "relbelief/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relbelief/numerics.hpp"

namespace relbelief {

namespace {

constexpr double kDiscreteTolerance = 1e-10;
constexpr double kAdmissibleTolerance = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_discrete(const DiscreteCurve& c) {
    if (c.observed >= c.mass.size()) throw std::invalid_argument("tail_probability: observation outside the support");
    double total = 0.0;
    for (double m : c.mass) {
        if (m < 0.0 || !std::isfinite(m)) throw std::invalid_argument("tail_probability: masses must be nonnegative");
        total += m;
    }
    if (std::fabs(total - 1.0) > kDiscreteTolerance)
        throw std::invalid_argument("tail_probability: masses must sum to 1");
}

double discrete_tail(const DiscreteCurve& c) {
    check_discrete(c);
    const double level = c.mass[c.observed];
    double tail = 0.0;
    for (double m : c.mass)
        if (m <= level) tail += m;
    return std::min(tail, 1.0);
}

double scaled_f_tail(const ScaledFCurve& c) {
    if (!(c.scale > 0.0 && c.d1 > 0.0 && c.d2 > 0.0))
        throw std::invalid_argument("tail_probability: scaled F parameters must be positive");
    if (!(c.observed > 0.0) || !std::isfinite(c.observed))
        throw std::invalid_argument("tail_probability: observation outside the support");
    const double x = c.observed / c.scale;
    // For d1 <= 2 the density decreases on (0, ∞): the tail is the upper tail.
    if (c.d1 <= 2.0) return numerics::f_sf(c.d1, c.d2, x);
    const double mode = (c.d1 - 2.0) / c.d1 * c.d2 / (c.d2 + 2.0);
    if (x == mode) return 1.0;
    const double level = numerics::ln_f_pdf(x, c.d1, c.d2);
    auto excess = [&](double u) { return numerics::ln_f_pdf(u, c.d1, c.d2) - level; };
    if (x < mode) {
        double hi = 2.0 * mode + 1.0;
        while (excess(hi) > 0.0) hi *= 2.0;
        const double other = numerics::bisect(excess, mode, hi);
        return numerics::f_cdf(c.d1, c.d2, x) + numerics::f_sf(c.d1, c.d2, other);
    }
    double lo = mode / 2.0;
    while (lo > 0.0 && excess(lo) > 0.0) lo /= 2.0;
    const double other = lo > 0.0 ? numerics::bisect(excess, lo, mode) : 0.0;
    return numerics::f_cdf(c.d1, c.d2, other) + numerics::f_sf(c.d1, c.d2, x);
}

}  // namespace

double predictive_log_density(const PredictiveCurve& curve, double t) {
    return std::visit(
        Overloaded{
            [&](const DiscreteCurve& c) {
                const auto i = static_cast<std::size_t>(t);
                if (t < 0.0 || static_cast<double>(i) != t || i >= c.mass.size())
                    throw std::invalid_argument("predictive_log_density: point outside the support");
                return std::log(c.mass[i]);
            },
            [&](const NormalCurve& c) { return numerics::ln_normal_pdf(t, c.mean, c.variance); },
            [&](const StudentTCurve& c) { return numerics::ln_student_t_pdf(t, c.location, c.scale, c.nu); },
            [&](const ScaledFCurve& c) { return numerics::ln_f_pdf(t / c.scale, c.d1, c.d2) - std::log(c.scale); },
        },
        curve);
}

double tail_probability(const PredictiveCurve& curve) {
    return std::visit(Overloaded{
                          [](const DiscreteCurve& c) { return discrete_tail(c); },
                          [](const NormalCurve& c) {
                              if (!(c.variance > 0.0)) throw std::invalid_argument("tail_probability: variance must be positive");
                              const double z = std::fabs(c.observed - c.mean) / std::sqrt(c.variance);
                              return std::min(1.0, 2.0 * numerics::normal_sf(z));
                          },
                          [](const StudentTCurve& c) {
                              if (!(c.scale > 0.0 && c.nu > 0.0))
                                  throw std::invalid_argument("tail_probability: t scale and nu must be positive");
                              const double z = std::fabs(c.observed - c.location) / c.scale;
                              return std::min(1.0, 2.0 * numerics::student_t_sf(c.nu, z));
                          },
                          [](const ScaledFCurve& c) { return scaled_f_tail(c); },
                      },
                      curve);
}

double hierarchical_tail_pi1(const PredictiveCurve& v_curve) { return tail_probability(v_curve); }

double hierarchical_tail_pi2(const PredictiveCurve& conditional_curve) { return tail_probability(conditional_curve); }

double worst_case_ratio(const BeliefState& state) { return state.max_rb(); }

Factorization factorization_ratio(double joint_num, double joint_den, double cond_num, double cond_den,
                                  double marg_num, double marg_den) {
    for (double v : {joint_num, joint_den, cond_num, cond_den, marg_num, marg_den})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("factorization_ratio: densities must be positive and finite");
    Factorization f;
    f.lhs = joint_num / joint_den;
    f.rhs = (cond_num / cond_den) * (marg_num / marg_den);
    f.residual = std::fabs(f.lhs - f.rhs);
    return f;
}

namespace {

void check_partition(const BeliefState& state, const XiGroups& groups) {
    std::vector<int> seen(state.size(), 0);
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("conditional_bound: empty group");
        for (std::size_t i : g) {
            if (i >= state.size()) throw std::invalid_argument("conditional_bound: cell index out of range");
            ++seen[i];
        }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; }))
        throw std::invalid_argument("conditional_bound: groups must partition the grid");
}

}  // namespace

double conditional_bound(const BeliefState& state, const XiGroups& groups) {
    check_partition(state, groups);
    const auto rb = state.rb();
    const auto prior = state.prior_mass();
    double bound = 0.0;
    for (const auto& g : groups) {
        double weight = 0.0;
        double best = 0.0;
        for (std::size_t i : g) {
            weight += prior[i];
            best = std::max(best, rb[i]);
        }
        bound += weight * best;
    }
    return bound;
}

double xi_marginal_distance(const BeliefState& state, const XiGroups& groups, const Direction& q) {
    check_partition(state, groups);
    if (q.kind() != DirectionKind::marginal)
        throw std::invalid_argument("xi_marginal_distance: needs a direction on the theta grid");
    q.check_aligned(state);
    const auto prior = state.prior_mass();
    const auto mass = q.mass();
    double tv = 0.0;
    for (const auto& g : groups) {
        double diff = 0.0;
        for (std::size_t i : g) diff += mass[i] - prior[i];
        tv += std::fabs(diff);
    }
    return 0.5 * tv;
}

double admissible_ratio(const BeliefState& state, const XiGroups& groups, const Direction& q) {
    if (xi_marginal_distance(state, groups, q) > kAdmissibleTolerance)
        throw std::invalid_argument("admissible_ratio: direction changes the Xi marginal");
    return m_q_over_m(state, q);
}

}  // namespace relbelief
