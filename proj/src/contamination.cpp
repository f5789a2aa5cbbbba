#include "relbelief/contamination.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace relbelief {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr std::size_t kMaxSearchCells = 20;

void check_probability_vector(const std::vector<double>& mass, const char* who) {
    double total = 0.0;
    for (double p : mass) {
        if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument(std::string(who) + ": masses must be nonnegative");
        total += p;
    }
    if (std::fabs(total - 1.0) > kMassTolerance) throw std::invalid_argument(std::string(who) + ": masses must sum to 1");
}

void check_nonnegative(const std::vector<double>& values, const char* who) {
    for (double v : values)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": conditional predictive values must be nonnegative");
}

void check_epsilon_unit(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in [0, 1)");
}

void check_epsilon_signed(double epsilon) {
    if (!(epsilon > -1.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (-1, 1)");
}

void check_cell(const BeliefState& state, std::size_t i) {
    if (i >= state.size()) throw std::out_of_range("cell index out of range");
}

// The direction as a prior weight w on the grid and a conditional predictive
// c_Q, so that m_Q = Σ w_i c_Q,i and Q(ψ_i | x) = w_i c_Q,i / m_Q.
struct Resolved {
    std::span<const double> weight;
    std::span<const double> cond;
    double m_q = 0.0;
};

Resolved resolve(const BeliefState& state, const Direction& q) {
    q.check_aligned(state);
    Resolved r;
    r.weight = q.kind() == DirectionKind::conditional ? state.prior_mass() : q.mass();
    r.cond = q.kind() == DirectionKind::marginal ? state.cond_predictive() : q.cond_predictive_q();
    for (std::size_t i = 0; i < state.size(); ++i) r.m_q += r.weight[i] * r.cond[i];
    return r;
}

// Same association as the base posterior prior_i * (c_i / m), so Q = Π reproduces it bit for bit.
double q_posterior(const Resolved& r, std::size_t i) { return r.weight[i] * (r.cond[i] / r.m_q); }

double rb_q(const Resolved& r, std::size_t i) { return r.cond[i] / r.m_q; }

double weight_from_ratio(double ratio, double epsilon) {
    const double denom = (1.0 - epsilon) + epsilon * ratio;
    if (!(denom > 0.0)) throw std::domain_error("contaminated prior predictive is not positive");
    return epsilon * ratio / denom;
}

// Content bounds from p = Π(A | x) and the two suprema.
HuberBounds bounds_from(double p, double r_a, double r_ac, double epsilon) {
    const double es = epsilon / (1.0 - epsilon);
    HuberBounds b;
    b.content = p;
    b.r_A = r_a;
    b.r_Ac = r_ac;
    b.upper = (p + es * r_a) / (1.0 + es * r_a);
    b.lower = p / (1.0 + es * r_ac);
    b.delta = p * es * (r_ac - r_a) / ((1.0 + es * r_a) * (1.0 + es * r_ac)) + es * r_a / (1.0 + es * r_a);
    return b;
}

struct SearchBest {
    double delta = std::numeric_limits<double>::infinity();
    std::uint32_t mask = 0;
    std::size_t admissible = 0;
};

std::vector<std::size_t> cells_of(std::uint32_t mask) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) cells.push_back(i);
    return cells;
}

bool lex_less(std::uint32_t a, std::uint32_t b) {
    const auto ca = cells_of(a);
    const auto cb = cells_of(b);
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

void offer(SearchBest& best, double delta, std::uint32_t mask) {
    if (delta < best.delta || (delta == best.delta && lex_less(mask, best.mask))) {
        best.delta = delta;
        best.mask = mask;
    }
}

}  // namespace

Direction::Direction(DirectionKind kind, std::vector<double> mass, std::vector<double> cond_q)
    : kind_(kind), mass_(std::move(mass)), cond_q_(std::move(cond_q)) {}

Direction Direction::marginal(std::vector<double> mass) {
    check_probability_vector(mass, "Direction::marginal");
    return Direction(DirectionKind::marginal, std::move(mass), {});
}

Direction Direction::conditional(std::vector<double> cond_predictive_q) {
    check_nonnegative(cond_predictive_q, "Direction::conditional");
    return Direction(DirectionKind::conditional, {}, std::move(cond_predictive_q));
}

Direction Direction::full(std::vector<double> mass, std::vector<double> cond_predictive_q) {
    check_probability_vector(mass, "Direction::full");
    check_nonnegative(cond_predictive_q, "Direction::full");
    if (mass.size() != cond_predictive_q.size())
        throw std::invalid_argument("Direction::full: mass and conditional predictive differ in length");
    return Direction(DirectionKind::full, std::move(mass), std::move(cond_predictive_q));
}

void Direction::check_aligned(const BeliefState& state) const {
    const std::size_t n = state.size();
    const bool ok = (kind_ == DirectionKind::conditional || mass_.size() == n) &&
                    (kind_ == DirectionKind::marginal || cond_q_.size() == n);
    if (!ok) throw std::invalid_argument("direction length does not match the grid");
}

double q_prior_predictive(const BeliefState& state, const Direction& q) { return resolve(state, q).m_q; }

double m_q_over_m(const BeliefState& state, const Direction& q) {
    return q_prior_predictive(state, q) / state.prior_predictive();
}

HuberBounds huber_bounds(const BeliefState& state, std::span<const std::size_t> cells, double epsilon) {
    check_epsilon_unit(epsilon);
    std::vector<bool> in(state.size(), false);
    for (std::size_t c : cells) {
        check_cell(state, c);
        in[c] = true;
    }
    const auto count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
    if (count == 0 || count == state.size())
        throw std::invalid_argument("huber_bounds: set must be a nonempty proper subset of the grid");
    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    double p = 0.0;
    double r_a = 0.0;
    double r_ac = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (in[i]) {
            p += post[i];
            r_a = std::max(r_a, rb[i]);
        } else {
            r_ac = std::max(r_ac, rb[i]);
        }
    }
    return bounds_from(p, r_a, r_ac, epsilon);
}

double delta_credible(const BeliefState& state, double gamma, double epsilon) {
    check_epsilon_unit(epsilon);
    const CredibleRegion region = credible_region(state, gamma);
    if (region.cells.empty() || region.cells.size() == state.size())
        throw std::domain_error("delta_credible: credible region is the whole grid");
    const auto rb = state.rb();
    double s = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (!region.contains(i)) s = std::max(s, rb[i]);
    const double es = epsilon / (1.0 - epsilon);
    const double big_r = state.max_rb();
    const double p = region.content;
    return es * big_r / (1.0 + es * big_r) * (1.0 - (p / big_r) * (big_r - s) / (1.0 + es * s));
}

namespace {

// The set {RB >= c} whose posterior content is γ. The γ-region itself never
// has content exactly γ unless it is the whole grid, because the cutoff rule
// admits the next level down once Π(RB < c | x) reaches 1 − γ.
CredibleRegion exact_content_region(const BeliefState& state, double gamma) {
    if (!(gamma >= 0.5 && gamma <= 1.0))
        throw std::domain_error("optimality_search: equal-content mode needs gamma in [1/2, 1]");
    const auto rb = state.rb();
    std::vector<double> levels(rb.begin(), rb.end());
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double c : levels) {
        CredibleRegion region;
        region.cutoff = c;
        for (std::size_t i = 0; i < state.size(); ++i)
            if (rb[i] >= c) region.cells.push_back(i);
        region.content = posterior_content(state, region.cells);
        if (std::fabs(region.content - gamma) <= kMassTolerance) return region;
        if (region.content > gamma) break;
    }
    throw std::domain_error("optimality_search: no region {RB >= c} has content gamma");
}

}  // namespace

OptimalityResult optimality_search(const BeliefState& state, double gamma, double epsilon,
                                   ContentConstraint constraint, unsigned workers) {
    check_epsilon_unit(epsilon);
    const std::size_t n = state.size();
    if (n > kMaxSearchCells) throw std::invalid_argument("optimality_search: grid has more than 20 cells");

    OptimalityResult result;
    const CredibleRegion region = constraint == ContentConstraint::equal_to_gamma
                                      ? exact_content_region(state, gamma)
                                      : credible_region(state, gamma);
    if (region.cells.size() == n) {
        result.degenerate = true;
        return result;
    }
    result.region_delta = huber_bounds(state, region.cells, epsilon).delta;

    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    const double big_r = state.max_rb();
    const double gamma_star = region.content;
    const std::uint32_t full = (std::uint32_t{1} << n) - 1u;

    auto scan = [&](std::uint32_t from, std::uint32_t to) {
        SearchBest best;
        for (std::uint32_t mask = from; mask < to; ++mask) {
            double p = 0.0;
            double r_a = 0.0;
            double r_ac = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1u) {
                    p += post[i];
                    r_a = std::max(r_a, rb[i]);
                } else {
                    r_ac = std::max(r_ac, rb[i]);
                }
            }
            const bool ok = constraint == ContentConstraint::at_most_region
                                ? (p <= gamma_star + kMassTolerance && r_a == big_r)
                                : std::fabs(p - gamma) <= kMassTolerance;
            if (!ok) continue;
            ++best.admissible;
            offer(best, bounds_from(p, r_a, r_ac, epsilon).delta, mask);
        }
        return best;
    };

    const unsigned threads = std::max(1u, std::min(workers, 64u));
    std::vector<SearchBest> partial(threads);
    const std::uint32_t total = full - 1u;  // masks 1 .. full−1
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint32_t from = 1u + static_cast<std::uint32_t>(std::uint64_t{total} * t / threads);
            const std::uint32_t to = 1u + static_cast<std::uint32_t>(std::uint64_t{total} * (t + 1) / threads);
            if (threads == 1) {
                partial[t] = scan(from, to);
            } else {
                pool.emplace_back([&, t, from, to] { partial[t] = scan(from, to); });
            }
        }
    }
    SearchBest best;
    for (const auto& part : partial) {
        best.admissible += part.admissible;
        if (part.admissible > 0) offer(best, part.delta, part.mask);
    }
    result.admissible = best.admissible;
    if (best.admissible > 0) {
        result.min_delta = best.delta;
        result.argmin = cells_of(best.mask);
    }
    return result;
}

double contaminated_rb(const BeliefState& state, std::size_t psi, const Direction& q, double epsilon) {
    check_epsilon_unit(epsilon);
    return path::rb(state, psi, q, epsilon);
}

double gateaux_rb(const BeliefState& state, std::size_t psi, const Direction& q) {
    check_cell(state, psi);
    const Resolved r = resolve(state, q);
    const double ratio = r.m_q / state.prior_predictive();
    const double rb = state.rb()[psi];
    if (q.kind() == DirectionKind::marginal) return rb * (1.0 - ratio);
    if (r.m_q == 0.0) return -ratio * rb;
    return ratio * (rb_q(r, psi) - rb);
}

double relative_sensitivity_rb(const BeliefState& state, const Direction& q) {
    if (q.kind() != DirectionKind::marginal) throw std::invalid_argument("relative_sensitivity_rb: needs a marginal direction");
    return std::fabs(1.0 - m_q_over_m(state, q));
}

double gateaux_strength_marginal(const BeliefState& state, std::size_t psi0, const Direction& q) {
    if (q.kind() != DirectionKind::marginal)
        throw std::invalid_argument("gateaux_strength_marginal: needs a marginal direction");
    check_cell(state, psi0);
    const Resolved r = resolve(state, q);
    const double ratio = r.m_q / state.prior_predictive();
    if (r.m_q == 0.0) return 0.0;
    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    double q_below = 0.0;
    double p_below = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (rb[i] <= rb[psi0]) {
            q_below += q_posterior(r, i);
            p_below += post[i];
        }
    }
    return ratio * (q_below - p_below);
}

double gateaux_map(const BeliefState& state, std::size_t psi0, const Direction& q) {
    check_cell(state, psi0);
    const Resolved r = resolve(state, q);
    if (r.m_q == 0.0) return 0.0;
    const double ratio = r.m_q / state.prior_predictive();
    return ratio * (q_posterior(r, psi0) - state.posterior_mass()[psi0]);
}

double relative_sensitivity_map(const BeliefState& state, std::size_t psi0, const Direction& q) {
    check_cell(state, psi0);
    const double post = state.posterior_mass()[psi0];
    if (!(post > 0.0)) throw std::domain_error("relative_sensitivity_map: posterior mass at psi0 is zero");
    const Resolved r = resolve(state, q);
    if (r.m_q == 0.0) return 0.0;
    const double ratio = r.m_q / state.prior_predictive();
    return ratio * std::fabs(1.0 - q_posterior(r, psi0) / post);
}

double conditional_strength_threshold(const BeliefState& state, std::size_t psi0, const Direction& q) {
    if (q.kind() != DirectionKind::conditional)
        throw std::invalid_argument("conditional_strength_threshold: needs a conditional direction");
    check_cell(state, psi0);
    const Resolved r = resolve(state, q);
    if (r.m_q == 0.0) return 1.0;
    const auto rb = state.rb();
    // With u = ε_x / (1 − ε_x) the comparison of cell i against ψ0 has the
    // sign of d0 + u dq; it is constant while |u| < |d0 / dq|.
    double u_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double d0 = rb[i] - rb[psi0];
        const double dq = rb_q(r, i) - rb_q(r, psi0);
        if (dq == 0.0) continue;
        u_min = std::min(u_min, std::fabs(d0 / dq));
    }
    if (std::isinf(u_min)) return 1.0;
    const double m = state.prior_predictive();
    return u_min * m / (r.m_q + u_min * m);
}

double gateaux_strength_conditional(const BeliefState& state, std::size_t psi0, const Direction& q) {
    if (conditional_strength_threshold(state, psi0, q) == 0.0)
        throw std::domain_error("gateaux_strength_conditional: the direction splits a tie with psi0");
    return 0.0;
}

namespace path {

double contamination_weight(const BeliefState& state, const Direction& q, double epsilon) {
    check_epsilon_signed(epsilon);
    return weight_from_ratio(m_q_over_m(state, q), epsilon);
}

double rb(const BeliefState& state, std::size_t psi, const Direction& q, double epsilon) {
    check_epsilon_signed(epsilon);
    check_cell(state, psi);
    const Resolved r = resolve(state, q);
    const double ratio = r.m_q / state.prior_predictive();
    const double base = state.rb()[psi];
    if (q.kind() == DirectionKind::marginal) {
        const double denom = 1.0 - epsilon * (1.0 - ratio);
        if (!(denom > 0.0)) throw std::domain_error("contaminated prior predictive is not positive");
        return base / denom;
    }
    const double w = weight_from_ratio(ratio, epsilon);
    if (w == 0.0) return base;
    if (r.m_q == 0.0) throw std::domain_error("direction gives the data zero probability");
    return (1.0 - w) * base + w * rb_q(r, psi);
}

double posterior_mass(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon) {
    check_epsilon_signed(epsilon);
    check_cell(state, psi0);
    const Resolved r = resolve(state, q);
    const double w = weight_from_ratio(r.m_q / state.prior_predictive(), epsilon);
    const double base = state.posterior_mass()[psi0];
    if (w == 0.0) return base;
    return (1.0 - w) * base + w * q_posterior(r, psi0);
}

double strength_marginal(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon) {
    if (q.kind() != DirectionKind::marginal) throw std::invalid_argument("strength_marginal: needs a marginal direction");
    check_epsilon_signed(epsilon);
    check_cell(state, psi0);
    const Resolved r = resolve(state, q);
    const double w = weight_from_ratio(r.m_q / state.prior_predictive(), epsilon);
    // RB_ε is a positive multiple of RB, so the set {RB_ε <= RB_ε(ψ0)} is fixed.
    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    double s = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (rb[i] > rb[psi0]) continue;
        const double qi = w == 0.0 ? 0.0 : q_posterior(r, i);
        s += (1.0 - w) * post[i] + w * qi;
    }
    return s;
}

double strength_conditional(const BeliefState& state, std::size_t psi0, const Direction& q, double epsilon) {
    if (q.kind() != DirectionKind::conditional)
        throw std::invalid_argument("strength_conditional: needs a conditional direction");
    check_epsilon_signed(epsilon);
    check_cell(state, psi0);
    std::vector<double> rb_eps(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) rb_eps[i] = rb(state, i, q, epsilon);
    const auto post = state.posterior_mass();
    double s = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (rb_eps[i] <= rb_eps[psi0]) s += post[i];
    return s;
}

}  // namespace path

}  // namespace relbelief
