#include "relbelief/belief.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "relbelief/numerics.hpp"

namespace relbelief {

namespace {

constexpr double kMassTolerance = 1e-12;

}  // namespace

std::string to_string(const CellLabel& label) {
    if (const auto* name = std::get_if<std::string>(&label)) return *name;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(label));
    return std::string(buf, res.ptr);
}

ParamGrid::ParamGrid(std::vector<CellLabel> labels, std::vector<double> prior_mass)
    : labels_(std::move(labels)), prior_mass_(std::move(prior_mass)) {
    if (labels_.empty()) throw std::invalid_argument("ParamGrid: grid must have at least one cell");
    if (labels_.size() != prior_mass_.size())
        throw std::invalid_argument("ParamGrid: labels and prior masses differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < prior_mass_.size(); ++i) {
        const double p = prior_mass_[i];
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("ParamGrid: prior mass of cell " + to_string(labels_[i]) +
                                        " must be positive and finite");
        total += p;
    }
    if (std::fabs(total - 1.0) > kMassTolerance)
        throw std::invalid_argument("ParamGrid: prior masses must sum to 1");
    std::set<CellLabel> seen;
    for (const auto& l : labels_) {
        if (const auto* v = std::get_if<double>(&l); v && !std::isfinite(*v))
            throw std::invalid_argument("ParamGrid: numeric labels must be finite");
        if (!seen.insert(l).second) throw std::invalid_argument("ParamGrid: duplicate label " + to_string(l));
    }
}

ParamGrid ParamGrid::from_weights(std::vector<CellLabel> labels, std::span<const double> weights) {
    if (labels.size() != weights.size())
        throw std::invalid_argument("ParamGrid: labels and weights differ in length");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("ParamGrid: weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("ParamGrid: all weights are zero");
    std::vector<CellLabel> kept_labels;
    std::vector<double> kept;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) {
            kept_labels.push_back(std::move(labels[i]));
            kept.push_back(weights[i] / total);
        }
    }
    return ParamGrid(std::move(kept_labels), std::move(kept));
}

std::size_t ParamGrid::index_of(const CellLabel& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("unknown cell label " + to_string(label));
    return static_cast<std::size_t>(it - labels_.begin());
}

BeliefState::BeliefState(ParamGrid grid, std::vector<double> cond_predictive)
    : grid_(std::move(grid)), cond_predictive_(std::move(cond_predictive)) {
    if (cond_predictive_.size() != grid_.size())
        throw std::invalid_argument("BeliefState: conditional predictive length does not match the grid");
    const auto prior = grid_.prior_mass();
    double m = 0.0;
    for (std::size_t i = 0; i < cond_predictive_.size(); ++i) {
        const double c = cond_predictive_[i];
        if (c < 0.0 || !std::isfinite(c))
            throw std::invalid_argument("BeliefState: conditional predictive values must be nonnegative and finite");
        m += prior[i] * c;
    }
    if (!(m > 0.0)) throw std::invalid_argument("BeliefState: data have zero probability under every cell");
    prior_predictive_ = m;
    rb_.resize(size());
    posterior_mass_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
        rb_[i] = cond_predictive_[i] / m;
        posterior_mass_[i] = prior[i] * rb_[i];
    }
    max_rb_ = *std::max_element(rb_.begin(), rb_.end());
}

BeliefState build_belief_state(ParamGrid grid, std::vector<double> cond_predictive) {
    return BeliefState(std::move(grid), std::move(cond_predictive));
}

std::size_t rb_estimate(const BeliefState& state) { return numerics::argmax_first(state.rb()); }

bool CredibleRegion::contains(std::size_t cell) const {
    return std::binary_search(cells.begin(), cells.end(), cell);
}

CredibleRegion credible_region(const BeliefState& state, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("credible_region: gamma must lie in [0, 1]");
    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    std::vector<std::size_t> order(state.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rb[a] < rb[b]; });

    // Walk tie-blocks of ascending RB, accumulating Π(RB <= k | x).
    const double target = 1.0 - gamma;
    double cutoff = rb[order.back()];
    double below = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        const double k = rb[order[i]];
        while (j < order.size() && rb[order[j]] == k) below += post[order[j++]];
        if (below >= target) {
            cutoff = k;
            break;
        }
        i = j;
    }

    CredibleRegion region;
    region.cutoff = cutoff;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (rb[i] >= cutoff) region.cells.push_back(i);
    region.content = posterior_content(state, region.cells);
    return region;
}

EvidenceReport strength(const BeliefState& state, std::size_t psi0) {
    if (psi0 >= state.size()) throw std::out_of_range("strength: cell index out of range");
    const auto rb = state.rb();
    const auto post = state.posterior_mass();
    EvidenceReport report;
    report.psi0 = psi0;
    report.rb0 = rb[psi0];
    report.upper_bound = rb[psi0];
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (rb[i] <= report.rb0) report.strength += post[i];
        if (rb[i] == report.rb0) report.lower_bound += post[i];
    }
    return report;
}

EvidenceReport strength(const BeliefState& state, const CellLabel& psi0) {
    return strength(state, state.grid().index_of(psi0));
}

double posterior_content(const BeliefState& state, std::span<const std::size_t> cells) {
    const auto post = state.posterior_mass();
    double sum = 0.0;
    for (std::size_t c : cells) sum += post[c];
    return sum;
}

ParamGrid discretize(std::span<const double> points, std::span<const double> prior_density, double psi0,
                     double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::domain_error("discretize: delta must be positive");
    if (points.size() < 2) throw std::invalid_argument("discretize: need at least two points");
    if (points.size() != prior_density.size())
        throw std::invalid_argument("discretize: points and density differ in length");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i] > points[i - 1]))
            throw std::invalid_argument("discretize: points must be strictly increasing");
        if (prior_density[i] < 0.0 || !std::isfinite(prior_density[i]))
            throw std::invalid_argument("discretize: density must be nonnegative and finite");
    }

    auto bin_of = [&](double u) { return static_cast<long long>(std::floor((u - psi0) / delta + 0.5)); };
    auto upper_edge = [&](long long bin) { return psi0 + (static_cast<double>(bin) + 0.5) * delta; };

    const long long first = bin_of(points.front());
    const long long last = bin_of(points.back());
    std::vector<double> mass(static_cast<std::size_t>(last - first + 1), 0.0);

    // Exact integral of the linear interpolant, split at bin edges.
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const double x0 = points[j];
        const double x1 = points[j + 1];
        const double f0 = prior_density[j];
        const double slope = (prior_density[j + 1] - f0) / (x1 - x0);
        auto density_at = [&](double u) { return f0 + slope * (u - x0); };
        double a = x0;
        long long bin = bin_of(a);
        while (a < x1) {
            const double b = std::min(x1, upper_edge(bin));
            if (b > a) mass[static_cast<std::size_t>(bin - first)] += 0.5 * (density_at(a) + density_at(b)) * (b - a);
            a = std::max(b, a);
            ++bin;
            if (bin > last) break;
        }
    }

    std::vector<CellLabel> labels;
    labels.reserve(mass.size());
    for (long long bin = first; bin <= last; ++bin) labels.emplace_back(psi0 + static_cast<double>(bin) * delta);
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0)) throw std::invalid_argument("discretize: prior density has no mass on the points");
    return ParamGrid::from_weights(std::move(labels), mass);
}

}  // namespace relbelief
