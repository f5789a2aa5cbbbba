#pragma once

// Relative belief inference on a finite grid of parameter values.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace relbelief {

/// A cell is identified either by a real midpoint or by a categorical name.
using CellLabel = std::variant<double, std::string>;

std::string to_string(const CellLabel& label);

/// Discretized parameter space with strictly positive prior masses summing
/// to one (within 1e-12) and unique labels.
class ParamGrid {
public:
    ParamGrid(std::vector<CellLabel> labels, std::vector<double> prior_mass);

    /// Builds a grid from nonnegative weights, dropping zero-weight cells and
    /// renormalizing the rest.
    static ParamGrid from_weights(std::vector<CellLabel> labels, std::span<const double> weights);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<CellLabel>& labels() const noexcept { return labels_; }
    const CellLabel& label(std::size_t i) const { return labels_.at(i); }
    std::span<const double> prior_mass() const noexcept { return prior_mass_; }

    /// Throws std::out_of_range for unknown labels.
    std::size_t index_of(const CellLabel& label) const;

private:
    std::vector<CellLabel> labels_;
    std::vector<double> prior_mass_;
};

/// Prior, conditional prior predictives m(x | ψ_i), prior predictive m(x),
/// posterior and relative belief ratios for one observed data set.
///
/// The ratios are formed as m(x | ψ_i) / m(x) and the posterior as
/// prior_i * rb_i, so the Savage–Dickey identity and Σ prior_i rb_i = 1 hold
/// to rounding.
class BeliefState {
public:
    /// Throws std::invalid_argument on length mismatch, a negative or
    /// non-finite entry, or when every m(x | ψ_i) is zero.
    BeliefState(ParamGrid grid, std::vector<double> cond_predictive);

    const ParamGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    std::span<const double> prior_mass() const noexcept { return grid_.prior_mass(); }
    std::span<const double> cond_predictive() const noexcept { return cond_predictive_; }
    double prior_predictive() const noexcept { return prior_predictive_; }
    std::span<const double> posterior_mass() const noexcept { return posterior_mass_; }
    std::span<const double> rb() const noexcept { return rb_; }

    double max_rb() const noexcept { return max_rb_; }

private:
    ParamGrid grid_;
    std::vector<double> cond_predictive_;
    double prior_predictive_ = 0.0;
    std::vector<double> posterior_mass_;
    std::vector<double> rb_;
    double max_rb_ = 0.0;
};

BeliefState build_belief_state(ParamGrid grid, std::vector<double> cond_predictive);

/// Index of the cell with the largest relative belief ratio (lowest index on ties).
std::size_t rb_estimate(const BeliefState& state);

struct CredibleRegion {
    std::vector<std::size_t> cells;  // ascending cell indices
    double cutoff = 0.0;
    double content = 0.0;  // exact posterior content

    bool contains(std::size_t cell) const;
};

/// The γ-relative belief region {ψ : RB(ψ | x) >= c}, with c the smallest
/// realized ratio whose posterior distribution function reaches 1 − γ.
/// Cells with tied ratios enter or leave together.
CredibleRegion credible_region(const BeliefState& state, double gamma);

struct EvidenceReport {
    std::size_t psi0 = 0;
    double rb0 = 0.0;
    double strength = 0.0;     // Π(RB <= RB(ψ0) | x)
    double lower_bound = 0.0;  // Π(RB == RB(ψ0) | x)
    double upper_bound = 0.0;  // RB(ψ0)
};

EvidenceReport strength(const BeliefState& state, std::size_t psi0);
EvidenceReport strength(const BeliefState& state, const CellLabel& psi0);

/// Posterior content of a set of cells, summed in ascending index order.
double posterior_content(const BeliefState& state, std::span<const std::size_t> cells);

/// Aggregates a prior density, given on strictly increasing points and
/// interpolated linearly between them, into bins of width delta centred on
/// psi0: [psi0 + (2i − 1)δ/2, psi0 + (2i + 1)δ/2). Labels are the nominal
/// bin centres psi0 + iδ; bins without mass are dropped.
ParamGrid discretize(std::span<const double> points, std::span<const double> prior_density, double psi0,
                     double delta);

}  // namespace relbelief
