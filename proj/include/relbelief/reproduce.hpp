#pragma once

// The worked examples: fixed data sets, direction tables and scalar
// diagnostics for the location normal, Bernoulli and location-scale models.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relbelief/format.hpp"
#include "relbelief/models.hpp"

namespace relbelief::reproduce {

// n = 20, N(0.5, 1) prior.
LocationNormalModel location_normal_no_conflict();  // x̄ = 0.2591
LocationNormalModel location_normal_conflict();     // x̄ = 4.0867

// n = 20, beta(5, 20) prior.
BernoulliBetaModel bernoulli_no_conflict();  // t = 3
BernoulliBetaModel bernoulli_conflict();     // t = 17

// n = 20, μ0 = 0, τ0² = 1, α0 = β0 = 5.
LocationScaleModel location_scale_case_a();  // x̄ = −0.1066, s² = 0.9087
LocationScaleModel location_scale_case_b();  // x̄ = 0.0950, s² = 23.9593
LocationScaleModel location_scale_case_c();  // x̄ = 9.7041, s² = 1.0082
LocationScaleModel location_scale_case_d();  // x̄ = 9.7941, s² = 1.0082

struct TableRow {
    double p1 = 0.0;
    double p2 = 0.0;
    double value = 0.0;
};

struct Table {
    std::string p1_name;
    std::string p2_name;
    std::vector<TableRow> rows;  // left block top to bottom, then right block
};

/// Tables 1..9. The second parameter of Tables 7–9 is read as τ1, the
/// standard-deviation multiplier of the N(μ1, τ1² σ²) direction.
Table table(int number);

struct Scalar {
    std::string name;
    double value = 0.0;
};

/// One of scalars1a, scalars1b, scalars2a, scalars2b, scalars3a..scalars3d.
std::vector<Scalar> scalars(std::string_view id);

/// All ids accepted by `render`, in a fixed order.
const std::vector<std::string>& ids();

/// CSV for one id. Throws std::invalid_argument for an unknown id.
CsvTable render(std::string_view id, std::optional<int> digits = std::nullopt);

}  // namespace relbelief::reproduce
