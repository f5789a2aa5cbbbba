#pragma once

// Generic grid analysis driven by a JSON configuration document.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relbelief/belief.hpp"
#include "relbelief/contamination.hpp"
#include "relbelief/format.hpp"
#include "relbelief/models.hpp"

namespace relbelief {

/// A schema violation, reported with the JSON path of the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct GridBlock {
    std::vector<CellLabel> labels;
    std::vector<double> prior;
    std::vector<double> cond_predictive;
};

using ModelSpec = std::variant<LocationNormalModel, BernoulliBetaModel, LocationScaleModel>;

struct ModelBlock {
    ModelSpec model;
    Axis axis;
};

struct DirectionSpec {
    std::string name;
    DirectionKind kind = DirectionKind::marginal;
    std::vector<double> mass;              // marginal and full kinds
    std::optional<CellLabel> point;        // marginal kind: point mass at a cell
    std::vector<double> cond_predictive;  // conditional and full kinds
};

struct AnalysisConfig {
    std::optional<GridBlock> grid;
    std::optional<ModelBlock> model;
    std::vector<DirectionSpec> directions;
    double gamma = 0.5;
    double epsilon = 0.1;
    std::optional<CellLabel> psi0;
    unsigned workers = 1;
};

/// Throws ConfigError for malformed JSON or schema violations.
AnalysisConfig parse_config(std::string_view json_text);
AnalysisConfig load_config(const std::filesystem::path& path);

/// Long-format report with columns quantity, cell, direction, value. Rows
/// follow grid order, then direction order. Throws ConfigError when the
/// config references cells that do not exist.
CsvTable analyze(const AnalysisConfig& config);

}  // namespace relbelief
