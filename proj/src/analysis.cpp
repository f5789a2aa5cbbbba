#include "relbelief/analysis.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "relbelief/conflict.hpp"

namespace relbelief {

namespace {

using nlohmann::json;

ConfigError error_at(const std::string& path, const std::string& message) { return ConfigError(path, message); }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw error_at(path + "." + key, "unknown key");
    }
}

const json& require_key(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) throw error_at(path + "." + key, "missing required key");
    return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw error_at(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw error_at(path, "expected a finite number");
    return d;
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw error_at(path, "expected an integer");
    return v.get<int>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw error_at(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

CellLabel as_label(const json& v, const std::string& path) {
    if (v.is_string()) return v.get<std::string>();
    return as_number(v, path);
}

double number_field(const json& obj, const std::string& path, const char* key) {
    return as_number(require_key(obj, path, key), path + "." + key);
}

int int_field(const json& obj, const std::string& path, const char* key) {
    return as_int(require_key(obj, path, key), path + "." + key);
}

GridBlock parse_grid(const json& g, const std::string& path) {
    if (!g.is_object()) throw error_at(path, "expected an object");
    allow_keys(g, path, {"labels", "prior", "cond_predictive"});
    GridBlock block;
    const json& labels = require_key(g, path, "labels");
    if (!labels.is_array()) throw error_at(path + ".labels", "expected an array");
    for (std::size_t i = 0; i < labels.size(); ++i)
        block.labels.push_back(as_label(labels[i], path + ".labels[" + std::to_string(i) + "]"));
    block.prior = as_numbers(require_key(g, path, "prior"), path + ".prior");
    block.cond_predictive = as_numbers(require_key(g, path, "cond_predictive"), path + ".cond_predictive");
    return block;
}

Axis parse_axis(const json& a, const std::string& path) {
    if (!a.is_object()) throw error_at(path, "expected an object");
    allow_keys(a, path, {"lo", "hi", "cells"});
    Axis axis{number_field(a, path, "lo"), number_field(a, path, "hi"), 0};
    const int cells = int_field(a, path, "cells");
    if (cells < 1) throw error_at(path + ".cells", "must be at least 1");
    axis.cells = static_cast<std::size_t>(cells);
    return axis;
}

ModelBlock parse_model(const json& m, const std::string& path) {
    if (!m.is_object()) throw error_at(path, "expected an object");
    const json& fam = require_key(m, path, "family");
    if (!fam.is_string()) throw error_at(path + ".family", "expected a string");
    const std::string family = fam.get<std::string>();
    ModelBlock block{LocationNormalModel{}, Axis{}};
    if (family == "location_normal") {
        allow_keys(m, path, {"family", "n", "xbar", "mu0", "sigma0_sq", "axis"});
        block.model = LocationNormalModel{int_field(m, path, "n"), number_field(m, path, "xbar"),
                                          number_field(m, path, "mu0"), number_field(m, path, "sigma0_sq")};
    } else if (family == "bernoulli_beta") {
        allow_keys(m, path, {"family", "n", "t", "alpha0", "beta0", "axis"});
        block.model = BernoulliBetaModel{int_field(m, path, "n"), int_field(m, path, "t"),
                                         number_field(m, path, "alpha0"), number_field(m, path, "beta0")};
    } else if (family == "location_scale") {
        allow_keys(m, path, {"family", "n", "xbar", "s_sq", "mu0", "tau0_sq", "alpha0", "beta0", "axis"});
        block.model = LocationScaleModel{int_field(m, path, "n"),        number_field(m, path, "xbar"),
                                         number_field(m, path, "s_sq"),  number_field(m, path, "mu0"),
                                         number_field(m, path, "tau0_sq"), number_field(m, path, "alpha0"),
                                         number_field(m, path, "beta0")};
    } else {
        throw error_at(path + ".family", "unknown family '" + family + "'");
    }
    try {
        std::visit([](const auto& model) { model.validate(); }, block.model);
    } catch (const std::invalid_argument& e) {
        throw error_at(path, e.what());
    }
    block.axis = parse_axis(require_key(m, path, "axis"), path + ".axis");
    return block;
}

DirectionSpec parse_direction(const json& d, const std::string& path, std::size_t index) {
    if (!d.is_object()) throw error_at(path, "expected an object");
    allow_keys(d, path, {"name", "kind", "mass", "point", "cond_predictive"});
    DirectionSpec spec;
    spec.name = "q" + std::to_string(index + 1);
    if (d.contains("name")) {
        if (!d.at("name").is_string()) throw error_at(path + ".name", "expected a string");
        spec.name = d.at("name").get<std::string>();
    }
    const json& kind = require_key(d, path, "kind");
    const std::string k = kind.is_string() ? kind.get<std::string>() : "";
    if (k == "marginal") {
        spec.kind = DirectionKind::marginal;
        if (d.contains("mass") == d.contains("point"))
            throw error_at(path, "a marginal direction needs exactly one of 'mass' or 'point'");
        if (d.contains("mass")) spec.mass = as_numbers(d.at("mass"), path + ".mass");
        if (d.contains("point")) spec.point = as_label(d.at("point"), path + ".point");
        if (d.contains("cond_predictive")) throw error_at(path + ".cond_predictive", "not allowed for a marginal direction");
    } else if (k == "conditional") {
        spec.kind = DirectionKind::conditional;
        if (d.contains("mass") || d.contains("point"))
            throw error_at(path, "a conditional direction keeps the prior marginal; remove 'mass'/'point'");
        spec.cond_predictive = as_numbers(require_key(d, path, "cond_predictive"), path + ".cond_predictive");
    } else if (k == "full") {
        spec.kind = DirectionKind::full;
        if (d.contains("point")) throw error_at(path + ".point", "not allowed for a full direction");
        spec.mass = as_numbers(require_key(d, path, "mass"), path + ".mass");
        spec.cond_predictive = as_numbers(require_key(d, path, "cond_predictive"), path + ".cond_predictive");
    } else {
        throw error_at(path + ".kind", "expected one of marginal, conditional, full");
    }
    return spec;
}

// Grid blocks match labels exactly; model grids take the cell nearest to a numeric value.
std::size_t resolve_cell(const ParamGrid& grid, const CellLabel& label, bool nearest, const std::string& path) {
    if (nearest && std::holds_alternative<double>(label)) {
        const double v = std::get<double>(label);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d = std::fabs(std::get<double>(grid.label(i)) - v);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }
    try {
        return grid.index_of(label);
    } catch (const std::out_of_range&) {
        throw error_at(path, "no cell labelled " + to_string(label));
    }
}

Direction build_direction(const DirectionSpec& spec, const BeliefState& state, bool nearest, const std::string& path) {
    try {
        switch (spec.kind) {
            case DirectionKind::marginal: {
                if (spec.point) {
                    std::vector<double> mass(state.size(), 0.0);
                    mass[resolve_cell(state.grid(), *spec.point, nearest, path + ".point")] = 1.0;
                    return Direction::marginal(std::move(mass));
                }
                Direction q = Direction::marginal(spec.mass);
                q.check_aligned(state);
                return q;
            }
            case DirectionKind::conditional: {
                Direction q = Direction::conditional(spec.cond_predictive);
                q.check_aligned(state);
                return q;
            }
            case DirectionKind::full: {
                Direction q = Direction::full(spec.mass, spec.cond_predictive);
                q.check_aligned(state);
                return q;
            }
        }
    } catch (const std::invalid_argument& e) {
        throw error_at(path, e.what());
    }
    throw error_at(path, "unknown direction kind");
}

struct Emitter {
    CsvTable table{{"quantity", "cell", "direction", "value"}};

    void row(const std::string& quantity, const std::string& cell, const std::string& direction, double value) {
        table.add_row({quantity, cell, direction, format_number(value)});
    }
};

void emit_model_diagnostics(Emitter& out, const ModelSpec& spec) {
    std::visit(
        [&](const auto& model) {
            using M = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<M, LocationScaleModel>) {
                out.row("conflict_tail_pi1", "", "", hierarchical_tail_pi1(s2_curve(model)));
                out.row("conflict_tail_pi2", "", "",
                        hierarchical_tail_pi2(xbar_curve(model, SigmaTildeConvention::exact)));
                out.row("rb1_s2_max", "", "", rb1_s2_max(model));
                out.row("integrated_worst_case", "", "", integrated_worst_case(model));
            } else {
                out.row("conflict_tail", "", "", tail_probability(predictive_curve(model)));
                out.row("sup_ratio", "", "", sup_ratio(model));
            }
        },
        spec);
}

}  // namespace

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

AnalysisConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("$", "expected an object");
    allow_keys(doc, "$", {"grid", "model", "directions", "gamma", "epsilon", "psi0", "workers"});

    AnalysisConfig config;
    if (doc.contains("grid") == doc.contains("model")) throw ConfigError("$", "exactly one of 'grid' or 'model' is required");
    if (doc.contains("grid")) config.grid = parse_grid(doc.at("grid"), "$.grid");
    if (doc.contains("model")) config.model = parse_model(doc.at("model"), "$.model");

    if (doc.contains("directions")) {
        const json& dirs = doc.at("directions");
        if (!dirs.is_array()) throw ConfigError("$.directions", "expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const std::string path = "$.directions[" + std::to_string(i) + "]";
            config.directions.push_back(parse_direction(dirs[i], path, i));
            if (!names.insert(config.directions.back().name).second) throw ConfigError(path + ".name", "duplicate name");
        }
    }

    config.gamma = number_field(doc, "$", "gamma");
    if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) throw ConfigError("$.gamma", "must lie in [0, 1]");
    config.epsilon = number_field(doc, "$", "epsilon");
    if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) throw ConfigError("$.epsilon", "must lie in [0, 1)");
    if (doc.contains("psi0")) config.psi0 = as_label(doc.at("psi0"), "$.psi0");
    if (doc.contains("workers")) {
        const int w = as_int(doc.at("workers"), "$.workers");
        if (w < 1) throw ConfigError("$.workers", "must be at least 1");
        config.workers = static_cast<unsigned>(w);
    }
    return config;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("$", "cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

CsvTable analyze(const AnalysisConfig& config) {
    std::optional<BeliefState> built;
    const bool from_model = config.model.has_value();
    if (config.grid) {
        try {
            built.emplace(ParamGrid(config.grid->labels, config.grid->prior), config.grid->cond_predictive);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.grid", e.what());
        }
    } else if (config.model) {
        try {
            const GridExport exported =
                std::visit([&](const auto& m) { return grid_export(m, config.model->axis); }, config.model->model);
            built.emplace(exported.state());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.model", e.what());
        }
    } else {
        throw ConfigError("$", "exactly one of 'grid' or 'model' is required");
    }
    const BeliefState& state = *built;
    const ParamGrid& grid = state.grid();

    std::optional<std::size_t> psi0;
    if (config.psi0) psi0 = resolve_cell(grid, *config.psi0, from_model, "$.psi0");

    std::vector<Direction> directions;
    for (std::size_t i = 0; i < config.directions.size(); ++i)
        directions.push_back(
            build_direction(config.directions[i], state, from_model, "$.directions[" + std::to_string(i) + "]"));

    Emitter out;
    out.row("prior_predictive", "", "", state.prior_predictive());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const std::string cell = to_string(grid.label(i));
        out.row("prior", cell, "", state.prior_mass()[i]);
        out.row("cond_predictive", cell, "", state.cond_predictive()[i]);
        out.row("posterior", cell, "", state.posterior_mass()[i]);
        out.row("rb", cell, "", state.rb()[i]);
    }
    const std::size_t est = rb_estimate(state);
    out.row("estimate", to_string(grid.label(est)), "", state.rb()[est]);
    out.row("worst_case_ratio", "", "", worst_case_ratio(state));

    const CredibleRegion region = credible_region(state, config.gamma);
    out.row("region_cutoff", "", "", region.cutoff);
    out.row("region_content", "", "", region.content);
    for (std::size_t c : region.cells) out.row("region_member", to_string(grid.label(c)), "", 1.0);
    if (region.cells.size() < state.size()) {
        const HuberBounds hb = huber_bounds(state, region.cells, config.epsilon);
        out.row("huber_upper", "", "", hb.upper);
        out.row("huber_lower", "", "", hb.lower);
        out.row("huber_delta", "", "", hb.delta);
        out.row("delta_credible", "", "", delta_credible(state, config.gamma, config.epsilon));
        if (state.size() <= 20) {
            const OptimalityResult opt = optimality_search(state, config.gamma, config.epsilon,
                                                           ContentConstraint::at_most_region, config.workers);
            out.row("optimality_min_delta", "", "", opt.min_delta);
        }
    }

    if (psi0) {
        const EvidenceReport ev = strength(state, *psi0);
        const std::string cell = to_string(grid.label(*psi0));
        out.row("strength", cell, "", ev.strength);
        out.row("strength_lower", cell, "", ev.lower_bound);
        out.row("strength_upper", cell, "", ev.upper_bound);
    }

    if (config.model) emit_model_diagnostics(out, config.model->model);

    for (std::size_t d = 0; d < directions.size(); ++d) {
        const Direction& q = directions[d];
        const std::string& name = config.directions[d].name;
        out.row("m_q_over_m", "", name, m_q_over_m(state, q));
        for (std::size_t i = 0; i < state.size(); ++i) {
            const std::string cell = to_string(grid.label(i));
            out.row("contaminated_rb", cell, name, contaminated_rb(state, i, q, config.epsilon));
            out.row("gateaux_rb", cell, name, gateaux_rb(state, i, q));
        }
        if (q.kind() == DirectionKind::marginal) out.row("relative_sensitivity_rb", "", name, relative_sensitivity_rb(state, q));
        if (!psi0) continue;
        const std::string cell = to_string(grid.label(*psi0));
        out.row("gateaux_map", cell, name, gateaux_map(state, *psi0, q));
        if (state.posterior_mass()[*psi0] > 0.0)
            out.row("relative_sensitivity_map", cell, name, relative_sensitivity_map(state, *psi0, q));
        if (q.kind() == DirectionKind::marginal)
            out.row("gateaux_strength_marginal", cell, name, gateaux_strength_marginal(state, *psi0, q));
        if (q.kind() == DirectionKind::conditional) {
            out.row("gateaux_strength_conditional", cell, name, gateaux_strength_conditional(state, *psi0, q));
            out.row("conditional_strength_threshold", cell, name, conditional_strength_threshold(state, *psi0, q));
        }
    }
    return std::move(out.table);
}

}  // namespace relbelief
