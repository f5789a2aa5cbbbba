#include "relbelief/reproduce.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace relbelief::reproduce {

namespace {

using Params = std::vector<std::pair<double, double>>;

LocationScaleModel location_scale(double xbar, double s_sq) {
    return LocationScaleModel{20, xbar, s_sq, 0.0, 1.0, 5.0, 5.0};
}

const Params& normal_directions() {
    static const Params p = {{-3.0, 1.0}, {-2.0, 1.0}, {-1.0, 1.0}, {1.0, 1.0}, {2.0, 1.0},  {3.0, 1.0},
                             {0.5, 0.5},  {0.5, 1.0},  {0.5, 2.0},  {0.5, 3.0}, {0.5, 50.0}, {0.5, 100.0}};
    return p;
}

const Params& beta_directions() {
    static const Params p = {{20, 5}, {15, 5}, {10, 5}, {5, 5},  {1, 5},
                             {5, 1},  {5, 25}, {5, 22}, {5, 20}, {5, 16}};
    return p;
}

const Params& gamma_directions() {
    static const Params p = {{5, 1}, {5, 2}, {5, 4}, {5, 10}, {1, 5}, {2, 5}, {4, 5}, {10, 5}};
    return p;
}

const Params& location_directions() {
    static const Params p = {{-2, 1}, {-1, 1}, {1, 1}, {2, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    return p;
}

template <class F>
Table build(std::string p1, std::string p2, const Params& params, F ratio) {
    Table t{std::move(p1), std::move(p2), {}};
    for (const auto& [a, b] : params) t.rows.push_back({a, b, ratio(a, b)});
    return t;
}

Table normal_table(const LocationNormalModel& m) {
    return build("mu1", "sigma1_sq", normal_directions(),
                 [&](double mu1, double s1) { return std::exp(ln_ratio_direction(m, mu1, s1)); });
}

Table gamma_table(const LocationScaleModel& m) {
    return build("alpha1", "beta1", gamma_directions(),
                 [&](double a, double b) { return s2_predictive_ratio(m, a, b); });
}

Table location_table(const LocationScaleModel& m) {
    return build("mu1", "tau1", location_directions(), [&](double mu1, double tau1) {
        return xbar_cond_predictive_ratio(m, mu1, tau1 * tau1, SigmaTildeConvention::published);
    });
}

std::vector<Scalar> location_scale_scalars(const LocationScaleModel& m, bool pi1, bool pi2) {
    std::vector<Scalar> out;
    if (pi1) {
        out.push_back({"tail_pi1", hierarchical_tail_pi1(s2_curve(m))});
        out.push_back({"rb1_s2_max", rb1_s2_max(m)});
    }
    if (pi2) {
        out.push_back({"tail_pi2", hierarchical_tail_pi2(xbar_curve(m, SigmaTildeConvention::published))});
        out.push_back({"tail_pi2_exact", hierarchical_tail_pi2(xbar_curve(m, SigmaTildeConvention::exact))});
        out.push_back({"integrated_worst_case", integrated_worst_case(m)});
    }
    return out;
}

}  // namespace

LocationNormalModel location_normal_no_conflict() { return {20, 0.2591, 0.5, 1.0}; }
LocationNormalModel location_normal_conflict() { return {20, 4.0867, 0.5, 1.0}; }

BernoulliBetaModel bernoulli_no_conflict() { return {20, 3, 5.0, 20.0}; }
BernoulliBetaModel bernoulli_conflict() { return {20, 17, 5.0, 20.0}; }

LocationScaleModel location_scale_case_a() { return location_scale(-0.1066, 0.9087); }
LocationScaleModel location_scale_case_b() { return location_scale(0.0950, 23.9593); }
LocationScaleModel location_scale_case_c() { return location_scale(9.7041, 1.0082); }
LocationScaleModel location_scale_case_d() { return location_scale(9.7941, 1.0082); }

Table table(int number) {
    switch (number) {
        case 1: return normal_table(location_normal_no_conflict());
        case 2: return normal_table(location_normal_conflict());
        case 3: {
            const auto m = bernoulli_conflict();
            return build("alpha1", "beta1", beta_directions(),
                         [&](double a, double b) { return beta_ratio_direction(m, a, b); });
        }
        case 4: return gamma_table(location_scale_case_a());
        case 5: return gamma_table(location_scale_case_b());
        case 6: return gamma_table(location_scale_case_c());
        case 7: return location_table(location_scale_case_a());
        case 8: return location_table(location_scale_case_b());
        case 9: return location_table(location_scale_case_d());
        default: throw std::invalid_argument("unknown table number " + std::to_string(number));
    }
}

std::vector<Scalar> scalars(std::string_view id) {
    if (id == "scalars1a" || id == "scalars1b") {
        const auto m = id == "scalars1a" ? location_normal_no_conflict() : location_normal_conflict();
        return {{"tail", tail_probability(predictive_curve(m))}, {"sup_ratio", sup_ratio(m)}};
    }
    if (id == "scalars2a" || id == "scalars2b") {
        const auto m = id == "scalars2a" ? bernoulli_no_conflict() : bernoulli_conflict();
        return {{"tail", tail_probability(predictive_curve(m))},
                {"sup_ratio", sup_ratio(m)},
                {"upper_tail", upper_tail(m)}};
    }
    if (id == "scalars3a") return location_scale_scalars(location_scale_case_a(), true, true);
    if (id == "scalars3b") return location_scale_scalars(location_scale_case_b(), true, true);
    if (id == "scalars3c") return location_scale_scalars(location_scale_case_c(), true, false);
    if (id == "scalars3d") return location_scale_scalars(location_scale_case_d(), false, true);
    throw std::invalid_argument("unknown scalar set " + std::string(id));
}

const std::vector<std::string>& ids() {
    static const std::vector<std::string> all = {
        "table1",    "table2",    "table3",    "table4",    "table5",    "table6",    "table7",    "table8",
        "table9",    "scalars1a", "scalars1b", "scalars2a", "scalars2b", "scalars3a", "scalars3b", "scalars3c",
        "scalars3d"};
    return all;
}

CsvTable render(std::string_view id, std::optional<int> digits) {
    if (id.size() == 6 && id.starts_with("table") && id[5] >= '1' && id[5] <= '9') {
        const Table t = table(id[5] - '0');
        CsvTable csv({t.p1_name, t.p2_name, "ratio"});
        for (const auto& row : t.rows)
            csv.add_row({format_number(row.p1), format_number(row.p2), format_number(row.value, digits)});
        return csv;
    }
    if (id.starts_with("scalars")) {
        CsvTable csv({"name", "value"});
        for (const auto& s : scalars(id)) csv.add_row({s.name, format_number(s.value, digits)});
        return csv;
    }
    throw std::invalid_argument("unknown id " + std::string(id));
}

}  // namespace relbelief::reproduce
