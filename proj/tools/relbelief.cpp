// Command-line front end: `reproduce <id> [--digits k]` and
// `analyze --config <path> [--out <path>]`.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relbelief/analysis.hpp"
#include "relbelief/reproduce.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kConfigError = 3;
constexpr int kNumericError = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative belief inference, robustness and prior-data conflict diagnostics"};
    app.require_subcommand(1);

    auto* reproduce = app.add_subcommand("reproduce", "Print one of the worked-example tables as CSV");
    std::string id;
    std::optional<int> digits;
    reproduce->add_option("id", id, "Table or scalar set id")
        ->required()
        ->check(CLI::IsMember(relbelief::reproduce::ids()));
    reproduce->add_option("--digits", digits, "Round values to this many decimals")->check(CLI::Range(0, 17));

    auto* analyze = app.add_subcommand("analyze", "Run a grid analysis described by a JSON config");
    std::string config_path;
    std::string out_path;
    analyze->add_option("--config", config_path, "Path to the JSON config")->required();
    analyze->add_option("--out", out_path, "Write the CSV report here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*reproduce) {
            relbelief::reproduce::render(id, digits).write(std::cout);
            return 0;
        }
        const relbelief::CsvTable report = relbelief::analyze(relbelief::load_config(config_path));
        if (out_path.empty()) {
            report.write(std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << '\n';
                return kConfigError;
            }
            report.write(out);
        }
        return 0;
    } catch (const relbelief::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    }
}
