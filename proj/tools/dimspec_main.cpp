#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dimspec/errors.hpp"
#include "dimspec/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dimspec: certified Hausdorff dimension enclosures for shift-generated "
                 "conformal constructions"};
    std::string config_path;
    std::string output_path;
    std::string format;
    app.add_option("--config", config_path, "path to the JSON run configuration")->required();
    app.add_option("--output", output_path, "output path (default: config output.path or stdout)");
    app.add_option("--format", format, "csv or json (overrides the config)");
    CLI11_PARSE(app, argc, argv);

    dimspec::cli::RunConfig cfg;
    try {
        cfg = dimspec::cli::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!format.empty()) {
        if (format != "csv" && format != "json") {
            std::cerr << "error: --format expects csv or json\n";
            return 2;
        }
        cfg.output.format = format;
    }
    if (!output_path.empty()) cfg.output.path = output_path;

    const dimspec::cli::RunOutcome outcome = dimspec::cli::run(cfg);
    if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << "\n";

    std::string rendered;
    try {
        rendered = dimspec::cli::emit(outcome.records, cfg.output.format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (cfg.output.path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(cfg.output.path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.output.path << "\n";
            return 1;
        }
        out << rendered;
        if (!out.good()) {
            std::cerr << "error: write failed for " << cfg.output.path << "\n";
            return 1;
        }
    }
    return outcome.exit_code;
}
