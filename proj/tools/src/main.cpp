#include <chrono>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "sasaki/expr.hpp"
#include "sasaki_cli/commands.hpp"

using namespace sasaki::cli;

int main(int argc, char** argv) {
    CLI::App app{"Tangent-bundle geometry checks for para-Kaehler-Norden charts"};
    std::string command, config, out_dir, format = "json";
    std::vector<std::string> args;
    std::optional<double> tol;
    std::uint64_t seed = 1;

    app.add_option("command", command, "validate | tensors | bundle-check | classify | variation | reproduce | all")->required();
    app.add_option("args", args, "Example names for reproduce (default: all)");
    app.add_option("--config", config, "Run configuration (YAML)");
    app.add_option("--out", out_dir, "Directory for report.json and sweep.csv");
    app.add_option("--tol", tol, "Override the config tolerance");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--seed", seed, "Seed for random sample points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    static const std::set<std::string> known{"validate", "tensors", "bundle-check", "classify", "variation", "reproduce", "all"};
    if (!known.count(command)) {
        std::cerr << "sasaki: unknown subcommand '" << command << "'\n";
        return 2;
    }
    if (!args.empty() && command != "reproduce" && command != "all") {
        std::cerr << "sasaki: '" << command << "' takes no positional arguments\n";
        return 2;
    }

    Options opt;
    opt.format = format == "csv" ? Format::Csv : format == "table" ? Format::Table : Format::Json;
    opt.tol = tol;
    opt.seed = seed;
    opt.out_dir = out_dir;

    try {
        RunConfig cfg;
        if (!config.empty())
            cfg = load_config(config);
        else if (command == "reproduce")
            cfg = default_config("polar-r2");  // examples carry their own manifolds
        else
            throw ConfigError("", 0, 0, "--config is required for '" + command + "'");

        const auto t0 = std::chrono::steady_clock::now();
        const int rc = run(command, args, cfg, opt, std::cout);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "sasaki: " << command << " finished in " << secs << " s\n";
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "sasaki: config error: " << e.what() << "\n";
        return 2;
    } catch (const sasaki::ParseError& e) {
        std::cerr << "sasaki: parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sasaki: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sasaki: error: " << e.what() << "\n";
        return 1;
    }
}
