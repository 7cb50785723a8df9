#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sasaki_cli/config.hpp"
#include "json.hpp"

namespace sasaki::cli {

enum class Format { Json, Csv, Table };

struct Options {
    Format format = Format::Json;
    std::optional<double> tol;  // overrides the config's tol
    std::uint64_t seed = 1;
    std::string out_dir;  // empty: nothing written to disk
};

/// One row of the human-readable table; also drives the exit code.
struct Check {
    std::string section;
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct Outcome {
    nlohmann::ordered_json report;
    std::vector<Check> checks;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;

    bool pass() const;
};

/// Subcommands: validate, tensors, bundle-check, classify, variation,
/// reproduce (args: example names, default all), all.
Outcome execute(const std::string& command, const std::vector<std::string>& args, const RunConfig& cfg, const Options& opt);

/// Runs a command end to end: prints in the requested format, writes
/// report.json (and sweep.csv when there are sweep rows) under out_dir.
/// Returns 0 when every check passes, 1 otherwise.
int run(const std::string& command, const std::vector<std::string>& args, const RunConfig& cfg, const Options& opt,
        std::ostream& out);

std::string format_table(const std::vector<Check>& checks);
std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace sasaki::cli
