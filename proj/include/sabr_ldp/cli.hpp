#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sabr_ldp/vol_surface.hpp"

namespace sabr_ldp::cli {

enum class Command { Smile, Atm, Rate, Mc, Bench };
enum class Format { Csv, Json };

Command parse_command(const std::string& s);
Format parse_format(const std::string& s);

/// Evenly spaced grid written "min:max:count".
struct Grid {
    double min = -0.5;
    double max = 0.5;
    int count = 11;

    static Grid parse(const std::string& spec);
    std::vector<double> values() const;
};

struct RunConfig {
    Command command = Command::Smile;
    ModelParams model;
    std::vector<double> maturities;  // empty: {0.25, 1, 2, 5, 50} for atm, model.maturity otherwise
    std::optional<Grid> strikes;     // log-strikes; normalized strikes y for `rate`
    std::int64_t nSteps = 250;
    std::int64_t nPaths = 100000;
    std::uint64_t seed = 20240601;
    double volDrift = 0.0;
    bool researchPositiveCorr = false;
    std::optional<double> hullWhiteXi;  // replaces omega by xi / 2
    std::string outputPath;             // empty or "-": standard output
    Format format = Format::Csv;
};

/// Fills command defaults and applies the Hull-White mapping. Throws ConfigError or DomainError.
RunConfig resolve(RunConfig cfg);
Grid default_strikes(Command c);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::vector<Table> tables;
    bool gatesPassed = true;
};

Report cmd_smile(const RunConfig& cfg);
Report cmd_atm(const RunConfig& cfg);
Report cmd_rate(const RunConfig& cfg);
Report cmd_mc(const RunConfig& cfg);
Report cmd_bench(const RunConfig& cfg);

/// Tables in order, separated by a blank line, each with its own header row.
void write_csv(const Report& r, std::ostream& os);
/// A single table becomes an array of records; several become an object keyed by table name.
void write_json(const Report& r, std::ostream& os);

inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailure = 1;
inline constexpr int kExitInvalidInput = 2;

/// Runs the command and writes the report. Returns the process exit code.
int run(const RunConfig& cfg, std::ostream& diagnostics);

}  // namespace sabr_ldp::cli
