#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrqr/downdating.hpp"
#include "rrqr/sweep.hpp"

namespace rrqr::cli {

/// Exit codes: 0 success, 1 structure check failed, 2 usage or input error.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Strategy-related flags as given on the command line.
struct StrategyFlags {
    std::string strategy = "robust";
    std::optional<double> tol;
    std::vector<std::string> inject;
    std::vector<std::string> grids;
    int mb = 1;
    int nb = 1;
};

struct RunConfig {
    std::string command;

    std::string input;
    std::string output;
    std::string prefix;

    // gen
    std::string kind = "kahan";
    std::size_t n = 0;
    std::size_t m = 0;
    std::string c_text = "0.5";
    std::string field = "real";
    std::uint64_t seed = 0;

    StrategyFlags first;
    StrategyFlags second; ///< compare only; unset fields fall back to `first`
    bool second_strategy_given = false;
    bool second_tol_given = false;
    bool second_inject_given = false;
    bool second_grid_given = false;

    std::string precision = "double";
    std::optional<double> slack;
    std::optional<double> tau;

    // sweep
    std::string family = "kahan";
    double c_from = 0.10;
    double c_to = 0.90;
    double c_step = 0.01;
    std::vector<std::string> c_list;

    std::string csv;
    std::string json;
};

/// Parses "excess-control", "wrong-column" and "wrong-column:<offset>".
Injections parse_injections(const std::vector<std::string>& specs);

/// Builds a StrategyConfig; only the first grid (if any) is used.
StrategyConfig build_strategy(const StrategyFlags& flags);

nlohmann::json to_json(const RunConfig& cfg);

/// Executes one command; args exclude the program name.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses and executes a command line; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rrqr::cli
