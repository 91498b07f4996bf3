#pragma once

// Parameter sweeps over the Kahan families: factor every (c, topology) case
// with one strategy and tabulate the structure verdicts.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rrqr/downdating.hpp"
#include "rrqr/gridsim.hpp"

namespace rrqr {

enum class Family { Kahan, SymmetrizedKahan };
enum class Precision { Single, Double };

std::string to_string(Family f);
std::string to_string(Precision p);
Family parse_family(const std::string& name);
Precision parse_precision(const std::string& name);

/// Values from, from + step, ... up to `to` (inclusive within half a step),
/// each rounded to 12 significant decimal digits so that 0.1 + 7 * 0.01
/// yields the same double as the literal 0.17.
std::vector<double> c_grid(double from, double to, double step);

struct SweepSpec {
    Family family = Family::Kahan;
    std::size_t n = 100;
    std::vector<double> c_values;
    /// nullopt entries mean sequential (no grid simulation).
    std::vector<std::optional<GridTopology>> topologies{std::nullopt};
    StrategyConfig strategy;
    Precision precision = Precision::Double;
    std::optional<double> slack;
};

struct SweepCase {
    double c = 0;
    std::optional<GridTopology> topology;
    bool ok = false;
    bool monotone_ok = false;
    bool dominance_ok = false;
    double worst_monotone_ratio = 0;
    double worst_dominance_ratio = 0;
    std::size_t violation_count = 0;
    std::size_t numerical_rank = 0;
    std::size_t recomputes = 0;
    std::vector<std::size_t> perm;
};

/// Cases come back ordered by c, then by topology position in the spec.
std::vector<SweepCase> run_sweep(const SweepSpec& spec);

/// header: c,grid,ok,monotone_ok,dominance_ok,worst_monotone,worst_dominance,violations,rank,recomputes
void write_sweep_csv(std::ostream& os, const std::vector<SweepCase>& cases);

} // namespace rrqr
