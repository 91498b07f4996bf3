#pragma once

// CSV/JSON serialization of diagnostics and configurations.

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "rrqr/diagnostics.hpp"
#include "rrqr/downdating.hpp"
#include "rrqr/gridsim.hpp"

namespace rrqr {

/// Plot data: header "i,red,blue", one row per diagonal entry.
void write_profile_csv(std::ostream& os, const StructureReport& rep);

/// Verdicts and metrics; at most max_violations violations are listed, the
/// total count is always present.
nlohmann::json to_json(const StructureReport& rep, std::size_t max_violations = 50);

nlohmann::json to_json(const GridTopology& topo);
nlohmann::json to_json(const PivotDivergence& d);

/// Strategy with tol resolved for the working precision.
template <RealScalar R>
nlohmann::json to_json(const StrategyConfig& cfg)
{
    nlohmann::json j;
    j["strategy"] = to_string(cfg.kind);
    j["tol"] = static_cast<double>(cfg.resolved_tol<R>());
    j["excess_precision_control"] = cfg.inject.excess_precision_control;
    if (cfg.inject.wrong_column)
        j["wrong_column_offset"] = cfg.inject.wrong_column->offset;
    else
        j["wrong_column_offset"] = nullptr;
    j["topology"] = cfg.topology ? to_json(*cfg.topology) : nlohmann::json(nullptr);
    return j;
}

void write_perm_csv(std::ostream& os, std::span<const std::size_t> perm);

} // namespace rrqr
