#include "rrqr/report.hpp"

#include <ostream>

#include "rrqr/format.hpp"

namespace rrqr {

void write_profile_csv(std::ostream& os, const StructureReport& rep)
{
    os << "i,red,blue\n";
    for (std::size_t i = 0; i < rep.red_line.size(); ++i)
        os << i << ',' << format_real(rep.red_line[i]) << ',' << format_real(rep.blue_line[i])
           << '\n';
}

nlohmann::json to_json(const StructureReport& rep, std::size_t max_violations)
{
    nlohmann::json j;
    j["ok"] = rep.ok();
    j["monotone_ok"] = rep.monotone_ok;
    j["dominance_ok"] = rep.dominance_ok;
    j["worst_monotone_ratio"] = rep.worst_monotone_ratio;
    j["worst_dominance_ratio"] = rep.worst_dominance_ratio;
    j["slack"] = rep.slack;
    j["tau"] = rep.tau;
    j["numerical_rank"] = rep.numerical_rank;
    j["order"] = rep.red_line.size();
    j["violation_count"] = rep.violations.size();
    auto list = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.violations.size() && k < max_violations; ++k) {
        const auto& v = rep.violations[k];
        list.push_back({{"i", v.i}, {"j", v.j}, {"ratio", v.ratio}});
    }
    j["violations"] = std::move(list);
    return j;
}

nlohmann::json to_json(const GridTopology& topo)
{
    return {{"nprow", topo.nprow}, {"npcol", topo.npcol}, {"mb", topo.mb}, {"nb", topo.nb}};
}

nlohmann::json to_json(const PivotDivergence& d)
{
    nlohmann::json j;
    j["diverged"] = d.diverged;
    if (d.diverged) {
        j["step"] = d.step;
        j["column_a"] = d.column_a;
        j["column_b"] = d.column_b;
        j["norm_a"] = d.norm_a;
        j["norm_b"] = d.norm_b;
        j["relative_gap"] = d.relative_gap;
    }
    return j;
}

void write_perm_csv(std::ostream& os, std::span<const std::size_t> perm)
{
    os << "k,column\n";
    for (std::size_t k = 0; k < perm.size(); ++k)
        os << k << ',' << perm[k] << '\n';
}

} // namespace rrqr
