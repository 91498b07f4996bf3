#include "rrqr/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rrqr/diagnostics.hpp"
#include "rrqr/format.hpp"
#include "rrqr/genmat.hpp"
#include "rrqr/qrcp.hpp"

namespace rrqr {

std::string to_string(Family f)
{
    return f == Family::Kahan ? "kahan" : "symkahan";
}

std::string to_string(Precision p)
{
    return p == Precision::Single ? "single" : "double";
}

Family parse_family(const std::string& name)
{
    if (name == "kahan")
        return Family::Kahan;
    if (name == "symkahan")
        return Family::SymmetrizedKahan;
    throw std::invalid_argument("unknown family '" + name + "' (expected kahan or symkahan)");
}

Precision parse_precision(const std::string& name)
{
    if (name == "single")
        return Precision::Single;
    if (name == "double")
        return Precision::Double;
    throw std::invalid_argument("unknown precision '" + name + "' (expected single or double)");
}

std::vector<double> c_grid(double from, double to, double step)
{
    if (!(step > 0.0) || !(to >= from))
        throw std::invalid_argument("c_grid: need step > 0 and to >= from");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double raw = from + static_cast<double>(i) * step;
        if (raw > to + 0.5 * step)
            break;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", raw);
        out.push_back(std::strtod(buf, nullptr));
    }
    return out;
}

namespace {

template <RealScalar T>
SweepCase run_case(const SweepSpec& spec, double c, const std::optional<GridTopology>& topo)
{
    const KahanParams kp{spec.n, c};
    const Matrix<T> A =
        spec.family == Family::Kahan ? kahan<T>(kp) : symmetrized_kahan<T>(kp);
    StrategyConfig cfg = spec.strategy;
    cfg.topology = topo;
    const auto res = factorize(A, cfg);
    const auto rep = check_structure(extract_r(res), spec.slack);

    SweepCase sc;
    sc.c = c;
    sc.topology = topo;
    sc.ok = rep.ok();
    sc.monotone_ok = rep.monotone_ok;
    sc.dominance_ok = rep.dominance_ok;
    sc.worst_monotone_ratio = rep.worst_monotone_ratio;
    sc.worst_dominance_ratio = rep.worst_dominance_ratio;
    sc.violation_count = rep.violations.size();
    sc.numerical_rank = rep.numerical_rank;
    for (const auto& e : res.tracker.events)
        if (e.decision == Decision::ExplicitRecompute)
            ++sc.recomputes;
    sc.perm = res.perm;
    return sc;
}

} // namespace

std::vector<SweepCase> run_sweep(const SweepSpec& spec)
{
    std::vector<SweepCase> out;
    out.reserve(spec.c_values.size() * spec.topologies.size());
    for (double c : spec.c_values)
        for (const auto& topo : spec.topologies)
            out.push_back(spec.precision == Precision::Single ? run_case<float>(spec, c, topo)
                                                              : run_case<double>(spec, c, topo));
    return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCase>& cases)
{
    os << "c,grid,ok,monotone_ok,dominance_ok,worst_monotone,worst_dominance,violations,rank,"
          "recomputes\n";
    for (const auto& sc : cases) {
        const std::string grid = sc.topology ? std::to_string(sc.topology->nprow) + "x" +
                                                   std::to_string(sc.topology->npcol)
                                             : "seq";
        os << format_real(sc.c) << ',' << grid << ',' << (sc.ok ? 1 : 0) << ','
           << (sc.monotone_ok ? 1 : 0) << ',' << (sc.dominance_ok ? 1 : 0) << ','
           << format_real(sc.worst_monotone_ratio) << ',' << format_real(sc.worst_dominance_ratio)
           << ',' << sc.violation_count << ',' << sc.numerical_rank << ',' << sc.recomputes << '\n';
    }
}

} // namespace rrqr
