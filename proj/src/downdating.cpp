#include "rrqr/downdating.hpp"

#include <ostream>

#include "rrqr/format.hpp"

namespace rrqr {

std::string to_string(StrategyKind kind)
{
    switch (kind) {
    case StrategyKind::Classic:
        return "classic";
    case StrategyKind::Robust:
        return "robust";
    case StrategyKind::ExactRecompute:
        return "exact";
    }
    return "unknown";
}

std::string to_string(Decision decision)
{
    switch (decision) {
    case Decision::Downdate:
        return "downdate";
    case Decision::ExplicitRecompute:
        return "recompute";
    case Decision::FlushZero:
        return "flush-zero";
    }
    return "unknown";
}

StrategyKind parse_strategy(const std::string& name)
{
    if (name == "classic")
        return StrategyKind::Classic;
    if (name == "robust")
        return StrategyKind::Robust;
    if (name == "exact")
        return StrategyKind::ExactRecompute;
    throw std::invalid_argument("unknown strategy '" + name + "' (expected classic, robust or exact)");
}

void write_events_csv(std::ostream& os, std::span<const DowndateEvent> events)
{
    os << "k,j,beta,temp,temp2,decision,omega_before,omega_after\n";
    for (const auto& e : events) {
        os << e.step << ',' << e.column << ',' << format_real(e.beta) << ','
           << format_real(e.temp) << ',' << format_real(e.temp2) << ',' << to_string(e.decision)
           << ',' << format_real(e.omega_before) << ',' << format_real(e.omega_after) << '\n';
    }
}

} // namespace rrqr
