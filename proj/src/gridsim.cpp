#include "rrqr/gridsim.hpp"

#include <charconv>
#include <stdexcept>

namespace rrqr {

void GridTopology::validate() const
{
    if (nprow < 1 || npcol < 1 || mb < 1 || nb < 1)
        throw std::invalid_argument("GridTopology: all of nprow, npcol, mb, nb must be >= 1 (got " +
                                    to_string() + ")");
}

std::string GridTopology::to_string() const
{
    return std::to_string(nprow) + "x" + std::to_string(npcol) + " mb=" + std::to_string(mb) +
           " nb=" + std::to_string(nb);
}

GridTopology GridTopology::parse(const std::string& grid, int mb, int nb)
{
    const auto x = grid.find_first_of("xX");
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument("GridTopology: cannot parse grid '" + grid +
                                        "', expected RxC");
        return v;
    };
    if (x == std::string::npos)
        throw std::invalid_argument("GridTopology: cannot parse grid '" + grid + "', expected RxC");
    const std::string_view g(grid);
    GridTopology t{parse_int(g.substr(0, x)), parse_int(g.substr(x + 1)), mb, nb};
    t.validate();
    return t;
}

} // namespace rrqr
