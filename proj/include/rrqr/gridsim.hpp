#pragma once

// Deterministic stand-in for a 2-D block-cyclic process grid. Nothing runs
// concurrently; the simulation only reproduces how the grid shape changes the
// order in which partial sums and pivot candidates are combined.
//
// Rows (for norms) are dealt to nprow groups in blocks of mb by global row
// index, columns (for the pivot search) to npcol groups in blocks of nb by
// global column index. Group partials are combined by a pairwise tree over
// group rank: at every level ranks (0,1), (2,3), ... are merged and an odd
// trailing rank is carried up unchanged.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrqr/core.hpp"

namespace rrqr {

struct GridTopology {
    int nprow = 1;
    int npcol = 1;
    int mb = 1;
    int nb = 1;

    void validate() const;
    bool sequential() const noexcept { return nprow == 1 && npcol == 1; }
    std::string to_string() const;

    /// Parses "RxC" (e.g. "6x4") together with block sizes.
    static GridTopology parse(const std::string& grid, int mb = 1, int nb = 1);

    bool operator==(const GridTopology&) const = default;
};

namespace detail {

template <class Node, class Combine>
Node tree_reduce(std::vector<Node> level, Combine combine)
{
    while (level.size() > 1) {
        std::vector<Node> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(combine(level[i], level[i + 1]));
        if (level.size() % 2 == 1)
            next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

} // namespace detail

/// ||x|| with the rounding pattern of a block-cyclic reduction over nprow
/// groups. x[i] has global row index first_row + i. A 1x1 grid reproduces
/// vector_norm bit for bit.
template <Scalar T>
real_t<T> distributed_norm(std::span<const T> x, const GridTopology& topo,
                           std::size_t first_row = 0)
{
    topo.validate();
    using Acc = ScaledSumSquares<real_t<T>>;
    const auto groups = static_cast<std::size_t>(topo.nprow);
    const auto mb = static_cast<std::size_t>(topo.mb);
    std::vector<Acc> partial(groups);
    for (std::size_t i = 0; i < x.size(); ++i)
        partial[((first_row + i) / mb) % groups].add_entry(x[i]);
    const Acc total = detail::tree_reduce(std::move(partial), [](Acc a, const Acc& b) {
        a.merge(b);
        return a;
    });
    return total.value();
}

/// Index (relative to values) of the maximum, found per column group and then
/// combined over npcol groups; on exact ties the left subtree wins. values[i]
/// belongs to global column first_col + i. A 1x1 grid gives the lowest index
/// among equal maxima.
template <RealScalar R>
std::size_t distributed_argmax(std::span<const R> values, const GridTopology& topo,
                               std::size_t first_col = 0)
{
    topo.validate();
    if (values.empty())
        throw std::invalid_argument("distributed_argmax: no values");
    struct Candidate {
        std::optional<std::size_t> index;
        R value{};
    };
    const auto groups = static_cast<std::size_t>(topo.npcol);
    const auto nb = static_cast<std::size_t>(topo.nb);
    std::vector<Candidate> local(groups);
    for (std::size_t i = 0; i < values.size(); ++i) {
        Candidate& c = local[((first_col + i) / nb) % groups];
        if (!c.index || values[i] > c.value)
            c = {i, values[i]};
    }
    const Candidate best =
        detail::tree_reduce(std::move(local), [](const Candidate& a, const Candidate& b) {
            if (!a.index)
                return b;
            if (!b.index)
                return a;
            return b.value > a.value ? b : a;
        });
    return *best.index;
}

} // namespace rrqr
