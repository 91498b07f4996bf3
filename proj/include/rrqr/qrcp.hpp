#pragma once

// Unblocked Householder QR with Businger-Golub column pivoting,
// A * P = Q * [R; 0], with a pluggable partial-norm strategy.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rrqr/core.hpp"
#include "rrqr/downdating.hpp"
#include "rrqr/gridsim.hpp"
#include "rrqr/householder.hpp"

namespace rrqr {

template <Scalar T>
struct PivotedQRResult {
    /// R on and above the diagonal, reflector tails v[1:] below it.
    Matrix<T> factors;
    /// One coefficient per step; H_k = I - taus[k] v_k v_k^H.
    std::vector<T> taus;
    /// perm[k] = original index of the k-th pivot column.
    std::vector<std::size_t> perm;
    NormTracker<real_t<T>> tracker;

    std::size_t rows() const noexcept { return factors.rows(); }
    std::size_t cols() const noexcept { return factors.cols(); }
    std::size_t steps() const noexcept { return taus.size(); }
};

/// What an observer sees at step k: the partially reduced matrix and tracker
/// state just after the pivot was chosen and before it is swapped into place.
template <Scalar T>
struct StepView {
    std::size_t step;
    std::size_t pivot;
    const Matrix<T>& work;
    const NormTracker<real_t<T>>& tracker;
};

template <Scalar T>
using StepObserver = std::function<void(const StepView<T>&)>;

/// Active column (index >= k) with the largest tracked norm. Sequentially the
/// lowest index wins ties; with a topology the grid reduction order decides.
template <RealScalar R>
std::size_t select_pivot(const NormTracker<R>& t, std::size_t k,
                         const std::optional<GridTopology>& topology = std::nullopt)
{
    if (k >= t.size())
        throw std::out_of_range("select_pivot: no active columns at step " + std::to_string(k));
    const std::span<const R> active = std::span<const R>(t.omega).subspan(k);
    if (topology)
        return k + distributed_argmax<R>(active, *topology, k);
    std::size_t best = 0;
    for (std::size_t i = 1; i < active.size(); ++i)
        if (active[i] > active[best])
            best = i;
    return k + best;
}

template <Scalar T>
PivotedQRResult<T> factorize(const Matrix<T>& A, const StrategyConfig& cfg,
                             const StepObserver<T>& observer = {})
{
    using R = real_t<T>;
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (m == 0 || n == 0)
        throw std::invalid_argument("factorize: matrix must have at least one row and column");
    cfg.validate<R>();

    PivotedQRResult<T> res;
    res.factors = A;
    Matrix<T>& W = res.factors;
    res.perm.resize(n);
    std::iota(res.perm.begin(), res.perm.end(), std::size_t{0});
    res.tracker = tracker_init(W, cfg.topology);

    const std::size_t p = std::min(m, n);
    res.taus.assign(p, T(0));
    std::vector<R> betas(n, R(0));

    for (std::size_t k = 0; k < p; ++k) {
        const std::size_t pivot = select_pivot(res.tracker, k, cfg.topology);
        if (observer)
            observer(StepView<T>{k, pivot, W, res.tracker});
        if (pivot != k) {
            W.swap_columns(k, pivot);
            std::swap(res.perm[k], res.perm[pivot]);
            res.tracker.swap_columns(k, pivot);
        }

        auto x = W.col(k, k);
        const T tau = generate_reflector_in_place<T>(x);
        res.taus[k] = tau;
        if (k + 1 < n) {
            reflect_columns<T>(tau, std::span<const T>(x.subspan(1)), W, k, k + 1, n);
            for (std::size_t j = k + 1; j < n; ++j)
                betas[j] = abs_value(W(k, j));
            tracker_step<T>(res.tracker, k, betas, W, cfg);
        }
    }
    return res;
}

/// Explicit m x m unitary Q with A * P = Q * [R; 0].
template <Scalar T>
Matrix<T> form_q(const PivotedQRResult<T>& r)
{
    const std::size_t m = r.rows();
    Matrix<T> Q = Matrix<T>::identity(m);
    // A P = H_0^H H_1^H ... [R; 0]; accumulate from the last reflector.
    for (std::size_t k = r.steps(); k-- > 0;) {
        const T tau_h = conj_value(r.taus[k]);
        const std::span<const T> v_tail = r.factors.col(k, std::min(k + 1, m));
        reflect_columns<T>(tau_h, v_tail, Q, k, k, m);
    }
    return Q;
}

/// min(m, n) x n upper triangle with exact zeros below the diagonal.
template <Scalar T>
Matrix<T> extract_r(const PivotedQRResult<T>& r)
{
    const std::size_t p = r.steps();
    const std::size_t n = r.cols();
    Matrix<T> R(p, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= std::min(j, p - 1); ++i)
            R(i, j) = r.factors(i, j);
    return R;
}

} // namespace rrqr
