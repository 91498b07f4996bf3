#pragma once

// Checks of the rank-revealing structure of R,
//
//     |R_00| >= |R_11| >= ... ,   |R_ii| >= ||R(i:j, j)||  for all i <= j,
//
// plus residual/orthogonality metrics, numerical rank, row-scaled
// conditioning and the column-scaled conditioning precondition for
// downdating failures.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rrqr/core.hpp"
#include "rrqr/qrcp.hpp"

namespace rrqr {

struct StructureViolation {
    std::size_t i;
    std::size_t j;
    double ratio;
    bool operator==(const StructureViolation&) const = default;
};

struct StructureReport {
    bool monotone_ok = true;
    bool dominance_ok = true;
    double worst_monotone_ratio = 0; ///< max_i |R_{i+1,i+1}| / |R_ii|
    double worst_dominance_ratio = 0; ///< max_{i<j} ||R(i:j, j)|| / |R_ii|
    /// Monotonicity breaks are recorded as (i, i+1), dominance breaks as (i, j).
    std::vector<StructureViolation> violations;
    std::vector<double> red_line;  ///< |R_ii|
    std::vector<double> blue_line; ///< max_{j>i} ||R(i:j, j)||, 0 when there is no j > i
    std::size_t numerical_rank = 0;
    double slack = 0;
    double tau = 0;

    bool ok() const noexcept { return monotone_ok && dominance_ok; }
};

namespace detail {

inline double safe_ratio(double num, double den)
{
    if (num == 0.0)
        return 0.0;
    if (den == 0.0)
        return std::numeric_limits<double>::infinity();
    return num / den;
}

/// Magnitudes below the smallest normal number of T carry no relative
/// accuracy, so ratio tests treat them as zero.
template <Scalar T>
double resolved(double x)
{
    return x < static_cast<double>(std::numeric_limits<real_t<T>>::min()) ? 0.0 : x;
}

template <Scalar T>
void require_upper_triangular(const Matrix<T>& R, const char* who)
{
    for (std::size_t j = 0; j < R.cols(); ++j)
        for (std::size_t i = j + 1; i < R.rows(); ++i)
            if (R(i, j) != T(0))
                throw std::invalid_argument(std::string(who) + ": input is not upper triangular (entry (" +
                                            std::to_string(i) + ", " + std::to_string(j) + "))");
}

} // namespace detail

template <Scalar T>
double default_slack(std::size_t n)
{
    return 100.0 * static_cast<double>(n) * static_cast<double>(epsilon<T>());
}

template <Scalar T>
double default_rank_tau(std::size_t n)
{
    return static_cast<double>(std::max<std::size_t>(n, 1)) * static_cast<double>(epsilon<T>());
}

/// First k with |R_kk| < tau * |R_{k-1,k-1}| (scanning from the top), else
/// min(m, n). A zero leading diagonal gives rank 0.
template <Scalar T>
std::size_t numerical_rank(const Matrix<T>& R, double tau)
{
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("numerical_rank: tau must lie in (0, 1)");
    const std::size_t p = std::min(R.rows(), R.cols());
    if (p == 0 || R(0, 0) == T(0))
        return 0;
    for (std::size_t i = 0; i + 1 < p; ++i) {
        const double cur = abs_value(R(i, i));
        const double next = abs_value(R(i + 1, i + 1));
        if (next < tau * cur)
            return i + 1;
    }
    return p;
}

/// Evaluates both inequality families with multiplicative slack (1 + slack).
/// Subnormal magnitudes compare as zero in the ratios; the profiles keep them.
/// Sub-column norms are accumulated upwards per column, O(n^2) overall.
template <Scalar T>
StructureReport check_structure(const Matrix<T>& R, std::optional<double> slack = std::nullopt,
                                std::optional<double> tau = std::nullopt)
{
    detail::require_upper_triangular(R, "check_structure");
    const std::size_t p = std::min(R.rows(), R.cols());
    const std::size_t n = R.cols();

    StructureReport rep;
    rep.slack = slack.value_or(default_slack<T>(n));
    rep.tau = tau.value_or(default_rank_tau<T>(p));
    if (!(rep.slack >= 0.0))
        throw std::invalid_argument("check_structure: slack must be nonnegative");
    const double limit = 1.0 + rep.slack;
    if (p == 0)
        return rep;

    rep.red_line.resize(p);
    rep.blue_line.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        rep.red_line[i] = abs_value(R(i, i));

    for (std::size_t i = 0; i + 1 < p; ++i) {
        const double r =
            detail::safe_ratio(detail::resolved<T>(rep.red_line[i + 1]), detail::resolved<T>(rep.red_line[i]));
        rep.worst_monotone_ratio = std::max(rep.worst_monotone_ratio, r);
        if (r > limit)
            rep.violations.push_back({i, i + 1, r});
    }

    std::vector<StructureViolation> dominance;
    for (std::size_t j = 1; j < n; ++j) {
        ScaledSumSquares<double> acc;
        const std::size_t top = std::min(j, p - 1);
        for (std::size_t i = top + 1; i-- > 0;) {
            const T v = R(i, j);
            acc.add(static_cast<double>(real_part(v)));
            acc.add(static_cast<double>(imag_part(v)));
            if (i == j)
                continue;
            const double norm = acc.value();
            rep.blue_line[i] = std::max(rep.blue_line[i], norm);
            const double r = detail::safe_ratio(detail::resolved<T>(norm), detail::resolved<T>(rep.red_line[i]));
            rep.worst_dominance_ratio = std::max(rep.worst_dominance_ratio, r);
            if (r > limit)
                dominance.push_back({i, j, r});
        }
    }
    std::sort(dominance.begin(), dominance.end(), [](const auto& a, const auto& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    rep.violations.insert(rep.violations.end(), dominance.begin(), dominance.end());

    rep.monotone_ok = rep.worst_monotone_ratio <= limit;
    rep.dominance_ok = rep.worst_dominance_ratio <= limit;
    rep.numerical_rank = numerical_rank(R, rep.tau);
    return rep;
}

struct ResidualMetrics {
    double residual_rel = 0; ///< ||A P - Q R||_F / ||A||_F, 0 when A == 0
    double ortho = 0;        ///< ||Q^H Q - I||_F
};

template <Scalar T>
ResidualMetrics residual_metrics(const Matrix<T>& A, const PivotedQRResult<T>& r)
{
    if (A.rows() != r.rows() || A.cols() != r.cols())
        throw std::invalid_argument("residual_metrics: factorization does not match A");
    const std::size_t m = A.rows();
    const std::size_t p = r.steps();
    const Matrix<T> Q = form_q(r);
    const Matrix<T> Rf = extract_r(r);

    Matrix<T> Qp(m, p);
    for (std::size_t j = 0; j < p; ++j) {
        auto src = Q.col(j);
        std::copy(src.begin(), src.end(), Qp.col(j).begin());
    }
    Matrix<T> D = permute_columns(A, std::span<const std::size_t>(r.perm));
    const Matrix<T> QR = multiply(Qp, Rf);
    for (std::size_t i = 0; i < D.data().size(); ++i)
        D.data()[i] -= QR.data()[i];

    ResidualMetrics out;
    const double anorm = frobenius_norm(A);
    out.residual_rel = anorm == 0.0 ? 0.0 : static_cast<double>(frobenius_norm(D)) / anorm;

    Matrix<T> G = multiply(adjoint(Q), Q);
    for (std::size_t i = 0; i < m; ++i)
        G(i, i) -= T(1);
    out.ortho = frobenius_norm(G);
    return out;
}

/// Singular values (descending) by one-sided Jacobi on the columns. Needs no
/// pivoted QR, so it can serve as an independent oracle.
template <Scalar T>
std::vector<double> singular_values(const Matrix<T>& A, int max_sweeps = 80)
{
    using R = real_t<T>;
    Matrix<T> U = A.rows() >= A.cols() ? A : adjoint(A);
    const std::size_t m = U.rows();
    const std::size_t n = U.cols();
    const R tol = std::numeric_limits<R>::epsilon() * std::sqrt(static_cast<R>(m));

    auto dot = [&](std::size_t a, std::size_t b) {
        auto x = U.col(a);
        auto y = U.col(b);
        T s{};
        for (std::size_t i = 0; i < m; ++i)
            s += conj_value(x[i]) * y[i];
        return s;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const R alpha = real_part(dot(p, p));
                const R beta = real_part(dot(q, q));
                const T gamma = dot(p, q);
                const R g = abs_value(gamma);
                if (g == R(0) || g <= tol * std::sqrt(alpha) * std::sqrt(beta))
                    continue;
                rotated = true;
                // Rotate (u_p, u_q * conj(phase)) where phase = gamma / |gamma|,
                // which makes the pair's inner product real and positive.
                const T phase = gamma / g;
                const R zeta = (beta - alpha) / (R(2) * g);
                const R t = std::copysign(R(1), zeta) / (std::abs(zeta) + std::sqrt(R(1) + zeta * zeta));
                const R c = R(1) / std::sqrt(R(1) + t * t);
                const R s = c * t;
                auto x = U.col(p);
                auto y = U.col(q);
                for (std::size_t i = 0; i < m; ++i) {
                    const T up = x[i];
                    const T uq = y[i] * conj_value(phase);
                    x[i] = c * up - s * uq;
                    y[i] = s * up + c * uq;
                }
            }
        }
        if (!rotated)
            break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j)
        sv[j] = static_cast<double>(column_norm(U, j));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

/// kappa_2 of R_r = diag(1 / ||R(i,:)||) * R restricted to its leading
/// rank x rank block (rank defaults to min(m, n)).
template <Scalar T>
double row_scaled_condition(const Matrix<T>& R, std::optional<std::size_t> rank = std::nullopt)
{
    detail::require_upper_triangular(R, "row_scaled_condition");
    const std::size_t p = std::min(R.rows(), R.cols());
    const std::size_t k = rank.value_or(p);
    if (k > p)
        throw std::invalid_argument("row_scaled_condition: rank exceeds min(m, n)");
    if (k == 0)
        return 1.0;
    Matrix<T> B(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        ScaledSumSquares<real_t<T>> acc;
        for (std::size_t j = i; j < R.cols(); ++j)
            acc.add_entry(R(i, j));
        const real_t<T> rn = acc.value();
        if (rn == real_t<T>(0))
            throw std::invalid_argument("row_scaled_condition: zero row " + std::to_string(i) +
                                        " inside the scaled block");
        for (std::size_t j = i; j < k; ++j)
            B(i, j) = R(i, j) / rn;
    }
    const auto sv = singular_values(B);
    return sv.back() == 0.0 ? std::numeric_limits<double>::infinity() : sv.front() / sv.back();
}

struct FailurePrecondition {
    double kappa_c = 0;       ///< ||A_c^+|| = 1 / sigma_min(A_c)
    bool susceptible = false; ///< kappa_c > 1 / sqrt(eps)
};

/// Column-scaled conditioning: A = A_c * diag(||A(:, i)||). Downdating can
/// only go wrong when ||A_c^+|| exceeds 1 / sqrt(eps).
template <Scalar T>
FailurePrecondition failure_precondition(const Matrix<T>& A)
{
    Matrix<T> Ac = A;
    for (std::size_t j = 0; j < A.cols(); ++j) {
        const real_t<T> cn = column_norm(A, j);
        if (cn == real_t<T>(0))
            throw std::invalid_argument("failure_precondition: column " + std::to_string(j) +
                                        " is zero");
        for (T& v : Ac.col(j))
            v /= cn;
    }
    const auto sv = singular_values(Ac);
    FailurePrecondition out;
    out.kappa_c = sv.back() == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / sv.back();
    out.susceptible = out.kappa_c > 1.0 / std::sqrt(static_cast<double>(epsilon<T>()));
    return out;
}

struct PivotDivergence {
    bool diverged = false;
    std::size_t step = 0;
    std::size_t column_a = 0; ///< original index chosen by a at that step
    std::size_t column_b = 0;
    double norm_a = 0; ///< true trailing norms after replaying the common steps
    double norm_b = 0;
    double relative_gap = 0;
};

/// True trailing norms of every column of A * P after the first k Householder
/// steps taken without pivoting, i.e. a replay of a partial factorization.
template <Scalar T>
std::vector<real_t<T>> replay_trailing_norms(const Matrix<T>& A, std::span<const std::size_t> order,
                                             std::size_t k)
{
    Matrix<T> W = permute_columns(A, order);
    const std::size_t steps = std::min({k, W.rows(), W.cols()});
    for (std::size_t s = 0; s < steps; ++s) {
        auto x = W.col(s, s);
        const T tau = generate_reflector_in_place<T>(x);
        reflect_columns<T>(tau, std::span<const T>(x.subspan(1)), W, s, s + 1, W.cols());
    }
    std::vector<real_t<T>> norms(W.cols());
    for (std::size_t j = 0; j < W.cols(); ++j)
        norms[j] = column_norm(W, j, std::min(steps, W.rows()));
    return norms;
}

template <Scalar T>
PivotDivergence compare_pivots(const PivotedQRResult<T>& a, const PivotedQRResult<T>& b,
                               const Matrix<T>& A)
{
    if (a.perm.size() != A.cols() || b.perm.size() != A.cols())
        throw std::invalid_argument("compare_pivots: results do not belong to A");
    PivotDivergence d;
    const std::size_t steps = std::min(a.steps(), b.steps());
    std::size_t k = 0;
    while (k < steps && a.perm[k] == b.perm[k])
        ++k;
    if (k == steps)
        return d;
    d.diverged = true;
    d.step = k;
    d.column_a = a.perm[k];
    d.column_b = b.perm[k];
    const auto norms = replay_trailing_norms(A, std::span<const std::size_t>(a.perm), k);
    const auto pos_b = static_cast<std::size_t>(
        std::find(a.perm.begin(), a.perm.end(), d.column_b) - a.perm.begin());
    d.norm_a = norms[k];
    d.norm_b = norms[pos_b];
    const double top = std::max(d.norm_a, d.norm_b);
    d.relative_gap = top == 0.0 ? 0.0 : std::abs(d.norm_a - d.norm_b) / top;
    return d;
}

} // namespace rrqr
