#pragma once

// Partial column norm tracking for Householder QR with column pivoting.
//
// After step k every active column j has lost the component beta_j that the
// reflector moved into row k, so its trailing norm can be downdated as
//
//     omega' = omega * sqrt((1 + beta/omega) * (1 - beta/omega))
//
// instead of being recomputed. Repeated downdating cancels, so a switch
// decides when the tracked value is no longer trustworthy and the norm must
// be recomputed from the matrix. nu_j remembers the last recomputed value;
// (omega_j / nu_j)^2 measures how much has been subtracted since then.
//
// Two switches are provided:
//   Classic: recompute iff 1 + 0.05 * temp * (omega/nu)^2 == 1, where
//            temp = max(0, 1 - (beta/omega)^2). Whether the sum rounds to 1
//            depends on the precision it is evaluated in.
//   Robust:  recompute iff temp * (omega/nu)^2 <= tol, tol = sqrt(eps),
//            temp = max(0, (1 + t)(1 - t)), t = beta/omega.
// ExactRecompute always recomputes and serves as the oracle.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrqr/core.hpp"
#include "rrqr/gridsim.hpp"

namespace rrqr {

enum class StrategyKind { Classic, Robust, ExactRecompute };

enum class Decision { Downdate, ExplicitRecompute, FlushZero };

std::string to_string(StrategyKind kind);
std::string to_string(Decision decision);
StrategyKind parse_strategy(const std::string& name);

/// Recompute the norm of column j + offset instead of column j. offset = -1
/// reproduces the off-by-one column index of the historical complex routines.
struct WrongColumnRecompute {
    std::ptrdiff_t offset = -1;
    bool operator==(const WrongColumnRecompute&) const = default;
};

struct Injections {
    /// Evaluate the classic control variables in double while the data is
    /// single precision, as an x87 register would.
    bool excess_precision_control = false;
    std::optional<WrongColumnRecompute> wrong_column;
    bool operator==(const Injections&) const = default;
};

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Robust;
    /// Robust threshold; unset means sqrt(eps) of the working precision.
    std::optional<double> tol;
    Injections inject;
    std::optional<GridTopology> topology;

    /// Throws std::invalid_argument for combinations that have no meaning in
    /// the given working precision.
    template <RealScalar R>
    void validate() const
    {
        if (tol && !(*tol > 0.0))
            throw std::invalid_argument("StrategyConfig: tol must be positive");
        if (inject.excess_precision_control) {
            if (kind != StrategyKind::Classic)
                throw std::invalid_argument(
                    "StrategyConfig: excess-precision control only applies to the classic strategy");
            if (!std::is_same_v<R, float>)
                throw std::invalid_argument(
                    "StrategyConfig: excess-precision control requires single working precision");
        }
        if (topology)
            topology->validate();
    }

    template <RealScalar R>
    R resolved_tol() const
    {
        return tol ? static_cast<R>(*tol) : std::sqrt(std::numeric_limits<R>::epsilon());
    }
};

struct DowndateEvent {
    std::size_t step = 0;
    std::size_t column = 0;
    double beta = 0;
    double temp = 0;
    double temp2 = 0;
    Decision decision = Decision::Downdate;
    double omega_before = 0;
    double omega_after = 0;

    bool operator==(const DowndateEvent&) const = default;
};

/// CSV with header k,j,beta,temp,temp2,decision,omega_before,omega_after;
/// reals in 17 significant digits.
void write_events_csv(std::ostream& os, std::span<const DowndateEvent> events);

template <RealScalar R>
struct NormTracker {
    std::vector<R> omega; ///< running partial norms
    std::vector<R> nu;    ///< last explicitly computed norms
    std::vector<DowndateEvent> events;

    std::size_t size() const noexcept { return omega.size(); }

    void swap_columns(std::size_t a, std::size_t b)
    {
        std::swap(omega.at(a), omega.at(b));
        std::swap(nu.at(a), nu.at(b));
    }
};

struct DecisionOutcome {
    Decision decision;
    double temp;  ///< predicted loss, in the precision it was computed in
    double temp2; ///< combined control value
};

/// Factored form temp = max(0, (1 + t)(1 - t)), t = beta / omega.
template <RealScalar R>
R predicted_loss(R omega, R beta)
{
    if (omega == R(0))
        throw std::invalid_argument("downdate: omega must be nonzero");
    const R t = beta / omega;
    return std::max(R(0), (R(1) + t) * (R(1) - t));
}

template <RealScalar R>
R downdate_formula(R omega, R beta)
{
    return omega * std::sqrt(predicted_loss(omega, beta));
}

namespace detail {

template <RealScalar Control, RealScalar R>
DecisionOutcome classic_decide_in(R omega, R nu, R beta)
{
    const Control t = static_cast<Control>(beta) / static_cast<Control>(omega);
    Control temp = Control(1) - t * t;
    temp = std::max(temp, Control(0));
    const Control ratio = static_cast<Control>(omega) / static_cast<Control>(nu);
    const Control temp2 = Control(1) + Control(0.05) * temp * (ratio * ratio);
    return {temp2 == Control(1) ? Decision::ExplicitRecompute : Decision::Downdate,
            static_cast<double>(temp), static_cast<double>(temp2)};
}

} // namespace detail

/// Classic switch. With excess_control the control variables are evaluated in
/// double; only meaningful (and only accepted) for float data.
template <RealScalar R>
DecisionOutcome classic_decide(R omega, R nu, R beta, bool excess_control = false)
{
    if (omega == R(0) || nu == R(0))
        throw std::invalid_argument("classic_decide: omega and nu must be nonzero");
    if (excess_control) {
        if constexpr (std::is_same_v<R, float>)
            return detail::classic_decide_in<double>(omega, nu, beta);
        else
            throw std::invalid_argument(
                "classic_decide: excess-precision control requires single working precision");
    }
    return detail::classic_decide_in<R>(omega, nu, beta);
}

template <RealScalar R>
DecisionOutcome robust_decide(R omega, R nu, R beta, R tol)
{
    if (omega == R(0) || nu == R(0))
        throw std::invalid_argument("robust_decide: omega and nu must be nonzero");
    if (!(tol > R(0)))
        throw std::invalid_argument("robust_decide: tol must be positive");
    const R temp = predicted_loss(omega, beta);
    const R ratio = omega / nu;
    const R temp2 = temp * (ratio * ratio);
    return {temp2 <= tol ? Decision::ExplicitRecompute : Decision::Downdate,
            static_cast<double>(temp), static_cast<double>(temp2)};
}

/// Norm of A(first_row:m, j), through the grid simulator when a topology is
/// configured.
template <Scalar T>
real_t<T> trailing_norm(const Matrix<T>& A, std::size_t j, std::size_t first_row,
                        const std::optional<GridTopology>& topology)
{
    if (topology)
        return distributed_norm<T>(A.col(j, first_row), *topology, first_row);
    return column_norm(A, j, first_row);
}

template <Scalar T>
NormTracker<real_t<T>> tracker_init(const Matrix<T>& A,
                                    const std::optional<GridTopology>& topology = std::nullopt)
{
    NormTracker<real_t<T>> t;
    t.omega.resize(A.cols());
    for (std::size_t j = 0; j < A.cols(); ++j)
        t.omega[j] = trailing_norm(A, j, 0, topology);
    t.nu = t.omega;
    return t;
}

/// Updates the norms of the active columns j > k after step k.
/// betas[j] must hold |A(k, j)| of the freshly reflected matrix A. Columns
/// whose tracked norm is already zero are left alone.
template <Scalar T>
void tracker_step(NormTracker<real_t<T>>& t, std::size_t k, std::span<const real_t<T>> betas,
                  const Matrix<T>& A, const StrategyConfig& cfg)
{
    using R = real_t<T>;
    const std::size_t n = A.cols();
    const std::size_t m = A.rows();
    if (t.size() != n || betas.size() != n)
        throw std::invalid_argument("tracker_step: tracker/beta size does not match the matrix");
    const R tol = cfg.resolved_tol<R>();

    for (std::size_t j = k + 1; j < n; ++j) {
        const R omega = t.omega[j];
        if (omega == R(0))
            continue;
        const R nu = t.nu[j];
        const R beta = betas[j];

        DecisionOutcome out{};
        switch (cfg.kind) {
        case StrategyKind::Classic:
            out = classic_decide<R>(omega, nu, beta, cfg.inject.excess_precision_control);
            break;
        case StrategyKind::Robust:
            out = robust_decide<R>(omega, nu, beta, tol);
            break;
        case StrategyKind::ExactRecompute: {
            const R temp = predicted_loss(omega, beta);
            const R ratio = omega / nu;
            out = {Decision::ExplicitRecompute, static_cast<double>(temp),
                   static_cast<double>(temp * (ratio * ratio))};
            break;
        }
        }

        if (out.decision == Decision::ExplicitRecompute) {
            if (k + 1 < m) {
                std::size_t src = j;
                if (cfg.inject.wrong_column) {
                    const auto shifted =
                        static_cast<std::ptrdiff_t>(j) + cfg.inject.wrong_column->offset;
                    if (shifted < 0 || shifted >= static_cast<std::ptrdiff_t>(n))
                        throw std::out_of_range("wrong-column injection: column " +
                                                std::to_string(shifted) + " does not exist");
                    src = static_cast<std::size_t>(shifted);
                }
                t.omega[j] = trailing_norm(A, src, k + 1, cfg.topology);
                t.nu[j] = t.omega[j];
            } else {
                t.omega[j] = R(0);
                t.nu[j] = R(0);
                out.decision = Decision::FlushZero;
            }
        } else {
            t.omega[j] = downdate_formula(omega, beta);
        }

        t.events.push_back({k, j, static_cast<double>(beta), out.temp, out.temp2, out.decision,
                            static_cast<double>(omega), static_cast<double>(t.omega[j])});
    }
}

} // namespace rrqr
