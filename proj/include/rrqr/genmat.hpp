#pragma once

// Test matrix generators: Kahan matrices, their symmetrized variant, and
// seeded Gaussian matrices.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "rrqr/core.hpp"

namespace rrqr {

/// Parameters of the Kahan matrix K_n(c); s = sqrt(1 - c^2).
struct KahanParams {
    std::size_t n = 1;
    double c = 0.0;

    double s() const { return std::sqrt(1.0 - c * c); }

    void validate() const
    {
        if (n == 0)
            throw std::invalid_argument("KahanParams: order n must be at least 1");
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("KahanParams: c must lie in [0, 1]");
        if (n > 1 && !(s() > 0.0))
            throw std::invalid_argument("KahanParams: s = sqrt(1 - c^2) must be positive for n > 1");
    }
};

/// K_n(c): entry (i, j) = s^i * (delta_ij - c * [i < j]), zero-based. Built
/// in double and rounded once into the working precision; the row scale s^i
/// is a running product, so the diagonal is exactly (1, s, s*s, ...).
template <RealScalar T>
Matrix<T> kahan(const KahanParams& p)
{
    p.validate();
    const double s = p.s();
    Matrix<T> K(p.n, p.n);
    double row_scale = 1.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        K(i, i) = static_cast<T>(row_scale);
        const double off = -p.c * row_scale;
        for (std::size_t j = i + 1; j < p.n; ++j)
            K(i, j) = static_cast<T>(off);
        row_scale *= s;
    }
    return K;
}

/// M_n(c) = K_n(c) + K_n(c)^T.
template <RealScalar T>
Matrix<T> symmetrized_kahan(const KahanParams& p)
{
    const Matrix<T> K = kahan<T>(p);
    Matrix<T> M(p.n, p.n);
    for (std::size_t j = 0; j < p.n; ++j)
        for (std::size_t i = 0; i < p.n; ++i)
            M(i, j) = K(i, j) + K(j, i);
    return M;
}

/// Standard normal deviates, "gaussian-v1": std::mt19937_64 seeded with the
/// user seed; each pair of 64-bit draws u1, u2 is mapped to 53-bit uniforms
/// in (0, 1] and [0, 1) and turned into two deviates by Box-Muller
/// (cos branch first). std::normal_distribution is avoided because its
/// algorithm is implementation-defined.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double two_m53 = 1.0 / 9007199254740992.0;
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * two_m53;
        const double u2 = static_cast<double>(engine_() >> 11) * two_m53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// m x n matrix of i.i.d. standard normal entries, filled in column-major
/// order. Complex entries have real and imaginary parts each of variance 1/2,
/// so E|a_ij|^2 = 1.
template <Scalar T>
Matrix<T> random_gaussian(std::size_t m, std::size_t n, std::uint64_t seed)
{
    if (m == 0 || n == 0)
        throw std::invalid_argument("random_gaussian: dimensions must be positive");
    using R = real_t<T>;
    GaussianSource g(seed);
    Matrix<T> A(m, n);
    for (T& a : A.data()) {
        if constexpr (is_complex_v<T>) {
            const double re = g.next() * std::numbers::sqrt2 / 2.0;
            const double im = g.next() * std::numbers::sqrt2 / 2.0;
            a = T(static_cast<R>(re), static_cast<R>(im));
        } else {
            a = static_cast<T>(g.next());
        }
    }
    return A;
}

} // namespace rrqr
