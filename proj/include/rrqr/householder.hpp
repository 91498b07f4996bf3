#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rrqr/core.hpp"

namespace rrqr {

/// Elementary reflector H = I - tau * v * v^H with v[0] == 1, normalized so
/// that H * x = (beta, 0, ..., 0)^T for the generating vector x. beta is real
/// even for complex data; tau == 0 encodes the identity.
template <Scalar T>
struct Reflector {
    std::vector<T> v;
    T tau{};
    real_t<T> beta{};
};

namespace detail {

template <RealScalar R>
R hypot3(R a, R b, R c)
{
    const R w = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (w == R(0))
        return R(0);
    const R x = a / w, y = b / w, z = c / w;
    return w * std::sqrt(x * x + y * y + z * z);
}

} // namespace detail

/// Generates the reflector for x in place, larfg style: on return x[0] holds
/// beta and x[1:] holds v[1:]. Returns tau.
///
/// beta = -sign(Re x0) * ||x||, so forming v[0] = x0 - beta never cancels.
/// When x[1:] == 0 and x0 is real the identity (tau = 0, beta = x0) is
/// returned, which keeps zero columns free of NaNs.
template <Scalar T>
T generate_reflector_in_place(std::span<T> x)
{
    using R = real_t<T>;
    if (x.empty())
        throw std::invalid_argument("reflector_generate: empty vector");
    auto tail = x.subspan(1);
    R xnorm = vector_norm<T>(std::span<const T>(tail));
    R alpha_re = real_part(x[0]);
    R alpha_im = imag_part(x[0]);
    if (xnorm == R(0) && alpha_im == R(0))
        return T(0);

    R beta = -std::copysign(detail::hypot3(alpha_re, alpha_im, xnorm), alpha_re);
    const R safmin = std::numeric_limits<R>::min() / std::numeric_limits<R>::epsilon();
    const R rsafmn = R(1) / safmin;
    int knt = 0;
    if (std::abs(beta) < safmin) {
        // beta may be inaccurate; rescale x until it is not tiny.
        do {
            ++knt;
            for (T& t : tail)
                t *= rsafmn;
            beta *= rsafmn;
            alpha_re *= rsafmn;
            alpha_im *= rsafmn;
        } while (std::abs(beta) < safmin && knt < 20);
        xnorm = vector_norm<T>(std::span<const T>(tail));
        beta = -std::copysign(detail::hypot3(alpha_re, alpha_im, xnorm), alpha_re);
    }

    T tau;
    T alpha;
    if constexpr (is_complex_v<T>) {
        // Conjugate of the larfg tau: we want H x = beta e1, not H^H x.
        tau = T((beta - alpha_re) / beta, alpha_im / beta);
        alpha = T(alpha_re, alpha_im);
    } else {
        tau = (beta - alpha_re) / beta;
        alpha = alpha_re;
    }
    const T scal = T(1) / (alpha - T(beta));
    for (T& t : tail)
        t *= scal;
    for (int i = 0; i < knt; ++i)
        beta *= safmin;
    x[0] = T(beta);
    return tau;
}

template <Scalar T>
Reflector<T> reflector_generate(std::span<const T> x)
{
    if (x.empty())
        throw std::invalid_argument("reflector_generate: empty vector");
    std::vector<T> w(x.begin(), x.end());
    Reflector<T> r;
    r.tau = generate_reflector_in_place<T>(w);
    r.beta = real_part(w[0]);
    r.v = std::move(w);
    r.v[0] = T(1);
    return r;
}

/// B <- H * B for every column of B. Row 0 of the result carries the
/// eliminated components consumed by the norm downdating.
template <Scalar T>
void reflector_apply(const Reflector<T>& r, Matrix<T>& B)
{
    if (r.v.empty() || B.rows() != r.v.size())
        throw std::invalid_argument("reflector_apply: block has " + std::to_string(B.rows()) +
                                    " rows, reflector length is " +
                                    std::to_string(r.v.size()));
    reflect_columns<T>(r.tau, std::span<const T>(r.v).subspan(1), B, 0, 0, B.cols());
}

/// Dense H = I - tau v v^H; for tests and small oracles.
template <Scalar T>
Matrix<T> reflector_matrix(const Reflector<T>& r)
{
    const std::size_t n = r.v.size();
    Matrix<T> H = Matrix<T>::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            H(i, j) -= r.tau * r.v[i] * conj_value(r.v[j]);
    return H;
}

} // namespace rrqr
