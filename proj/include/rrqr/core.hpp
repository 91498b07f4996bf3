#pragma once

// Scalar traits, dense column-major storage and the handful of vector
// kernels shared by the factorization, the norm tracker and the checkers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace rrqr {

template <class T>
struct scalar_traits {
    using real_type = T;
    static constexpr bool is_complex = false;
};

template <class R>
struct scalar_traits<std::complex<R>> {
    using real_type = R;
    static constexpr bool is_complex = true;
};

template <class T>
using real_t = typename scalar_traits<T>::real_type;

template <class T>
concept RealScalar = std::same_as<T, float> || std::same_as<T, double>;

template <class T>
concept Scalar = RealScalar<T> || std::same_as<T, std::complex<float>> ||
                 std::same_as<T, std::complex<double>>;

template <class T>
inline constexpr bool is_complex_v = scalar_traits<T>::is_complex;

/// Machine epsilon of the working precision (distance from 1 to the next
/// representable value).
template <Scalar T>
constexpr real_t<T> epsilon() noexcept
{
    return std::numeric_limits<real_t<T>>::epsilon();
}

template <Scalar T>
inline real_t<T> abs_value(const T& x) noexcept
{
    // std::abs on std::complex goes through hypot, so no intermediate overflow.
    return std::abs(x);
}

template <Scalar T>
inline T conj_value(const T& x) noexcept
{
    if constexpr (is_complex_v<T>)
        return std::conj(x);
    else
        return x;
}

template <Scalar T>
inline real_t<T> real_part(const T& x) noexcept
{
    if constexpr (is_complex_v<T>)
        return x.real();
    else
        return x;
}

template <Scalar T>
inline real_t<T> imag_part(const T& x) noexcept
{
    if constexpr (is_complex_v<T>)
        return x.imag();
    else
        return real_t<T>(0);
}

/// Running (scale, ssq) pair of the reference nrm2/lassq kind: the value is
/// scale * sqrt(ssq), and no square of an entry larger than the running
/// maximum is ever formed.
template <RealScalar R>
struct ScaledSumSquares {
    R scale = 0;
    R ssq = 1;

    void add(R x) noexcept
    {
        if (x == R(0))
            return;
        const R a = std::abs(x);
        if (scale < a) {
            const R q = scale / a;
            ssq = R(1) + ssq * (q * q);
            scale = a;
        } else {
            const R q = a / scale;
            ssq += q * q;
        }
    }

    template <Scalar T>
        requires std::same_as<real_t<T>, R>
    void add_entry(const T& x) noexcept
    {
        if constexpr (is_complex_v<T>) {
            add(x.real());
            add(x.imag());
        } else {
            add(x);
        }
    }

    void merge(const ScaledSumSquares& other) noexcept
    {
        if (other.scale == R(0))
            return;
        if (scale == R(0)) {
            *this = other;
            return;
        }
        if (scale >= other.scale) {
            const R q = other.scale / scale;
            ssq += other.ssq * (q * q);
        } else {
            const R q = scale / other.scale;
            ssq = other.ssq + ssq * (q * q);
            scale = other.scale;
        }
    }

    R value() const noexcept { return scale * std::sqrt(ssq); }
};

/// Euclidean norm of a contiguous vector by one-pass scaled accumulation.
template <Scalar T>
real_t<T> vector_norm(std::span<const T> x) noexcept
{
    ScaledSumSquares<real_t<T>> acc;
    for (const T& v : x)
        acc.add_entry(v);
    return acc.value();
}

/// Dense column-major matrix. Element access is bounds checked; the hot
/// loops work on column spans obtained through col().
template <Scalar T>
class Matrix {
public:
    using value_type = T;
    using real_type = real_t<T>;
    using size_type = std::size_t;

    Matrix() = default;

    Matrix(size_type rows, size_type cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    /// Row-major nested initializer, as one would write the matrix by hand.
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
    {
        data_.resize(rows_ * cols_);
        size_type i = 0;
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("Matrix: ragged initializer list");
            size_type j = 0;
            for (const T& v : r)
                data_[j++ * rows_ + i] = v;
            ++i;
        }
    }

    static Matrix identity(size_type n)
    {
        Matrix I(n, n);
        for (size_type i = 0; i < n; ++i)
            I.data_[i * n + i] = T(1);
        return I;
    }

    size_type rows() const noexcept { return rows_; }
    size_type cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(size_type i, size_type j)
    {
        check(i, j);
        return data_[j * rows_ + i];
    }

    const T& operator()(size_type i, size_type j) const
    {
        check(i, j);
        return data_[j * rows_ + i];
    }

    /// Column slice A(i0:m, j).
    std::span<T> col(size_type j, size_type i0 = 0)
    {
        check_slice(j, i0);
        return {data_.data() + j * rows_ + i0, rows_ - i0};
    }

    std::span<const T> col(size_type j, size_type i0 = 0) const
    {
        check_slice(j, i0);
        return {data_.data() + j * rows_ + i0, rows_ - i0};
    }

    void swap_columns(size_type a, size_type b)
    {
        if (a == b)
            return;
        auto ca = col(a);
        auto cb = col(b);
        std::swap_ranges(ca.begin(), ca.end(), cb.begin());
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    void check(size_type i, size_type j) const
    {
        if (i >= rows_ || j >= cols_)
            throw std::out_of_range("Matrix: element (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") outside " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    void check_slice(size_type j, size_type i0) const
    {
        if (j >= cols_ || i0 > rows_)
            throw std::out_of_range("Matrix: column slice (" + std::to_string(i0) + ":, " +
                                    std::to_string(j) + ") outside " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    size_type rows_ = 0;
    size_type cols_ = 0;
    std::vector<T> data_;
};

/// ||A(i0:m, j)||_2 with overflow/underflow guarding; 0 for an empty range.
template <Scalar T>
real_t<T> column_norm(const Matrix<T>& A, std::size_t j, std::size_t i0 = 0)
{
    return vector_norm<T>(A.col(j, i0));
}

/// Applies (I - tau * v * v^H) to columns [col_begin, col_end) of A, rows
/// row0 .. row0 + len(v) - 1, where v = (1, v_tail). The leading 1 is implicit
/// so that packed storage (R_kk sitting where v_0 would be) can be used as is.
template <Scalar T>
void reflect_columns(const T& tau, std::span<const T> v_tail, Matrix<T>& A, std::size_t row0,
                     std::size_t col_begin, std::size_t col_end)
{
    if (row0 + 1 + v_tail.size() != A.rows())
        throw std::invalid_argument("reflect_columns: reflector length does not match the block");
    if (col_end > A.cols() || col_begin > col_end)
        throw std::out_of_range("reflect_columns: column range outside the matrix");
    if (tau == T(0))
        return;
    const std::size_t len = v_tail.size();
    for (std::size_t j = col_begin; j < col_end; ++j) {
        T* z = A.col(j, row0).data();
        T w = z[0];
        for (std::size_t i = 0; i < len; ++i)
            w += conj_value(v_tail[i]) * z[i + 1];
        const T tw = tau * w;
        z[0] -= tw;
        for (std::size_t i = 0; i < len; ++i)
            z[i + 1] -= tw * v_tail[i];
    }
}

/// Trailing update at step k: A(k:m, k+1:n) <- (I - tau v v^H) A(k:m, k+1:n).
/// v is the full reflector vector of length m - k with v[0] == 1.
template <Scalar T>
void gemv_update(Matrix<T>& A, std::size_t k, std::span<const T> v, const T& tau)
{
    if (k >= A.rows() || v.size() != A.rows() - k)
        throw std::invalid_argument("gemv_update: reflector length " + std::to_string(v.size()) +
                                    " does not match trailing rows");
    if (v[0] != T(1))
        throw std::invalid_argument("gemv_update: reflector must have unit leading entry");
    if (k + 1 >= A.cols())
        return;
    reflect_columns<T>(tau, v.subspan(1), A, k, k + 1, A.cols());
}

/// Frobenius norm, scaled.
template <Scalar T>
real_t<T> frobenius_norm(const Matrix<T>& A) noexcept
{
    return vector_norm<T>(A.data());
}

template <Scalar T>
Matrix<T> multiply(const Matrix<T>& A, const Matrix<T>& B)
{
    if (A.cols() != B.rows())
        throw std::invalid_argument("multiply: inner dimensions differ");
    Matrix<T> C(A.rows(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        auto c = C.col(j);
        for (std::size_t l = 0; l < A.cols(); ++l) {
            const T b = B(l, j);
            if (b == T(0))
                continue;
            auto a = A.col(l);
            for (std::size_t i = 0; i < A.rows(); ++i)
                c[i] += a[i] * b;
        }
    }
    return C;
}

template <Scalar T>
Matrix<T> adjoint(const Matrix<T>& A)
{
    Matrix<T> H(A.cols(), A.rows());
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (std::size_t i = 0; i < A.rows(); ++i)
            H(j, i) = conj_value(A(i, j));
    return H;
}

/// Columns of A reordered so that column k of the result is A(:, perm[k]).
template <Scalar T>
Matrix<T> permute_columns(const Matrix<T>& A, std::span<const std::size_t> perm)
{
    if (perm.size() != A.cols())
        throw std::invalid_argument("permute_columns: permutation length mismatch");
    Matrix<T> P(A.rows(), A.cols());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        auto src = A.col(perm[k]);
        std::copy(src.begin(), src.end(), P.col(k).begin());
    }
    return P;
}

/// Element-wise conversion between working precisions.
template <Scalar To, Scalar From>
Matrix<To> convert(const Matrix<From>& A)
{
    Matrix<To> B(A.rows(), A.cols());
    auto src = A.data();
    auto dst = B.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        if constexpr (is_complex_v<To> && is_complex_v<From>)
            dst[i] = To(real_t<To>(src[i].real()), real_t<To>(src[i].imag()));
        else if constexpr (is_complex_v<To>)
            dst[i] = To(real_t<To>(src[i]), 0);
        else if constexpr (is_complex_v<From>)
            throw std::invalid_argument("convert: complex matrix into a real type");
        else
            dst[i] = To(src[i]);
    }
    return B;
}

} // namespace rrqr
