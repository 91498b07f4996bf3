#pragma once

// Dense Matrix Market ("array" format, real or complex, general) reader and
// writer. Values are written with 17 significant digits, which reads back
// bit-exactly for every finite double (and therefore every float).

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

#include "rrqr/core.hpp"

namespace rrqr {

using AnyMatrix = std::variant<Matrix<double>, Matrix<std::complex<double>>>;

class MatrixMarketError : public std::runtime_error {
public:
    MatrixMarketError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

AnyMatrix read_matrix_market(std::istream& is, const std::string& source = "<stream>");
AnyMatrix read_matrix_market(const std::filesystem::path& path);

template <Scalar T>
void write_matrix_market(std::ostream& os, const Matrix<T>& A);

template <Scalar T>
void write_matrix_market(const std::filesystem::path& path, const Matrix<T>& A);

} // namespace rrqr
