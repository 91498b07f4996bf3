#include "rrqr/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rrqr/format.hpp"

namespace rrqr {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok)
        out.push_back(tok);
    return out;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
public:
    LineReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

    // Next line that is neither blank nor a comment; false at end of input.
    bool next_content(std::string& line)
    {
        while (std::getline(is_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (blank(line) || line.front() == '%')
                continue;
            return true;
        }
        return false;
    }

    bool next_raw(std::string& line)
    {
        if (!std::getline(is_, line))
            return false;
        ++line_no_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw MatrixMarketError(source_, line_no_, what);
    }

    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::istream& is_;
    std::string source_;
    std::size_t line_no_ = 0;
};

double parse_value(const std::string& tok, const LineReader& rd)
{
    double v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        rd.fail("cannot parse value '" + tok + "'");
    if (!std::isfinite(v))
        rd.fail("non-finite value '" + tok + "' is not allowed");
    return v;
}

std::size_t parse_dim(const std::string& tok, const LineReader& rd)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        rd.fail("cannot parse dimension '" + tok + "'");
    return v;
}

} // namespace

AnyMatrix read_matrix_market(std::istream& is, const std::string& source)
{
    LineReader rd(is, source);
    std::string line;
    if (!rd.next_raw(line))
        throw MatrixMarketError(source, 1, "empty file, expected a %%MatrixMarket header");
    const auto header = split(line);
    if (header.size() != 5 || header[0] != "%%MatrixMarket")
        rd.fail("malformed header, expected '%%MatrixMarket matrix array <field> general'");
    if (lower(header[1]) != "matrix" || lower(header[2]) != "array")
        rd.fail("only dense 'matrix array' files are supported");
    const std::string field = lower(header[3]);
    if (field != "real" && field != "complex" && field != "integer")
        rd.fail("unsupported field '" + header[3] + "'");
    if (lower(header[4]) != "general")
        rd.fail("unsupported symmetry '" + header[4] + "', only 'general' is accepted");
    const bool is_complex = field == "complex";

    if (!rd.next_content(line))
        rd.fail("missing size line");
    const auto size = split(line);
    if (size.size() != 2)
        rd.fail("size line must contain exactly 'rows cols'");
    const std::size_t m = parse_dim(size[0], rd);
    const std::size_t n = parse_dim(size[1], rd);

    const std::size_t per_entry = is_complex ? 2 : 1;
    const std::size_t count = m * n;
    std::vector<double> values;
    values.reserve(count * per_entry);
    while (values.size() < count * per_entry) {
        if (!rd.next_content(line))
            rd.fail("file ended after " + std::to_string(values.size() / per_entry) + " of " +
                    std::to_string(count) + " entries");
        const auto toks = split(line);
        if (toks.size() != per_entry)
            rd.fail("expected " + std::to_string(per_entry) + " value(s) per line, found " +
                    std::to_string(toks.size()));
        for (const auto& t : toks)
            values.push_back(parse_value(t, rd));
    }
    if (rd.next_content(line))
        rd.fail("trailing data after " + std::to_string(count) + " entries");

    if (is_complex) {
        Matrix<std::complex<double>> A(m, n);
        auto d = A.data();
        for (std::size_t i = 0; i < count; ++i)
            d[i] = {values[2 * i], values[2 * i + 1]};
        return A;
    }
    Matrix<double> A(m, n);
    std::copy(values.begin(), values.end(), A.data().begin());
    return A;
}

AnyMatrix read_matrix_market(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return read_matrix_market(is, path.string());
}

template <Scalar T>
void write_matrix_market(std::ostream& os, const Matrix<T>& A)
{
    os << "%%MatrixMarket matrix array " << (is_complex_v<T> ? "complex" : "real") << " general\n";
    os << A.rows() << ' ' << A.cols() << '\n';
    for (const T& v : A.data()) {
        if constexpr (is_complex_v<T>)
            os << format_real(v.real()) << ' ' << format_real(v.imag()) << '\n';
        else
            os << format_real(v) << '\n';
    }
}

template <Scalar T>
void write_matrix_market(const std::filesystem::path& path, const Matrix<T>& A)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_matrix_market(os, A);
    if (!os)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

template void write_matrix_market(std::ostream&, const Matrix<float>&);
template void write_matrix_market(std::ostream&, const Matrix<double>&);
template void write_matrix_market(std::ostream&, const Matrix<std::complex<float>>&);
template void write_matrix_market(std::ostream&, const Matrix<std::complex<double>>&);
template void write_matrix_market(const std::filesystem::path&, const Matrix<float>&);
template void write_matrix_market(const std::filesystem::path&, const Matrix<double>&);
template void write_matrix_market(const std::filesystem::path&, const Matrix<std::complex<float>>&);
template void write_matrix_market(const std::filesystem::path&,
                                  const Matrix<std::complex<double>>&);

} // namespace rrqr
