#include "fastarnoldi/matrix_market.hpp"
#include "fastarnoldi/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fastarnoldi {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

enum class Field { real, complex, pattern };
enum class Symmetry { general, symmetric, hermitian, skew };

struct Reader {
    std::istream& in;
    int line_no = 0;

    // next non-comment, non-blank line
    bool next(std::string& line)
    {
        while (std::getline(in, line)) {
            ++line_no;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '%')
                continue;
            return true;
        }
        return false;
    }
};

cplx read_value(std::istringstream& ss, Field field, int line)
{
    if (field == Field::pattern)
        return 1.0;
    double re = 0.0, im = 0.0;
    if (!(ss >> re))
        throw ParseError("missing value", line);
    if (field == Field::complex && !(ss >> im))
        throw ParseError("missing imaginary part", line);
    return {re, im};
}

void place(CMatrix& A, long i, long j, cplx v, Symmetry sym)
{
    A(i, j) = v;
    if (i == j)
        return;
    switch (sym) {
    case Symmetry::symmetric: A(j, i) = v; break;
    case Symmetry::hermitian: A(j, i) = std::conj(v); break;
    case Symmetry::skew: A(j, i) = -v; break;
    case Symmetry::general: break;
    }
}

} // namespace

CMatrix read_matrix_market(std::istream& in)
{
    Reader rd{in};
    std::string header;
    if (!std::getline(in, header))
        throw ParseError("empty file", 1);
    rd.line_no = 1;

    std::istringstream hs(header);
    std::string banner, object, format, field_s, sym_s;
    hs >> banner >> object >> format >> field_s >> sym_s;
    if (banner != "%%MatrixMarket")
        throw ParseError("missing %%MatrixMarket banner", 1);
    if (lower(object) != "matrix")
        throw ParseError("unsupported object '" + object + "'", 1);
    format = lower(format);
    field_s = lower(field_s);
    sym_s = lower(sym_s);

    Field field;
    if (field_s == "real" || field_s == "double")
        field = Field::real;
    else if (field_s == "complex")
        field = Field::complex;
    else if (field_s == "pattern")
        field = Field::pattern;
    else if (field_s == "integer")
        throw UnsupportedField("integer matrices are not supported");
    else
        throw ParseError("unknown field '" + field_s + "'", 1);

    Symmetry sym;
    if (sym_s == "general")
        sym = Symmetry::general;
    else if (sym_s == "symmetric")
        sym = Symmetry::symmetric;
    else if (sym_s == "hermitian")
        sym = Symmetry::hermitian;
    else if (sym_s == "skew-symmetric")
        sym = Symmetry::skew;
    else
        throw ParseError("unknown symmetry '" + sym_s + "'", 1);

    std::string line;
    if (!rd.next(line))
        throw ParseError("missing size line", rd.line_no + 1);
    std::istringstream ss(line);
    long rows = 0, cols = 0, nnz = 0;

    if (format == "coordinate") {
        if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw ParseError("bad size line", rd.line_no);
        if (sym != Symmetry::general && rows != cols)
            throw ParseError("symmetric storage needs a square matrix", rd.line_no);
        CMatrix A = CMatrix::Zero(rows, cols);
        for (long e = 0; e < nnz; ++e) {
            if (!rd.next(line))
                throw ParseError("expected " + std::to_string(nnz) + " entries", rd.line_no + 1);
            std::istringstream es(line);
            long i = 0, j = 0;
            if (!(es >> i >> j))
                throw ParseError("bad entry indices", rd.line_no);
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw ParseError("entry index out of range", rd.line_no);
            place(A, i - 1, j - 1, read_value(es, field, rd.line_no), sym);
        }
        return A;
    }
    if (format == "array") {
        if (field == Field::pattern)
            throw ParseError("pattern field is invalid in array format", 1);
        if (!(ss >> rows >> cols) || rows < 0 || cols < 0)
            throw ParseError("bad size line", rd.line_no);
        if (sym != Symmetry::general && rows != cols)
            throw ParseError("symmetric storage needs a square matrix", rd.line_no);
        CMatrix A = CMatrix::Zero(rows, cols);
        for (long j = 0; j < cols; ++j) {
            long i0 = 0;
            if (sym == Symmetry::symmetric || sym == Symmetry::hermitian)
                i0 = j;
            else if (sym == Symmetry::skew)
                i0 = j + 1;
            for (long i = i0; i < rows; ++i) {
                if (!rd.next(line))
                    throw ParseError("too few array entries", rd.line_no + 1);
                std::istringstream es(line);
                place(A, i, j, read_value(es, field, rd.line_no), sym);
            }
        }
        return A;
    }
    throw ParseError("unknown format '" + format + "'", 1);
}

CMatrix read_matrix_market(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FileNotFound(path);
    return read_matrix_market(in);
}

void write_matrix_market(const std::string& path, const CMatrix& M)
{
    std::ofstream out(path);
    if (!out)
        throw FileNotFound(path);
    out << "%%MatrixMarket matrix array complex general\n" << M.rows() << " " << M.cols() << "\n";
    out << std::setprecision(17) << std::scientific;
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            out << M(i, j).real() << " " << M(i, j).imag() << "\n";
}

} // namespace fastarnoldi
