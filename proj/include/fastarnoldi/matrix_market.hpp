#pragma once

#include "fastarnoldi/kernel.hpp"

#include <iosfwd>
#include <string>

namespace fastarnoldi {

/// Dense matrix from a Matrix Market file (coordinate or array; real,
/// complex or pattern; general, symmetric, hermitian or skew-symmetric).
CMatrix read_matrix_market(const std::string& path);
CMatrix read_matrix_market(std::istream& in);

/// Writes M in array complex general format.
void write_matrix_market(const std::string& path, const CMatrix& M);

} // namespace fastarnoldi
