#pragma once

#include "fastarnoldi/bml.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fastarnoldi {

/// One "key = value" line of a flat configuration file.
struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

/// Splits a flat key = value text; '#' starts a comment.
std::vector<KeyValue> parse_key_values(std::istream& in);

/// "1.5", "-2e-3" or "(re,im)".
cplx parse_complex(const std::string& token, int line = 0);
/// Whitespace or comma separated complex tokens.
std::vector<cplx> parse_complex_list(const std::string& text, int line = 0);

/// Reads a BML certificate for the matrix A. Relative file paths are taken
/// relative to base_dir.
BmlOperator parse_certificate(std::istream& in, const CMatrix& A, const std::string& base_dir = ".");
BmlOperator load_certificate(const std::string& path, const CMatrix& A);

} // namespace fastarnoldi
