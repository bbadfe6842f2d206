#include "fastarnoldi/certificate.hpp"
#include "fastarnoldi/error.hpp"
#include "fastarnoldi/matrix_market.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace fastarnoldi {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, int line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "'", line);
    }
    if (used != s.size())
        throw ParseError("trailing characters in number: '" + s + "'", line);
    return v;
}

bool parse_bool(const std::string& s, int line)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ParseError("expected true or false, got '" + s + "'", line);
}

SpecialClass parse_special(const std::string& s, int line)
{
    if (s == "none")
        return SpecialClass::none;
    if (s == "nearly_hermitian")
        return SpecialClass::nearly_hermitian;
    if (s == "nearly_unitary")
        return SpecialClass::nearly_unitary;
    if (s == "shifted_unitary")
        return SpecialClass::shifted_unitary;
    throw ParseError("unknown special class '" + s + "'", line);
}

} // namespace

std::vector<KeyValue> parse_key_values(std::istream& in)
{
    std::vector<KeyValue> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line);
        KeyValue kv{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
        if (kv.key.empty())
            throw ParseError("empty key", line);
        out.push_back(std::move(kv));
    }
    return out;
}

cplx parse_complex(const std::string& token, int line)
{
    std::string t = trim(token);
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')')
            throw ParseError("unbalanced parenthesis in '" + token + "'", line);
        t = t.substr(1, t.size() - 2);
        const auto comma = t.find(',');
        if (comma == std::string::npos)
            return {parse_double(trim(t), line), 0.0};
        return {parse_double(trim(t.substr(0, comma)), line), parse_double(trim(t.substr(comma + 1)), line)};
    }
    return {parse_double(t, line), 0.0};
}

std::vector<cplx> parse_complex_list(const std::string& text, int line)
{
    static const std::regex tok(R"(\([^()]*\)|[^\s,()]+)");
    std::vector<cplx> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), tok); it != std::sregex_iterator(); ++it)
        out.push_back(parse_complex(it->str(), line));
    return out;
}

BmlOperator parse_certificate(std::istream& in, const CMatrix& A, const std::string& base_dir)
{
    const int n = static_cast<int>(A.rows());
    BmlOperator op;
    op.A = A;
    std::vector<CVector> fcols, gcols;
    bool have_F_file = false, have_G_file = false;

    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (std::filesystem::path(base_dir) / fp).string();
    };
    auto column = [&](const KeyValue& kv) {
        const auto vals = parse_complex_list(kv.value, kv.line);
        if (static_cast<int>(vals.size()) != n)
            throw ParseError("column has " + std::to_string(vals.size()) + " entries, expected " +
                                 std::to_string(n), kv.line);
        return CVector(Eigen::Map<const CVector>(vals.data(), n));
    };

    for (const auto& kv : parse_key_values(in)) {
        if (kv.key == "poles")
            op.poles = parse_complex_list(kv.value, kv.line);
        else if (kv.key == "residues")
            op.residues = parse_complex_list(kv.value, kv.line);
        else if (kv.key == "pi")
            op.pi_coeffs = parse_complex_list(kv.value, kv.line);
        else if (kv.key == "F") {
            op.F = read_matrix_market(resolve(kv.value));
            have_F_file = true;
        } else if (kv.key == "G") {
            op.G = read_matrix_market(resolve(kv.value));
            have_G_file = true;
        } else if (kv.key == "F_col")
            fcols.push_back(column(kv));
        else if (kv.key == "G_col")
            gcols.push_back(column(kv));
        else if (kv.key == "special")
            op.special.kind = parse_special(kv.value, kv.line);
        else if (kv.key == "alpha")
            op.special.alpha = parse_complex(kv.value, kv.line);
        else if (kv.key == "beta")
            op.special.beta = parse_complex(kv.value, kv.line);
        else if (kv.key == "delta")
            op.special.delta = parse_complex(kv.value, kv.line);
        else if (kv.key == "special_tau")
            op.use_special_tau = parse_bool(kv.value, kv.line);
        else
            throw ParseError("unknown key '" + kv.key + "'", kv.line);
    }

    if ((have_F_file && !fcols.empty()) || (have_G_file && !gcols.empty()))
        throw CertificateInvalid("F and G must come either from files or from inline columns");
    if (!have_F_file) {
        op.F = CMatrix(n, fcols.size());
        for (std::size_t j = 0; j < fcols.size(); ++j)
            op.F.col(j) = fcols[j];
    }
    if (!have_G_file) {
        op.G = CMatrix(n, gcols.size());
        for (std::size_t j = 0; j < gcols.size(); ++j)
            op.G.col(j) = gcols[j];
    }
    check_certificate_shape(op);
    return op;
}

BmlOperator load_certificate(const std::string& path, const CMatrix& A)
{
    std::ifstream in(path);
    if (!in)
        throw FileNotFound(path);
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_certificate(in, A, dir.empty() ? "." : dir.string());
}

} // namespace fastarnoldi
