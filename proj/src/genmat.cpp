#include "fastarnoldi/genmat.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fastarnoldi {

namespace {

void certify(TestCase& tc)
{
    const auto rep = validate_bml(tc.op, 5, 1e-10);
    if (!rep.pass) {
        std::ostringstream os;
        os << tc.label << ": certificate defect " << rep.max_defect;
        throw CertificateInvalid(os.str());
    }
}

CVector complex_normal(int n, Rng& rng, double scale)
{
    return randn_cmatrix(n, 1, rng, true).col(0) * scale;
}

} // namespace

TestCase diag_arc_spectrum(int n, double arc_fraction, cplx center, double radius,
                           const std::vector<cplx>& outliers, Rng& rng)
{
    const int no = static_cast<int>(outliers.size());
    if (n <= no)
        throw InvalidDimension("diag_arc_spectrum: n must exceed the number of outliers");
    if (!(arc_fraction > 0.0 && arc_fraction <= 1.0))
        throw InvalidArgument("diag_arc_spectrum: arc_fraction must lie in (0, 1]");
    if (!(radius > 0.0))
        throw InvalidArgument("diag_arc_spectrum: radius must be positive");
    for (const auto l : outliers) {
        if (std::abs(std::abs(l - center) - radius) <= 1e-12)
            throw OutlierOnCircle("diag_arc_spectrum: outlier on the circle");
        if (l == center)
            throw InvalidArgument("diag_arc_spectrum: outlier at the circle center");
    }

    CVector lam(n);
    for (int i = 0; i < n - no; ++i) {
        const double th = rng.uniform(0.0, 2.0 * std::numbers::pi * arc_fraction);
        lam(i) = center + radius * std::polar(1.0, th);
    }
    for (int i = 0; i < no; ++i)
        lam(n - no + i) = outliers[i];

    TestCase tc;
    auto& op = tc.op;
    op.A = lam.asDiagonal();
    op.poles = {center};
    op.residues = {radius * radius};
    if (center != cplx(0.0))
        op.pi_coeffs = {std::conj(center)};
    op.F = CMatrix::Zero(n, no);
    op.G = CMatrix::Zero(n, no);
    for (int i = 0; i < no; ++i) {
        const int idx = n - no + i;
        const cplx l = outliers[i];
        op.G(idx, i) = 1.0;
        op.F(idx, i) = std::conj(l) - std::conj(center) - radius * radius / (l - center);
    }
    op.special.kind = center == cplx(0.0) ? SpecialClass::nearly_unitary : SpecialClass::shifted_unitary;
    op.special.alpha = std::conj(center);
    op.special.beta = radius * radius;
    op.special.delta = center;

    std::ostringstream os;
    os << "arc " << arc_fraction << " of circle |z - (" << center.real() << "," << center.imag()
       << ")| = " << radius << " with " << no << " outliers";
    tc.label = "diag_arc";
    tc.spectrum = os.str();
    certify(tc);
    return tc;
}

TestCase unitary_plus_rank_one(const CMatrix& U, const CVector& u, const CVector& v)
{
    const auto n = U.rows();
    TestCase tc;
    auto& op = tc.op;
    op.A = U + u * v.adjoint();
    op.poles = {0.0};
    op.residues = {1.0};
    op.special.kind = SpecialClass::nearly_unitary;
    op.special.beta = 1.0;
    if (u.norm() == 0.0 || v.norm() == 0.0) {
        op.F = CMatrix::Zero(n, 0);
        op.G = CMatrix::Zero(n, 0);
    } else {
        const CVector Uu = U.adjoint() * u;
        const cplx denom = 1.0 + v.dot(Uu);
        if (std::abs(denom) < 1e-8)
            throw SingularShift("unitary_plus_rank_one: 1 + v^* U^* u vanishes");
        op.F.resize(n, 2);
        op.G.resize(n, 2);
        op.F.col(0) = v;
        op.F.col(1) = Uu / denom;
        op.G.col(0) = u;
        op.G.col(1) = U * v;
    }
    tc.label = "unitary_rank_one";
    tc.spectrum = "unitary plus rank one";
    certify(tc);
    return tc;
}

TestCase unitary_plus_rank_one(int n, Rng& rng)
{
    const double scale = 1.0 / std::sqrt(2.0 * n);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const CMatrix U = random_unitary(n, rng);
        const CVector u = complex_normal(n, rng, scale);
        const CVector v = complex_normal(n, rng, scale);
        if (std::abs(1.0 + v.dot(U.adjoint() * u)) < 1e-8)
            continue;
        return unitary_plus_rank_one(U, u, v);
    }
    throw SingularShift("unitary_plus_rank_one: no admissible sample in 100 tries");
}

TestCase nearly_hermitian_class(int n, int p, double alpha, double beta, double gamma, Rng& rng)
{
    if (!(alpha < beta))
        throw InvalidInterval("nearly_hermitian_class: need alpha < beta");
    if (p < 1 || p > n - 2)
        throw InvalidArgument("nearly_hermitian_class: need 1 <= p <= n - 2");

    TestCase tc;
    auto& op = tc.op;
    op.A = CMatrix::Zero(n, n);
    for (int i = 0; i < p; ++i)
        op.A(i, i) = rng.uniform(-beta, -alpha);
    for (int i = p; i < n - 2; ++i)
        op.A(i, i) = rng.uniform(alpha, beta);
    op.A(n - 2, n - 1) = gamma;
    op.A(n - 1, n - 2) = -gamma;
    op.pi_coeffs = {0.0, 1.0};
    if (gamma == 0.0) {
        op.F = CMatrix::Zero(n, 0);
        op.G = CMatrix::Zero(n, 0);
    } else {
        op.F = CMatrix::Zero(n, 2);
        op.G = CMatrix::Zero(n, 2);
        op.F(n - 2, 0) = -2.0 * gamma;
        op.F(n - 1, 1) = -2.0 * gamma;
        op.G(n - 1, 0) = 1.0;
        op.G(n - 2, 1) = -1.0;
    }
    op.special.kind = SpecialClass::nearly_hermitian;
    op.special.alpha = 1.0;

    std::ostringstream os;
    os << p << " eigenvalues in [" << -beta << "," << -alpha << "], " << n - 2 - p << " in [" << alpha
       << "," << beta << "], +-" << gamma << "i";
    tc.label = "nearly_hermitian";
    tc.spectrum = os.str();
    certify(tc);
    return tc;
}

TestCase shifted_unitary_synthetic(int n, cplx rho, cplx gamma, Rng& rng)
{
    if (gamma == cplx(0.0))
        throw InvalidArgument("shifted_unitary_synthetic: gamma must be nonzero");
    TestCase tc;
    auto& op = tc.op;
    op.A = gamma * random_unitary(n, rng);
    op.A.diagonal().array() += rho;
    op.poles = {rho};
    op.residues = {std::norm(gamma)};
    if (rho != cplx(0.0))
        op.pi_coeffs = {std::conj(rho)};
    op.F = CMatrix::Zero(n, 0);
    op.G = CMatrix::Zero(n, 0);
    op.special.kind = rho == cplx(0.0) ? SpecialClass::nearly_unitary : SpecialClass::shifted_unitary;
    op.special.alpha = std::conj(rho);
    op.special.beta = std::norm(gamma);
    op.special.delta = rho;
    tc.label = "shifted_unitary";
    tc.spectrum = "circle |z - rho| = |gamma|";
    certify(tc);
    return tc;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{
        "arc_three_quarter", "full_circle", "shifted_circle", "circle_outliers", "unitary_rank_one",
        "qcd_surrogate",     "embree",      "embree_gamma100", "identity"};
    return names;
}

int preset_default_n(const std::string& name)
{
    if (name == "unitary_rank_one" || name == "embree" || name == "embree_gamma100")
        return 100;
    if (name == "identity")
        return 10;
    return 200;
}

TestCase make_preset(const std::string& name, int n, std::uint64_t seed)
{
    if (n <= 0)
        n = preset_default_n(name);
    Rng rng(seed);
    TestCase tc;
    if (name == "arc_three_quarter")
        tc = diag_arc_spectrum(n, 0.75, 0.0, 1.0, {}, rng);
    else if (name == "full_circle")
        tc = diag_arc_spectrum(n, 1.0, 0.0, 1.0, {}, rng);
    else if (name == "shifted_circle")
        tc = diag_arc_spectrum(n, 1.0, 1.5, 1.0, {}, rng);
    else if (name == "circle_outliers")
        tc = diag_arc_spectrum(n, 1.0, 0.0, 1.0, {cplx(1.5, 0.0), cplx(0.0, 0.3)}, rng);
    else if (name == "unitary_rank_one")
        tc = unitary_plus_rank_one(n, rng);
    else if (name == "qcd_surrogate")
        tc = shifted_unitary_synthetic(n, 2.0, 1.0, rng);
    else if (name == "embree")
        tc = nearly_hermitian_class(n, n / 2 - 1, 1.0, 10.0, 1.0, rng);
    else if (name == "embree_gamma100")
        tc = nearly_hermitian_class(n, n / 2 - 1, 1.0, 10.0, 100.0, rng);
    else if (name == "identity") {
        tc.op.A = CMatrix::Identity(n, n);
        tc.op.pi_coeffs = {0.0, 1.0};
        tc.op.F = CMatrix::Zero(n, 0);
        tc.op.G = CMatrix::Zero(n, 0);
        tc.op.special.kind = SpecialClass::nearly_hermitian;
        tc.op.special.alpha = 1.0;
        tc.spectrum = "{1}";
        certify(tc);
    } else
        throw ConfigError("unknown preset '" + name + "'");
    tc.label = name;
    tc.seed = seed;
    return tc;
}

} // namespace fastarnoldi
