#include "fastarnoldi/kernel.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>
#include <numbers>

namespace fastarnoldi {

MatVec dense_action(const CMatrix& A)
{
    return [A](const CVector& x) -> CVector { return A * x; };
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

CVector lsq_solve(const CMatrix& M, const CVector& y, double rel_tol, int* rank_out)
{
    if (M.rows() != y.size())
        throw DimensionMismatch("lsq_solve: rows(M) = " + std::to_string(M.rows()) +
                                ", len(y) = " + std::to_string(y.size()));
    if (M.cols() == 0) {
        if (rank_out)
            *rank_out = 0;
        return CVector(0);
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(M);
    qr.setThreshold(rel_tol);
    if (rank_out)
        *rank_out = static_cast<int>(qr.rank());
    return qr.solve(y);
}

int svd_rank(const CMatrix& M, double tol)
{
    if (M.size() == 0)
        return 0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0))
            ++r;
    return r;
}

CVector randn_cvector(int n, Rng& rng)
{
    if (n < 1)
        throw InvalidDimension("randn_cvector: n must be >= 1, got " + std::to_string(n));
    CVector x(n);
    for (int i = 0; i < n; ++i)
        x(i) = cplx(rng.normal(), 0.0);
    return x;
}

CMatrix randn_cmatrix(int rows, int cols, Rng& rng, bool complex_entries)
{
    CMatrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = complex_entries ? rng.normal() : 0.0;
            M(i, j) = cplx(re, im);
        }
    return M;
}

CMatrix random_unitary(int n, Rng& rng)
{
    if (n < 1)
        throw InvalidDimension("random_unitary: n must be >= 1");
    const CMatrix Z = randn_cmatrix(n, n, rng, true);
    Eigen::HouseholderQR<CMatrix> qr(Z);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(R(j, j));
        if (a > 0.0)
            Q.col(j) *= R(j, j) / a;
    }
    return Q;
}

double spectral_norm(const CMatrix& M)
{
    if (M.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
}

} // namespace fastarnoldi
