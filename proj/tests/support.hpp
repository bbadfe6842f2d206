#pragma once

#include "fastarnoldi/analysis.hpp"
#include "fastarnoldi/bml.hpp"
#include "fastarnoldi/error.hpp"
#include "fastarnoldi/genmat.hpp"
#include "fastarnoldi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace testsupport {

using namespace fastarnoldi;

/// (k+1) x k upper Hessenberg with complex entries and positive subdiagonal.
inline CMatrix random_hessenberg(int k, Rng& rng)
{
    CMatrix H = CMatrix::Zero(k + 1, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i <= j; ++i)
            H(i, j) = cplx(rng.normal(), rng.normal());
        H(j + 1, j) = rng.uniform(0.5, 1.5);
    }
    return H;
}

inline CVector unit_start(int n, std::uint64_t seed)
{
    Rng rng(seed);
    CVector b = randn_cvector(n, rng);
    return b / b.norm();
}

/// Number of leading columns k such that paige(V_k) <= tol.
inline int orthogonal_prefix(const CMatrix& V, double tol)
{
    int k = 0;
    while (k < std::min(V.cols(), V.rows()) && paige_measure(V.leftCols(k + 1)) <= tol)
        ++k;
    return k;
}

/// Largest column difference over the first k columns.
inline double column_gap(const CMatrix& X, const CMatrix& Y, int k)
{
    double g = 0.0;
    for (int j = 0; j < k; ++j)
        g = std::max(g, (X.col(j) - Y.col(j)).norm());
    return g;
}

/// w_k(delta) written through the orthonormal polynomials:
/// (1/sigma_k) sum_j conj(q_j(delta)) v_{j+1}.
inline CVector residual_expansion(const CMatrix& H, const CMatrix& V, cplx delta, int k)
{
    const auto q = eval_orthopoly(H, k, delta);
    CVector w = CVector::Zero(V.rows());
    for (int j = 0; j <= k; ++j)
        w += std::conj(q[j]) * V.col(j);
    return w / sigma(q);
}

/// Unitary diagonal matrix wrapped as a BML operator with pole 0.
inline BmlOperator unitary_operator(const CMatrix& U)
{
    BmlOperator op;
    op.A = U;
    op.poles = {0.0};
    op.residues = {1.0};
    op.F = CMatrix::Zero(U.rows(), 0);
    op.G = CMatrix::Zero(U.rows(), 0);
    op.special.kind = SpecialClass::nearly_unitary;
    op.special.beta = 1.0;
    return op;
}

inline CMatrix random_unitary_diag(int n, Rng& rng)
{
    CVector d(n);
    for (int i = 0; i < n; ++i)
        d(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    return d.asDiagonal();
}

/// Hermitian operator A^* = A written as pi(A) = A.
inline BmlOperator hermitian_operator(const CMatrix& A)
{
    BmlOperator op;
    op.A = A;
    op.pi_coeffs = {0.0, 1.0};
    op.F = CMatrix::Zero(A.rows(), 0);
    op.G = CMatrix::Zero(A.rows(), 0);
    op.special.kind = SpecialClass::nearly_hermitian;
    op.special.alpha = 1.0;
    return op;
}

inline CMatrix random_hermitian(int n, Rng& rng)
{
    CMatrix X = randn_cmatrix(n, n, rng, true);
    return (X + X.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
}

} // namespace testsupport
