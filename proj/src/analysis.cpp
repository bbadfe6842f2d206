#include "fastarnoldi/analysis.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>

namespace fastarnoldi {

namespace {

int rank_above(const CMatrix& B, double thresh)
{
    if (B.size() == 0)
        return 0;
    Eigen::BDCSVD<CMatrix> svd(B);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh)
            ++r;
    return r;
}

double norm2(const CMatrix& B)
{
    if (B.size() == 0)
        return 0.0;
    Eigen::BDCSVD<CMatrix> svd(B);
    return svd.singularValues()(0);
}

} // namespace

SeparabilityReport upper_separable_check(const CMatrix& B, int r, int s, double tol)
{
    const int n = static_cast<int>(B.rows());
    if (B.cols() != n)
        throw DimensionMismatch("upper_separable_check: B must be square");
    if (std::abs(r) >= n)
        throw IndexOutOfRange("upper_separable_check: |r| must be < n");

    SeparabilityReport rep;
    rep.r = r;
    rep.s = s;
    const double thresh = tol * norm2(B);
    for (int j = 1; j <= n - std::abs(r); ++j) {
        const int rows = j - std::min(r, 0);
        const int c0 = j + std::max(r, 0);
        const int rk = rank_above(B.block(0, c0 - 1, rows, n - c0 + 1), thresh);
        rep.ranks.push_back(rk);
        rep.max_rank = std::max(rep.max_rank, rk);
    }
    rep.pass = rep.max_rank <= s;
    return rep;
}

double structure_generators_check(const CMatrix& H, const BmlOperator& op, const CMatrix& V)
{
    const int N = static_cast<int>(H.rows());
    if (H.cols() != N || V.cols() != N || V.rows() != op.n())
        throw DimensionMismatch("structure_generators_check: expected N x N H and n x N V");
    const int m = op.m();
    const CMatrix I = CMatrix::Identity(N, N);

    // first rows of the resolvent adjoints and the q_{k-1}(z_j)
    std::vector<CVector> first_row;
    std::vector<std::vector<cplx>> q;
    for (const auto z : op.poles) {
        Eigen::PartialPivLU<CMatrix> lu(H - z * I);
        if (!(lu.rcond() > 1e-14))
            throw SingularShift("structure_generators_check: H - z I is singular");
        const CMatrix Rinv = lu.inverse().adjoint();
        first_row.emplace_back(Rinv.row(0).transpose());
        q.push_back(eval_orthopoly(H, N - 1, z));
    }
    const CMatrix GF = (V.adjoint() * op.G) * (V.adjoint() * op.F).adjoint();

    double defect = 0.0;
    for (int k = 1; k <= N; ++k) {
        for (int l = k + m; l <= N; ++l) {
            cplx val = GF(k - 1, l - 1);
            for (std::size_t j = 0; j < op.poles.size(); ++j)
                val += std::conj(op.residues[j] * q[j][k - 1]) * first_row[j](l - 1);
            defect = std::max(defect, std::abs(val - H(k - 1, l - 1)));
        }
    }
    return defect;
}

double paige_measure(const CMatrix& V)
{
    const auto k = V.cols();
    if (k > V.rows())
        throw DimensionMismatch("paige_measure: more columns than rows");
    if (k == 0)
        return 0.0;
    CMatrix M = V.adjoint() * V;
    const CMatrix U = M.triangularView<Eigen::StrictlyUpper>();
    CMatrix IU = U;
    IU.diagonal().setOnes();
    const CMatrix S = IU.triangularView<Eigen::Upper>().solve(U);
    return norm2(S);
}

Eigen::MatrixXd orthogonality_matrix(const CMatrix& V)
{
    CMatrix M = V.adjoint() * V;
    M.diagonal().array() -= 1.0;
    return M.cwiseAbs();
}

std::vector<DecayEntry> decay_profile(const CMatrix& X, const std::vector<double>& sigmas, DecayKind kind)
{
    const int k = static_cast<int>(X.rows()) - 1;
    if (X.cols() != k + 1 || static_cast<int>(sigmas.size()) != k + 1)
        throw DimensionMismatch("decay_profile: need (k+1) x (k+1) matrix and k+1 sigmas");
    const double scale = kind == DecayKind::resolvent ? norm2(X) : 1.0;
    std::vector<DecayEntry> out;
    for (int m = 1; m <= k + 1; ++m) {
        for (int l = 1; l <= k - m + 2; ++l) {
            const CMatrix blk = X.block(0, k + 1 - l, m, l);
            DecayEntry e;
            e.m = m;
            e.l = l;
            e.observed = norm2(blk);
            e.predicted = scale * submatrix_norm_formula(sigmas, m, l);
            e.rank = rank_above(blk, 1e-8 * std::max(e.observed, 1e-300));
            out.push_back(e);
        }
    }
    return out;
}

double heritage_defect(const CMatrix& H, const BmlOperator& op, const CMatrix& FN, const CMatrix& GN)
{
    const auto N = H.rows();
    const CMatrix I = CMatrix::Identity(N, N);
    CMatrix D = H.adjoint() - poly_eval(op.pi_coeffs, H);
    for (std::size_t j = 0; j < op.poles.size(); ++j) {
        Eigen::PartialPivLU<CMatrix> lu(H - op.poles[j] * I);
        if (!(lu.rcond() > 1e-14))
            throw SingularShift("heritage_defect: H - z I is singular");
        D -= op.residues[j] * lu.inverse();
    }
    if (FN.cols() > 0)
        D -= FN * GN.adjoint();
    return norm2(D) / std::max(norm2(H), 1e-300);
}

double reversed_polynomial_defect(const CMatrix& H, int k, cplx z)
{
    if (z == cplx(0.0))
        throw InvalidArgument("reversed_polynomial_defect: z must be nonzero");
    const auto q0 = eval_orthopoly(H, k, cplx(0.0));
    const auto qz = eval_orthopoly(H, k, z);
    const auto qi = eval_orthopoly(H, k, 1.0 / std::conj(z));
    const cplx lhs = std::pow(z, k) * std::conj(qi[k]);
    cplx rhs = 0.0;
    for (int j = 0; j <= k; ++j)
        rhs += std::conj(q0[j]) * qz[j];
    rhs /= sigma(q0);
    return std::abs(lhs - rhs);
}

} // namespace fastarnoldi
