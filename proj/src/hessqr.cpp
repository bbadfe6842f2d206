#include "fastarnoldi/hessqr.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>
#include <limits>

namespace fastarnoldi {

void GivensChain::append(double sk, cplx ck, cplx tauk)
{
    s.push_back(sk);
    c.push_back(ck);
    tau.push_back(tauk);
    sigma = sk > 0.0 ? sigma / sk : std::numeric_limits<double>::infinity();
}

SineCosine cs_from_tau(cplx tau, double h)
{
    if (!(h > 0.0))
        throw NonpositiveSubdiagonal("cs_from_tau: h must be positive");
    const double r = std::hypot(h, std::abs(tau));
    return {h / r, tau / r};
}

GivensQR givens_qr(const Hessenberg& H, cplx delta)
{
    const int k = H.cols();
    CMatrix X = H.underline();
    for (int j = 0; j < k; ++j)
        X(j, j) -= delta;

    GivensQR out;
    out.chain.delta = delta;
    out.Qstar = CMatrix::Identity(k + 1, k + 1);

    for (int j = 0; j < k; ++j) {
        const double h = X(j + 1, j).real();
        if (!(h > 0.0))
            throw BreakdownEncountered("givens_qr: zero subdiagonal at column " + std::to_string(j + 1));
        const cplx tau = X(j, j);
        const auto [s, c] = cs_from_tau(tau, h);
        out.chain.append(s, c, tau);

        auto rot = [&](CMatrix& M) {
            for (Eigen::Index col = 0; col < M.cols(); ++col) {
                const cplx top = M(j, col);
                const cplx bot = M(j + 1, col);
                M(j, col) = std::conj(c) * top + s * bot;
                M(j + 1, col) = -s * top + c * bot;
            }
        };
        rot(X);
        rot(out.Qstar);
        X(j + 1, j) = 0.0;
    }
    out.R = X.topRows(k).triangularView<Eigen::Upper>();
    return out;
}

CMatrix explicit_Q(const std::vector<cplx>& qvals)
{
    const int k = static_cast<int>(qvals.size()) - 1;
    const auto sig = sigmas(qvals);
    CMatrix Q = CMatrix::Zero(k + 1, k + 1);
    for (int j = 1; j <= k; ++j) {
        const double denom = sig[j] * sig[j - 1];
        for (int i = 0; i < j; ++i)
            Q(j - 1, i) = -qvals[i] * std::conj(qvals[j]) / denom;
        Q(j - 1, j) = sig[j - 1] / sig[j];
    }
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i <= k; ++i)
        Q(k, i) = sgn * qvals[i] / sig[k];
    return Q;
}

cplx square_qr_phase(const CMatrix& Hsq, cplx delta, GivensQR& qr)
{
    const auto k1 = Hsq.rows();
    if (Hsq.cols() != k1 || qr.Qstar.rows() != k1)
        throw DimensionMismatch("square_qr_phase: expected (k+1) x (k+1) input");
    CMatrix X = Hsq - delta * CMatrix::Identity(k1, k1);
    const cplx r = (qr.Qstar.row(k1 - 1) * X.col(k1 - 1)).value();
    const double mag = std::abs(r);
    const cplx phase = mag > 0.0 ? std::conj(r) / mag : cplx(1.0, 0.0);
    qr.Qstar.row(k1 - 1) *= phase;
    return phase;
}

double submatrix_norm_formula(const std::vector<double>& sigmas, int m, int l)
{
    const int k = static_cast<int>(sigmas.size()) - 1;
    if (m < 1 || m > k + 1 || l < 1 || l > k - m + 2)
        throw IndexOutOfRange("submatrix_norm_formula: (m, l) not admissible");
    return sigmas[m - 1] / sigmas[k - l + 1];
}

} // namespace fastarnoldi
