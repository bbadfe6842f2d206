#include "fastarnoldi/residuals.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>

namespace fastarnoldi {

namespace {
constexpr double underflow_floor = 1e-300;

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }
} // namespace

ResidualTrack::ResidualTrack(cplx shift, const CVector& v1) : delta(shift), w(v1)
{
    chain.delta = shift;
}

cplx tau_general(const CVector& w_prev, const CVector& Av, const CVector& v, cplx delta, int k)
{
    return sign_pow(k - 1) * w_prev.dot(Av - delta * v);
}

void update_residual(ResidualTrack& track, const CVector& v_next, cplx tau, double h_sub)
{
    const auto [s, c] = cs_from_tau(tau, h_sub);
    const int k = track.parity + 1;
    CVector w = s * track.w + sign_pow(k) * std::conj(c) * v_next;
    const double nw = w.norm();
    if (nw > 0.0)
        track.w = w / nw;
    track.chain.append(s, c, tau);
    track.relnorm *= s;
    if (track.relnorm < underflow_floor) {
        track.relnorm = 0.0;
        track.converged = true;
    }
    track.parity = k;
    track.history.push_back(track.relnorm);
}

void finalize_at_breakdown(ResidualTrack& track, cplx tau)
{
    const double a = std::abs(tau);
    const cplx c = a > 0.0 ? tau / a : cplx(1.0, 0.0);
    track.chain.append(0.0, c, tau);
    track.relnorm = 0.0;
    track.converged = true;
    track.parity += 1;
    track.history.push_back(0.0);
}

std::vector<double> reference_gmres(const MatVec& A, const CVector& b, cplx delta, int kmax)
{
    const double beta = b.norm();
    if (beta == 0.0)
        throw ZeroStartVector("reference_gmres: ||b|| = 0");
    if (kmax < 0)
        throw InvalidDimension("reference_gmres: kmax must be >= 0");

    const auto n = b.size();
    CMatrix V(n, kmax + 1);
    CMatrix H = CMatrix::Zero(kmax + 1, kmax);
    V.col(0) = b / beta;

    std::vector<double> out{1.0};
    int built = 0;
    bool invariant = false;
    for (int k = 0; k < kmax; ++k) {
        if (!invariant) {
            // classical Gram-Schmidt, applied twice
            CVector w = A(V.col(k));
            const double anorm = w.norm();
            for (int pass = 0; pass < 2; ++pass) {
                const CVector h = V.leftCols(k + 1).adjoint() * w;
                w -= V.leftCols(k + 1) * h;
                H.col(k).head(k + 1) += h;
            }
            const double hk = w.norm();
            if (hk <= 1e-14 * anorm) {
                invariant = true;
            } else {
                H(k + 1, k) = hk;
                V.col(k + 1) = w / hk;
            }
            built = k + 1;
        }
        if (invariant && built < k + 1) {
            out.push_back(out.back());
            continue;
        }
        CMatrix Hk = H.topLeftCorner(k + 2, k + 1);
        Hk.diagonal().array() -= delta;
        CVector rhs = CVector::Zero(k + 2);
        rhs(0) = beta;
        const Eigen::HouseholderQR<CMatrix> qr(Hk);
        const CVector y = qr.solve(rhs);
        out.push_back((rhs - Hk * y).norm() / beta);
    }
    return out;
}

} // namespace fastarnoldi
