#pragma once

#include "fastarnoldi/hessqr.hpp"

#include <vector>

namespace fastarnoldi {

/// Progressive GMRES residual for the shifted system (A - delta I) x = b.
struct ResidualTrack {
    cplx delta{0.0, 0.0};
    CVector w;                  ///< normalized residual w_k(delta)
    GivensChain chain;
    double relnorm = 1.0;       ///< ||r_k|| / ||r_0||
    int parity = 0;             ///< k
    bool converged = false;
    std::vector<double> history{1.0}; ///< relnorm after each update

    ResidualTrack() = default;
    ResidualTrack(cplx shift, const CVector& v1);
};

/// (-1)^(k-1) w_prev^* (Av - delta v).
cplx tau_general(const CVector& w_prev, const CVector& Av, const CVector& v, cplx delta, int k);

/// w <- s w + (-1)^k conj(c) v_next, renormalized; k = parity + 1.
void update_residual(ResidualTrack& track, const CVector& v_next, cplx tau, double h_sub);

/// Closing update at an Arnoldi breakdown: the residual vanishes.
void finalize_at_breakdown(ResidualTrack& track, cplx tau);

/// Relative GMRES residuals for k = 0..kmax from a reorthogonalized Arnoldi
/// basis and a dense least-squares solve at every k.
std::vector<double> reference_gmres(const MatVec& A, const CVector& b, cplx delta, int kmax);

} // namespace fastarnoldi
