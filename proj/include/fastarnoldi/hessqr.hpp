#pragma once

#include "fastarnoldi/krylov.hpp"

#include <vector>

namespace fastarnoldi {

/// Sequence of rotations (s_k, c_k) with the values tau_k that produced them.
struct GivensChain {
    cplx delta{0.0, 0.0};
    std::vector<double> s;
    std::vector<cplx> c;
    std::vector<cplx> tau;
    double sigma = 1.0; ///< running sigma_k(delta) = 1 / prod s_j

    int size() const { return static_cast<int>(s.size()); }
    void append(double sk, cplx ck, cplx tauk);
};

struct SineCosine {
    double s;
    cplx c;
};

/// s = h / sqrt(h^2 + |tau|^2), c = tau / sqrt(h^2 + |tau|^2).
SineCosine cs_from_tau(cplx tau, double h);

struct GivensQR {
    GivensChain chain;
    CMatrix R;     ///< k x k upper triangular, positive diagonal
    CMatrix Qstar; ///< (k+1) x (k+1), product of the rotations
};

/// QR factorization of H_k - delta I_k (underlined) by a chain of rotations
/// acting on rows (j, j+1) as [[conj c, s], [-s, c]].
GivensQR givens_qr(const Hessenberg& H, cplx delta);

/// Q_{k+1}(delta)^* written out entrywise from q_0(delta)..q_k(delta).
CMatrix explicit_Q(const std::vector<cplx>& qvals);

/// Phase of modulus one applied to the last row of Q^* so that the square
/// matrix H_{k+1} - delta I factors with a positive last diagonal entry of R.
/// Hsq is (k+1) x (k+1); returns the phase and rescales qr in place.
cplx square_qr_phase(const CMatrix& Hsq, cplx delta, GivensQR& qr);

/// sigma_{m-1} / sigma_{k-l+1}, the norm of the leading m x trailing l block of Q.
double submatrix_norm_formula(const std::vector<double>& sigmas, int m, int l);

} // namespace fastarnoldi
