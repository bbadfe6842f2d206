#pragma once

#include "fastarnoldi/bml.hpp"

#include <vector>

namespace fastarnoldi {

struct BmOptions {
    int kmax = 0;
    /// Compute tau_j = G^*(p_j - P_{m2} rho_j) directly; the delay drops from m + m3 to m.
    bool tau_from_G = false;
    double breakdown_tol = 1e-14;
};

/// Multiple-recurrence state. Vectors are monic (ones on the subdiagonal of
/// the coefficient matrix) and only normalized on extraction.
struct BmState {
    std::vector<CVector> p;    ///< p_0..p_K (0-based)
    std::vector<double> nrm2;  ///< ||p_j||^2
    std::vector<CVector> Ap;
    std::vector<CVector> rho;  ///< in C^{m2}
    std::vector<CVector> eta;  ///< (p_l^* A p_j)_{l < m2}
    std::vector<CVector> mu;   ///< F^* p_j
    std::vector<CVector> tau;  ///< in C^{m3}
    CMatrix S;                 ///< sigma_ij, A P = P S with ones on the subdiagonal
    CMatrix W, What;           ///< sum p_i rho_i^* / ||p_i||^2, sum p_i tau_i^* / ||p_i||^2
    CMatrix rW, rWhat;         ///< coefficient images rho_i rho_i^*, rho_i tau_i^* (scaled)
    int m = 0, m2 = 0, m3 = 0;
    int delay = 0;             ///< m' = m + m3 (m with tau_from_G)
    int folded = 0;            ///< number of leading vectors merged into W, What
    int generator_rank_events = 0;
    bool terminated = false;   ///< exact breakdown detected
    bool overflow = false;     ///< stopped on a non-finite or vanishing vector

    int size() const { return static_cast<int>(p.size()); }
    double norm(int j) const;
    /// Orthonormal columns v_1..v_K.
    CMatrix normalized_V() const;
    /// Normalized Hessenberg block (K-1) x (K-1) (square part of the computed columns).
    CMatrix normalized_H() const;
};

BmState bm_iterate(const BmlOperator& op, const CVector& b, const BmOptions& opts);

/// rho_j^* eta_k + tau_j^* mu_k scaled to the normalized basis (1-based j, k).
cplx bm_reconstruct_H(const BmState& st, int j, int k);

/// Normalized W_k = sum_{l <= k} p_l rho_l^* / ||p_l||^2 diag(||p_0||..||p_{m2-1}||).
CMatrix bm_W(const BmState& st, int k);

/// sum_{l <= k} p_l tau_l^* / ||p_l||^2.
CMatrix bm_What(const BmState& st, int k);

/// ||W_k - M_k (V_{m2}^* M_k)^{-1}||, V holding the first m2 basis vectors.
double bm_w_link_check(const BmState& st, int k, const CMatrix& V, const CMatrix& Mk);

/// Monic polynomial prod (z - z_j), ascending coefficients.
std::vector<cplx> monic_from_roots(const std::vector<cplx>& roots);

} // namespace fastarnoldi
