#pragma once

#include "fastarnoldi/residuals.hpp"

#include <optional>
#include <vector>

namespace fastarnoldi {

/// Special classes with cheaper tau updates.
enum class SpecialClass {
    none,
    nearly_hermitian, ///< A^* - alpha A - beta I = F G^*
    nearly_unitary,   ///< A^* - alpha I - beta A^{-1} = F G^*
    shifted_unitary   ///< A^* - alpha I - beta (A - delta I)^{-1} = F G^*
};

struct SpecialForm {
    SpecialClass kind = SpecialClass::none;
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};
    cplx delta{0.0, 0.0};
};

/// Matrix together with a certificate
/// A^* = sum_j d_j (A - z_j I)^{-1} + pi(A) + F G^*.
struct BmlOperator {
    CMatrix A;
    std::vector<cplx> poles;     ///< z_1..z_m2, pairwise distinct
    std::vector<cplx> residues;  ///< d_1..d_m2
    std::vector<cplx> pi_coeffs; ///< ascending coefficients of pi
    CMatrix F;                   ///< n x m3
    CMatrix G;                   ///< n x m3
    SpecialForm special;
    bool use_special_tau = false;

    int n() const { return static_cast<int>(A.rows()); }
    int m2() const { return static_cast<int>(poles.size()); }
    int m3() const { return static_cast<int>(F.cols()); }
    /// Number of classical start-up steps: deg(pi) + 1, or 0 when pi_coeffs
    /// is empty. An explicit zero constant {0} declares m1 = m2 (m = 1).
    int m() const;

    CVector apply(const CVector& x) const { return A * x; }
    CVector adjoint_apply(const CVector& x) const { return A.adjoint() * x; }
    MatVec action() const { return dense_action(A); }
};

/// Drops trailing zero coefficients, keeping the constant term.
std::vector<cplx> trim_poly(std::vector<cplx> coeffs);

/// Evaluates pi at a scalar or at a matrix (Horner).
cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);
CMatrix poly_eval(const std::vector<cplx>& coeffs, const CMatrix& X);

struct BmlReport {
    double max_defect = 0.0; ///< max relative certificate defect over the probes
    bool pass = false;
};

/// Checks the certificate on random unit probes.
BmlReport validate_bml(const BmlOperator& op, int probes, double tol, std::uint64_t seed = 7);

/// Structural checks on the certificate data (dimensions, distinct poles, rank of F and G).
void check_certificate_shape(const BmlOperator& op);

struct FastArnoldiOptions {
    int kmax = 0;
    std::vector<cplx> monitor_shifts; ///< extra shifts tracked with the general tau
    bool reorder = false;             ///< m2 = 1: project on w before the short orthogonalization
    bool compare_tau = false;         ///< log general and specialized tau side by side
    bool record_history = false;      ///< keep v'_k and M_k for each step
    bool flush_tracks = true;         ///< advance lagging pole tracks to the last step
    double breakdown_tol = 1e-14;
};

struct TauComparison {
    int track = 0;    ///< pole index, or -1 - monitor index
    int k = 0;
    cplx general;
    cplx special;
};

struct FastArnoldiState {
    KrylovState base;
    std::vector<ResidualTrack> tracks;   ///< one per pole
    std::vector<ResidualTrack> monitors; ///< one per monitor shift
    CMatrix Gtilde;                      ///< V_{k-m} V_{k-m}^* G
    std::vector<CVector> a_coeffs;       ///< a_coeffs[k-1]: least-squares coefficients of step k
    CMatrix AV;                          ///< A v_1 .. A v_k
    CMatrix Fhat;                        ///< row k-1: (F^* v_k)^T
    CMatrix Ghat;                        ///< row k-1: v_k^* G
    int m = 0;
    int lsq_rank_drops = 0;

    std::vector<CVector> vprime;         ///< v'_k before orthogonalization (record_history)
    std::vector<CMatrix> Mk;             ///< M_k used at step k (record_history)
    std::vector<TauComparison> tau_log;

    int steps() const { return base.steps(); }
    const CMatrix& V() const { return base.V; }
};

/// Arnoldi for BML matrices with a short recurrence after m classical steps.
FastArnoldiState fast_arnoldi(const BmlOperator& op, const CVector& b, const FastArnoldiOptions& opts);

struct IsometricResult {
    KrylovState base;
    CMatrix Vtilde;             ///< auxiliary vectors, column k-1 holds vtilde_k
    std::vector<cplx> gamma;
    std::vector<double> sigma;
};

/// Double recurrence for unitary A.
IsometricResult isometric_arnoldi(const MatVec& A, const CVector& b, int kmax, int probes = 3);

/// p_k = -s p_{k-1} + c g_k.
CVector p_vector_update(const CVector& p_prev, double s, cplx c, const CVector& gk, int k);

/// p_1..p_k for a track, built from its chain and the rows v_j^* G.
std::vector<CVector> p_vectors(const GivensChain& chain, const CMatrix& Ghat, int k);

/// tau_k(0) for a nearly Hermitian operator, from a monitor track at shift 0.
cplx tau_nearly_hermitian(const FastArnoldiState& st, const BmlOperator& op, int k);

/// tau_k(0) for a nearly unitary operator (m = 0, pole 0).
cplx tau_nearly_unitary(const FastArnoldiState& st, const BmlOperator& op, int k);

/// tau_{k-1}(delta) for a nearly shifted unitary operator (m = 1, pole delta), k >= 3.
cplx tau_shifted_unitary(const FastArnoldiState& st, const BmlOperator& op, int k);

/// Closed form for the shifted unitary class in terms of the stored scalars,
/// with v_{k-1}^* v'_{k-1} written as h_{k-1,k-1}.
cplx tau_shifted_unitary_formula(int k, double s2, cplx c2, cplx a_km1, cplx h_km1, cplx pF, cplx delta);

/// Variant of the closed form that uses a_{1,k} |c_{k-2}|^2 in place of c_{k-2} h_{k-1,k-1}.
cplx tau_shifted_unitary_printed(int k, double s2, cplx c2, cplx a_km1, cplx a_k, cplx pF, cplx delta);

} // namespace fastarnoldi
