#pragma once

#include "fastarnoldi/bml.hpp"

#include <vector>

namespace fastarnoldi {

struct SeparabilityReport {
    int r = 0;
    int s = 0;
    std::vector<int> ranks; ///< observed rank of block j (1-based j at index j-1)
    int max_rank = 0;
    bool pass = false;
};

/// Ranks of B(1 : j - min(r,0), j + max(r,0) : n), j = 1..n-|r|, counted
/// against tol * ||B||.
SeparabilityReport upper_separable_check(const CMatrix& B, int r, int s, double tol = 1e-8);

/// Largest deviation between H_{k,l} (l >= k + m) and its reconstruction from
/// the residues, the resolvents (H - z_j I)^{-*} and G_N F_N^*.
double structure_generators_check(const CMatrix& H, const BmlOperator& op, const CMatrix& V);

/// ||(I + U)^{-1} U|| with U the strict upper part of V^* V - I.
double paige_measure(const CMatrix& V);

/// Entrywise |V^* V - I|.
Eigen::MatrixXd orthogonality_matrix(const CMatrix& V);

enum class DecayKind { unitary_factor, resolvent };

struct DecayEntry {
    int m = 0;
    int l = 0;
    double observed = 0.0;
    double predicted = 0.0;
    int rank = 0;
};

/// Block norms of the leading m x trailing l blocks against
/// sigma_{m-1} / sigma_{k-l+1} (times ||X|| for the resolvent).
std::vector<DecayEntry> decay_profile(const CMatrix& X, const std::vector<double>& sigmas, DecayKind kind);

/// ||H^* - sum d_j (H - z_j)^{-1} - pi(H) - F_N G_N^*|| / ||H||.
double heritage_defect(const CMatrix& H, const BmlOperator& op, const CMatrix& FN, const CMatrix& GN);

/// |z^k conj(q_k(1/conj z)) - (1/sigma_k(0)) sum conj(q_j(0)) q_j(z)|, for H from a unitary matrix.
double reversed_polynomial_defect(const CMatrix& H, int k, cplx z);

} // namespace fastarnoldi
