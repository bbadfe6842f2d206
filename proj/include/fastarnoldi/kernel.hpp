#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace fastarnoldi {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Matrix action x -> A x.
using MatVec = std::function<CVector(const CVector&)>;

MatVec dense_action(const CMatrix& A);

/// Seeded generator with a platform-independent normal stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) built from the top 53 bits of one draw.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Least-squares solution of M x = y by column-pivoted Householder QR.
/// Pivots below rel_tol * (largest pivot) are treated as rank deficiency and
/// their coefficients set to zero. The detected rank is written to rank_out.
CVector lsq_solve(const CMatrix& M, const CVector& y, double rel_tol = 1e-12, int* rank_out = nullptr);

/// Number of singular values above tol * sigma_max.
int svd_rank(const CMatrix& M, double tol);

/// Real standard-normal entries stored as complex.
CVector randn_cvector(int n, Rng& rng);

CMatrix randn_cmatrix(int rows, int cols, Rng& rng, bool complex_entries);

/// Haar-distributed unitary matrix: QR of a complex Gaussian with the
/// phases of diag(R) absorbed into Q.
CMatrix random_unitary(int n, Rng& rng);

double spectral_norm(const CMatrix& M);

} // namespace fastarnoldi
