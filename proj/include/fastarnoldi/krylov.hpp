#pragma once

#include "fastarnoldi/kernel.hpp"

#include <optional>
#include <vector>

namespace fastarnoldi {

/// Rectangular (k+1) x k upper Hessenberg matrix with real nonnegative
/// subdiagonal. Indices are 0-based: h(i, j) is h_{i+1,j+1} in 1-based notation.
class Hessenberg {
public:
    Hessenberg() : data_(1, 0) {}
    explicit Hessenberg(const CMatrix& underline);

    int cols() const { return static_cast<int>(data_.cols()); }

    cplx operator()(int i, int j) const { return data_(i, j); }
    cplx& at(int i, int j) { return data_(i, j); }

    /// Real subdiagonal entry h_{j+2, j+1} (0-based column j).
    double sub(int j) const { return data_(j + 1, j).real(); }

    /// Appends a zero column; the caller fills entries 0..k.
    void push_column();

    /// Square top block H_k.
    CMatrix square(int k) const { return data_.topLeftCorner(k, k); }
    CMatrix square() const { return square(cols()); }
    /// (k+1) x k leading block.
    CMatrix underline(int k) const { return data_.topLeftCorner(k + 1, k); }
    const CMatrix& underline() const { return data_; }

private:
    CMatrix data_;
};

struct KrylovState {
    CMatrix V;                 // n x (k+1), or n x N after termination
    Hessenberg H;              // (k+1) x k
    bool terminated = false;
    std::optional<int> N;      // termination index

    int steps() const { return H.cols(); }
};

/// Modified Gram-Schmidt Arnoldi; reorth adds a second full pass.
/// Terminates when h_{k+1,k} <= breakdown_tol * ||A v_k||.
KrylovState arnoldi(const MatVec& A, const CVector& b, int kmax, bool reorth,
                    double breakdown_tol = 1e-14);

/// q_0(z), ..., q_k(z) from the recurrence q_k h_{k+1,k} = z q_{k-1} - sum q_{j-1} h_{j,k}.
std::vector<cplx> eval_orthopoly(const Hessenberg& H, int k, cplx z);
std::vector<cplx> eval_orthopoly(const CMatrix& H, int k, cplx z);

/// sqrt(sum |q_j|^2).
double sigma(const std::vector<cplx>& qvals);

/// Running sigma_0..sigma_k.
std::vector<double> sigmas(const std::vector<cplx>& qvals);

} // namespace fastarnoldi
