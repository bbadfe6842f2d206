#include "fastarnoldi/krylov.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>

namespace fastarnoldi {

Hessenberg::Hessenberg(const CMatrix& underline) : data_(underline)
{
    if (data_.rows() != data_.cols() + 1)
        throw DimensionMismatch("Hessenberg: expected (k+1) x k input");
    for (int j = 0; j < cols(); ++j) {
        for (int i = j + 2; i <= cols(); ++i)
            data_(i, j) = 0.0;
        data_(j + 1, j) = cplx(std::abs(data_(j + 1, j)), 0.0);
    }
}

void Hessenberg::push_column()
{
    const auto k = data_.cols();
    data_.conservativeResize(k + 2, k + 1);
    data_.row(k + 1).setZero();
    data_.col(k).setZero();
}

KrylovState arnoldi(const MatVec& A, const CVector& b, int kmax, bool reorth, double breakdown_tol)
{
    if (kmax < 1)
        throw InvalidDimension("arnoldi: kmax must be >= 1");
    const double beta = b.norm();
    if (beta == 0.0)
        throw ZeroStartVector("arnoldi: ||b|| = 0");

    const auto n = b.size();
    KrylovState st;
    st.V.resize(n, kmax + 1);
    st.V.col(0) = b / beta;

    for (int k = 0; k < kmax; ++k) {
        CVector w = A(st.V.col(k));
        const double anorm = w.norm();
        st.H.push_column();
        const int passes = reorth ? 2 : 1;
        for (int p = 0; p < passes; ++p) {
            for (int j = 0; j <= k; ++j) {
                const cplx h = st.V.col(j).dot(w);
                st.H.at(j, k) += h;
                w -= h * st.V.col(j);
            }
        }
        const double hk = w.norm();
        st.H.at(k + 1, k) = hk;
        if (hk <= breakdown_tol * anorm || hk == 0.0) {
            st.H.at(k + 1, k) = 0.0;
            st.terminated = true;
            st.N = k + 1;
            st.V.conservativeResize(n, k + 1);
            return st;
        }
        st.V.col(k + 1) = w / hk;
    }
    return st;
}

namespace {

template <class Mat>
std::vector<cplx> orthopoly_impl(const Mat& H, int k, cplx z)
{
    std::vector<cplx> q(k + 1);
    q[0] = 1.0;
    for (int j = 1; j <= k; ++j) {
        const double h = std::real(H(j, j - 1));
        if (!(h > 0.0))
            throw BreakdownEncountered("eval_orthopoly: zero subdiagonal at column " +
                                       std::to_string(j));
        cplx acc = z * q[j - 1];
        for (int i = 0; i < j; ++i)
            acc -= q[i] * H(i, j - 1);
        q[j] = acc / h;
    }
    return q;
}

} // namespace

std::vector<cplx> eval_orthopoly(const Hessenberg& H, int k, cplx z)
{
    if (k < 0 || k > H.cols())
        throw IndexOutOfRange("eval_orthopoly: k out of range");
    return orthopoly_impl(H, k, z);
}

std::vector<cplx> eval_orthopoly(const CMatrix& H, int k, cplx z)
{
    if (k < 0 || k >= H.rows())
        throw IndexOutOfRange("eval_orthopoly: k out of range");
    return orthopoly_impl(H, k, z);
}

double sigma(const std::vector<cplx>& qvals)
{
    double s = 0.0;
    for (const auto& q : qvals)
        s += std::norm(q);
    return std::sqrt(s);
}

std::vector<double> sigmas(const std::vector<cplx>& qvals)
{
    std::vector<double> out(qvals.size());
    double s = 0.0;
    for (std::size_t j = 0; j < qvals.size(); ++j) {
        s += std::norm(qvals[j]);
        out[j] = std::sqrt(s);
    }
    return out;
}

} // namespace fastarnoldi
