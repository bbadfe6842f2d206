#include "fastarnoldi/bmref.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>

namespace fastarnoldi {

namespace {

CVector unit(int size, int i)
{
    CVector e = CVector::Zero(size);
    e(i) = 1.0;
    return e;
}

} // namespace

std::vector<cplx> monic_from_roots(const std::vector<cplx>& roots)
{
    std::vector<cplx> c{1.0};
    for (const auto z : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= z * c[i];
        }
        c = std::move(next);
    }
    return c;
}

double BmState::norm(int j) const { return std::sqrt(nrm2.at(j)); }

CMatrix BmState::normalized_V() const
{
    if (p.empty())
        return CMatrix();
    CMatrix V(p.front().size(), size());
    for (int j = 0; j < size(); ++j)
        V.col(j) = p[j] / norm(j);
    return V;
}

CMatrix BmState::normalized_H() const
{
    const int K = size() - 1;
    CMatrix H = CMatrix::Zero(std::max(K, 0), std::max(K, 0));
    for (int j = 0; j < K; ++j)
        for (int i = 0; i <= std::min(j + 1, K - 1); ++i)
            H(i, j) = S(i, j) * norm(i) / norm(j);
    return H;
}

BmState bm_iterate(const BmlOperator& op, const CVector& b, const BmOptions& opts)
{
    const int n = op.n();
    const int kmax = opts.kmax;
    if (b.size() != n)
        throw DimensionMismatch("bm_iterate: len(b) != n");
    if (kmax < 1 || kmax > n)
        throw InvalidDimension("bm_iterate: need 1 <= kmax <= n");
    if (b.norm() == 0.0)
        throw ZeroStartVector("bm_iterate: ||b|| = 0");

    BmState st;
    st.m = op.m();
    st.m2 = op.m2();
    st.m3 = op.m3();
    const int m2 = st.m2;
    const int m3 = st.m3;
    st.delay = opts.tau_from_G ? st.m : st.m + m3;
    const int mp = st.delay;

    const auto qmonic = monic_from_roots(op.poles);
    CVector qc(m2 + 1);
    for (int i = 0; i <= m2; ++i)
        qc(i) = qmonic[i];

    st.S = CMatrix::Zero(kmax + 2, kmax + 1);
    st.W = CMatrix::Zero(n, m2);
    st.What = CMatrix::Zero(n, m3);
    st.rW = CMatrix::Zero(m2, m2);
    st.rWhat = CMatrix::Zero(m2, m3);
    st.p.push_back(b);
    st.nrm2.push_back(b.squaredNorm());

    // coefficient vectors of the first m2 + 1 monic polynomials
    std::vector<CVector> cp;
    auto rho_start = [&](int j) -> CVector {
        if (j < m2)
            return unit(m2, j);
        CMatrix C(m2 + 1, m2 + 1);
        for (int i = 0; i <= m2; ++i)
            C.col(i) = cp[i];
        const CVector g = C.partialPivLu().solve(qc);
        return -g.head(m2) / g(m2);
    };
    if (m2 > 0) {
        cp.push_back(unit(m2 + 1, 0));
        st.rho.push_back(rho_start(0));
    }

    for (int j = 0; j < kmax; ++j) {
        const CVector Ap = op.apply(st.p[j]);
        st.Ap.push_back(Ap);

        // components l > j cannot enter through rho before p_l exists
        CVector eta = CVector::Zero(m2);
        for (int l = 0; l < m2 && l <= j; ++l)
            eta(l) = st.p[l].dot(Ap);
        st.eta.push_back(eta);
        st.mu.push_back(op.F.adjoint() * st.p[j]);

        const int t = opts.tau_from_G ? j - mp : j - mp + 1;
        if (m3 > 0 && t >= 0) {
            if (opts.tau_from_G) {
                CVector x = st.p[t];
                if (m2 > 0)
                    for (int l = 0; l < m2 && l < st.size(); ++l)
                        x -= st.rho[t](l) * st.p[l];
                st.tau.push_back(op.G.adjoint() * x);
            } else {
                // tau_t^* mu_{j-l} = p_t^* A p_{j-l} - rho_t^* eta_{j-l}, l < m3
                CMatrix M(m3, m3);
                CVector r(m3);
                for (int l = 0; l < m3; ++l) {
                    M.col(l) = st.mu[j - l];
                    r(l) = st.p[t].dot(st.Ap[j - l]);
                    if (m2 > 0)
                        r(l) -= st.rho[t].dot(st.eta[j - l]);
                }
                Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(M.adjoint());
                cod.setThreshold(1e-12);
                if (cod.rank() < m3)
                    ++st.generator_rank_events;
                st.tau.push_back(cod.solve(r.conjugate()));
            }
        }

        CVector y;
        std::vector<std::pair<int, cplx>> near;
        CVector rWe = CVector::Zero(m2);
        if (j < mp) {
            for (int i = 0; i <= j; ++i) {
                st.S(i, j) = st.p[i].dot(Ap) / st.nrm2[i];
                near.emplace_back(i, st.S(i, j));
            }
            y = Ap;
            for (const auto& [i, s] : near)
                y -= s * st.p[i];
        } else {
            const int far = j - mp;
            for (; st.folded <= far; ++st.folded) {
                const int i = st.folded;
                if (m2 > 0) {
                    st.W += st.p[i] * st.rho[i].adjoint() / st.nrm2[i];
                    st.rW += st.rho[i] * st.rho[i].adjoint() / st.nrm2[i];
                }
                if (m3 > 0) {
                    st.What += st.p[i] * st.tau[i].adjoint() / st.nrm2[i];
                    if (m2 > 0)
                        st.rWhat += st.rho[i] * st.tau[i].adjoint() / st.nrm2[i];
                }
            }
            y = Ap;
            if (m2 > 0)
                y -= st.W * eta;
            if (m3 > 0)
                y -= st.What * st.mu[j];
            for (int i = 0; i <= far; ++i) {
                cplx s = 0.0;
                if (m2 > 0)
                    s += st.rho[i].dot(eta);
                if (m3 > 0)
                    s += st.tau[i].dot(st.mu[j]);
                st.S(i, j) = s / st.nrm2[i];
            }
            for (int i = far + 1; i <= j; ++i) {
                const cplx th = st.p[i].dot(y) / st.nrm2[i];
                st.S(i, j) = th;
                near.emplace_back(i, th);
            }
            for (const auto& [i, s] : near)
                y -= s * st.p[i];
            if (m2 > 0) {
                rWe = st.rW * eta;
                if (m3 > 0)
                    rWe += st.rWhat * st.mu[j];
            }
        }

        CVector rnew;
        if (m2 > 0) {
            if (j < m2) {
                CVector c = CVector::Zero(m2 + 1);
                c.tail(m2) = cp[j].head(m2);
                for (int i = 0; i <= j; ++i)
                    c -= st.S(i, j) * cp[i];
                cp.push_back(c);
                rnew = rho_start(j + 1);
            } else {
                CMatrix Hs = CMatrix::Zero(m2 + 1, m2);
                for (int cc = 0; cc < m2; ++cc) {
                    Hs.col(cc).head(cc + 1) = st.S.col(cc).head(cc + 1);
                    Hs(cc + 1, cc) = 1.0;
                }
                const CVector c = Hs * st.rho[j];
                rnew = CVector::Zero(m2);
                for (int l = 0; l <= m2; ++l)
                    rnew += c(l) * st.rho[l];
                rnew -= rWe;
                for (const auto& [i, s] : near)
                    rnew -= s * st.rho[i];
            }
        }
        st.S(j + 1, j) = 1.0;

        const double nn = y.squaredNorm();
        if (!std::isfinite(nn) || !y.allFinite() || nn == 0.0) {
            st.overflow = nn != 0.0;
            st.terminated = nn == 0.0;
            break;
        }
        if (nn <= opts.breakdown_tol * opts.breakdown_tol * Ap.squaredNorm()) {
            st.terminated = true;
            break;
        }
        st.p.push_back(y);
        st.nrm2.push_back(nn);
        if (m2 > 0)
            st.rho.push_back(rnew);
    }
    return st;
}

cplx bm_reconstruct_H(const BmState& st, int j, int k)
{
    const int i = j - 1;
    const int l = k - 1;
    if (j < 1 || k < 1 || l >= static_cast<int>(st.eta.size()) || j > k - st.delay)
        throw IndexOutOfRange("bm_reconstruct_H: (j, k) outside the delayed regime");
    if (st.m3 > 0 && i >= static_cast<int>(st.tau.size()))
        throw IndexOutOfRange("bm_reconstruct_H: tau_j not yet available");
    cplx v = 0.0;
    if (st.m2 > 0)
        v += st.rho[i].dot(st.eta[l]);
    if (st.m3 > 0)
        v += st.tau[i].dot(st.mu[l]);
    return v / (st.norm(i) * st.norm(l));
}

CMatrix bm_W(const BmState& st, int k)
{
    if (k < 0 || k >= st.size())
        throw IndexOutOfRange("bm_W: k out of range");
    const auto n = st.p.front().size();
    CMatrix W = CMatrix::Zero(n, st.m2);
    for (int l = 0; l <= k; ++l)
        W += st.p[l] * st.rho[l].adjoint() / st.nrm2[l];
    for (int i = 0; i < st.m2; ++i)
        W.col(i) *= st.norm(i);
    return W;
}

CMatrix bm_What(const BmState& st, int k)
{
    if (k < 0 || k >= st.size() || k >= static_cast<int>(st.tau.size()))
        throw IndexOutOfRange("bm_What: k out of range");
    const auto n = st.p.front().size();
    CMatrix W = CMatrix::Zero(n, st.m3);
    for (int l = 0; l <= k; ++l)
        W += st.p[l] * st.tau[l].adjoint() / st.nrm2[l];
    return W;
}

double bm_w_link_check(const BmState& st, int k, const CMatrix& V, const CMatrix& Mk)
{
    if (V.cols() != st.m2 || Mk.cols() != st.m2 || V.rows() != Mk.rows())
        throw DimensionMismatch("bm_w_link_check: expected n x m2 inputs");
    const CMatrix VM = V.adjoint() * Mk;
    Eigen::PartialPivLU<CMatrix> lu(VM);
    const double smin = VM.jacobiSvd().singularValues().minCoeff();
    if (!(smin > 1e-10 * spectral_norm(Mk)))
        throw SingularLink("bm_w_link_check: V^* M_k is singular");
    const CMatrix link = Mk * lu.inverse();
    return spectral_norm(bm_W(st, k) - link);
}

} // namespace fastarnoldi
