#include "fastarnoldi/bml.hpp"
#include "fastarnoldi/error.hpp"

#include <cmath>

namespace fastarnoldi {

namespace {

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

enum class Route { general, hermitian, unitary, shifted };

Route select_route(const BmlOperator& op)
{
    if (!op.use_special_tau || op.special.kind == SpecialClass::none)
        return Route::general;
    switch (op.special.kind) {
    case SpecialClass::nearly_hermitian:
        return Route::hermitian;
    case SpecialClass::nearly_unitary:
    case SpecialClass::shifted_unitary:
        if (op.m2() != 1)
            throw SpecializationMismatch("unitary classes need exactly one pole");
        if (op.m() == 0) {
            if (op.poles[0] != cplx(0.0))
                throw SpecializationMismatch("m = 0 route needs the pole at 0");
            return Route::unitary;
        }
        if (op.m() == 1)
            return Route::shifted;
        throw SpecializationMismatch("unitary classes need m <= 1");
    default:
        return Route::general;
    }
}

int find_zero_monitor(const FastArnoldiState& st)
{
    for (std::size_t i = 0; i < st.monitors.size(); ++i)
        if (st.monitors[i].delta == cplx(0.0))
            return static_cast<int>(i);
    return -1;
}

} // namespace

std::vector<cplx> trim_poly(std::vector<cplx> coeffs)
{
    while (coeffs.size() > 1 && coeffs.back() == cplx(0.0))
        coeffs.pop_back();
    return coeffs;
}

int BmlOperator::m() const
{
    return static_cast<int>(trim_poly(pi_coeffs).size());
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z)
{
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

CMatrix poly_eval(const std::vector<cplx>& coeffs, const CMatrix& X)
{
    const auto n = X.rows();
    CMatrix acc = CMatrix::Zero(n, n);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * X;
        acc.diagonal().array() += *it;
    }
    return acc;
}

void check_certificate_shape(const BmlOperator& op)
{
    const int n = op.n();
    if (op.A.cols() != n)
        throw CertificateInvalid("matrix is not square");
    if (op.residues.size() != op.poles.size())
        throw CertificateInvalid("poles and residues differ in count");
    if (op.F.rows() != n || op.G.rows() != n || op.F.cols() != op.G.cols())
        throw CertificateInvalid("F and G must both be n x m3");
    for (std::size_t i = 0; i < op.poles.size(); ++i)
        for (std::size_t j = i + 1; j < op.poles.size(); ++j)
            if (std::abs(op.poles[i] - op.poles[j]) <= 1e-14 * std::max(1.0, std::abs(op.poles[i])))
                throw CertificateInvalid("poles are not distinct");
    if (op.m3() > 0) {
        if (svd_rank(op.F, 1e-12) < op.m3() || svd_rank(op.G, 1e-12) < op.m3())
            throw CertificateInvalid("F or G lacks full column rank");
    }
}

BmlReport validate_bml(const BmlOperator& op, int probes, double tol, std::uint64_t seed)
{
    if (probes < 1)
        throw InvalidArgument("validate_bml: probes must be >= 1");
    check_certificate_shape(op);
    const int n = op.n();
    const CMatrix I = CMatrix::Identity(n, n);

    std::vector<Eigen::PartialPivLU<CMatrix>> lus;
    for (const auto z : op.poles) {
        Eigen::PartialPivLU<CMatrix> lu(op.A - z * I);
        if (!(lu.rcond() > 1e-14))
            throw SingularShift("A - z I is numerically singular for z = (" +
                                std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
        lus.push_back(std::move(lu));
    }

    Rng rng(seed);
    BmlReport rep;
    for (int p = 0; p < probes; ++p) {
        CVector x = randn_cmatrix(n, 1, rng, true).col(0);
        x.normalize();
        const CVector lhs = op.adjoint_apply(x);
        CVector rhs = CVector::Zero(n);
        double scale = lhs.norm();
        for (std::size_t j = 0; j < lus.size(); ++j) {
            const CVector t = op.residues[j] * lus[j].solve(x);
            scale += t.norm();
            rhs += t;
        }
        CVector pix = CVector::Zero(n);
        for (auto it = op.pi_coeffs.rbegin(); it != op.pi_coeffs.rend(); ++it)
            pix = op.apply(pix) + *it * x;
        scale += pix.norm();
        rhs += pix;
        if (op.m3() > 0) {
            const CVector t = op.F * (op.G.adjoint() * x);
            scale += t.norm();
            rhs += t;
        }
        const double defect = (lhs - rhs).norm() / std::max(scale, 1e-300);
        rep.max_defect = std::max(rep.max_defect, defect);
    }
    rep.pass = rep.max_defect <= tol;
    return rep;
}

CVector p_vector_update(const CVector& p_prev, double s, cplx c, const CVector& gk, int k)
{
    if (k < 2)
        throw InvalidArgument("p_vector_update: k must be >= 2");
    if (p_prev.size() != gk.size())
        throw DimensionMismatch("p_vector_update: length mismatch");
    return -s * p_prev + c * gk;
}

std::vector<CVector> p_vectors(const GivensChain& chain, const CMatrix& Ghat, int k)
{
    if (k < 1 || k > Ghat.rows() || chain.size() < k - 1)
        throw IndexOutOfRange("p_vectors: k out of range");
    std::vector<CVector> p;
    p.reserve(k);
    p.emplace_back(Ghat.row(0).transpose());
    for (int j = 2; j <= k; ++j)
        p.push_back(p_vector_update(p.back(), chain.s[j - 2], chain.c[j - 2],
                                    Ghat.row(j - 1).transpose(), j));
    return p;
}

cplx tau_nearly_hermitian(const FastArnoldiState& st, const BmlOperator& op, int k)
{
    if (op.special.kind != SpecialClass::nearly_hermitian)
        throw SpecializationMismatch("operator is not flagged nearly Hermitian");
    const int t = find_zero_monitor(st);
    if (t < 0)
        throw SpecializationMismatch("no monitor track at shift 0");
    const auto& chain = st.monitors[t].chain;
    if (k < 1 || k > st.steps() || chain.size() < k - 1)
        throw IndexOutOfRange("tau_nearly_hermitian: k out of range");

    auto c = [&](int j) { return j == 0 ? cplx(1.0) : chain.c[j - 1]; };
    const CMatrix& H = st.base.H.underline();
    const CVector fk = st.Fhat.row(k - 1).transpose();
    const CVector p = p_vectors(chain, st.Ghat, k).back();

    // entries of the recurrence with correction V_k G_k
    const cplx hkk = H(k - 1, k - 1) - (st.Ghat.row(k - 1) * fk).value();
    cplx val = hkk * c(k - 1) + (p.transpose() * fk).value();
    if (k >= 2) {
        const cplx hk1 = H(k - 2, k - 1) - (st.Ghat.row(k - 2) * fk).value();
        val -= hk1 * c(k - 2) * chain.s[k - 2];
    }
    return val;
}

cplx tau_nearly_unitary(const FastArnoldiState& st, const BmlOperator& op, int k)
{
    if (op.special.kind != SpecialClass::nearly_unitary && op.special.kind != SpecialClass::shifted_unitary)
        throw SpecializationMismatch("operator is not flagged nearly unitary");
    if (op.m() != 0 || op.m2() != 1 || op.poles[0] != cplx(0.0))
        throw SpecializationMismatch("nearly unitary route needs m = 0 and a single pole at 0");
    const auto& chain = st.tracks[0].chain;
    if (k < 1 || k > st.steps() || chain.size() < k - 1 || st.a_coeffs[k - 1].size() < 1)
        throw IndexOutOfRange("tau_nearly_unitary: k out of range");
    const CVector p = p_vectors(chain, st.Ghat, k).back();
    return sign_pow(k - 1) * st.a_coeffs[k - 1](0) + (p.transpose() * st.Fhat.row(k - 1).transpose()).value();
}

cplx tau_shifted_unitary_formula(int k, double s2, cplx c2, cplx a_km1, cplx h_km1, cplx pF, cplx delta)
{
    return sign_pow(k - 2) * s2 * a_km1 + c2 * h_km1 - s2 * pF - delta * c2;
}

cplx tau_shifted_unitary_printed(int k, double s2, cplx c2, cplx a_km1, cplx a_k, cplx pF, cplx delta)
{
    return sign_pow(k - 2) * s2 * a_km1 + sign_pow(k - 2) * a_k * std::norm(c2) - s2 * pF - delta * c2;
}

cplx tau_shifted_unitary(const FastArnoldiState& st, const BmlOperator& op, int k)
{
    if (op.special.kind != SpecialClass::shifted_unitary && op.special.kind != SpecialClass::nearly_unitary)
        throw SpecializationMismatch("operator is not flagged nearly shifted unitary");
    if (op.m() != 1 || op.m2() != 1)
        throw SpecializationMismatch("shifted unitary route needs m = 1 and a single pole");
    const auto& chain = st.tracks[0].chain;
    if (k < 3 || k > st.steps() || chain.size() < k - 2 || st.a_coeffs[k - 2].size() < 1)
        throw IndexOutOfRange("tau_shifted_unitary: k out of range");

    const double s2 = chain.s[k - 3];
    const cplx c2 = chain.c[k - 3];
    const cplx a_km1 = st.a_coeffs[k - 2](0);
    const cplx h_km1 = st.base.H(k - 2, k - 2);
    const CVector p = p_vectors(chain, st.Ghat, k - 2).back();
    const cplx pF = (p.transpose() * st.Fhat.row(k - 2).transpose()).value();
    return tau_shifted_unitary_formula(k, s2, c2, a_km1, h_km1, pF, op.poles[0]);
}

FastArnoldiState fast_arnoldi(const BmlOperator& op, const CVector& b, const FastArnoldiOptions& opts)
{
    const int n = op.n();
    const int kmax = opts.kmax;
    if (b.size() != n)
        throw DimensionMismatch("fast_arnoldi: len(b) != n");
    if (kmax < 1 || kmax > n)
        throw InvalidDimension("fast_arnoldi: need 1 <= kmax <= n");
    const double beta = b.norm();
    if (beta == 0.0)
        throw ZeroStartVector("fast_arnoldi: ||b|| = 0");

    const int m = op.m();
    const int m2 = op.m2();
    const int m3 = op.m3();
    const Route route = select_route(op);

    FastArnoldiState st;
    st.m = m;
    CMatrix& V = st.base.V;
    Hessenberg& H = st.base.H;
    V.resize(n, kmax + 1);
    V.col(0) = b / beta;
    st.AV.resize(n, kmax);
    st.Fhat.resize(kmax, m3);
    st.Ghat.resize(kmax + 1, m3);
    st.Ghat.row(0) = V.col(0).adjoint() * op.G;
    st.Gtilde = CMatrix::Zero(n, m3);
    for (const auto z : op.poles)
        st.tracks.emplace_back(z, V.col(0));
    for (const auto d : opts.monitor_shifts)
        st.monitors.emplace_back(d, V.col(0));

    // the nearly Hermitian route serves the monitor at shift 0, if there is one
    const int herm_monitor = route == Route::hermitian ? find_zero_monitor(st) : -1;

    auto log_tau = [&](int track, int k, cplx general, cplx special) {
        if (opts.compare_tau)
            st.tau_log.push_back({track, k, general, special});
    };

    auto advance_monitors = [&](int k) {
        for (std::size_t t = 0; t < st.monitors.size(); ++t) {
            auto& tr = st.monitors[t];
            cplx tau = tau_general(tr.w, st.AV.col(k - 1), V.col(k - 1), tr.delta, k);
            if (static_cast<int>(t) == herm_monitor) {
                const cplx spec = tau_nearly_hermitian(st, op, k);
                log_tau(-1 - static_cast<int>(t), k, tau, spec);
                tau = spec;
            }
            update_residual(tr, V.col(k), tau, H.sub(k - 1));
        }
    };

    auto advance_pole = [&](int j, int i, int k) {
        auto& tr = st.tracks[j];
        cplx tau = tau_general(tr.w, st.AV.col(i - 1), V.col(i - 1), tr.delta, i);
        if (route == Route::unitary) {
            const cplx spec = tau_nearly_unitary(st, op, i);
            log_tau(j, i, tau, spec);
            tau = spec;
        } else if (route == Route::shifted && i >= 2) {
            const cplx spec = tau_shifted_unitary(st, op, k);
            log_tau(j, i, tau, spec);
            tau = spec;
        }
        update_residual(tr, V.col(i), tau, H.sub(i - 1));
    };

    // brings every track to index N and closes it with a zero residual
    auto close_at_breakdown = [&](int N) {
        for (auto& tr : st.tracks) {
            for (int i = tr.parity + 1; i <= N; ++i) {
                const cplx tau = tau_general(tr.w, st.AV.col(i - 1), V.col(i - 1), tr.delta, i);
                if (i < N)
                    update_residual(tr, V.col(i), tau, H.sub(i - 1));
                else
                    finalize_at_breakdown(tr, tau);
            }
        }
        for (auto& tr : st.monitors)
            finalize_at_breakdown(tr, tau_general(tr.w, st.AV.col(N - 1), V.col(N - 1), tr.delta, N));
        st.base.terminated = true;
        st.base.N = N;
        V.conservativeResize(n, N);
    };

    auto finish_column = [&](int k, CVector& vp, double anorm) -> bool {
        const double hk = vp.norm();
        if (hk <= opts.breakdown_tol * anorm || hk == 0.0) {
            H.at(k, k - 1) = 0.0;
            return false;
        }
        H.at(k, k - 1) = hk;
        V.col(k) = vp / hk;
        st.Ghat.row(k) = V.col(k).adjoint() * op.G;
        return true;
    };

    const int kstart = std::min(m, kmax);
    for (int k = 1; k <= kstart; ++k) {
        const CVector Av = op.apply(V.col(k - 1));
        st.AV.col(k - 1) = Av;
        st.Fhat.row(k - 1) = (op.F.adjoint() * V.col(k - 1)).transpose();
        H.push_column();
        CVector vp = Av;
        if (opts.record_history) {
            st.vprime.push_back(vp);
            st.Mk.emplace_back(n, 0);
        }
        for (int j = 1; j <= k; ++j) {
            const cplx h = V.col(j - 1).dot(vp);
            H.at(j - 1, k - 1) = h;
            vp -= h * V.col(j - 1);
        }
        st.a_coeffs.emplace_back(0);
        if (!finish_column(k, vp, Av.norm())) {
            close_at_breakdown(k);
            return st;
        }
        advance_monitors(k);
    }

    for (int k = m + 1; k <= kmax; ++k) {
        const int far = k - m; // index folded into Gtilde at this step
        st.Gtilde += V.col(far - 1) * st.Ghat.row(far - 1);

        const CVector Av = op.apply(V.col(k - 1));
        st.AV.col(k - 1) = Av;
        st.Fhat.row(k - 1) = (op.F.adjoint() * V.col(k - 1)).transpose();
        CVector vp = Av - st.Gtilde * st.Fhat.row(k - 1).transpose();
        H.push_column();

        CMatrix M(n, m2);
        for (int j = 0; j < m2; ++j)
            M.col(j) = st.tracks[j].w;
        if (opts.record_history) {
            st.vprime.push_back(vp);
            st.Mk.push_back(M);
        }

        CVector a(m2);
        if (opts.reorder && m2 == 1) {
            a(0) = M.col(0).dot(vp);
            vp -= a(0) * M.col(0);
        }
        for (int j = k; j >= k - m + 1; --j) {
            const cplx h = V.col(j - 1).dot(vp);
            H.at(j - 1, k - 1) = h;
            vp -= h * V.col(j - 1);
        }
        if (m2 > 0 && !(opts.reorder && m2 == 1)) {
            int rank = m2;
            a = lsq_solve(M, vp, 1e-12, &rank);
            if (rank < m2)
                ++st.lsq_rank_drops;
            vp -= M * a;
        }
        st.a_coeffs.push_back(a);

        if (!finish_column(k, vp, Av.norm())) {
            close_at_breakdown(k);
            return st;
        }
        for (int j = 0; j < m2; ++j)
            advance_pole(j, k - m, k);
        advance_monitors(k);
    }

    if (opts.flush_tracks) {
        for (auto& tr : st.tracks)
            for (int i = tr.parity + 1; i <= kmax; ++i)
                update_residual(tr, V.col(i),
                                tau_general(tr.w, st.AV.col(i - 1), V.col(i - 1), tr.delta, i),
                                H.sub(i - 1));
    }
    return st;
}

IsometricResult isometric_arnoldi(const MatVec& A, const CVector& b, int kmax, int probes)
{
    if (kmax < 1)
        throw InvalidDimension("isometric_arnoldi: kmax must be >= 1");
    const double beta = b.norm();
    if (beta == 0.0)
        throw ZeroStartVector("isometric_arnoldi: ||b|| = 0");
    const auto n = b.size();

    Rng rng(11);
    for (int p = 0; p < probes; ++p) {
        CVector x = randn_cmatrix(static_cast<int>(n), 1, rng, true).col(0);
        x.normalize();
        if (std::abs(A(x).norm() - 1.0) > 1e-10)
            throw NotUnitary("isometric_arnoldi: operator does not preserve norms");
    }

    IsometricResult out;
    CMatrix& V = out.base.V;
    V.resize(n, kmax + 1);
    out.Vtilde.resize(n, kmax + 1);
    V.col(0) = b / beta;
    CVector vt = V.col(0);
    out.Vtilde.col(0) = vt;

    for (int k = 1; k <= kmax; ++k) {
        const CVector Av = A(V.col(k - 1));
        const cplx g = -vt.dot(Av);
        out.gamma.push_back(g);
        out.base.H.push_column();
        // unitary Hessenberg entries from the Schur parameters
        double prod = 1.0;
        for (int j = k; j >= 1; --j) {
            const cplx gprev = (j == 1) ? cplx(1.0) : out.gamma[j - 2];
            out.base.H.at(j - 1, k - 1) = -g * std::conj(gprev) * prod;
            if (j > 1)
                prod *= out.sigma[j - 2];
        }
        if (std::abs(g) >= 1.0 - 1e-14) {
            out.sigma.push_back(0.0);
            out.base.terminated = true;
            out.base.N = k;
            V.conservativeResize(n, k);
            out.Vtilde.conservativeResize(n, k);
            return out;
        }
        const double s = std::sqrt(1.0 - std::norm(g));
        out.sigma.push_back(s);
        out.base.H.at(k, k - 1) = s;
        V.col(k) = (Av + g * vt) / s;
        vt = s * vt + std::conj(g) * V.col(k);
        out.Vtilde.col(k) = vt;
    }
    return out;
}

} // namespace fastarnoldi
