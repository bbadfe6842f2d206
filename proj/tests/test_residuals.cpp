#include "doctest.h"
#include "support.hpp"

#include "fastarnoldi/residuals.hpp"

using namespace fastarnoldi;
using namespace testsupport;

namespace {

/// Runs a progressive residual track along a precomputed Arnoldi basis.
ResidualTrack run_track(const CMatrix& A, const KrylovState& st, cplx delta, int kmax)
{
    ResidualTrack tr(delta, st.V.col(0));
    for (int k = 1; k <= kmax; ++k) {
        const CVector v = st.V.col(k - 1);
        const cplx tau = tau_general(tr.w, A * v, v, delta, k);
        update_residual(tr, st.V.col(k), tau, st.H.sub(k - 1));
    }
    return tr;
}

} // namespace

TEST_CASE("tau_general for the identity at k = 1")
{
    const CVector v = unit_start(5, 1);
    CHECK(std::abs(tau_general(v, v, v, 0.0, 1) - cplx(1.0)) <= 1e-15);
}

TEST_CASE("tau_general for unitary A equals the cosine of the chain")
{
    Rng rng(5);
    const CMatrix U = random_unitary(30, rng);
    const auto st = arnoldi(dense_action(U), unit_start(30, 2), 15, true);
    ResidualTrack tr(0.0, st.V.col(0));
    for (int k = 1; k <= 15; ++k) {
        const CVector v = st.V.col(k - 1);
        const cplx tau = tau_general(tr.w, U * v, v, 0.0, k);
        const auto q = eval_orthopoly(st.H, k - 1, 0.0);
        const double sgn = (k - 1) % 2 == 0 ? 1.0 : -1.0;
        const cplx expect = sgn * sigma(q) * st.H(0, k - 1);
        CHECK(std::abs(tau - expect) <= 1e-10);
        update_residual(tr, st.V.col(k), tau, st.H.sub(k - 1));
        CHECK(std::abs(tr.chain.c.back() - tau) <= 1e-10);
    }
}

TEST_CASE("tau_general matches the last row of the partial QR factor")
{
    Rng rng(8);
    const CMatrix A = randn_cmatrix(20, 20, rng, true);
    const auto st = arnoldi(dense_action(A), unit_start(20, 3), 12, true);
    const cplx delta(0.4, -0.1);
    const auto tr = run_track(A, st, delta, 12);
    for (int k = 2; k <= 12; ++k) {
        const Hessenberg Hk1(st.H.underline(k - 1));
        const CMatrix Qs = givens_qr(Hk1, delta).Qstar;
        CVector col = st.H.underline().col(k - 1).head(k);
        col(k - 1) -= delta;
        const cplx expect = (Qs.row(k - 1) * col).value();
        CHECK(std::abs(tr.chain.tau[k - 1] - expect) <= 1e-10 * A.norm());
    }
}

TEST_CASE("update_residual with tau = 0 leaves the residual unchanged")
{
    const CVector v1 = unit_start(6, 4);
    const CVector v2 = unit_start(6, 5);
    ResidualTrack tr(0.0, v1);
    update_residual(tr, v2, 0.0, 0.7);
    CHECK((tr.w - v1).norm() <= 1e-15);
    CHECK(tr.relnorm == doctest::Approx(1.0));
    CHECK(tr.parity == 1);
}

TEST_CASE("update_residual first step on the 2 x 2 example")
{
    CMatrix A(2, 2);
    A << 2.0, 1.0, 1.0, 2.0;
    CVector b(2);
    b << 1.0, 0.0;
    const auto st = arnoldi(dense_action(A), b, 1, false);
    ResidualTrack tr(0.0, st.V.col(0));
    const cplx tau = tau_general(tr.w, A * st.V.col(0), st.V.col(0), 0.0, 1);
    update_residual(tr, st.V.col(1), tau, st.H.sub(0));
    const double r5 = std::sqrt(5.0);
    CHECK(std::abs(tau - cplx(2.0)) <= 1e-15);
    CHECK(tr.chain.s[0] == doctest::Approx(1.0 / r5));
    const CVector expect = (1.0 / r5) * st.V.col(0) - (2.0 / r5) * st.V.col(1);
    CHECK((tr.w - expect).norm() <= 1e-15);
    CHECK(tr.relnorm == doctest::Approx(1.0 / r5));
}

TEST_CASE("update_residual clamps an underflowing relnorm")
{
    const CVector v1 = unit_start(4, 1);
    const CVector v2 = unit_start(4, 2);
    ResidualTrack tr(0.0, v1);
    tr.relnorm = 1e-299;
    update_residual(tr, v2, 1e10, 1.0);
    CHECK(tr.relnorm == 0.0);
    CHECK(tr.converged);
}

TEST_CASE("finalize_at_breakdown closes the track with zero residual")
{
    ResidualTrack tr(0.5, unit_start(4, 1));
    finalize_at_breakdown(tr, cplx(0.0, 2.0));
    CHECK(tr.relnorm == 0.0);
    CHECK(tr.converged);
    CHECK(tr.parity == 1);
    CHECK(std::abs(tr.chain.c.back() - cplx(0.0, 1.0)) <= 1e-15);
    CHECK(tr.chain.s.back() == 0.0);
}

TEST_CASE("reference_gmres basic cases")
{
    const auto id = reference_gmres(dense_action(CMatrix::Identity(5, 5)), unit_start(5, 1), 0.0, 3);
    REQUIRE(id.size() == 4);
    CHECK(id[0] == doctest::Approx(1.0));
    CHECK(id[1] <= 1e-14);

    Rng rng(3);
    const CMatrix A = randn_cmatrix(20, 20, rng, true);
    const auto r = reference_gmres(dense_action(A), unit_start(20, 1), cplx(0.5, 0.5), 20);
    CHECK(r[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < r.size(); ++k)
        CHECK(r[k] <= r[k - 1] * (1.0 + 1e-12));
}

TEST_CASE("reference_gmres equals 1 / sigma_k")
{
    Rng rng(13);
    const CMatrix A = randn_cmatrix(40, 40, rng, true) / std::sqrt(40.0);
    const CVector b = unit_start(40, 6);
    const cplx delta(0.2, 0.3);
    const auto st = arnoldi(dense_action(A), b, 30, true);
    const auto r = reference_gmres(dense_action(A), b, delta, 30);
    const auto sg = sigmas(eval_orthopoly(st.H, 30, delta));
    for (int k = 0; k <= 30; ++k)
        CHECK(std::abs(r[k] - 1.0 / sg[k]) <= 1e-10);
}

TEST_CASE("progressive residuals are orthogonal to (A - delta) V_k")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Rng rng(seed);
        const int n = 50;
        const CMatrix A = randn_cmatrix(n, n, rng, true) / std::sqrt(static_cast<double>(n));
        const auto st = arnoldi(dense_action(A), unit_start(n, seed + 10), 30, true);
        const cplx delta(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        ResidualTrack tr(delta, st.V.col(0));
        for (int k = 1; k <= 30; ++k) {
            const CVector v = st.V.col(k - 1);
            update_residual(tr, st.V.col(k), tau_general(tr.w, A * v, v, delta, k), st.H.sub(k - 1));
            const CMatrix AV = A * st.V.leftCols(k) - delta * st.V.leftCols(k);
            CHECK((AV.adjoint() * tr.w).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("progressive residuals match the polynomial expansion and the reference norms")
{
    Rng rng(19);
    const int n = 50;
    const CMatrix A = randn_cmatrix(n, n, rng, true) / std::sqrt(static_cast<double>(n)) +
                      0.5 * CMatrix::Identity(n, n);
    const CVector b = unit_start(n, 2);
    const auto st = arnoldi(dense_action(A), b, 35, true);
    for (cplx delta : {cplx(0.0), cplx(0.3, 0.1), cplx(-1.0, 0.5)}) {
        const auto ref = reference_gmres(dense_action(A), b, delta, 35);
        ResidualTrack tr(delta, st.V.col(0));
        for (int k = 1; k <= 35; ++k) {
            const CVector v = st.V.col(k - 1);
            update_residual(tr, st.V.col(k), tau_general(tr.w, A * v, v, delta, k), st.H.sub(k - 1));
            const CVector w = residual_expansion(st.H.underline(), st.V, delta, k);
            CHECK((tr.w - w).norm() <= 1e-10);
            CHECK(std::abs(tr.relnorm - ref[k]) <= 1e-8 * ref[k]);
        }
        REQUIRE(tr.history.size() == 36);
        CHECK(tr.history.back() == tr.relnorm);
    }
}

TEST_CASE("for unitary A the residual at 0 is the reversed polynomial applied to v_1")
{
    Rng rng(44);
    const int n = 40;
    CVector lambda(n);
    for (int i = 0; i < n; ++i)
        lambda(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    const CMatrix U = lambda.asDiagonal();
    const CVector b = unit_start(n, 8);
    const auto st = arnoldi(dense_action(U), b, 25, true);
    ResidualTrack tr(0.0, st.V.col(0));
    for (int k = 1; k <= 25; ++k) {
        const CVector v = st.V.col(k - 1);
        update_residual(tr, st.V.col(k), tau_general(tr.w, U * v, v, 0.0, k), st.H.sub(k - 1));
        CVector w(n);
        for (int i = 0; i < n; ++i) {
            const cplx qk = eval_orthopoly(st.H, k, 1.0 / std::conj(lambda(i)))[k];
            w(i) = std::pow(lambda(i), k) * std::conj(qk) * b(i);
        }
        CHECK((tr.w - w).norm() <= 1e-10);
    }
}
