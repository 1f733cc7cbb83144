#include <gtest/gtest.h>

#include <qblaschke/qblaschke.hpp>

#include "support/instances.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace qblaschke;
using qbtest::Gen;

namespace {

void expect_q_near(const Quaternion& a, const Quaternion& b, double tol) {
    EXPECT_LE(distance(a, b), tol) << a << " vs " << b;
}

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

std::vector<Quaternion> prefix_of(const QSeries& f, std::size_t len) {
    return {f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(len)};
}

}  // namespace

// ---- realization ----

TEST(Realization, MatchesProductSeries) {
    Gen g(201);
    for (std::size_t n = 1; n <= 8; ++n) {
        const BlaschkeProduct B = g.product(n);
        const Realization R = build_realization(B);
        EXPECT_EQ(R.state_dim(), n);
        EXPECT_LE(max_coeff_diff(realization_to_series(R, 64), product_series(B, 64)), 1e-12);
        EXPECT_LE(unitarity_defect(R), 1e-13);
        EXPECT_TRUE(is_unitary_realization(R));
        for (std::size_t k = 0; k < n; ++k) {
            expect_q_near(R.A(k, k), B.nodes()[k].conj(), 1e-15);
            for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(R.A(k, j), Quaternion{});
        }
    }
}

TEST(Realization, ConstantProduct) {
    const Realization R = build_realization(BlaschkeProduct({}, qj));
    EXPECT_EQ(R.state_dim(), 0u);
    EXPECT_LE(max_coeff_diff(realization_to_series(R, 5), QSeries::constant(qj, 5)), 0.0);
}

TEST(Realization, LeftValueThroughUpsilon) {
    Gen g(202);
    const BlaschkeProduct B = g.product(4, 0.7);
    const Realization R = build_realization(B);
    for (int t = 0; t < 20; ++t) {
        const Quaternion x = g.in_ball(0.0, 0.6);
        const Quaternion v = R.D + x * (upsilon(R, x, 200) * R.B)(0, 0);
        expect_q_near(v, product_eval(B, x, Side::left), 1e-12);
    }
}

TEST(Realization, DefectThroughUpsilon) {
    // 1 - |f(a)|^2 = (1 - |a|^2) Y(a) Y(a)^*
    Gen g(207);
    const BlaschkeProduct B = g.product(4, 0.7);
    const Realization R = build_realization(B);
    for (int t = 0; t < 20; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.6);
        const QMatrix Y = upsilon(R, a, 300);
        EXPECT_NEAR(1 - product_eval(B, a, Side::left).norm_sq(), (1 - a.norm_sq()) * (Y * Y.adjoint())(0, 0).w, 1e-12);
    }
}

TEST(Realization, DegreeOfRealizedSeriesIsStateDimension) {
    Gen g(208);
    for (int t = 0; t < 50; ++t) {
        const Realization R = build_realization(g.product(g.index(0, 6), 0.9));
        EXPECT_EQ(degree_of(realization_to_series(R, 32)), R.state_dim());
    }
}

TEST(Realization, ObservabilityGramIsIdentity) {
    Gen g(203);
    const Realization R = build_realization(g.product(3, 0.6));
    const QMatrix Gm = qbtest::stein_partial_sum(R.A.adjoint(), R.C.adjoint(), 400);
    EXPECT_LE(max_abs_diff(Gm, QMatrix::identity(3)), 1e-12);
    EXPECT_EQ(rank(observability_matrix(R, 3)), 3u);
    EXPECT_TRUE(is_controllable(R.A.adjoint(), R.C.adjoint()));
}

TEST(Realization, UnitarySimilarityIsEquivalent) {
    Gen g(204);
    const Realization R = build_realization(g.product(4));
    const Realization S = similar_realization(R, g.unitary(4));
    EXPECT_TRUE(equivalent(R, S));
    EXPECT_LE(unitarity_defect(S), 1e-12);
    Realization T = S;
    T.D = T.D * Quaternion(-1.0);
    EXPECT_FALSE(equivalent(R, T));
}

TEST(Realization, DegreeAndRankProfile) {
    Gen g(205);
    for (std::size_t n = 0; n <= 6; ++n) {
        const QSeries f = product_series(g.product(n), 32);
        EXPECT_EQ(degree_of(f), n);
        const auto prof = rank_profile(prefix_of(f, 12));
        for (std::size_t k = 1; k <= 12; ++k) EXPECT_EQ(prof[k - 1], std::min(k, n));
    }
}

TEST(Realization, DegreeErrors) {
    EXPECT_EQ(code_of([] { (void)degree_of(QSeries::constant(2.0, 10)); }), ErrorCode::NotSchur);
    EXPECT_EQ(code_of([] { (void)degree_of(QSeries::constant(0.5, 10)); }), ErrorCode::NotSaturated);
}

TEST(Realization, TakenakaBasisIsOrthonormal) {
    Gen g(206);
    const BlaschkeProduct B = g.product(4, 0.6);
    const std::size_t N = 300;
    const auto basis = takenaka_basis(B, N);
    ASSERT_EQ(basis.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            expect_q_near(inner_product(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-12);
    // orthogonal to B z^m
    const QSeries f = product_series(B, N);
    for (std::size_t m = 0; m < 5; ++m) {
        std::vector<Quaternion> c(N + 1);
        for (std::size_t k = m; k <= N; ++k) c[k] = f[k - m];
        const QSeries shifted(c, TailBound{});
        for (const auto& e : basis) EXPECT_LE(inner_product(e, shifted).norm(), 1e-12);
    }
}

// ---- toeplitz and recovery ----

TEST(Toeplitz, SchurPrefixTest) {
    EXPECT_TRUE(is_schur_prefix(std::vector<Quaternion>{0.5, 0.5}));
    EXPECT_FALSE(is_schur_prefix(std::vector<Quaternion>{2.0, 0.0}));
    EXPECT_FALSE(is_schur_prefix(std::vector<Quaternion>{0.0, 0.8, 0.8}));
    Gen g(211);
    for (int t = 0; t < 10; ++t) EXPECT_TRUE(is_schur_prefix(prefix_of(product_series(g.product(3), 10), 10)));
}

TEST(Toeplitz, DefectFactorsThroughObservability) {
    // I - T_k T_k^* = O_k O_k^* for a unitary realization
    Gen g(213);
    for (int t = 0; t < 10; ++t) {
        const BlaschkeProduct B = g.product(g.index(1, 5));
        const Realization R = build_realization(B);
        const std::size_t k = 8;
        const QMatrix O = observability_matrix(R, k);
        const QMatrix P = toeplitz_data(prefix_of(product_series(B, k), k)).P;
        EXPECT_LE(max_abs_diff(P, O * O.adjoint()), 1e-10);
        for (std::size_t j = 1; j <= k; ++j) EXPECT_GE(min_hermitian_eigenvalue(P.block(0, 0, j, j)), -1e-12);
    }
}

TEST(Recovery, HandFixtures) {
    const Recovery z = recover(std::vector<Quaternion>{0.0, 1.0});
    EXPECT_LE(max_coeff_diff(z.series(10), to_series(Polynomial{0.0, 1.0}, 10)), 1e-12);
    const Recovery b = recover(std::vector<Quaternion>{-0.5, 0.75});
    EXPECT_LE(max_coeff_diff(b.series(30), factor_series(0.5, 30)), 1e-12);
    const Recovery c = recover(std::vector<Quaternion>{qk});
    EXPECT_LE(max_coeff_diff(c.series(4), QSeries::constant(qk, 4)), 0.0);
}

TEST(Recovery, RandomProducts) {
    Gen g(212);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(1, 5);
        const QSeries f = product_series(g.product(n), 64);
        const Recovery r = recover(prefix_of(f, n + 1));
        EXPECT_LE(max_coeff_diff(r.series(64), f), 1e-9);
        for (double res : r.identity_residuals()) EXPECT_LE(res, 1e-10);
        EXPECT_LE(unitarity_defect(r.realization), 1e-9);
        EXPECT_EQ(degree_of(r.series(64)), n);
    }
}

TEST(Recovery, Errors) {
    EXPECT_EQ(code_of([] { (void)recover(std::vector<Quaternion>{2.0, 0.0}); }), ErrorCode::NotPSD);
    EXPECT_EQ(code_of([] { (void)recover(std::vector<Quaternion>{0.5, 0.0}); }), ErrorCode::RankConditionFailed);
    EXPECT_EQ(code_of([] { (void)recover(std::vector<Quaternion>{0.5}); }), ErrorCode::RankConditionFailed);
    EXPECT_EQ(code_of([] { (void)recover(std::vector<Quaternion>{}); }), ErrorCode::InvalidArgument);
}

// ---- synthesis ----

TEST(Synthesis, ScalarGoldenCase) {
    const SynthResult s = synthesize(qblaschke::pair_from_polynomial(Polynomial{-0.5, 1.0}), 64);
    expect_q_near(s.P(0, 0), 4.0 / 3.0, 1e-12);
    expect_q_near(s.g(0, 0), 0.75, 1e-12);
    EXPECT_LE(max_coeff_diff(s.R, kappa_series(0.5, 64)), 1e-12);
    EXPECT_LE(max_coeff_diff(s.theta, factor_series(0.5, 64)), 1e-12);
    EXPECT_NEAR(s.r_norm_sq, 4.0 / 3.0, 1e-12);
    EXPECT_LE((s.ginv - Polynomial{1.0, -0.5}).max_abs(), 1e-12);
}

TEST(Synthesis, RandomPolynomials) {
    Gen g(221);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = g.index(1, 6);
        const auto nodes = g.nodes(n, 0.0, 0.8);
        const Polynomial p = poly_from_factors(nodes);
        const auto pr = pair_from_polynomial(p);
        const SynthResult s = synthesize(pr, 64);
        EXPECT_LE((s.p - p).max_abs(), 1e-9);
        EXPECT_LE(stein_residual(pr.A, pr.v, s.P).max_abs(), 1e-11 * std::max(1.0, s.P.max_abs()));
        EXPECT_LE(unitarity_defect(s.theta_realization), 1e-10);
        EXPECT_LE(max_coeff_diff(to_series(p, 64) * s.R, s.theta), 1e-9);
        EXPECT_LE(max_coeff_diff(to_series(s.ginv, 64) * s.R, QSeries::constant(1.0, 64)), 1e-9);
        EXPECT_EQ(degree_of(s.theta), n);
        const QMatrix Pi = inverse(s.P), I = QMatrix::identity(n);
        EXPECT_LE(max_abs_diff(Pi - pr.A.adjoint() * Pi * pr.A, s.g * s.g.adjoint()), 1e-10 * std::max(1.0, Pi.max_abs()));
        EXPECT_LE(max_abs_diff(pr.A * s.P * s.g, pr.v * Quaternion(-1.0) + pr.v * pr.v.adjoint() * Pi * inverse(I - pr.A) * pr.v),
                  1e-11 * std::max(1.0, s.P.max_abs()));
        EXPECT_LE(max_coeff_diff(realization_to_series(s.theta_realization, 64), s.theta), 1e-10);
        const SynthResult deep = synthesize(pr, 2000);
        EXPECT_NEAR(h2_norm_sq(deep.R), s.r_norm_sq, 1e-8 * s.r_norm_sq);
        // Theta = p R has the left zeros of p
        EXPECT_LE(eval_left(deep.theta, nodes.front()).value.norm(), 1e-9);
        for (const auto& c : node_classes(nodes)) {
            const auto zp = locate_in_class(p, c);
            if (zp.kind == ZeroKind::spherical) continue;
            const auto zt = locate_in_class(deep.theta, c);
            ASSERT_TRUE(zt.left_zero);
            expect_q_near(*zt.left_zero, *zp.left_zero, 1e-8);
        }
        for (int u = 0; u < 5; ++u) EXPECT_NEAR(eval_left(deep.theta, g.unit()).value.norm(), 1.0, 1e-9);
    }
}

TEST(Synthesis, ChainAndDirectSumPairs) {
    Gen g(222);
    const Quaternion chain[] = {Quaternion(0.1, 0.4, 0, 0), Quaternion(0.1, 0, 0.4, 0), Quaternion(-0.3)};
    const auto pr = pair_from_chain(chain);
    EXPECT_TRUE(is_controllable(pr.A, pr.v));
    const SynthResult s = synthesize(pr, 64);
    EXPECT_EQ(degree_of(s.theta), 3u);
    EXPECT_LE(max_coeff_diff(to_series(s.p, 64) * s.R, s.theta), 1e-9);

    const auto p1 = pair_from_polynomial(Polynomial{-0.5, 1.0});
    const auto p2 = pair_from_polynomial(rho(qj / 3.0));
    const qblaschke::ControllablePair both[] = {p1, p2};
    const auto sum = pair_direct_sum(both);
    EXPECT_EQ(sum.A.rows(), 2u);
    EXPECT_EQ(degree_of(synthesize(sum, 64).theta), 2u);
    const qblaschke::ControllablePair same[] = {p1, p1};
    EXPECT_EQ(code_of([&] { (void)pair_direct_sum(same); }), ErrorCode::NotControllable);
}

TEST(Synthesis, Errors) {
    EXPECT_EQ(code_of([] { (void)pair_from_polynomial(Polynomial{-2.0, 1.0}); }), ErrorCode::NotStable);
    EXPECT_EQ(code_of([] { (void)synthesize(QMatrix::identity(2) * Quaternion(0.5), QMatrix::unit_vector(2, 0)); }),
              ErrorCode::NotControllable);
    EXPECT_EQ(code_of([] { (void)synthesize(QMatrix::scalar(1.0), QMatrix::scalar(1.0)); }), ErrorCode::NotStable);
    EXPECT_EQ(code_of([] { (void)synthesize(QMatrix(2, 2), QMatrix(3, 1)); }), ErrorCode::DimensionMismatch);
}

TEST(Synthesis, ConjugateSide) {
    Gen g(223);
    for (int t = 0; t < 5; ++t) {
        const std::size_t n = g.index(1, 4);
        const Polynomial p = qbtest::stable_poly(g, n);
        const ConjugateSide c = conjugate_side(p, 64);
        EXPECT_EQ(degree_of(c.theta), n);
        EXPECT_LE(max_coeff_diff(c.Rtilde * to_series(p, 64), c.theta), 1e-12);
    }
}

TEST(Synthesis, UnitaryRowPairs) {
    Gen g(224);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(2, 5);
        const auto pos = qbtest::unitary_row(g, n);
        EXPECT_LE(max_abs_diff(pos.A * pos.A.adjoint() + pos.v * pos.v.adjoint(), QMatrix::identity(n)), 1e-12);
        EXPECT_TRUE(is_controllable(pos.A, pos.v));
        EXPECT_TRUE(is_stable(pos.A));
        const auto neg = qbtest::uncontrollable_unitary_row(g, n);
        EXPECT_LE(max_abs_diff(neg.A * neg.A.adjoint() + neg.v * neg.v.adjoint(), QMatrix::identity(n)), 1e-12);
        EXPECT_FALSE(is_controllable(neg.A, neg.v));
        EXPECT_FALSE(is_stable(neg.A));
    }
}
