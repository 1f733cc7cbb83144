#include <gtest/gtest.h>

#include <qblaschke/qblaschke.hpp>

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

// Nodes with a prescribed structure in each class: kappa conjugate pairs followed by a spherical chain.
struct Structure {
    Quaternion rep;
    std::size_t kappa = 0;
    std::size_t chain = 0;
};

std::vector<Quaternion> class_nodes(Gen& g, const Structure& s) {
    std::vector<Quaternion> out;
    for (std::size_t i = 0; i < s.kappa; ++i) {
        const Quaternion x = g.in_class(s.rep);
        out.insert(out.end(), {x, x.conj()});
    }
    for (std::size_t i = 0; i < s.chain; ++i) {
        Quaternion x = g.in_class(s.rep);
        while (!out.empty() && distance(x, out.back().conj()) < 0.1) x = g.in_class(s.rep);
        out.push_back(x);
    }
    return out;
}

}  // namespace

// ---- blaschke ----

TEST(Blaschke, ConstructorChecks) {
    EXPECT_EQ(code_of([] { BlaschkeProduct({Quaternion(1.0)}); }), ErrorCode::NodeOutsideBall);
    EXPECT_EQ(code_of([] { BlaschkeProduct({qi * 0.5}, Quaternion(2.0)); }), ErrorCode::NotUnimodular);
    EXPECT_EQ(BlaschkeProduct::factor(qj / 2.0).degree(), 1u);
}

TEST(Blaschke, FactorSeriesCoefficients) {
    const Quaternion a(0.1, 0.2, -0.3, 0.1);
    const QSeries b = factor_series(a, 6);
    expect_q_near(b[0], -a, 0.0);
    Quaternion p = 1.0 - a.norm_sq();
    for (std::size_t k = 1; k <= 6; ++k) {
        expect_q_near(b[k], p, 1e-16);
        p = p * a.conj();
    }
    // b_a (1 - z conj a) = z - a
    const QSeries lhs = b * to_series(Polynomial{1.0, -a.conj()}, 6);
    EXPECT_LE(max_coeff_diff(lhs, to_series(rho(a), 6)), 1e-15);
}

TEST(Blaschke, ClosedFormMatchesRawFormulaAndSeries) {
    Gen g(101);
    for (int t = 0; t < 300; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.95), x = g.in_ball(0.0, 0.9);
        const Quaternion l = factor_eval(a, x, Side::left), r = factor_eval(a, x, Side::right);
        expect_q_near(l, qbtest::factor_left_raw(a, x), 1e-10);
        expect_q_near(r, qbtest::factor_right_raw(a, x), 1e-10);
        const QSeries s = factor_series(a, 600);
        expect_q_near(l, eval_left(s, x).value, 1e-9);
        expect_q_near(r, eval_right(s, x).value, 1e-9);
    }
}

TEST(Blaschke, LeftAndRightFactorModuliAgree) {
    Gen g(110);
    for (int t = 0; t < 500; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.95), x = g.in_ball(0.0, 0.999);
        EXPECT_NEAR(factor_eval(a, x, Side::left).norm(), factor_eval(a, x, Side::right).norm(), 1e-11);
    }
}

TEST(Blaschke, RecoverPointFromLeftImage) {
    // x_l = (a + w)(1 + conj(a) w)^{-1}, x = (1 - x_l conj(a))^{-1} x_l (1 - x_l conj(a)) for w = b_a^el(x)
    Gen g(117);
    for (int t = 0; t < 300; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.9), x = g.in_ball(0.0, 0.95);
        const Quaternion w = factor_eval(a, x, Side::left);
        const Quaternion xl = (a + w) * inverse(1.0 + a.conj() * w);
        const Quaternion t1 = 1.0 - xl * a.conj();
        expect_q_near(inverse(t1) * xl * t1, x, 1e-10);
        // composing with b_{-a} returns to x on the centralizer of a
        const Quaternion c = a.w + g.normal() * a.imag();
        const Quaternion xc = c * (0.9 / std::max(0.9, c.norm()));
        expect_q_near(factor_eval(-a, factor_eval(a, xc, Side::left), Side::left), xc, 1e-10);
        expect_q_near(factor_eval(-a, factor_eval(a, xc, Side::right), Side::right), xc, 1e-10);
    }
}

TEST(Blaschke, DefectIdentityBothPairings) {
    // 1 - |b(x)|^2 = (1 - |a|^2)(1 - |x|^2) / |1 - x_l conj(a)|^2, and the same with |1 - conj(a) x_r|
    Gen g(118);
    for (int t = 0; t < 300; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.95), x = g.in_ball(0.0, 0.99);
        const Quaternion tl = 1.0 - x * a, tr = 1.0 - a * x;
        const Quaternion xl = inverse(tl) * x * tl, xr = tr * x * inverse(tr);
        const double num = (1 - a.norm_sq()) * (1 - x.norm_sq());
        const double dl = (1.0 - xl * a.conj()).norm_sq(), dr = (1.0 - a.conj() * xr).norm_sq();
        EXPECT_NEAR(dl, dr, 1e-12 * dl);
        for (Side s : {Side::left, Side::right}) {
            const double lhs = 1 - factor_eval(a, x, s).norm_sq();
            EXPECT_NEAR(lhs, num / dl, 1e-11);
            EXPECT_NEAR(lhs, num / dr, 1e-11);
        }
    }
}

TEST(Blaschke, FactorVanishesAtNodeOnBothSides) {
    Gen g(102);
    for (int t = 0; t < 50; ++t) {
        const Quaternion a = g.in_ball(0.0, 0.99);
        EXPECT_LE(factor_eval(a, a, Side::left).norm(), 1e-15);
        EXPECT_LE(factor_eval(a, a, Side::right).norm(), 1e-15);
        // other points of the class are not zeros
        const Quaternion b = g.in_class(a);
        if (distance(a, b) > 1e-3 && a.im_norm() > 1e-3) {
            EXPECT_GT(factor_eval(a, b, Side::left).norm(), 1e-6);
        }
    }
}

TEST(Blaschke, ModulusOneOnSphereLessThanOneInside) {
    Gen g(103);
    for (int t = 0; t < 100; ++t) {
        const BlaschkeProduct B = g.product(g.index(1, 5));
        const Quaternion u = g.unit(), x = g.in_ball(0.0, 0.95);
        EXPECT_NEAR(product_eval(B, u, Side::left).norm(), 1.0, 1e-11);
        EXPECT_NEAR(product_eval(B, u, Side::right).norm(), 1.0, 1e-11);
        EXPECT_LT(product_eval(B, x, Side::left).norm(), 1.0 + 1e-12);
        EXPECT_LT(product_eval(B, x, Side::right).norm(), 1.0 + 1e-12);
    }
}

TEST(Blaschke, ProductEvalMatchesSeries) {
    Gen g(104);
    for (int t = 0; t < 40; ++t) {
        const BlaschkeProduct B = g.product(g.index(1, 6), 0.7);
        const QSeries s = product_series(B, 200);
        const Quaternion x = g.in_ball(0.0, 0.8);
        expect_q_near(product_eval(B, x, Side::left), eval_left(s, x).value, 1e-10);
        expect_q_near(product_eval(B, x, Side::right), eval_right(s, x).value, 1e-10);
    }
}

TEST(Blaschke, ProductSeriesIsOrderedProduct) {
    Gen g(105);
    for (int t = 0; t < 20; ++t) {
        const BlaschkeProduct B = g.product(4);
        QSeries acc = QSeries::constant(1.0, 30);
        for (const auto& a : B.nodes()) acc = acc * factor_series(a, 30);
        EXPECT_LE(max_coeff_diff(product_series(B, 30), acc * B.phi()), 1e-13);
    }
}

TEST(Blaschke, ProductOfProductsMovesConstantRight) {
    Gen g(106);
    for (int t = 0; t < 20; ++t) {
        const BlaschkeProduct A = g.product(2), B = g.product(3);
        const BlaschkeProduct AB = A * B;
        EXPECT_EQ(AB.degree(), 5u);
        EXPECT_LE(max_coeff_diff(product_series(AB, 30), product_series(A, 30) * product_series(B, 30)), 1e-13);
        const Quaternion u = g.unit();
        EXPECT_LE(max_coeff_diff(product_series(u * B, 30), u * product_series(B, 30)), 1e-13);
    }
}

TEST(Blaschke, InnerNormIsOne) {
    Gen g(107);
    for (int t = 0; t < 20; ++t) EXPECT_NEAR(h2_norm_sq(product_series(g.product(4, 0.7), 400)), 1.0, 1e-12);
}

TEST(Blaschke, SphericalFactorIsRealAndVanishesOnClass) {
    Gen g(108);
    for (int t = 0; t < 20; ++t) {
        const Quaternion a = g.in_ball(0.1, 0.9);
        const ConjugacyClass c = ConjugacyClass::of(a);
        const QSeries s = spherical_factor(c, 200);
        EXPECT_LE(max_coeff_diff(s, product_series(BlaschkeProduct::sphere(c), 200)), 1e-13);
        EXPECT_LE(max_coeff_diff(s, product_series(BlaschkeProduct({a, a.conj()}), 200)), 1e-13);
        for (const auto& q : s.coeffs()) EXPECT_LE(q.im_norm(), 1e-15);
        const Quaternion b = g.in_class(a);
        EXPECT_LE(eval_left(s, b).value.norm(), 1e-9);
        EXPECT_LE(product_eval(BlaschkeProduct::sphere(c), b, Side::right).norm(), 1e-12);
    }
}

TEST(Blaschke, BoundaryNodeEvaluation) {
    // b_i b_j: right value at j is 0, left value at j is k/2.
    const Quaternion nodes[] = {qi, qj};
    EXPECT_LE(product_eval(nodes, 1.0, qj, Side::right).norm(), 1e-15);
    expect_q_near(product_eval(nodes, 1.0, qj, Side::left), qk / 2.0, 1e-15);
    EXPECT_EQ(code_of([] { (void)factor_eval(Quaternion(1.0), Quaternion(1.0), Side::left); }), ErrorCode::PoleHit);
    EXPECT_EQ(code_of([] { (void)factor_eval(Quaternion(1.5), 0.0, Side::left); }), ErrorCode::NodeOutsideBall);
}

TEST(Blaschke, LeftZerosAtFirstNode) {
    Gen g(109);
    for (int t = 0; t < 50; ++t) {
        const BlaschkeProduct B = g.product(g.index(1, 5));
        EXPECT_LE(product_eval(B, B.nodes().front(), Side::left).norm(), 1e-14);
        // the right zero attached to the last factor is phi^{-1} a_n phi
        const Quaternion r = conjugate_by(B.nodes().back(), B.phi());
        EXPECT_LE(product_eval(B, r, Side::right).norm(), 1e-14);
    }
}

// ---- zeros ----

TEST(Zeros, TwoLinearFactors) {
    const Polynomial p = rho(qi) * rho(qj);
    const auto z = locate_in_class(p, ConjugacyClass{0.0, 1.0});
    ASSERT_TRUE(z.left_zero && z.right_zero);
    expect_q_near(*z.left_zero, qi, 1e-12);
    expect_q_near(*z.right_zero, qj, 1e-12);
    EXPECT_LE(p.eval_left(*z.left_zero).norm(), 1e-12);
    EXPECT_LE(p.eval_right(*z.right_zero).norm(), 1e-12);
}

TEST(Zeros, LinearFactorFromAnyRepresentative) {
    const Polynomial f{-qj, 1.0};
    for (const Quaternion& rep : {qi, qk, Quaternion(0.0, 0.6, 0.0, 0.8)}) {
        const auto z = locate_in_class(f, ConjugacyClass{0.0, 1.0}, kDefaultTol, rep);
        expect_q_near(*z.left_zero, qj, 1e-12);
        expect_q_near(*z.right_zero, qj, 1e-12);
    }
}

TEST(Zeros, SphericalAndEmptyClasses) {
    const ConjugacyClass c{0.1, 0.5};
    EXPECT_EQ(locate_in_class(class_quadratic(c), c).kind, ZeroKind::spherical);
    EXPECT_EQ(code_of([] { (void)locate_in_class(rho(qi), ConjugacyClass{0.2, 0.3}); }), ErrorCode::NoZeroInClass);
    EXPECT_EQ(code_of([] { (void)locate_in_class(rho(Quaternion(0.5)), ConjugacyClass{0.3, 0.0}); }),
              ErrorCode::NoZeroInClass);
    EXPECT_EQ(code_of([&] { (void)locate_in_class(rho(qi), c, kDefaultTol, qj); }), ErrorCode::InvalidArgument);
}

TEST(Zeros, RandomProductLocation) {
    Gen g(111);
    for (int t = 0; t < 40; ++t) {
        const BlaschkeProduct B = g.product(g.index(1, 4), 0.8);
        const QSeries f = product_series(B, 128);
        for (const auto& c : node_classes(B.nodes())) {
            const auto z = locate_in_class(f, c, kDefaultTol, g.in_class(c.representative()));
            if (z.kind == ZeroKind::spherical) continue;
            EXPECT_LE(product_eval(B, *z.left_zero, Side::left).norm(), 1e-9);
            EXPECT_LE(product_eval(B, *z.right_zero, Side::right).norm(), 1e-9);
            EXPECT_TRUE(c.contains(*z.left_zero, 1e-8));
        }
    }
}

TEST(Zeros, ChainProductZerosAreEndNodes) {
    Gen g(119);
    for (int t = 0; t < 20; ++t) {
        const Quaternion rep = g.in_ball(0.2, 0.8);
        std::vector<Quaternion> chain;
        while (chain.size() < 3) {
            const Quaternion q = g.in_class(rep);
            if (chain.empty() || distance(q, chain.back().conj()) > 0.2) chain.push_back(q);
        }
        const BlaschkeProduct B(chain);
        const auto z = locate_in_class(product_series(B, 400), ConjugacyClass::of(rep), kDefaultTol, g.in_class(rep));
        ASSERT_EQ(z.kind, ZeroKind::point);
        expect_q_near(*z.left_zero, chain.front(), 1e-8);
        expect_q_near(*z.right_zero, chain.back(), 1e-8);
    }
}

TEST(Zeros, SphericalChainPredicate) {
    const std::vector<Quaternion> ok = {qi, qj, qk}, bad = {qi, -qi}, mixed = {qi, Quaternion(0.5)};
    EXPECT_TRUE(is_spherical_chain(ok));
    EXPECT_FALSE(is_spherical_chain(bad));
    EXPECT_FALSE(is_spherical_chain(mixed));
}

TEST(Zeros, DivisorsOfConstructedStructures) {
    Gen g(112);
    for (int t = 0; t < 20; ++t) {
        const Quaternion rep = g.in_ball(0.2, 0.7);
        Structure s{rep, g.index(0, 1), g.index(0, 2)};
        if (s.kappa + s.chain == 0) s.chain = 1;
        auto nodes = class_nodes(g, s);
        // unrelated factors on either side
        const Quaternion before = g.in_ball(0.1, 0.6) * Quaternion(0.0, 1.0, 0.0, 0.0) + 0.1;
        nodes.insert(nodes.begin(), before);
        nodes.push_back(Quaternion(-0.35));
        const BlaschkeProduct B(nodes, g.unit());
        const ConjugacyClass cls = ConjugacyClass::of(rep);
        const auto d = spherical_divisors(B, cls, 64, kDefaultTol, g.in_class(rep));
        EXPECT_EQ(d.report.kappa, s.kappa);
        EXPECT_EQ(d.report.left_chain.size(), s.chain);
        EXPECT_EQ(d.report.right_chain.size(), s.chain);
        EXPECT_TRUE(is_spherical_chain(d.report.left_chain, 1e-6));
        EXPECT_TRUE(is_spherical_chain(d.report.right_chain, 1e-6));
        EXPECT_LE(d.residual, 1e-9);
        EXPECT_EQ(d.left.degree(), 2 * s.kappa + s.chain);
    }
}

TEST(Zeros, RealClassMultiplicity) {
    const BlaschkeProduct B({Quaternion(0.3), qi * 0.5, Quaternion(0.3)});
    const auto d = spherical_divisors(B, ConjugacyClass{0.3, 0.0}, 64);
    EXPECT_EQ(d.report.left_chain.size(), 2u);
    EXPECT_EQ(d.report.kind, ZeroKind::point);
    EXPECT_LE(d.residual, 1e-10);
}

TEST(Zeros, PolynomialDivisors) {
    Gen g(113);
    const Quaternion a = g.in_ball(0.3, 1.5);
    const Quaternion x = g.in_class(a);
    const Polynomial p = class_quadratic(ConjugacyClass::of(a)) * rho(x) * rho(Quaternion(2.0, 1.0, 0, 0));
    const auto d = spherical_divisors(p, ConjugacyClass::of(a));
    EXPECT_EQ(d.report.kappa, 1u);
    EXPECT_EQ(d.report.left_chain.size(), 1u);
    EXPECT_LE(d.residual, 1e-10);
    expect_q_near(d.report.left_chain[0], x, 1e-8);
}

TEST(Zeros, ZeroStructureCoversAllClasses) {
    Gen g(114);
    const BlaschkeProduct B({qi / 2.0, Quaternion(0.1, 0.3, 0.0, 0.0), Quaternion(-0.2)}, g.unit());
    const auto zs = zero_structure(B, 64);
    ASSERT_EQ(zs.size(), 3u);
    std::size_t total = 0;
    for (const auto& r : zs) total += 2 * r.kappa + r.left_chain.size();
    EXPECT_EQ(total, B.degree());
}

TEST(Zeros, LrcmDoubleIsLeftMultiple) {
    Gen g(115);
    for (int t = 0; t < 10; ++t) {
        const Quaternion a = g.gaussian(), b = g.gaussian();
        const auto r = lrcm_double(a, b);
        EXPECT_EQ(r.poly.degree(), 4);
        EXPECT_LE(divide_left(r.poly, rho(a) * rho(a)).remainder.max_abs(), 1e-10 * r.poly.max_abs());
        EXPECT_LE(divide_left(r.poly, rho(b) * rho(b)).remainder.max_abs(), 1e-10 * r.poly.max_abs());
        EXPECT_TRUE(same_class(r.beta1, b, 1e-10));
        EXPECT_TRUE(same_class(r.beta2, b, 1e-10));
    }
    EXPECT_EQ(code_of([] { (void)lrcm_double(Quaternion(0.5), qi); }), ErrorCode::RealInput);
    EXPECT_EQ(code_of([] { (void)lrcm_double(qi, qj); }), ErrorCode::SimilarInputs);
}

TEST(Zeros, PrescribedLeftZeros) {
    Gen g(116);
    for (int t = 0; t < 20; ++t) {
        std::vector<Quaternion> pts;
        for (std::size_t k = 0; k < 4; ++k) pts.push_back(Quaternion(0.2 * k - 0.3) + g.unit_imaginary() * (0.1 + 0.15 * k));
        const BlaschkeProduct B = prescribed_left_zeros(pts);
        ASSERT_EQ(B.degree(), 4u);
        for (const auto& p : pts) EXPECT_LE(product_eval(B, p, Side::left).norm(), 1e-12);
    }
    EXPECT_EQ(code_of([] {
                  const Quaternion p[] = {qi * 0.5, qj * 0.5};
                  (void)prescribed_left_zeros(p);
              }),
              ErrorCode::SimilarPointsUnsupported);
    EXPECT_EQ(code_of([] {
                  const Quaternion p[] = {qi};
                  (void)prescribed_left_zeros(p);
              }),
              ErrorCode::NodeOutsideBall);
}
