#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "blaschke.hpp"

namespace qblaschke {

inline constexpr double kSphericalTol = 1e-8;

inline bool is_spherical_chain(std::span<const Quaternion> seq, double tol = kDefaultTol) {
    for (std::size_t k = 1; k < seq.size(); ++k) {
        if (!same_class(seq[0], seq[k], tol)) return false;
        if (distance(seq[k], seq[k - 1].conj()) <= tol) return false;
    }
    return true;
}

enum class ZeroKind { spherical, point };

struct LocatedZeros {
    ZeroKind kind = ZeroKind::point;
    std::optional<Quaternion> left_zero, right_zero;
};

struct ZeroReport {
    ConjugacyClass cls;
    ZeroKind kind = ZeroKind::point;
    std::size_t kappa = 0;
    std::vector<Quaternion> left_chain, right_chain;
    std::optional<Quaternion> left_zero, right_zero;
};

namespace detail {

inline Quaternion class_point(const ConjugacyClass& c, const std::optional<Quaternion>& rep) {
    if (!rep) return c.representative();
    if (!c.contains(*rep, 1e-9)) throw Error(ErrorCode::InvalidArgument, "representative is not in the class");
    return *rep;
}

// Stripping operations shared by series and polynomial extraction.
struct SeriesOps {
    using T = QSeries;

    static double threshold(const Evaluation& e, double tol) { return std::max(tol, 10.0 * e.err_bound.value_or(0.0)); }
    static bool vanishes_left(const T& f, const Quaternion& g, double tol) {
        const auto e = eval_left(f, g);
        return e.value.norm() <= threshold(e, tol);
    }
    static bool vanishes_right(const T& f, const Quaternion& g, double tol) {
        const auto e = eval_right(f, g);
        return e.value.norm() <= threshold(e, tol);
    }
    static Quaternion el(const T& f, const Quaternion& g) { return eval_left(f, g).value; }
    static Quaternion br(const T& f, const Quaternion& g) { return eval_right(f, g).value; }

    static T retail(const T& src, std::vector<Quaternion> c) {
        if (src.tail() && src.tail()->exact()) return QSeries(std::move(c), TailBound{});
        if (src.tail() && src.tail()->ratio > 0.0) return QSeries::with_ratio(std::move(c), src.tail()->ratio);
        return QSeries(std::move(c));
    }

    // f = rho_g q + f^el(g), then b_g^{-1} rho_g = 1 - z conj(g).
    static T strip_left(const T& f, const Quaternion& g) {
        const std::size_t n = f.order();
        if (n == 0) return f;
        std::vector<Quaternion> q(n);
        Quaternion acc;
        for (std::size_t k = n; k >= 1; --k) {
            acc = f[k] + g * acc;
            q[k - 1] = acc;
        }
        std::vector<Quaternion> h(n);
        for (std::size_t k = 0; k < n; ++k) h[k] = q[k] - (k ? g.conj() * q[k - 1] : Quaternion{});
        return retail(f, std::move(h));
    }
    // f = q rho_g + f^br(g), then rho_g b_g^{-1} = 1 - z conj(g).
    static T strip_right(const T& f, const Quaternion& g) {
        const std::size_t n = f.order();
        if (n == 0) return f;
        std::vector<Quaternion> q(n);
        Quaternion acc;
        for (std::size_t k = n; k >= 1; --k) {
            acc = f[k] + acc * g;
            q[k - 1] = acc;
        }
        std::vector<Quaternion> h(n);
        for (std::size_t k = 0; k < n; ++k) h[k] = q[k] - (k ? q[k - 1] * g.conj() : Quaternion{});
        return retail(f, std::move(h));
    }
    // Quotient by the spherical factor of the class of a (real coefficients, so central).
    static T strip_sphere(const T& f, const Quaternion& a) {
        const T g = strip_rho_left(strip_rho_left(f, a), a.conj());
        const double re = a.w, m2 = a.norm_sq();
        std::vector<Quaternion> h(g.order() + 1);
        for (std::size_t k = 0; k <= g.order(); ++k) {
            Quaternion v = g[k];
            if (k >= 1) v -= 2.0 * re * g[k - 1];
            if (k >= 2) v += m2 * g[k - 2];
            h[k] = v;
        }
        return retail(f, std::move(h));
    }
    static T strip_rho_left(const T& f, const Quaternion& g) {
        const std::size_t n = f.order();
        if (n == 0) return f;
        std::vector<Quaternion> q(n);
        Quaternion acc;
        for (std::size_t k = n; k >= 1; --k) {
            acc = f[k] + g * acc;
            q[k - 1] = acc;
        }
        return retail(f, std::move(q));
    }
    static T norm_form(const T& f) { return series_mul(f, sharp(f)); }
    static std::size_t capacity(const T& f) { return f.order(); }
};

struct PolynomialOps {
    using T = Polynomial;

    static bool vanishes_left(const T& f, const Quaternion& g, double tol) {
        return f.eval_left(g).norm() <= tol * std::max(1.0, f.max_abs());
    }
    static bool vanishes_right(const T& f, const Quaternion& g, double tol) {
        return f.eval_right(g).norm() <= tol * std::max(1.0, f.max_abs());
    }
    static Quaternion el(const T& f, const Quaternion& g) { return f.eval_left(g); }
    static Quaternion br(const T& f, const Quaternion& g) { return f.eval_right(g); }
    static T strip_left(const T& f, const Quaternion& g) { return divide_left(f, rho(g)).quotient; }
    static T strip_right(const T& f, const Quaternion& g) { return divide_right(f, rho(g)).quotient; }
    static T strip_sphere(const T& f, const Quaternion& a) {
        return divide_left(f, class_quadratic(ConjugacyClass::of(a))).quotient;
    }
    static T norm_form(const T& f) { return f * f.sharp(); }
    static std::size_t capacity(const T& f) { return f.is_zero() ? 0 : static_cast<std::size_t>(f.degree()); }
};

template <typename Ops>
LocatedZeros locate(const typename Ops::T& f, const ConjugacyClass& cls, const Quaternion& a, double tol) {
    LocatedZeros out;
    if (cls.is_real(0.0) || a.im_norm() == 0.0) {
        const Quaternion x = a.w;
        if (!Ops::vanishes_left(f, x, tol)) throw Error(ErrorCode::NoZeroInClass, "no zero at the real point");
        out.left_zero = out.right_zero = x;
        return out;
    }
    const Quaternion ac = a.conj();
    const bool za = Ops::vanishes_left(f, a, tol), zac = Ops::vanishes_left(f, ac, tol);
    if (za && zac) {
        out.kind = ZeroKind::spherical;
        return out;
    }
    const Quaternion fa = Ops::el(f, a), fb = Ops::el(f, ac);
    const Quaternion s = fa + fb, d = fa - fb;
    if (s.norm() <= 1e-300 || d.norm() <= 1e-300) throw Error(ErrorCode::NoZeroInClass, "class holds no isolated zero");
    const Quaternion gl = (ac * fa + a * fb) * inverse(s);
    const Quaternion gr = inverse(d) * (ac * fa - a * fb);
    if (!cls.contains(gl, 1e-6) || !cls.contains(gr, 1e-6) || !Ops::vanishes_left(f, gl, tol) ||
        !Ops::vanishes_right(f, gr, tol))
        throw Error(ErrorCode::NoZeroInClass, "candidate zeros do not annihilate f");
    out.left_zero = gl;
    out.right_zero = gr;
    return out;
}

template <typename Ops>
struct Extraction {
    ZeroReport report;
    typename Ops::T left_cofactor, right_cofactor;
    Quaternion rep;
};

template <typename Ops>
Extraction<Ops> extract(const typename Ops::T& f, const ConjugacyClass& cls, const Quaternion& a, double tol) {
    Extraction<Ops> ex;
    ex.rep = a;
    ex.report.cls = cls;
    const std::size_t cap = Ops::capacity(f);
    if (a.im_norm() == 0.0) {
        const Quaternion x = a.w;
        auto H = f, G = f;
        while (ex.report.left_chain.size() < cap && Ops::vanishes_left(H, x, tol)) {
            ex.report.left_chain.push_back(x);
            H = Ops::strip_left(H, x);
        }
        while (ex.report.right_chain.size() < cap && Ops::vanishes_right(G, x, tol)) {
            ex.report.right_chain.push_back(x);
            G = Ops::strip_right(G, x);
        }
        if (ex.report.left_chain.empty()) throw Error(ErrorCode::NoZeroInClass, "no zero at the real point");
        if (ex.report.left_chain.size() != ex.report.right_chain.size())
            throw Error(ErrorCode::ChainExtractionFailed, "left and right real multiplicities differ");
        ex.report.left_zero = ex.report.right_zero = x;
        ex.left_cofactor = std::move(H);
        ex.right_cofactor = std::move(G);
        return ex;
    }
    const Quaternion ac = a.conj();
    auto F = f;
    while (2 * ex.report.kappa < cap && Ops::vanishes_left(F, a, kSphericalTol) &&
           Ops::vanishes_left(F, ac, kSphericalTol)) {
        F = Ops::strip_sphere(F, a);
        ++ex.report.kappa;
    }
    auto N = Ops::norm_form(f);
    const std::size_t ncap = Ops::capacity(N);
    std::size_t m = 0;
    while (2 * m < ncap && Ops::vanishes_left(N, a, kSphericalTol)) {
        N = Ops::strip_sphere(N, a);
        ++m;
    }
    if (m < 2 * ex.report.kappa) throw Error(ErrorCode::ChainExtractionFailed, "inconsistent spherical multiplicity");
    const std::size_t k = m - 2 * ex.report.kappa;
    if (m == 0) throw Error(ErrorCode::NoZeroInClass, "f has no zero in the class");
    auto H = F, G = F;
    for (std::size_t i = 0; i < k; ++i) {
        LocatedZeros lz, rz;
        try {
            lz = locate<Ops>(H, cls, a, tol);
            rz = locate<Ops>(G, cls, a, tol);
        } catch (const Error& e) {
            throw Error(ErrorCode::ChainExtractionFailed, std::string("chain step failed: ") + e.what());
        }
        if (!lz.left_zero || !rz.right_zero)
            throw Error(ErrorCode::ChainExtractionFailed, "spherical zero where an isolated zero was expected");
        ex.report.left_chain.push_back(*lz.left_zero);
        ex.report.right_chain.push_back(*rz.right_zero);
        H = Ops::strip_left(H, *lz.left_zero);
        G = Ops::strip_right(G, *rz.right_zero);
    }
    if (ex.report.kappa > 0) {
        ex.report.kind = ZeroKind::spherical;
    } else {
        ex.report.kind = ZeroKind::point;
        ex.report.left_zero = ex.report.left_chain.front();
        ex.report.right_zero = ex.report.right_chain.front();
    }
    ex.left_cofactor = std::move(H);
    ex.right_cofactor = std::move(G);
    return ex;
}

inline std::vector<Quaternion> left_divisor_nodes(const ZeroReport& r, const Quaternion& a) {
    std::vector<Quaternion> n;
    for (std::size_t i = 0; i < r.kappa; ++i) n.insert(n.end(), {a, a.conj()});
    n.insert(n.end(), r.left_chain.begin(), r.left_chain.end());
    return n;
}

inline std::vector<Quaternion> right_divisor_nodes(const ZeroReport& r, const Quaternion& a) {
    std::vector<Quaternion> n(r.right_chain.rbegin(), r.right_chain.rend());
    for (std::size_t i = 0; i < r.kappa; ++i) n.insert(n.end(), {a, a.conj()});
    return n;
}

}  // namespace detail

// Zero localization in a class. Both zeros come from the left evaluations a = f^el(alpha), b = f^el(conj alpha):
// left zero (conj(alpha) a + alpha b)(a + b)^{-1}, right zero (a - b)^{-1}(conj(alpha) a - alpha b).
inline LocatedZeros locate_in_class(const QSeries& f, const ConjugacyClass& cls, double tol = kDefaultTol,
                                    std::optional<Quaternion> representative = std::nullopt) {
    return detail::locate<detail::SeriesOps>(f, cls, detail::class_point(cls, representative), tol);
}

inline LocatedZeros locate_in_class(const Polynomial& f, const ConjugacyClass& cls, double tol = kDefaultTol,
                                    std::optional<Quaternion> representative = std::nullopt) {
    return detail::locate<detail::PolynomialOps>(f, cls, detail::class_point(cls, representative), tol);
}

struct SeriesDivisors {
    ZeroReport report;
    BlaschkeProduct left, right;
    QSeries left_cofactor, right_cofactor;  // f = left * left_cofactor = right_cofactor * right
    double residual = 0.0;
};

struct PolynomialDivisors {
    ZeroReport report;
    Polynomial left, right;
    Polynomial left_cofactor, right_cofactor;
    double residual = 0.0;
};

inline SeriesDivisors spherical_divisors(const QSeries& f, const ConjugacyClass& cls, double tol = kDefaultTol,
                                         std::optional<Quaternion> representative = std::nullopt,
                                         std::optional<std::size_t> output_order = std::nullopt) {
    const Quaternion a = detail::class_point(cls, representative);
    auto ex = detail::extract<detail::SeriesOps>(f, cls, a, tol);
    SeriesDivisors out;
    out.report = ex.report;
    out.left = BlaschkeProduct(detail::left_divisor_nodes(ex.report, a), 1.0, 0.0);
    out.right = BlaschkeProduct(detail::right_divisor_nodes(ex.report, a), 1.0, 0.0);
    const std::size_t n = std::min({output_order.value_or(ex.left_cofactor.order()), ex.left_cofactor.order(),
                                    ex.right_cofactor.order()});
    out.left_cofactor = ex.left_cofactor.truncated(n);
    out.right_cofactor = ex.right_cofactor.truncated(n);
    const QSeries lf = series_mul(product_series(out.left, n), out.left_cofactor);
    const QSeries rf = series_mul(out.right_cofactor, product_series(out.right, n));
    out.residual = std::max(max_coeff_diff(lf, f, n), max_coeff_diff(rf, f, n));
    if (!is_spherical_chain(ex.report.left_chain, 1e-6) && !cls.is_real(0.0))
        throw Error(ErrorCode::ChainExtractionFailed, "left chain is not a spherical chain");
    if (!is_spherical_chain(ex.report.right_chain, 1e-6) && !cls.is_real(0.0))
        throw Error(ErrorCode::ChainExtractionFailed, "right chain is not a spherical chain");
    return out;
}

// Works on a padded expansion so that division by the zeros does not eat into the returned order.
inline SeriesDivisors spherical_divisors(const BlaschkeProduct& B, const ConjugacyClass& cls, std::size_t order,
                                         double tol = kDefaultTol,
                                         std::optional<Quaternion> representative = std::nullopt) {
    const std::size_t work = order + std::max<std::size_t>(64, order);
    SeriesDivisors out = spherical_divisors(product_series(B, work), cls, tol, representative, order);
    const QSeries f = product_series(B, order);
    const QSeries lf = series_mul(product_series(out.left, order), out.left_cofactor);
    const QSeries rf = series_mul(out.right_cofactor, product_series(out.right, order));
    out.residual = std::max(max_coeff_diff(lf, f), max_coeff_diff(rf, f));
    return out;
}

inline PolynomialDivisors spherical_divisors(const Polynomial& f, const ConjugacyClass& cls, double tol = kDefaultTol,
                                             std::optional<Quaternion> representative = std::nullopt) {
    const Quaternion a = detail::class_point(cls, representative);
    auto ex = detail::extract<detail::PolynomialOps>(f, cls, a, tol);
    PolynomialDivisors out;
    out.report = ex.report;
    out.left = poly_from_factors(detail::left_divisor_nodes(ex.report, a));
    out.right = poly_from_factors(detail::right_divisor_nodes(ex.report, a));
    out.left_cofactor = ex.left_cofactor;
    out.right_cofactor = ex.right_cofactor;
    const Polynomial dl = out.left * out.left_cofactor - f, dr = out.right_cofactor * out.right - f;
    out.residual = std::max(dl.max_abs(), dr.max_abs());
    return out;
}

// Distinct classes of the nodes, in order of first appearance.
inline std::vector<ConjugacyClass> node_classes(std::span<const Quaternion> nodes, double tol = kDefaultTol) {
    std::vector<ConjugacyClass> out;
    for (const auto& a : nodes) {
        const auto c = ConjugacyClass::of(a);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const ConjugacyClass& o) {
            return std::abs(o.re - c.re) <= tol && std::abs(o.im_norm - c.im_norm) <= tol;
        });
        if (!seen) out.push_back(c);
    }
    return out;
}

inline std::vector<ZeroReport> zero_structure(const BlaschkeProduct& B, std::size_t order = kDefaultOrder,
                                              double tol = kDefaultTol) {
    std::vector<ZeroReport> out;
    for (const auto& c : node_classes(B.nodes())) out.push_back(spherical_divisors(B, c, order, tol).report);
    return out;
}

struct LrcmResult {
    Polynomial poly;  // (z - alpha)^2 (z - beta1)(z - beta2)
    Quaternion beta1, beta2;
};

inline LrcmResult lrcm_double(const Quaternion& a, const Quaternion& b, double tol = kDefaultTol) {
    if (a.im_norm() <= tol || b.im_norm() <= tol) throw Error(ErrorCode::RealInput, "lrcm_double needs nonreal inputs");
    if (same_class(a, b, tol)) throw Error(ErrorCode::SimilarInputs, "alpha and beta are similar");
    const Quaternion M = b * b - 2.0 * (b * a) + a * a;
    const Quaternion b1 = conjugate_by(b, M);
    const Quaternion M2 = 3.0 * (b * b) - 4.0 * (b * a) + a * a + 2.0 * ((a - b) * b1);
    const Quaternion b2 = conjugate_by(b, M2);
    const Quaternion nodes[] = {a, a, b1, b2};
    return {poly_from_factors(nodes), b1, b2};
}

// beta_k = B_{k-1}^el(alpha_k)^{-1} alpha_k B_{k-1}^el(alpha_k), so that B^el(alpha_k) = 0 for every k.
inline BlaschkeProduct prescribed_left_zeros(std::span<const Quaternion> points, double tol = kDefaultTol) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].norm() < 1.0 - kNodeMargin)) throw Error(ErrorCode::NodeOutsideBall, "point outside the unit ball");
        for (std::size_t j = 0; j < i; ++j)
            if (same_class(points[i], points[j], tol))
                throw Error(ErrorCode::SimilarPointsUnsupported, "similar points make the recursion degenerate");
    }
    std::vector<Quaternion> nodes;
    for (const auto& a : points) {
        const Quaternion v = product_eval(nodes, 1.0, a, Side::left);
        if (v.norm() <= kClosedFormZero)
            throw Error(ErrorCode::SimilarPointsUnsupported, "previous factors already vanish at the point");
        nodes.push_back(conjugate_by(a, v));
    }
    return BlaschkeProduct(std::move(nodes));
}

}  // namespace qblaschke
