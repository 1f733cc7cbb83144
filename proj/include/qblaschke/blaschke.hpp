#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "series.hpp"

namespace qblaschke {

enum class Side { left, right };

inline constexpr double kNodeMargin = 1e-8;
inline constexpr double kPoleTol = 1e-12;
inline constexpr double kUnimodularTol = 1e-12;

// b_{a1} b_{a2} ... b_{an} phi with unimodular phi.
class BlaschkeProduct {
public:
    BlaschkeProduct() = default;
    explicit BlaschkeProduct(std::vector<Quaternion> nodes, const Quaternion& phi = 1.0, double margin = kNodeMargin)
        : nodes_(std::move(nodes)), phi_(phi) {
        for (const auto& a : nodes_)
            if (!(a.norm() < 1.0 - margin))
                throw Error(ErrorCode::NodeOutsideBall, "Blaschke node not inside the unit ball");
        if (std::abs(phi_.norm() - 1.0) > kUnimodularTol)
            throw Error(ErrorCode::NotUnimodular, "phi must have modulus 1");
    }

    static BlaschkeProduct factor(const Quaternion& a) { return BlaschkeProduct({a}); }

    // b_a b_conj(a): real coefficients, vanishes on the whole class of a.
    static BlaschkeProduct sphere(const ConjugacyClass& c) {
        const Quaternion a = c.representative();
        return BlaschkeProduct({a, a.conj()});
    }

    std::size_t degree() const { return nodes_.size(); }
    const std::vector<Quaternion>& nodes() const { return nodes_; }
    const Quaternion& phi() const { return phi_; }

    // Moves constants to the right end: phi b_b = b_{phi b phi^{-1}} phi.
    friend BlaschkeProduct operator*(const BlaschkeProduct& a, const BlaschkeProduct& b) {
        std::vector<Quaternion> n = a.nodes_;
        const Quaternion c = a.phi_;
        const Quaternion ci = inverse(c);
        for (const auto& x : b.nodes_) n.push_back(c * x * ci);
        return BlaschkeProduct(std::move(n), c * b.phi_, 1e-300);
    }

    friend BlaschkeProduct operator*(const Quaternion& psi, const BlaschkeProduct& b) {
        return BlaschkeProduct({}, psi) * b;
    }
    friend BlaschkeProduct operator*(const BlaschkeProduct& b, const Quaternion& psi) {
        return b * BlaschkeProduct({}, psi);
    }

private:
    std::vector<Quaternion> nodes_;
    Quaternion phi_ = 1.0;
};

// c_0 = -a, c_{k+1} = (1 - |a|^2) conj(a)^k
inline QSeries factor_series(const Quaternion& a, std::size_t order) {
    const double r = a.norm();
    if (!(r < 1.0)) throw Error(ErrorCode::NodeOutsideBall, "factor_series needs |alpha| < 1");
    std::vector<Quaternion> c(order + 1);
    c[0] = -a;
    Quaternion p = 1.0 - a.norm_sq();
    for (std::size_t k = 1; k <= order; ++k) {
        c[k] = p;
        p = p * a.conj();
    }
    if (r == 0.0) return QSeries(std::move(c), TailBound{});
    return QSeries(std::move(c), TailBound{r, (1.0 - r * r) / r});
}

namespace detail {
inline void check_closed_ball(const Quaternion& a) {
    if (a.norm() > 1.0 + 1e-12) throw Error(ErrorCode::NodeOutsideBall, "node outside the closed unit ball");
}

inline Quaternion checked_inverse(const Quaternion& q) {
    if (q.norm() <= kPoleTol) throw Error(ErrorCode::PoleHit, "evaluation point hits a pole");
    return inverse(q);
}

inline bool in_class(const Quaternion& g, const Quaternion& a) {
    const double s = std::max(1.0, a.norm());
    return std::abs(g.w - a.w) <= 1e-12 * s && std::abs(g.norm() - a.norm()) <= 1e-12 * s;
}
}  // namespace detail

// Closed-form b_a^{el}(g) / b_a^{br}(g). Nodes on the unit sphere are accepted.
inline Quaternion factor_eval(const Quaternion& a, const Quaternion& g, Side side) {
    detail::check_closed_ball(a);
    const Quaternion ac = a.conj();
    if (detail::in_class(g, a)) {
        const Quaternion d = detail::checked_inverse(1.0 - g * g);
        return side == Side::left ? d * (g - a) : (g - a) * d;
    }
    if (commutator(g, a).norm() <= 1e-14 * std::max(1.0, g.norm() * a.norm()))
        return (g - a) * detail::checked_inverse(1.0 - g * ac);
    if (side == Side::left) {
        const Quaternion t = 1.0 - g * a;
        const Quaternion gl = detail::checked_inverse(t) * g * t;
        return detail::checked_inverse(1.0 - gl * ac) * (gl - a);
    }
    const Quaternion t = 1.0 - a * g;
    const Quaternion gr = t * g * detail::checked_inverse(t);
    return (gr - a) * detail::checked_inverse(1.0 - ac * gr);
}

inline constexpr double kClosedFormZero = 1e-14;

// Applies the product rule factor by factor; each intermediate point stays in the class of g.
inline Quaternion product_eval(std::span<const Quaternion> nodes, const Quaternion& phi, const Quaternion& g, Side side) {
    if (std::abs(phi.norm() - 1.0) > kUnimodularTol) throw Error(ErrorCode::NotUnimodular, "phi must have modulus 1");
    if (side == Side::left) {
        Quaternion acc = 1.0, pt = g;
        for (const auto& a : nodes) {
            const Quaternion v = factor_eval(a, pt, Side::left);
            if (v.norm() <= kClosedFormZero) return {};
            acc = acc * v;
            pt = conjugate_by(pt, v);
        }
        // the constant phi evaluates to itself at every point
        return acc * phi;
    }
    // right: (f g)^br(x) = f^br(g^br(x) x g^br(x)^{-1}) g^br(x), peeled from the right end.
    Quaternion acc = phi, pt = phi * g * phi.conj();
    for (std::size_t k = nodes.size(); k-- > 0;) {
        const Quaternion v = factor_eval(nodes[k], pt, Side::right);
        if (v.norm() <= kClosedFormZero) return {};
        acc = v * acc;
        pt = v * pt * inverse(v);
    }
    return acc;
}

inline Quaternion product_eval(const BlaschkeProduct& b, const Quaternion& g, Side side) {
    return product_eval(b.nodes(), b.phi(), g, side);
}

// Real-coefficient expansion of (z^2 - 2 re z + m^2)(1 - 2 re z + m^2 z^2)^{-1}.
inline QSeries spherical_factor(const ConjugacyClass& c, std::size_t order) {
    const double m = c.modulus();
    if (!(m < 1.0)) throw Error(ErrorCode::NodeOutsideBall, "class modulus must be below 1");
    const double a = c.re, m2 = m * m;
    std::vector<double> h(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        double v = (k == 0) ? 1.0 : 2.0 * a * h[k - 1];
        if (k >= 2) v -= m2 * h[k - 2];
        h[k] = v;
    }
    std::vector<Quaternion> out(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        double v = m2 * h[k];
        if (k >= 1) v -= 2.0 * a * h[k - 1];
        if (k >= 2) v += h[k - 2];
        out[k] = v;
    }
    if (m == 0.0) return QSeries(std::move(out), TailBound{});
    return QSeries::with_ratio(std::move(out), m);
}

inline QSeries product_series(std::span<const Quaternion> nodes, const Quaternion& phi, std::size_t order) {
    QSeries s = QSeries::constant(1.0, order);
    for (const auto& a : nodes) s = series_mul(s, factor_series(a, order));
    s = s * phi;
    double r = 0.0;
    for (const auto& a : nodes) r = std::max(r, a.norm());
    if (r > 0.0) return QSeries::with_ratio(s.coeffs(), r);
    return s;
}

inline QSeries product_series(const BlaschkeProduct& b, std::size_t order) {
    return product_series(b.nodes(), b.phi(), order);
}

}  // namespace qblaschke
