#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "quaternion.hpp"

namespace qblaschke {

// Polynomial with quaternion coefficients, index k is the coefficient of z^k.
// The indeterminate commutes with coefficients.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Quaternion> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Quaternion> coeffs) : c_(coeffs) { trim(); }

    static Polynomial monomial(std::size_t k, const Quaternion& c = 1.0) {
        std::vector<Quaternion> v(k + 1);
        v[k] = c;
        return Polynomial(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Quaternion>& coeffs() const { return c_; }
    Quaternion operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Quaternion{}; }
    Quaternion leading() const { return c_.empty() ? Quaternion{} : c_.back(); }

    bool is_monic(double tol = kDefaultTol) const {
        return !c_.empty() && distance(c_.back(), 1.0) <= tol;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : c_) m = std::max(m, q.norm());
        return m;
    }

    // sum gamma^k p_k
    Quaternion eval_left(const Quaternion& g) const {
        Quaternion v;
        for (std::size_t k = c_.size(); k-- > 0;) v = c_[k] + g * v;
        return v;
    }
    // sum p_k gamma^k
    Quaternion eval_right(const Quaternion& g) const {
        Quaternion v;
        for (std::size_t k = c_.size(); k-- > 0;) v = c_[k] + v * g;
        return v;
    }

    Polynomial sharp() const {
        std::vector<Quaternion> v(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) v[k] = c_[k].conj();
        return Polynomial(std::move(v));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Quaternion> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Quaternion> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Quaternion> v(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const Quaternion& s, const Polynomial& p) {
        std::vector<Quaternion> v(p.c_);
        for (auto& q : v) q = s * q;
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const Polynomial& p, const Quaternion& s) {
        std::vector<Quaternion> v(p.c_);
        for (auto& q : v) q = q * s;
        return Polynomial(std::move(v));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == Quaternion{}) c_.pop_back();
    }
    std::vector<Quaternion> c_;
};

// z - alpha
inline Polynomial rho(const Quaternion& alpha) { return Polynomial{-alpha, 1.0}; }

// z^2 - 2 Re(alpha) z + |alpha|^2, the real quadratic vanishing on the class
inline Polynomial class_quadratic(const ConjugacyClass& c) {
    return Polynomial{c.re * c.re + c.im_norm * c.im_norm, -2.0 * c.re, 1.0};
}

inline Polynomial poly_from_factors(std::span<const Quaternion> nodes) {
    Polynomial p{1.0};
    for (const auto& a : nodes) p = p * rho(a);
    return p;
}

struct PolyDivision {
    Polynomial quotient;
    Polynomial remainder;
};

// p = d * q + r with deg r < deg d
inline PolyDivision divide_left(const Polynomial& p, const Polynomial& d) {
    if (d.is_zero()) throw Error(ErrorCode::ZeroDivisor, "division by the zero polynomial");
    const int n = d.degree();
    std::vector<Quaternion> r = p.coeffs();
    if (p.degree() < n) return {Polynomial{}, p};
    std::vector<Quaternion> q(static_cast<std::size_t>(p.degree() - n + 1));
    const Quaternion lead_inv = inverse(d.leading());
    for (int k = p.degree() - n; k >= 0; --k) {
        const Quaternion qk = lead_inv * r[static_cast<std::size_t>(k + n)];
        q[static_cast<std::size_t>(k)] = qk;
        for (int i = 0; i <= n; ++i) r[static_cast<std::size_t>(k + i)] -= d[static_cast<std::size_t>(i)] * qk;
    }
    r.resize(static_cast<std::size_t>(n));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

// p = q * d + r with deg r < deg d
inline PolyDivision divide_right(const Polynomial& p, const Polynomial& d) {
    if (d.is_zero()) throw Error(ErrorCode::ZeroDivisor, "division by the zero polynomial");
    const int n = d.degree();
    std::vector<Quaternion> r = p.coeffs();
    if (p.degree() < n) return {Polynomial{}, p};
    std::vector<Quaternion> q(static_cast<std::size_t>(p.degree() - n + 1));
    const Quaternion lead_inv = inverse(d.leading());
    for (int k = p.degree() - n; k >= 0; --k) {
        const Quaternion qk = r[static_cast<std::size_t>(k + n)] * lead_inv;
        q[static_cast<std::size_t>(k)] = qk;
        for (int i = 0; i <= n; ++i) r[static_cast<std::size_t>(k + i)] -= qk * d[static_cast<std::size_t>(i)];
    }
    r.resize(static_cast<std::size_t>(n));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

}  // namespace qblaschke
