#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "error.hpp"

namespace qblaschke {

// Tolerance for "real", "unit" and "same class" predicates.
inline constexpr double kDefaultTol = 1e-9;

struct Quaternion {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double re) : w(re) {}  // NOLINT: reals embed implicitly
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    constexpr double real() const { return w; }
    constexpr Quaternion imag() const { return {0.0, x, y, z}; }
    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }
    double im_norm() const { return std::sqrt(x * x + y * y + z * z); }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(const Quaternion& o);
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

constexpr Quaternion& Quaternion::operator*=(const Quaternion& o) { return *this = *this * o; }

inline constexpr Quaternion qi{0, 1, 0, 0};
inline constexpr Quaternion qj{0, 0, 1, 0};
inline constexpr Quaternion qk{0, 0, 0, 1};

inline Quaternion conj(const Quaternion& q) { return q.conj(); }
inline double abs(const Quaternion& q) { return q.norm(); }
inline double distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }
inline double dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = q.norm_sq();
    if (!(std::sqrt(n2) > 1e-300))
        throw Error(ErrorCode::ZeroDivisor, "inverse of a quaternion with modulus <= 1e-300");
    return q.conj() * (1.0 / n2);
}

inline Quaternion commutator(const Quaternion& a, const Quaternion& b) { return a * b - b * a; }

inline bool commutes(const Quaternion& a, const Quaternion& b, double tol = kDefaultTol) {
    return commutator(a, b).norm() <= tol;
}

// b^{-1} a b
inline Quaternion conjugate_by(const Quaternion& a, const Quaternion& b) {
    return inverse(b) * a * b;
}

struct ConjugacyClass {
    double re = 0.0;
    double im_norm = 0.0;

    static ConjugacyClass of(const Quaternion& q) { return {q.w, q.im_norm()}; }

    double modulus() const { return std::hypot(re, im_norm); }
    bool is_real(double tol = kDefaultTol) const { return im_norm <= tol; }
    Quaternion representative() const { return {re, im_norm, 0.0, 0.0}; }
    bool contains(const Quaternion& q, double tol = kDefaultTol) const {
        return std::abs(q.w - re) <= tol && std::abs(q.norm() - modulus()) <= tol;
    }
};

inline bool same_class(const Quaternion& a, const Quaternion& b, double tol = kDefaultTol) {
    return std::abs(a.w - b.w) <= tol && std::abs(a.norm() - b.norm()) <= tol;
}

// Orthonormal pair spanning the intertwiners of alpha (alpha*e = e*conj(alpha)).
// Gram-Schmidt of j, k, i (in that order) against {1, Im(alpha)/|Im(alpha)|}.
inline std::pair<Quaternion, Quaternion> perp_basis(const Quaternion& alpha, double tol = kDefaultTol) {
    const double m = alpha.im_norm();
    if (m <= tol) throw Error(ErrorCode::RealInput, "perp_basis needs a nonreal quaternion");
    const Quaternion u = alpha.imag() / m;
    Quaternion basis[2];
    int found = 0;
    for (const Quaternion& c : {qj, qk, qi}) {
        Quaternion r = c - dot(c, u) * u;
        for (int b = 0; b < found; ++b) r -= dot(r, basis[b]) * basis[b];
        const double n = r.norm();
        if (n < 0.5) continue;
        basis[found++] = r / n;
        if (found == 2) break;
    }
    return {basis[0], basis[1]};
}

struct QuaternionSplit {
    Quaternion first;   // component in the centralizer of alpha
    Quaternion second;  // beta = first + second * eps
};

inline QuaternionSplit split_quaternion(const Quaternion& beta, const Quaternion& alpha, const Quaternion& eps,
                                        double tol = kDefaultTol) {
    const double m = alpha.im_norm();
    if (m <= tol) throw Error(ErrorCode::RealInput, "split_quaternion needs a nonreal alpha");
    if (std::abs(eps.norm() - 1.0) > tol || (alpha * eps - eps * alpha.conj()).norm() > tol * std::max(1.0, alpha.norm()))
        throw Error(ErrorCode::BadEpsilon, "eps must be a unit intertwiner of alpha");
    const Quaternion u = alpha.imag() / m;
    const Quaternion first = beta.w + dot(beta, u) * u;
    const Quaternion second = (beta - first) * eps.conj();
    return {first, second};
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

}  // namespace qblaschke
