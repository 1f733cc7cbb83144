#pragma once

#include <span>
#include <vector>

#include "realization.hpp"

namespace qblaschke {

struct SynthResult {
    QMatrix P;       // P - A P A* = v v*
    QMatrix g;       // (I - A*) P^{-1} (I - A)^{-1} v
    Polynomial p;    // monic polynomial represented by (A, v)
    QSeries R;       // zero-free factor, p R = Theta
    Realization theta_realization;
    QSeries theta;
    Polynomial ginv;  // formal inverse of R
    double r_norm_sq = 0.0;
};

namespace detail {
inline void check_pair(const QMatrix& A, const QMatrix& v) {
    if (A.rows() == 0 || A.rows() != A.cols() || v.rows() != A.rows() || v.cols() != 1)
        throw Error(ErrorCode::DimensionMismatch, "expected n x n matrix and n x 1 vector with n >= 1");
}
}  // namespace detail

// p(z) = z^n - e_1^* (I - z F^*)^{-1} C^{-1} A^n v with C the controllability matrix.
inline Polynomial pair_polynomial(const QMatrix& A, const QMatrix& v) {
    detail::check_pair(A, v);
    const std::size_t n = A.rows();
    QMatrix Anv = v;
    for (std::size_t k = 0; k < n; ++k) Anv = A * Anv;
    const QMatrix c = inverse(controllability_matrix(A, v)) * Anv;
    std::vector<Quaternion> coeffs(n + 1);
    for (std::size_t k = 0; k < n; ++k) coeffs[k] = -c(k, 0);
    coeffs[n] = 1.0;
    return Polynomial(std::move(coeffs));
}

inline SynthResult synthesize(const QMatrix& A, const QMatrix& v, std::size_t order = kDefaultOrder) {
    detail::check_pair(A, v);
    const std::size_t n = A.rows();
    const QMatrix I = QMatrix::identity(n);
    if (!is_stable(A)) throw Error(ErrorCode::NotStable, "right spectrum not inside the unit ball");
    const QMatrix Cm = controllability_matrix(A, v);
    if (rank(Cm) < n) throw Error(ErrorCode::NotControllable, "controllability matrix is rank deficient");
    const QMatrix Ci = inverse(Cm);

    SynthResult s;
    s.P = stein_solve(A, v);
    const QMatrix Pi = inverse(s.P);
    const QMatrix As = A.adjoint();
    const QMatrix IAi = inverse(I - A);
    s.g = (I - As) * Pi * IAi * v;

    QMatrix Anv = v;
    for (std::size_t k = 0; k < n; ++k) Anv = A * Anv;
    const QMatrix c = Ci * Anv;
    {
        std::vector<Quaternion> pc(n + 1);
        for (std::size_t k = 0; k < n; ++k) pc[k] = -c(k, 0);
        pc[n] = 1.0;
        s.p = Polynomial(std::move(pc));
    }

    const double r = spectral_radius(A);
    const QMatrix row = (Ci * s.P).block(n - 1, 0, 1, n);
    const QMatrix vs = v.adjoint();
    std::vector<Quaternion> Rc(order + 1), Tc(order + 1);
    Tc[0] = 1.0 - (vs * inverse(I - As) * s.g)(0, 0);
    QMatrix x = s.g;
    for (std::size_t k = 0; k <= order; ++k) {
        Rc[k] = (row * x)(0, 0);
        if (k < order) Tc[k + 1] = (vs * x)(0, 0);
        x = As * x;
    }
    s.R = r > 0.0 ? QSeries::with_ratio(std::move(Rc), r) : QSeries(std::move(Rc), TailBound{});
    s.theta = r > 0.0 ? QSeries::with_ratio(std::move(Tc), r) : QSeries(std::move(Tc), TailBound{});

    const QMatrix S = hermitian_sqrt(s.P), Si = hermitian_inv_sqrt(s.P);
    s.theta_realization = {S * As * Si, S * s.g, vs * Si, s.theta[0]};

    s.r_norm_sq = (Ci * s.P * Ci.adjoint())(n - 1, n - 1).w;

    // G = p - (z - 1) sum_k z^k h F*^k w, h = g*(I - A)^{-1} C, w = e_n - F* C^{-1} A^n v
    const QMatrix h = s.g.adjoint() * IAi * Cm;
    std::vector<Quaternion> w(n);
    w[n - 1] = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) w[j] -= c(j + 1, 0);
    std::vector<Quaternion> sk(n);
    for (std::size_t k = 0; k < n; ++k) {
        Quaternion acc;
        for (std::size_t j = 0; j + k < n; ++j) acc += h(0, j) * w[j + k];
        sk[k] = acc;
    }
    std::vector<Quaternion> gc(n + 1);
    for (std::size_t k = 0; k <= n; ++k) gc[k] = s.p[k];
    for (std::size_t k = 0; k < n; ++k) {
        gc[k] += sk[k];
        gc[k + 1] -= sk[k];
    }
    s.ginv = Polynomial(std::move(gc));
    return s;
}

inline SynthResult synthesize(const ControllablePair& pr, std::size_t order = kDefaultOrder) {
    return synthesize(pr.A, pr.v, order);
}

inline ControllablePair pair_from_polynomial(const Polynomial& p) {
    const QMatrix C = companion_matrix(p);
    if (!is_stable(C)) throw Error(ErrorCode::NotStable, "polynomial has zeros outside the open unit ball");
    return {C, QMatrix::unit_vector(C.rows(), 0)};
}

// Lower bidiagonal: diagonal gamma, subdiagonal ones, v = e_1.
inline ControllablePair pair_from_chain(std::span<const Quaternion> gamma) {
    if (gamma.empty()) throw Error(ErrorCode::InvalidArgument, "empty chain");
    const std::size_t n = gamma.size();
    QMatrix A = QMatrix::shift(n);
    for (std::size_t k = 0; k < n; ++k) A(k, k) = gamma[k];
    if (!is_stable(A)) throw Error(ErrorCode::NotStable, "chain points must lie inside the unit ball");
    return {A, QMatrix::unit_vector(n, 0)};
}

inline ControllablePair pair_direct_sum(std::span<const ControllablePair> pairs) {
    if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "no pairs given");
    std::vector<QMatrix> As;
    for (const auto& p : pairs) {
        detail::check_pair(p.A, p.v);
        As.push_back(p.A);
    }
    const QMatrix A = block_diagonal(As);
    QMatrix v(A.rows(), 1);
    std::size_t r = 0;
    for (const auto& p : pairs) {
        v.set_block(r, 0, p.v);
        r += p.v.rows();
    }
    if (!is_controllable(A, v)) throw Error(ErrorCode::NotControllable, "direct sum is not controllable");
    return {A, v};
}

struct ConjugateSide {
    QSeries Rtilde;  // Rtilde p is a finite Blaschke product
    QSeries theta;
};

inline ConjugateSide conjugate_side(const Polynomial& p, std::size_t order = kDefaultOrder) {
    const SynthResult s = synthesize(pair_from_polynomial(p.sharp()), order);
    ConjugateSide out;
    out.Rtilde = sharp(s.R);
    out.theta = series_mul(out.Rtilde, to_series(p, order));
    return out;
}

}  // namespace qblaschke
