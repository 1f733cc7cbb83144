#pragma once

#include <array>
#include <span>
#include <vector>

#include "realization.hpp"
#include "toeplitz.hpp"

namespace qblaschke {

struct Recovery {
    Quaternion f0;
    QMatrix Pn;  // I - T_n T_n^*
    QMatrix Cg;  // F - P_n^{-1} T_n X_n e_n^*
    QMatrix Y;   // [f_1; ...; f_n]
    Realization realization;

    // G_0 = f_0, G_j = e_1^* (C_g^*)^{j-1} Y
    QSeries series(std::size_t order) const { return realization_to_series(realization, order); }

    // Residuals of C_g^* P C_g + Y Y^* = P, C_g^* P e_1 + Y conj(f_0) = 0, e_1^* P e_1 + |f_0|^2 = 1.
    std::array<double, 3> identity_residuals() const {
        if (Pn.empty()) return {0.0, 0.0, std::abs(f0.norm_sq() - 1.0)};
        const std::size_t n = Pn.rows();
        const QMatrix Cs = Cg.adjoint();
        const QMatrix e1 = QMatrix::unit_vector(n, 0);
        const double r1 = max_abs_diff(Cs * Pn * Cg + Y * Y.adjoint(), Pn);
        const double r2 = (Cs * Pn * e1 + Y * f0.conj()).max_abs();
        const double r3 = std::abs(Pn(0, 0).w + f0.norm_sq() - 1.0);
        return {r1, r2, r3};
    }
};

inline Recovery recover(std::span<const Quaternion> prefix, double psd_tol = kPsdTol) {
    if (prefix.empty()) throw Error(ErrorCode::InvalidArgument, "empty prefix");
    const std::size_t n = prefix.size() - 1;
    const ToeplitzData td = toeplitz_data(prefix);
    if (min_hermitian_eigenvalue(td.P) < -psd_tol) throw Error(ErrorCode::NotPSD, "I - T T* is not positive semidefinite");
    Recovery out;
    out.f0 = prefix[0];
    if (n == 0) {
        if (std::abs(prefix[0].norm() - 1.0) > 1e-9)
            throw Error(ErrorCode::RankConditionFailed, "a single coefficient must be unimodular");
        out.realization.D = prefix[0];
        return out;
    }
    out.Pn = td.P.block(0, 0, n, n);
    if (rank(out.Pn) != n || rank(td.P) != n)
        throw Error(ErrorCode::RankConditionFailed, "need rank P_{n+1} = rank P_n = n");
    const QMatrix Tn = toeplitz_lower(prefix, n);
    QMatrix X(n, 1);
    out.Y = QMatrix(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        X(k, 0) = prefix[n - k].conj();
        out.Y(k, 0) = prefix[k + 1];
    }
    QMatrix en_row(1, n);
    en_row(0, n - 1) = 1.0;
    out.Cg = QMatrix::shift(n) - inverse(out.Pn) * Tn * X * en_row;

    const QMatrix S = hermitian_sqrt(out.Pn), Si = hermitian_inv_sqrt(out.Pn);
    QMatrix e1_row(1, n);
    e1_row(0, 0) = 1.0;
    out.realization = {Si * out.Cg.adjoint() * S, Si * out.Y, e1_row * S, out.f0};
    return out;
}

}  // namespace qblaschke
