#pragma once

#include <cmath>
#include <vector>

#include "blaschke.hpp"
#include "qmatrix.hpp"
#include "toeplitz.hpp"

namespace qblaschke {

// f(z) = D + z C (I - zA)^{-1} B
struct Realization {
    QMatrix A, B, C;
    Quaternion D = 1.0;

    std::size_t state_dim() const { return A.rows(); }

    QMatrix colligation() const {
        const std::size_t n = state_dim();
        QMatrix U(n + 1, n + 1);
        U.set_block(0, 0, A);
        U.set_block(0, n, B);
        U.set_block(n, 0, C);
        U(n, n) = D;
        return U;
    }
};

inline double unitarity_defect(const Realization& R) {
    const QMatrix U = R.colligation();
    const QMatrix I = QMatrix::identity(U.rows());
    return std::max(max_abs_diff(U * U.adjoint(), I), max_abs_diff(U.adjoint() * U, I));
}

inline bool is_unitary_realization(const Realization& R, double tol = 1e-11) {
    return unitarity_defect(R) <= tol && is_stable(R.A);
}

inline Realization build_realization(const BlaschkeProduct& Bp) {
    Realization R;
    const auto& nodes = Bp.nodes();
    if (nodes.empty()) {
        R.D = Bp.phi();
        return R;
    }
    const Quaternion a1 = nodes[0];
    const double s1 = std::sqrt(1.0 - a1.norm_sq());
    QMatrix A = QMatrix::scalar(a1.conj()), B = QMatrix::scalar(s1), C = QMatrix::scalar(s1);
    Quaternion D = -a1;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const Quaternion a = nodes[k];
        const double s = std::sqrt(1.0 - a.norm_sq());
        const std::size_t n = A.rows();
        QMatrix An(n + 1, n + 1), Bn(n + 1, 1), Cn(1, n + 1);
        An.set_block(0, 0, A);
        An.set_block(0, n, B * Quaternion(s));
        An(n, n) = a.conj();
        Bn.set_block(0, 0, B * (-a));
        Bn(n, 0) = s;
        Cn.set_block(0, 0, C);
        Cn(0, n) = s * D;
        D = -(D * a);
        A = std::move(An);
        B = std::move(Bn);
        C = std::move(Cn);
    }
    R.A = std::move(A);
    R.B = B * Bp.phi();
    R.C = std::move(C);
    R.D = D * Bp.phi();
    return R;
}

// f_0 = D, f_j = C A^{j-1} B
inline QSeries realization_to_series(const Realization& R, std::size_t order) {
    std::vector<Quaternion> c(order + 1);
    c[0] = R.D;
    if (R.state_dim() == 0) return QSeries(std::move(c), TailBound{});
    QMatrix x = R.B;
    for (std::size_t j = 1; j <= order; ++j) {
        c[j] = (R.C * x)(0, 0);
        x = R.A * x;
    }
    const double r = spectral_radius(R.A);
    if (r == 0.0 && order >= R.state_dim()) return QSeries(std::move(c), TailBound{});
    if (r > 0.0 && r < 1.0) return QSeries::with_ratio(std::move(c), r);
    return QSeries(std::move(c));
}

// Smallest n with rank P_k = min(k, n) over the prefix of length order/2.
inline std::size_t degree_of(const QSeries& f, double psd_tol = 1e-9) {
    const std::size_t K = std::max<std::size_t>(1, (f.order() + 1) / 2);
    std::vector<Quaternion> prefix(f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(K));
    const ToeplitzData td = toeplitz_data(prefix);
    if (min_hermitian_eigenvalue(td.P) < -psd_tol) throw Error(ErrorCode::NotSchur, "Toeplitz section is not contractive");
    const auto prof = rank_profile_of(td.P);
    const std::size_t n = prof.back();
    if (n >= K) throw Error(ErrorCode::NotSaturated, "rank profile still climbing at the available order");
    for (std::size_t k = 1; k <= K; ++k)
        if (prof[k - 1] != std::min(k, n))
            throw Error(ErrorCode::NotSaturated, "rank profile is not of the form min(k, n)");
    return n;
}

inline bool equivalent(const Realization& R1, const Realization& R2, std::size_t order = kDefaultOrder,
                       double tol = 1e-10) {
    if (R1.state_dim() != R2.state_dim()) return false;
    return max_coeff_diff(realization_to_series(R1, order), realization_to_series(R2, order)) <= tol;
}

// V A = At V, V B = Bt, C = Ct V for invertible V.
inline Realization similar_realization(const Realization& R, const QMatrix& V) {
    const QMatrix Vi = inverse(V);
    return {V * R.A * Vi, V * R.B, R.C * Vi, R.D};
}

// [C; CA; ...; CA^{k-1}]
inline QMatrix observability_matrix(const Realization& R, std::size_t k) {
    QMatrix O(k, R.state_dim());
    QMatrix row = R.C;
    for (std::size_t i = 0; i < k; ++i) {
        O.set_block(i, 0, row);
        row = row * R.A;
    }
    return O;
}

// sum_{k <= N} g^k C A^k
inline QMatrix upsilon(const Realization& R, const Quaternion& g, std::size_t order) {
    QMatrix acc(1, R.state_dim());
    QMatrix row = R.C;
    Quaternion p = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
        acc = acc + p * row;
        row = row * R.A;
        p = p * g;
    }
    return acc;
}

// sqrt(1 - |a_1|^2) k_{a_1}, sqrt(1 - |a_j|^2) b_{a_1} ... b_{a_{j-1}} k_{a_j}
inline std::vector<QSeries> takenaka_basis(const BlaschkeProduct& Bp, std::size_t order) {
    std::vector<QSeries> out;
    QSeries prefix = QSeries::constant(1.0, order);
    for (const auto& a : Bp.nodes()) {
        out.push_back(series_mul(prefix, kappa_series(a, order)) * Quaternion(std::sqrt(1.0 - a.norm_sq())));
        prefix = series_mul(prefix, factor_series(a, order));
    }
    return out;
}

}  // namespace qblaschke
