#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "polynomial.hpp"
#include "quaternion.hpp"

namespace qblaschke {

inline constexpr double kStabilityMargin = 1e-8;
inline constexpr double kRankRelTol = 1e-10;
inline constexpr double kConditionLimit = 1e12;

// Dense row-major matrix over the quaternions.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
    QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> entries)
        : rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static QMatrix column(std::vector<Quaternion> v) {
        const std::size_t n = v.size();
        return QMatrix(n, 1, std::move(v));
    }
    static QMatrix row(std::vector<Quaternion> v) {
        const std::size_t n = v.size();
        return QMatrix(1, n, std::move(v));
    }
    static QMatrix scalar(const Quaternion& q) { return QMatrix(1, 1, {q}); }
    static QMatrix unit_vector(std::size_t n, std::size_t k) {
        QMatrix m(n, 1);
        m(k, 0) = 1.0;
        return m;
    }
    // F e_j = e_{j+1}
    static QMatrix shift(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return e_.empty(); }
    const std::vector<Quaternion>& entries() const { return e_; }

    Quaternion& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

    QMatrix adjoint() const {
        QMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).conj();
        return m;
    }

    QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        QMatrix m(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
        return m;
    }
    void set_block(std::size_t r0, std::size_t c0, const QMatrix& b) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : e_) m = std::max(m, q.norm());
        return m;
    }

    friend QMatrix operator+(const QMatrix& a, const QMatrix& b) {
        a.check_same(b);
        QMatrix m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
        return m;
    }
    friend QMatrix operator-(const QMatrix& a, const QMatrix& b) {
        a.check_same(b);
        QMatrix m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = a.e_[i] - b.e_[i];
        return m;
    }
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
        QMatrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Quaternion x = a(r, k);
                for (std::size_t c = 0; c < b.cols_; ++c) m(r, c) += x * b(k, c);
            }
        return m;
    }
    friend QMatrix operator*(const Quaternion& s, QMatrix a) {
        for (auto& q : a.e_) q = s * q;
        return a;
    }
    friend QMatrix operator*(QMatrix a, const Quaternion& s) {
        for (auto& q : a.e_) q = q * s;
        return a;
    }

private:
    void check_same(const QMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "shapes differ");
    }
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Quaternion> e_;
};

inline double max_abs_diff(const QMatrix& a, const QMatrix& b) { return (a - b).max_abs(); }

inline QMatrix hstack(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack row counts differ");
    QMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

inline QMatrix vstack(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack column counts differ");
    QMatrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

inline QMatrix block_diagonal(std::span<const QMatrix> blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows(), c += b.cols();
    QMatrix m(r, c);
    r = c = 0;
    for (const auto& b : blocks) {
        m.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return m;
}

using ComplexMatrix = Eigen::MatrixXcd;

// q = a + b j with a = w + i x, b = y + i z  ->  [[a, b], [-conj(b), conj(a)]]
inline ComplexMatrix embed(const QMatrix& A) {
    using C = std::complex<double>;
    ComplexMatrix M(2 * A.rows(), 2 * A.cols());
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c) {
            const Quaternion& q = A(r, c);
            const C a(q.w, q.x), b(q.y, q.z);
            const auto R = static_cast<Eigen::Index>(2 * r), K = static_cast<Eigen::Index>(2 * c);
            M(R, K) = a;
            M(R, K + 1) = b;
            M(R + 1, K) = -std::conj(b);
            M(R + 1, K + 1) = std::conj(a);
        }
    return M;
}

// Reads the first row of every 2x2 block.
inline QMatrix unembed(const ComplexMatrix& M) {
    if (M.rows() % 2 || M.cols() % 2) throw Error(ErrorCode::DimensionMismatch, "embedding has odd dimensions");
    QMatrix A(static_cast<std::size_t>(M.rows() / 2), static_cast<std::size_t>(M.cols() / 2));
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c) {
            const auto R = static_cast<Eigen::Index>(2 * r), K = static_cast<Eigen::Index>(2 * c);
            const auto a = M(R, K), b = M(R, K + 1);
            A(r, c) = Quaternion(a.real(), a.imag(), b.real(), b.imag());
        }
    return A;
}

inline Eigen::VectorXd singular_values(const QMatrix& A) {
    if (A.empty()) return {};
    Eigen::JacobiSVD<ComplexMatrix> svd(embed(A));
    return svd.singularValues();
}

// Quaternionic rank: singular values of the embedding come in equal pairs.
// Values below rel_tol * sigma_max, or below abs_tol, count as zero.
inline std::size_t rank(const QMatrix& A, double rel_tol = kRankRelTol, double abs_tol = 1e-13) {
    const Eigen::VectorXd s = singular_values(A);
    if (s.size() == 0) return 0;
    const double cut = std::max(rel_tol * s(0), abs_tol);
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < s.size(); k += 2)
        if (s(k) > cut) ++r;
    return r;
}

inline double condition_number(const QMatrix& A) {
    const Eigen::VectorXd s = singular_values(A);
    if (s.size() == 0) return 1.0;
    const double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

inline QMatrix inverse(const QMatrix& A) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
    if (A.empty()) return A;
    const double c = condition_number(A);
    if (!(c <= kConditionLimit)) throw Error(ErrorCode::IllConditioned, "condition number exceeds 1e12");
    return unembed(embed(A).partialPivLu().inverse());
}

inline std::vector<ConjugacyClass> right_spectrum(const QMatrix& A) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "right_spectrum of a non-square matrix");
    if (A.empty()) return {};
    Eigen::ComplexEigenSolver<ComplexMatrix> es(embed(A), false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalError, "eigensolver failed");
    std::vector<ConjugacyClass> pts;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const auto l = es.eigenvalues()(k);
        pts.push_back({l.real(), std::abs(l.imag())});
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.re != b.re ? a.re < b.re : a.im_norm < b.im_norm;
    });
    // Defective eigenvalues scatter by roughly eps^(1/m); merge nearby points and average.
    constexpr double kMerge = 1e-5;
    std::vector<std::vector<ConjugacyClass>> clusters;
    for (const auto& p : pts) {
        bool placed = false;
        for (auto& cl : clusters) {
            for (const auto& q : cl)
                if (std::hypot(p.re - q.re, p.im_norm - q.im_norm) <= kMerge * std::max(1.0, std::hypot(p.re, p.im_norm))) {
                    placed = true;
                    break;
                }
            if (placed) {
                cl.push_back(p);
                break;
            }
        }
        if (!placed) clusters.push_back({p});
    }
    std::vector<ConjugacyClass> out;
    for (const auto& cl : clusters) {
        ConjugacyClass m{0.0, 0.0};
        for (const auto& p : cl) m.re += p.re, m.im_norm += p.im_norm;
        m.re /= static_cast<double>(cl.size());
        m.im_norm /= static_cast<double>(cl.size());
        out.push_back(m);
    }
    return out;
}

inline double spectral_radius(const QMatrix& A) {
    double r = 0.0;
    for (const auto& c : right_spectrum(A)) r = std::max(r, c.modulus());
    return r;
}

inline bool is_stable(const QMatrix& A, double margin = kStabilityMargin) {
    return spectral_radius(A) < 1.0 - margin;
}

inline bool is_unitary(const QMatrix& U, double tol = 1e-11) {
    if (U.rows() != U.cols()) return false;
    const QMatrix I = QMatrix::identity(U.rows());
    return max_abs_diff(U * U.adjoint(), I) <= tol && max_abs_diff(U.adjoint() * U, I) <= tol;
}

inline bool is_hermitian(const QMatrix& P, double tol = 1e-12) {
    return P.rows() == P.cols() && max_abs_diff(P, P.adjoint()) <= tol * std::max(1.0, P.max_abs());
}

inline QMatrix hermitian_part(const QMatrix& P) {
    QMatrix H = P + P.adjoint();
    return 0.5 * H;
}

// Solves P - A P A* = B B* through the Kronecker form of the embedding.
inline QMatrix stein_solve(const QMatrix& A, const QMatrix& B) {
    if (A.rows() != A.cols() || B.rows() != A.rows())
        throw Error(ErrorCode::DimensionMismatch, "stein_solve shapes");
    if (A.empty()) return A;
    if (!is_stable(A)) throw Error(ErrorCode::NotStable, "right spectrum not inside the unit ball");
    const ComplexMatrix M = embed(A), Bm = embed(B);
    const ComplexMatrix W = Bm * Bm.adjoint();
    const Eigen::Index m = M.rows();
    ComplexMatrix K = ComplexMatrix::Identity(m * m, m * m);
    const ComplexMatrix Mc = M.conjugate();
    // vec(M X M^H) = (conj(M) kron M) vec(X), column-major vec
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto s = Mc(a, b);
            if (s == std::complex<double>(0.0)) continue;
            K.block(a * m, b * m, m, m) -= s * M;
        }
    const Eigen::VectorXcd w = Eigen::Map<const Eigen::VectorXcd>(W.data(), m * m);
    const Eigen::VectorXcd x = K.partialPivLu().solve(w);
    const ComplexMatrix X = Eigen::Map<const ComplexMatrix>(x.data(), m, m);
    return hermitian_part(unembed(X));
}

inline QMatrix stein_residual(const QMatrix& A, const QMatrix& B, const QMatrix& P) {
    return P - A * P * A.adjoint() - B * B.adjoint();
}

// [v, Av, ..., A^{n-1} v]
inline QMatrix controllability_matrix(const QMatrix& A, const QMatrix& v) {
    if (A.rows() != A.cols() || v.rows() != A.rows())
        throw Error(ErrorCode::DimensionMismatch, "controllability_matrix shapes");
    const std::size_t n = A.rows(), m = v.cols();
    QMatrix out(n, n * m);
    QMatrix x = v;
    for (std::size_t k = 0; k < n; ++k) {
        out.set_block(0, k * m, x);
        x = A * x;
    }
    return out;
}

inline bool is_controllable(const QMatrix& A, const QMatrix& v) {
    return rank(controllability_matrix(A, v)) == A.rows();
}

struct ControllablePair {
    QMatrix A;
    QMatrix v;

    std::size_t dim() const { return A.rows(); }
};

// Subdiagonal ones, last column -p_0..-p_{n-1}.
inline QMatrix companion_matrix(const Polynomial& p, double tol = kDefaultTol) {
    if (p.degree() < 1 || !p.is_monic(tol))
        throw Error(ErrorCode::InvalidArgument, "companion_matrix needs a monic polynomial of degree >= 1");
    const auto n = static_cast<std::size_t>(p.degree());
    QMatrix C = QMatrix::shift(n);
    for (std::size_t k = 0; k < n; ++k) C(k, n - 1) = -p[k];
    return C;
}

namespace detail {
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eig(const QMatrix& P) {
    if (!is_hermitian(P, 1e-9)) throw Error(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    const ComplexMatrix M = embed(hermitian_part(P));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalError, "Hermitian eigensolver failed");
    return es;
}

template <typename F>
QMatrix hermitian_function(const QMatrix& P, F f) {
    if (P.empty()) return P;
    const auto es = hermitian_eig(P);
    Eigen::VectorXd d = es.eigenvalues();
    for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = f(d(k));
    const ComplexMatrix V = es.eigenvectors();
    return hermitian_part(unembed(V * d.asDiagonal() * V.adjoint()));
}
}  // namespace detail

inline double min_hermitian_eigenvalue(const QMatrix& P) {
    if (P.empty()) return std::numeric_limits<double>::infinity();
    return detail::hermitian_eig(P).eigenvalues()(0);
}

inline QMatrix hermitian_sqrt(const QMatrix& P, double psd_tol = 1e-9) {
    if (min_hermitian_eigenvalue(P) < -psd_tol) throw Error(ErrorCode::NotPSD, "negative eigenvalue");
    return detail::hermitian_function(P, [](double l) { return std::sqrt(std::max(0.0, l)); });
}

inline QMatrix hermitian_inv_sqrt(const QMatrix& P) {
    if (P.empty()) return P;
    const auto es = detail::hermitian_eig(P);
    const Eigen::VectorXd d = es.eigenvalues();
    if (!(d(0) > 0.0) || d(d.size() - 1) / d(0) > kConditionLimit)
        throw Error(ErrorCode::IllConditioned, "matrix is not safely positive definite");
    return detail::hermitian_function(P, [](double l) { return 1.0 / std::sqrt(l); });
}

}  // namespace qblaschke
