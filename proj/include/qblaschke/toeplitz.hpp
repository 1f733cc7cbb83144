#pragma once

#include <span>
#include <vector>

#include "qmatrix.hpp"

namespace qblaschke {

inline constexpr double kPsdTol = 1e-9;

struct ToeplitzData {
    std::vector<Quaternion> prefix;
    QMatrix T;  // T_{jk} = f_{j-k}, lower triangular
    QMatrix P;  // I - T T*
};

inline QMatrix toeplitz_lower(std::span<const Quaternion> prefix, std::size_t k) {
    QMatrix T(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i <= j; ++i) T(j, i) = j - i < prefix.size() ? prefix[j - i] : Quaternion{};
    return T;
}

inline ToeplitzData toeplitz_data(std::span<const Quaternion> prefix) {
    ToeplitzData d;
    d.prefix.assign(prefix.begin(), prefix.end());
    d.T = toeplitz_lower(prefix, prefix.size());
    d.P = hermitian_part(QMatrix::identity(prefix.size()) - d.T * d.T.adjoint());
    return d;
}

inline bool is_schur_prefix(std::span<const Quaternion> prefix, double tol = kPsdTol) {
    if (prefix.empty()) return true;
    return min_hermitian_eigenvalue(toeplitz_data(prefix).P) >= -tol;
}

// Ranks of the leading k x k blocks, k = 1..size.
inline std::vector<std::size_t> rank_profile_of(const QMatrix& P) {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k <= P.rows(); ++k) out.push_back(rank(P.block(0, 0, k, k)));
    return out;
}

inline std::vector<std::size_t> rank_profile(std::span<const Quaternion> prefix) {
    if (prefix.empty()) return {};
    return rank_profile_of(toeplitz_data(prefix).P);
}

}  // namespace qblaschke
