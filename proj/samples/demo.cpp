// Builds a degree-3 product, reads its zeros back and rebuilds it from four coefficients.
#include <iostream>

#include <qblaschke/qblaschke.hpp>

using namespace qblaschke;

int main() {
    const BlaschkeProduct B({Quaternion(0.3, 0.2, 0.0, 0.1), qj / 2.0, Quaternion(-0.4)}, qk);
    const QSeries f = product_series(B, 32);

    std::cout << "B(z) = sum f_k z^k, first coefficients:\n";
    for (std::size_t k = 0; k < 4; ++k) std::cout << "  f_" << k << " = " << f[k] << "\n";

    for (const auto& r : zero_structure(B, 32)) {
        std::cout << "class re=" << r.cls.re << " |im|=" << r.cls.im_norm << ": ";
        if (r.left_zero) std::cout << "left zero " << *r.left_zero << ", ";
        if (r.right_zero) std::cout << "right zero " << *r.right_zero;
        std::cout << "\n";
    }

    const Realization R = build_realization(B);
    std::cout << "unitarity defect of the colligation: " << unitarity_defect(R) << "\n";

    const std::vector<Quaternion> prefix(f.coeffs().begin(), f.coeffs().begin() + 4);
    const Recovery rec = recover(prefix);
    std::cout << "recovered from 4 coefficients, max deviation through order 32: "
              << max_coeff_diff(rec.series(32), f) << "\n";
}
