#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "polynomial.hpp"

namespace qblaschke {

inline constexpr std::size_t kDefaultOrder = 64;

// |f_k| <= scale * ratio^k for every k beyond the stored order.
// ratio == 0 and scale == 0 means the stored coefficients are the whole series.
struct TailBound {
    double ratio = 0.0;
    double scale = 0.0;

    bool exact() const { return scale == 0.0; }
};

// Smallest scale with |c_k| <= scale * r^k over the stored coefficients.
inline double fit_tail_scale(const std::vector<Quaternion>& c, double r) {
    if (r <= 0.0) return 0.0;
    const double lr = std::log(r);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double a = c[k].norm();
        if (a == 0.0) continue;
        s = std::max(s, std::exp(std::log(a) - static_cast<double>(k) * lr));
    }
    return s;
}

// Truncated power series with coefficients f_0..f_N.
class QSeries {
public:
    QSeries() : c_(1) {}
    explicit QSeries(std::vector<Quaternion> coeffs, std::optional<TailBound> tail = std::nullopt)
        : c_(std::move(coeffs)), tail_(tail) {
        if (c_.empty()) c_.resize(1);
    }

    static QSeries constant(const Quaternion& q, std::size_t order) {
        std::vector<Quaternion> c(order + 1);
        c[0] = q;
        return QSeries(std::move(c), TailBound{});
    }

    // Coefficients with a tail bound fitted for the given decay ratio.
    static QSeries with_ratio(std::vector<Quaternion> coeffs, double ratio) {
        const double s = fit_tail_scale(coeffs, ratio);
        return QSeries(std::move(coeffs), TailBound{ratio, s});
    }

    std::size_t order() const { return c_.size() - 1; }
    const std::vector<Quaternion>& coeffs() const { return c_; }
    const Quaternion& operator[](std::size_t k) const { return c_[k]; }
    const std::optional<TailBound>& tail() const { return tail_; }
    std::optional<double> tail_ratio() const {
        return tail_ ? std::optional<double>(tail_->ratio) : std::nullopt;
    }

    QSeries truncated(std::size_t order) const {
        if (order >= this->order()) return *this;
        std::vector<Quaternion> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(order + 1));
        std::optional<TailBound> t;
        if (tail_) {
            bool dropped_nonzero = false;
            for (std::size_t k = order + 1; k < c_.size(); ++k) dropped_nonzero |= !(c_[k] == Quaternion{});
            if (tail_->exact() && !dropped_nonzero) {
                t = TailBound{};
            } else if (tail_->ratio > 0.0) {
                std::vector<Quaternion> dropped(c_.size());
                for (std::size_t k = order + 1; k < c_.size(); ++k) dropped[k] = c_[k];
                t = TailBound{tail_->ratio, std::max(tail_->scale, fit_tail_scale(dropped, tail_->ratio))};
            }
        }
        return QSeries(std::move(c), t);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : c_) m = std::max(m, q.norm());
        return m;
    }

private:
    std::vector<Quaternion> c_;
    std::optional<TailBound> tail_;
};

inline QSeries to_series(const Polynomial& p, std::size_t order) {
    std::vector<Quaternion> c(order + 1);
    for (std::size_t k = 0; k <= order; ++k) c[k] = p[k];
    if (p.degree() <= static_cast<int>(order)) return QSeries(std::move(c), TailBound{});
    return QSeries(std::move(c));
}

inline std::optional<TailBound> combine_tails(const QSeries& f, const QSeries& g, const std::vector<Quaternion>& out) {
    if (!f.tail() || !g.tail()) return std::nullopt;
    const TailBound a = *f.tail(), b = *g.tail();
    if (a.exact() && b.exact()) {
        const std::size_t n = out.size() - 1;
        std::size_t df = 0, dg = 0;
        for (std::size_t k = 0; k <= f.order(); ++k)
            if (!(f[k] == Quaternion{})) df = k;
        for (std::size_t k = 0; k <= g.order(); ++k)
            if (!(g[k] == Quaternion{})) dg = k;
        if (df + dg <= n) return TailBound{};
        return std::nullopt;
    }
    const double r = std::max(a.ratio, b.ratio);
    if (r <= 0.0) return std::nullopt;
    return TailBound{r, fit_tail_scale(out, r)};
}

inline QSeries series_mul(const QSeries& f, const QSeries& g) {
    const std::size_t n = std::min(f.order(), g.order());
    std::vector<Quaternion> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        Quaternion s;
        for (std::size_t l = 0; l <= k; ++l) s += f[l] * g[k - l];
        c[k] = s;
    }
    auto t = combine_tails(f, g, c);
    return QSeries(std::move(c), t);
}

inline QSeries operator*(const QSeries& f, const QSeries& g) { return series_mul(f, g); }

inline QSeries operator*(const Quaternion& s, const QSeries& f) {
    std::vector<Quaternion> c(f.coeffs());
    for (auto& q : c) q = s * q;
    std::optional<TailBound> t = f.tail();
    if (t) t->scale *= s.norm();
    return QSeries(std::move(c), t);
}

inline QSeries operator*(const QSeries& f, const Quaternion& s) {
    std::vector<Quaternion> c(f.coeffs());
    for (auto& q : c) q = q * s;
    std::optional<TailBound> t = f.tail();
    if (t) t->scale *= s.norm();
    return QSeries(std::move(c), t);
}

namespace detail {
template <typename Op>
QSeries combine(const QSeries& f, const QSeries& g, Op op) {
    const std::size_t n = std::min(f.order(), g.order());
    std::vector<Quaternion> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = op(f[k], g[k]);
    std::optional<TailBound> t;
    const auto ft = f.truncated(n).tail(), gt = g.truncated(n).tail();
    if (ft && gt) {
        if (ft->exact() && gt->exact())
            t = TailBound{};
        else
            t = TailBound{std::max(ft->ratio, gt->ratio), ft->scale + gt->scale};
    }
    return QSeries(std::move(c), t);
}
}  // namespace detail

inline QSeries operator+(const QSeries& f, const QSeries& g) {
    return detail::combine(f, g, [](const Quaternion& a, const Quaternion& b) { return a + b; });
}
inline QSeries operator-(const QSeries& f, const QSeries& g) {
    return detail::combine(f, g, [](const Quaternion& a, const Quaternion& b) { return a - b; });
}

inline QSeries sharp(const QSeries& f) {
    std::vector<Quaternion> c(f.coeffs());
    for (auto& q : c) q = q.conj();
    return QSeries(std::move(c), f.tail());
}

struct Evaluation {
    Quaternion value;
    std::optional<double> err_bound;  // empty when no tail information is available
};

namespace detail {
inline std::optional<double> eval_error(const QSeries& f, const Quaternion& g, std::optional<double> target) {
    std::optional<double> err;
    const double m = g.norm();
    if (f.tail()) {
        const TailBound t = *f.tail();
        if (t.exact()) {
            err = 0.0;
        } else {
            const double q = t.ratio * m;
            if (q >= 1.0) throw Error(ErrorCode::DivergenceRisk, "tail ratio times |gamma| is at least 1");
            err = t.scale * std::pow(q, static_cast<double>(f.order() + 1)) / (1.0 - q);
        }
    } else if (m > 1.0 + 1e-12) {
        throw Error(ErrorCode::DivergenceRisk, "no tail information and |gamma| > 1");
    }
    if (target) {
        if (!err) throw Error(ErrorCode::TruncationInsufficient, "no tail information to certify the target tolerance");
        if (*err > *target) throw Error(ErrorCode::TruncationInsufficient, "tail bound exceeds the target tolerance");
    }
    return err;
}
}  // namespace detail

// sum gamma^k f_k
inline Evaluation eval_left(const QSeries& f, const Quaternion& g, std::optional<double> target = std::nullopt) {
    auto err = detail::eval_error(f, g, target);
    Quaternion v;
    for (std::size_t k = f.order() + 1; k-- > 0;) v = f[k] + g * v;
    return {v, err};
}

// sum f_k gamma^k
inline Evaluation eval_right(const QSeries& f, const Quaternion& g, std::optional<double> target = std::nullopt) {
    auto err = detail::eval_error(f, g, target);
    Quaternion v;
    for (std::size_t k = f.order() + 1; k-- > 0;) v = f[k] + v * g;
    return {v, err};
}

inline double zero_threshold(const Evaluation& e) {
    return std::max(1e-9, 10.0 * e.err_bound.value_or(0.0));
}

// (fg)^el(gamma) = f^el(gamma) g^el(f^el(gamma)^{-1} gamma f^el(gamma)), without forming fg.
inline Quaternion eval_product_left(const QSeries& f, const QSeries& g, const Quaternion& gamma) {
    const Evaluation a = eval_left(f, gamma);
    if (a.value.norm() <= zero_threshold(a)) return {};
    return a.value * eval_left(g, conjugate_by(gamma, a.value)).value;
}

// (fg)^br(gamma) = f^br(g^br(gamma) gamma g^br(gamma)^{-1}) g^br(gamma)
inline Quaternion eval_product_right(const QSeries& f, const QSeries& g, const Quaternion& gamma) {
    const Evaluation b = eval_right(g, gamma);
    if (b.value.norm() <= zero_threshold(b)) return {};
    return eval_right(f, b.value * gamma * inverse(b.value)).value * b.value;
}

// Coefficients conj(alpha)^k.
inline QSeries kappa_series(const Quaternion& alpha, std::size_t order) {
    const double r = alpha.norm();
    if (!(r < 1.0)) throw Error(ErrorCode::NodeOutsideBall, "kappa_series needs |alpha| < 1");
    std::vector<Quaternion> c(order + 1);
    Quaternion p = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
        c[k] = p;
        p = p * alpha.conj();
    }
    return QSeries(std::move(c), r == 0.0 ? TailBound{} : TailBound{r, 1.0});
}

// Formal inverse of a polynomial with invertible constant term.
inline QSeries formal_inverse(const Polynomial& p, std::size_t order) {
    if (p.is_zero() || p[0].norm() <= 1e-300) throw Error(ErrorCode::ZeroDivisor, "constant term is not invertible");
    const Quaternion inv0 = inverse(p[0]);
    std::vector<Quaternion> c(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        Quaternion s = (k == 0) ? Quaternion(1.0) : Quaternion{};
        for (std::size_t l = 1; l <= k && l <= static_cast<std::size_t>(p.degree()); ++l) s -= c[k - l] * p[l];
        c[k] = s * inv0;
    }
    return QSeries(std::move(c));
}

struct SeriesSplit {
    QSeries g;  // coefficients in the centralizer of alpha
    QSeries h;  // f = g + h * eps
};

inline SeriesSplit split_series(const QSeries& f, const Quaternion& alpha, const Quaternion& eps,
                                double tol = kDefaultTol) {
    std::vector<Quaternion> g(f.order() + 1), h(f.order() + 1);
    for (std::size_t k = 0; k <= f.order(); ++k) {
        const auto s = split_quaternion(f[k], alpha, eps, tol);
        g[k] = s.first;
        h[k] = s.second;
    }
    return {QSeries(std::move(g), f.tail()), QSeries(std::move(h), f.tail())};
}

inline double h2_norm_sq(const QSeries& f) {
    double s = 0.0;
    for (const auto& q : f.coeffs()) s += q.norm_sq();
    return s;
}

// <h, g> = sum conj(g_k) h_k over the common order
inline Quaternion inner_product(const QSeries& h, const QSeries& g) {
    const std::size_t n = std::min(h.order(), g.order());
    Quaternion s;
    for (std::size_t k = 0; k <= n; ++k) s += g[k].conj() * h[k];
    return s;
}

inline double max_coeff_diff(const QSeries& f, const QSeries& g, std::size_t upto = std::numeric_limits<std::size_t>::max()) {
    const std::size_t n = std::min({f.order(), g.order(), upto});
    double m = 0.0;
    for (std::size_t k = 0; k <= n; ++k) m = std::max(m, distance(f[k], g[k]));
    return m;
}

}  // namespace qblaschke
