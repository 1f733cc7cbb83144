#pragma once

#include <json.hpp>

#include "schur.hpp"
#include "synthesis.hpp"
#include "zeros.hpp"

namespace qblaschke {

using Json = nlohmann::ordered_json;

template <typename J>
void to_json(J& j, const Quaternion& q) {
    // + 0.0 folds negative zero
    j = J::array({q.w + 0.0, q.x + 0.0, q.y + 0.0, q.z + 0.0});
}

// [w, x, y, z], or a bare number for a real quaternion.
template <typename J>
void from_json(const J& j, Quaternion& q) {
    if (j.is_number()) {
        q = Quaternion(j.template get<double>());
        return;
    }
    if (!j.is_array() || j.size() != 4)
        throw Error(ErrorCode::InvalidArgument, "quaternion must be an array [w, x, y, z]");
    q = Quaternion(j[0].template get<double>(), j[1].template get<double>(), j[2].template get<double>(),
                   j[3].template get<double>());
}

template <typename J>
void to_json(J& j, const ConjugacyClass& c) {
    j = J{{"re", c.re}, {"im_norm", c.im_norm}};
}

template <typename J>
void from_json(const J& j, ConjugacyClass& c) {
    if (j.is_object()) {
        c.re = j.at("re").template get<double>();
        c.im_norm = j.at("im_norm").template get<double>();
        if (c.im_norm < 0.0) throw Error(ErrorCode::InvalidArgument, "im_norm must be nonnegative");
    } else {
        c = ConjugacyClass::of(j.template get<Quaternion>());
    }
}

template <typename J>
void to_json(J& j, const Polynomial& p) {
    j = J::array();
    for (const auto& q : p.coeffs()) j.push_back(q);
}

template <typename J>
void from_json(const J& j, Polynomial& p) {
    p = Polynomial(j.template get<std::vector<Quaternion>>());
}

template <typename J>
void to_json(J& j, const QMatrix& m) {
    j = J{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

template <typename J>
void from_json(const J& j, QMatrix& m) {
    m = QMatrix(j.at("rows").template get<std::size_t>(), j.at("cols").template get<std::size_t>(),
                j.at("entries").template get<std::vector<Quaternion>>());
}

template <typename J>
void to_json(J& j, const QSeries& s) {
    j = J{{"coeffs", s.coeffs()}, {"order", s.order()}, {"tail_ratio", nullptr}, {"tail_scale", nullptr}};
    if (s.tail()) {
        j["tail_ratio"] = s.tail()->ratio;
        j["tail_scale"] = s.tail()->scale;
    }
}

// tail_scale may be omitted; it is then fitted to the given coefficients.
template <typename J>
void from_json(const J& j, QSeries& s) {
    auto c = j.at("coeffs").template get<std::vector<Quaternion>>();
    if (j.contains("order") && !j["order"].is_null() && j["order"].template get<std::size_t>() + 1 != c.size())
        throw Error(ErrorCode::InvalidArgument, "order does not match the coefficient count");
    if (j.contains("tail_ratio") && !j["tail_ratio"].is_null()) {
        const double r = j["tail_ratio"].template get<double>();
        if (r < 0.0 || r >= 1.0) throw Error(ErrorCode::InvalidArgument, "tail_ratio must lie in [0, 1)");
        if (j.contains("tail_scale") && !j["tail_scale"].is_null())
            s = QSeries(std::move(c), TailBound{r, j["tail_scale"].template get<double>()});
        else
            s = QSeries::with_ratio(std::move(c), r);
    } else {
        s = QSeries(std::move(c));
    }
}

template <typename J>
void to_json(J& j, const BlaschkeProduct& b) {
    j = J{{"nodes", b.nodes()}, {"phi", b.phi()}};
}

template <typename J>
void from_json(const J& j, BlaschkeProduct& b) {
    const Quaternion phi = j.contains("phi") ? j["phi"].template get<Quaternion>() : Quaternion(1.0);
    b = BlaschkeProduct(j.at("nodes").template get<std::vector<Quaternion>>(), phi);
}

template <typename J>
void to_json(J& j, const Realization& r) {
    j = J{{"A", r.A}, {"B", r.B}, {"C", r.C}, {"D", r.D}};
}

template <typename J>
void from_json(const J& j, Realization& r) {
    r.A = j.at("A").template get<QMatrix>();
    r.B = j.at("B").template get<QMatrix>();
    r.C = j.at("C").template get<QMatrix>();
    r.D = j.at("D").template get<Quaternion>();
}

template <typename J>
void to_json(J& j, const ZeroReport& z) {
    j = J{{"class", z.cls},
          {"kind", z.kind == ZeroKind::spherical ? "spherical" : "point"},
          {"kappa", z.kappa},
          {"left_chain", z.left_chain},
          {"right_chain", z.right_chain}};
    if (z.left_zero) j["left_zero"] = *z.left_zero;
    if (z.right_zero) j["right_zero"] = *z.right_zero;
}

template <typename J>
void to_json(J& j, const SynthResult& s) {
    j = J{{"P", s.P},
          {"g", s.g},
          {"p", s.p},
          {"R", s.R},
          {"Theta", J{{"realization", s.theta_realization}, {"series", s.theta}}},
          {"Ginv", s.ginv},
          {"r_norm_sq", s.r_norm_sq}};
}

}  // namespace qblaschke
