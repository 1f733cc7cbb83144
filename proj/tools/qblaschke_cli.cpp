#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <qblaschke/json_io.hpp>
#include <qblaschke/qblaschke.hpp>

using namespace qblaschke;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::size_t order = kDefaultOrder;
    double tol = kDefaultTol;
    std::optional<std::uint64_t> seed;
    std::string side = "left";
    std::string input;
    std::string output;
    // JSON-valued options, inline or @file
    std::map<std::string, std::string> raw;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text) {
    const std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
}

class Inputs {
public:
    explicit Inputs(const Options& o) {
        if (!o.input.empty()) {
            doc_ = parse_json(o.input[0] == '@' ? o.input : "@" + o.input);
            if (!doc_.is_object()) throw IoError("input file must hold a JSON object");
        }
        for (const auto& [k, v] : o.raw)
            if (!v.empty()) doc_[k] = parse_json(v);
    }

    bool has(const std::string& key) const { return doc_.is_object() && doc_.contains(key); }

    template <typename T>
    T get(const std::string& key) const {
        if (!has(key)) throw IoError("missing input: " + key);
        try {
            return doc_.at(key).template get<T>();
        } catch (const Json::exception& e) {
            throw IoError("malformed " + key + ": " + e.what());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvalidArgument) throw;
            throw IoError("malformed " + key + ": " + e.detail());
        }
    }

private:
    Json doc_ = Json::object();
};

Side parse_side(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw Error(ErrorCode::InvalidArgument, "side must be left or right");
}

// Random point of the class, drawn from the seed.
std::optional<Quaternion> representative(const Options& o, const Inputs& in, const ConjugacyClass& c) {
    if (in.has("rep")) return in.get<Quaternion>("rep");
    if (!o.seed) return std::nullopt;
    std::mt19937_64 rng(*o.seed);
    std::normal_distribution<double> nd;
    Quaternion u{0.0, nd(rng), nd(rng), nd(rng)};
    return c.re + c.im_norm * (u / u.norm());
}

Json located(const LocatedZeros& z) {
    Json j{{"kind", z.kind == ZeroKind::spherical ? "spherical" : "point"}};
    if (z.left_zero) j["left_zero"] = *z.left_zero;
    if (z.right_zero) j["right_zero"] = *z.right_zero;
    return j;
}

Json cmd_eval(const Options& o, const Inputs& in) {
    const Quaternion g = in.get<Quaternion>("point");
    const Side side = parse_side(o.side);
    if (in.has("product")) {
        const Json pj = in.get<Json>("product");
        const auto nodes = pj.at("nodes").get<std::vector<Quaternion>>();
        const Quaternion phi = pj.contains("phi") ? pj["phi"].get<Quaternion>() : Quaternion(1.0);
        if (std::abs(phi.norm() - 1.0) > kUnimodularTol) throw Error(ErrorCode::NotUnimodular, "phi must be unimodular");
        return Json{{"value", product_eval(nodes, phi, g, side)}, {"err_bound", 0.0}};
    }
    if (in.has("poly")) {
        const auto p = in.get<Polynomial>("poly");
        return Json{{"value", side == Side::left ? p.eval_left(g) : p.eval_right(g)}, {"err_bound", 0.0}};
    }
    const auto f = in.get<QSeries>("series");
    const Evaluation e = side == Side::left ? eval_left(f, g) : eval_right(f, g);
    Json j{{"value", e.value}, {"err_bound", nullptr}};
    if (e.err_bound) j["err_bound"] = *e.err_bound;
    return j;
}

Json cmd_zeros(const Options& o, const Inputs& in) {
    if (in.has("product") && !in.has("class")) {
        Json arr = Json::array();
        for (const auto& r : zero_structure(in.get<BlaschkeProduct>("product"), o.order, o.tol)) arr.push_back(r);
        return Json{{"classes", arr}};
    }
    const auto c = in.get<ConjugacyClass>("class");
    const auto rep = representative(o, in, c);
    if (in.has("poly")) return located(locate_in_class(in.get<Polynomial>("poly"), c, o.tol, rep));
    if (in.has("product")) return located(locate_in_class(product_series(in.get<BlaschkeProduct>("product"), o.order), c, o.tol, rep));
    return located(locate_in_class(in.get<QSeries>("series"), c, o.tol, rep));
}

Json cmd_divisors(const Options& o, const Inputs& in) {
    const auto c = in.get<ConjugacyClass>("class");
    const auto rep = representative(o, in, c);
    if (in.has("poly")) {
        const auto d = spherical_divisors(in.get<Polynomial>("poly"), c, o.tol, rep);
        return Json{{"report", d.report},     {"left", d.left},
                    {"left_cofactor", d.left_cofactor}, {"right", d.right},
                    {"right_cofactor", d.right_cofactor}, {"residual", d.residual}};
    }
    const SeriesDivisors d = in.has("product")
                                 ? spherical_divisors(in.get<BlaschkeProduct>("product"), c, o.order, o.tol, rep)
                                 : spherical_divisors(in.get<QSeries>("series"), c, o.tol, rep);
    return Json{{"report", d.report},     {"left", d.left},
                {"left_cofactor", d.left_cofactor}, {"right", d.right},
                {"right_cofactor", d.right_cofactor}, {"residual", d.residual}};
}

Json cmd_synth(const Options& o, const Inputs& in) {
    if (in.has("poly")) return synthesize(pair_from_polynomial(in.get<Polynomial>("poly")), o.order);
    if (in.has("chain")) {
        const auto ch = in.get<std::vector<Quaternion>>("chain");
        return synthesize(pair_from_chain(ch), o.order);
    }
    return synthesize(in.get<QMatrix>("A"), in.get<QMatrix>("v"), o.order);
}

Json cmd_realize(const Options& o, const Inputs& in) {
    const auto B = in.get<BlaschkeProduct>("product");
    const Realization R = build_realization(B);
    return Json{{"realization", R},
                {"series", realization_to_series(R, o.order)},
                {"unitarity_defect", unitarity_defect(R)}};
}

Json cmd_recover(const Options& o, const Inputs& in) {
    const auto prefix = in.get<std::vector<Quaternion>>("prefix");
    const Recovery r = recover(prefix, o.tol);
    const auto res = r.identity_residuals();
    return Json{{"degree", prefix.size() - 1},
                {"realization", r.realization},
                {"series", r.series(o.order)},
                {"identity_residuals", res}};
}

Json cmd_schur_test(const Options& o, const Inputs& in) {
    const auto prefix = in.get<std::vector<Quaternion>>("prefix");
    if (!is_schur_prefix(prefix, o.tol)) throw Error(ErrorCode::NotSchur, "I - T T* is not positive semidefinite");
    return Json{{"schur", true}, {"rank_profile", rank_profile(prefix)}};
}

Json cmd_lrcm(const Options& o, const Inputs& in) {
    const LrcmResult r = lrcm_double(in.get<Quaternion>("alpha"), in.get<Quaternion>("beta"), o.tol);
    return Json{{"poly", r.poly}, {"beta1", r.beta1}, {"beta2", r.beta2}};
}

Json cmd_prescribe(const Options& o, const Inputs& in) {
    const auto pts = in.get<std::vector<Quaternion>>("points");
    return prescribed_left_zeros(pts, o.tol);
}

void emit(const Json& j, const Options& o) {
    const std::string text = j.dump() + "\n";
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output);
    if (!out || !(out << text)) throw IoError("cannot write " + o.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite Blaschke products over the quaternions"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Options o;
    app.add_option("--order", o.order, "truncation order")->envname("QBLASCHKE_ORDER")->check(CLI::NonNegativeNumber);
    app.add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for randomized representatives");
    app.add_option("--side", o.side, "left or right")->check(CLI::IsMember({"left", "right"}));
    app.add_option("--input", o.input, "JSON object file holding the command inputs");
    app.add_option("--output", o.output, "write the result here instead of stdout");

    struct Command {
        const char* name;
        const char* help;
        std::vector<const char*> keys;
        Json (*run)(const Options&, const Inputs&);
    };
    const std::vector<Command> commands = {
        {"eval", "evaluate a product, polynomial or series at a point", {"product", "poly", "series", "point"}, cmd_eval},
        {"zeros", "locate zeros in a class, or the zero structure of a product",
         {"product", "poly", "series", "class", "rep"}, cmd_zeros},
        {"divisors", "left and right spherical divisors for a class", {"product", "poly", "series", "class", "rep"}, cmd_divisors},
        {"synth", "Blaschke product from a stable controllable pair", {"poly", "chain", "A", "v"}, cmd_synth},
        {"realize", "unitary realization of a product", {"product"}, cmd_realize},
        {"recover", "degree-n product from its first n+1 coefficients", {"prefix"}, cmd_recover},
        {"schur-test", "Toeplitz contraction test of a coefficient prefix", {"prefix"}, cmd_schur_test},
        {"lrcm", "least right common multiple of rho_alpha^2 and rho_beta^2", {"alpha", "beta"}, cmd_lrcm},
        {"prescribe", "product with prescribed left zeros", {"points"}, cmd_prescribe},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        for (const char* k : c.keys) sub->add_option(std::string("--") + k, o.raw[k], "inline JSON or @file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const Inputs in(o);
        const std::string name = app.get_subcommands().front()->get_name();
        for (const auto& c : commands)
            if (name == c.name) emit(c.run(o, in), o);
        return 0;
    } catch (const Error& e) {
        std::cout << Json{{"error", e.name()}, {"detail", e.detail()}}.dump() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 1;
    }
}
