#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "uqr/bases.hpp"
#include "uqr/report.hpp"
#include "uqr/rmatrix.hpp"

namespace uqr::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json rational_json(const Rational& r) {
    // integers that fit stay numbers; anything larger is a decimal string
    if (r.get_num().fits_slong_p()) return Json(r.get_num().get_si());
    return Json(r.get_num().get_str());
}

inline Rational rational_from(const Json& j) {
    if (j.is_string()) return Rational(mpz_class(j.get<std::string>()));
    return Rational(j.get<long>());
}

inline Json poly_json(const LaurentPoly& p, int D) {
    Json out = Json::array();
    for (const auto& t : p.terms()) {
        const Fraction e(t.exp, D);
        out.push_back({e.num(), e.den(), rational_json(Rational(t.coef.get_num())), rational_json(Rational(t.coef.get_den()))});
    }
    return out;
}

} // namespace detail

/// {num: [[expNum, expDen, coefNum, coefDen], ...], den: [...]}, ascending exponents.
inline Json to_json(const FieldElement& x) {
    return {{"num", detail::poly_json(x.numerator(), x.root_order())},
            {"den", detail::poly_json(x.denominator(), x.root_order())}};
}

/// Inverse of to_json; the result uses root order D when given, otherwise the
/// least one that holds every exponent.
inline FieldElement field_from_json(const Json& j, int D = 0) {
    int need = 1;
    for (const char* key : {"num", "den"})
        for (const auto& t : j.at(key)) {
            const auto den = t.at(1).get<std::int64_t>();
            if (den <= 0) throw DomainError("exponent denominator must be positive");
            need = static_cast<int>(std::lcm<std::int64_t>(need, den));
        }
    if (D == 0) D = need;
    if (D % need != 0) throw DomainError("exponents need root order " + std::to_string(need));
    auto poly = [&](const Json& a) {
        std::vector<LaurentPoly::Term> terms;
        for (const auto& t : a) {
            const auto n = t.at(0).get<std::int64_t>(), d = t.at(1).get<std::int64_t>();
            Rational c(detail::rational_from(t.at(2)).get_num(), detail::rational_from(t.at(3)).get_num());
            c.canonicalize();
            terms.push_back({n * (D / d), c});
        }
        return LaurentPoly::from_terms(std::move(terms));
    };
    return FieldElement(poly(j.at("num")), poly(j.at("den")), D);
}

inline Json to_json(const Weight& w) { return Json(w.coords()); }

inline Json to_json(const CartanDatum& c) {
    Json a = Json::array();
    for (std::size_t i = 0; i < c.rank(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < c.rank(); ++j) row.push_back(c.a(i, j));
        a.push_back(row);
    }
    Json d = Json::array(), th = Json::array(), w0 = Json::array();
    for (std::size_t i = 0; i < c.rank(); ++i) d.push_back(c.d(i));
    if (c.is_finite()) {
        for (auto t : c.theta()) th.push_back(t + 1);
        for (auto i : c.longest_word()) w0.push_back(i + 1);
    }
    return {{"type", c.label()}, {"cartan", a}, {"d", d}, {"D", c.root_order()}, {"theta", th}, {"w0", w0}};
}

/// Row-major triplets [row, col, value] of the nonzero entries.
inline Json triplets(const Matrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!m(r, c).is_zero()) out.push_back({r, c, to_json(m(r, c))});
    return out;
}

inline Json sparse_vector(const Vector& v) {
    Json out = Json::array();
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) out.push_back({k, to_json(v[k])});
    return out;
}

inline Json to_json(const Module& m) {
    Json ws = Json::array(), E = Json::object(), F = Json::object();
    for (const auto& w : m.weights()) ws.push_back(to_json(w));
    for (std::size_t i = 0; i < m.rank(); ++i) {
        E[std::to_string(i + 1)] = triplets(m.E(i));
        F[std::to_string(i + 1)] = triplets(m.F(i));
    }
    return {{"cartan", to_json(m.cartan())}, {"dim", m.dim()}, {"weights", ws}, {"E", E}, {"F", F}};
}

inline Json to_json(const TransportedMap& t) {
    return {{"name", t.provenance}, {"linearity", t.bar_linear ? "bar-linear" : "linear"},
            {"rows", t.matrix.rows()}, {"entries", triplets(t.matrix)}};
}

inline Json rmatrix_json(const std::string& method, const Module& v, const Module& w, const Weight& lambda,
                         const Weight& mu, const Matrix& R) {
    Json order = Json::array();
    for (std::size_t a = 0; a < v.dim(); ++a)
        for (std::size_t b = 0; b < w.dim(); ++b) order.push_back({a, b});
    return {{"method", method},         {"cartan", to_json(v.cartan())}, {"lambda", to_json(lambda)},
            {"mu", to_json(mu)},        {"basis_order", order},          {"entries", triplets(R)}};
}

/// Timing is left out so that reports are byte-stable.
inline Json to_json(const CheckReport& r) {
    Json ces = Json::array();
    for (const auto& c : r.counterexamples) {
        Json lhs = Json::array(), rhs = Json::array();
        for (const auto& x : c.lhs) lhs.push_back(to_json(x));
        for (const auto& x : c.rhs) rhs.push_back(to_json(x));
        ces.push_back({{"where", c.where}, {"lhs", lhs}, {"rhs", rhs}});
    }
    return {{"name", r.name}, {"pass", r.pass()}, {"counterexamples", ces}};
}

inline Json global_basis_json(const Irreducible& irr, const IrreducibleBases& b) {
    Json vs = Json::array();
    for (std::size_t v = 0; v < b.global.size(); ++v)
        vs.push_back({{"vertex", v}, {"weight", to_json(b.crystal.weights[v])}, {"vector", sparse_vector(b.global[v])}});
    return {{"cartan", to_json(irr.module.cartan())}, {"lambda", to_json(irr.lambda)}, {"dim", irr.module.dim()},
            {"elements", vs}};
}

/// One node per vertex labeled by its weight; edge label i for f_i.
inline std::string crystal_dot(const CrystalGraph& g, const std::string& name = "crystal") {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (std::size_t v = 0; v < g.size(); ++v) os << "  v" << v << " [label=\"" << g.weights[v].str() << "\"];\n";
    for (std::size_t v = 0; v < g.size(); ++v)
        for (std::size_t i = 0; i < g.rank(); ++i)
            if (g.f[i][v]) os << "  v" << v << " -> v" << *g.f[i][v] << " [label=\"" << i + 1 << "\"];\n";
    os << "}\n";
    return os.str();
}

namespace detail {

inline void pretty(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent + 1), ' '), close(static_cast<std::size_t>(indent), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += pad + Json(it.key()).dump() + ": ";
            pretty(it.value(), indent + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
        return;
    }
    const bool flat = j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
    if (!j.is_array() || j.empty() || flat) {
        out += j.dump();
        return;
    }
    // one element per line; nested objects keep their own layout
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
        out += pad;
        if (j[k].is_object())
            pretty(j[k], indent + 1, out);
        else
            out += j[k].dump();
        out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "]";
}

} // namespace detail

/// Deterministic layout: objects indented, arrays of scalars inline, other
/// arrays one compact element per line.
inline std::string dump(const Json& j) {
    std::string out;
    detail::pretty(j, 0, out);
    return out + "\n";
}

/// Writes through a temporary file and a rename so readers never see a partial file.
inline void write_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw DomainError("cannot write " + path);
        f << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DomainError("cannot write " + path);
}

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace uqr::io
