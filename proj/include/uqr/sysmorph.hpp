#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqr/bases.hpp"
#include "uqr/module.hpp"

namespace uqr {

/// Letter of an operator word: E_j, F_j, or the diagonal q^{scale (w, wt)}.
struct Letter {
    enum Kind { E, F, Kform } kind;
    std::size_t node = 0;
    Weight w;
    Fraction scale = 0;

    static Letter e(std::size_t j) { return {E, j, {}, 0}; }
    static Letter f(std::size_t j) { return {F, j, {}, 0}; }
    static Letter k(Weight w, Fraction s) { return {Kform, 0, std::move(w), s}; }
};

/// Linear combination of words; words act right to left like matrix products.
struct OpTerm {
    FieldElement coef;
    std::vector<Letter> word;
};
using OpExpr = std::vector<OpTerm>;

inline Matrix evaluate(const Module& m, const OpExpr& x) {
    Matrix out(m.dim(), m.dim());
    for (const auto& t : x) {
        Matrix p = Matrix::identity(m.dim());
        for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
            switch (it->kind) {
            case Letter::E: p = m.E(it->node) * p; break;
            case Letter::F: p = m.F(it->node) * p; break;
            case Letter::Kform: p = m.kform(it->w, it->scale) * p; break;
            }
        }
        out = out + t.coef * p;
    }
    return out;
}

enum class Linearity { linear, bar_linear };
enum class CoalgebraKind { none, automorphism, anti_automorphism };

/// Images of the generators under an algebra (anti-)morphism of U_q.
struct MorphismSpec {
    std::string name;
    std::vector<OpExpr> e, f, k; // per node
    Linearity linearity = Linearity::linear;
    CoalgebraKind coalgebra = CoalgebraKind::none;
};

namespace spec {

inline Letter Ki(const CartanDatum& c, std::size_t i, int p) { return Letter::k(c.simple_root(i), Fraction(p)); }

inline MorphismSpec build(const CartanDatum& c, std::string name, Linearity lin, CoalgebraKind co,
                          const std::function<void(std::size_t, OpExpr&, OpExpr&, OpExpr&)>& fill) {
    MorphismSpec s{std::move(name), {}, {}, {}, lin, co};
    for (std::size_t i = 0; i < c.rank(); ++i) {
        OpExpr e, f, k;
        fill(i, e, f, k);
        s.e.push_back(std::move(e));
        s.f.push_back(std::move(f));
        s.k.push_back(std::move(k));
    }
    return s;
}

inline MorphismSpec identity(const CartanDatum& c) {
    return build(c, "identity", Linearity::linear, CoalgebraKind::automorphism,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     e = {{1, {Letter::e(i)}}};
                     f = {{1, {Letter::f(i)}}};
                     k = {{1, {Ki(c, i, 1)}}};
                 });
}

/// E -> E, F -> F, K -> K^{-1}, q -> q^{-1}
inline MorphismSpec bar(const CartanDatum& c) {
    return build(c, "bar", Linearity::bar_linear, CoalgebraKind::none,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     e = {{1, {Letter::e(i)}}};
                     f = {{1, {Letter::f(i)}}};
                     k = {{1, {Ki(c, i, -1)}}};
                 });
}

/// E_i -> E_i K_i^{-1}, F_i -> K_i F_i, K_i -> K_i^{-1}, q -> q^{-1}
inline MorphismSpec theta(const CartanDatum& c) {
    return build(c, "theta", Linearity::bar_linear, CoalgebraKind::anti_automorphism,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     e = {{1, {Letter::e(i), Ki(c, i, -1)}}};
                     f = {{1, {Ki(c, i, 1), Letter::f(i)}}};
                     k = {{1, {Ki(c, i, -1)}}};
                 });
}

/// E_i -> -K_t F_t, F_i -> -E_t K_t^{-1}, K_i -> K_t with t = theta(i), q -> q^{-1}
inline MorphismSpec gamma(const CartanDatum& c) {
    return build(c, "gamma", Linearity::bar_linear, CoalgebraKind::automorphism,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     const auto t = c.theta(i);
                     e = {{-1, {Ki(c, t, 1), Letter::f(t)}}};
                     f = {{-1, {Letter::e(t), Ki(c, t, -1)}}};
                     k = {{1, {Ki(c, t, 1)}}};
                 });
}

/// E_i -> -F_t K_t, F_i -> -K_t^{-1} E_t, K_i -> K_t^{-1}
inline MorphismSpec tw0(const CartanDatum& c) {
    return build(c, "tw0", Linearity::linear, CoalgebraKind::none,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     const auto t = c.theta(i);
                     e = {{-1, {Letter::f(t), Ki(c, t, 1)}}};
                     f = {{-1, {Ki(c, t, -1), Letter::e(t)}}};
                     k = {{1, {Ki(c, t, -1)}}};
                 });
}

/// E_i -> K_i E_i, F_i -> F_i K_i^{-1}, K -> K
inline MorphismSpec j(const CartanDatum& c) {
    return build(c, "J", Linearity::linear, CoalgebraKind::none, [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
        e = {{1, {Ki(c, i, 1), Letter::e(i)}}};
        f = {{1, {Letter::f(i), Ki(c, i, -1)}}};
        k = {{1, {Ki(c, i, 1)}}};
    });
}

/// Conjugation by K_{2H_rho}.
inline MorphismSpec k2rho(const CartanDatum& c) {
    return build(c, "K2rho", Linearity::linear, CoalgebraKind::none,
                 [&](std::size_t i, OpExpr& e, OpExpr& f, OpExpr& k) {
                     const Weight r = c.rho();
                     e = {{1, {Letter::k(r, 2), Letter::e(i), Letter::k(r, -2)}}};
                     f = {{1, {Letter::k(r, 2), Letter::f(i), Letter::k(r, -2)}}};
                     k = {{1, {Ki(c, i, 1)}}};
                 });
}

} // namespace spec

/// A module endomorphism; when bar_linear, x -> matrix * bar(x).
struct TransportedMap {
    Matrix matrix;
    bool bar_linear = false;
    std::string provenance;

    Vector apply(const Vector& v) const { return bar_linear ? matrix * bar(v) : matrix * v; }
};

/// a o b
inline TransportedMap compose(const TransportedMap& a, const TransportedMap& b) {
    return {a.matrix * (a.bar_linear ? b.matrix.bar() : b.matrix), a.bar_linear != b.bar_linear,
            a.provenance + " o " + b.provenance};
}

inline TransportedMap inverse(const TransportedMap& t) {
    Matrix inv = inverse(t.matrix);
    return {t.bar_linear ? inv.bar() : inv, t.bar_linear, "(" + t.provenance + ")^-1"};
}

inline TransportedMap tensor(const TransportedMap& a, const TransportedMap& b) {
    if (a.bar_linear != b.bar_linear) throw DomainError("tensor of maps with different linearity");
    return {kron(a.matrix, b.matrix), a.bar_linear, a.provenance + " (x) " + b.provenance};
}

/// Exact check of T(X v) = C(X) T(v) for every generator X and basis vector v.
inline CheckReport verify_compatibility(const Module& m, const TransportedMap& t, const MorphismSpec& s) {
    return timed_check("compatibility-" + s.name, [&](CheckReport& r) {
        if ((s.linearity == Linearity::bar_linear) != t.bar_linear) {
            r.fail("linearity of the map does not match the morphism");
            return;
        }
        for (std::size_t i = 0; i < m.rank(); ++i) {
            const std::pair<const char*, std::pair<Matrix, const OpExpr*>> gens[] = {
                {"E", {m.E(i), &s.e[i]}}, {"F", {m.F(i), &s.f[i]}}, {"K", {m.K(i), &s.k[i]}}};
            for (const auto& [label, pr] : gens) {
                const Matrix& X = pr.first;
                const Matrix lhs = t.matrix * (t.bar_linear ? X.bar() : X);
                const Matrix rhs = evaluate(m, *pr.second) * t.matrix;
                detail::compare_columns(r, std::string(label) + "_" + std::to_string(i + 1), lhs, rhs);
            }
        }
    });
}

/// Which generators span the module from the pins.
enum class Generation { lowering, raising };

/// The unique map compatible with the spec taking each pin's source to its
/// target: T(X_{i_1} ... X_{i_k} v0) = C(X_{i_1}) ... C(X_{i_k}) w0, solved on
/// a spanning set and verified afterwards.
inline TransportedMap transport(const Module& m, const MorphismSpec& s,
                                const std::vector<std::pair<Vector, Vector>>& pins,
                                Generation gen = Generation::lowering) {
    const std::size_t dim = m.dim();
    std::vector<Matrix> images;
    for (std::size_t i = 0; i < m.rank(); ++i) images.push_back(evaluate(m, gen == Generation::lowering ? s.f[i] : s.e[i]));
    std::vector<Vector> src, dst;
    EchelonBasis eb(dim);
    std::vector<std::size_t> queue;
    for (const auto& [v, w] : pins)
        if (eb.add(v)) {
            queue.push_back(src.size());
            src.push_back(v);
            dst.push_back(w);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t k = queue[head];
        for (std::size_t i = 0; i < m.rank(); ++i) {
            Vector v = (gen == Generation::lowering ? m.F(i) : m.E(i)) * src[k];
            if (is_zero(v) || !eb.add(v)) continue;
            queue.push_back(src.size());
            src.push_back(std::move(v));
            dst.push_back(images[i] * dst[k]);
        }
    }
    if (src.size() != dim)
        throw DomainError("pins generate a subspace of dimension " + std::to_string(src.size()) + " in a module of dimension " +
                          std::to_string(dim));
    const bool bl = s.linearity == Linearity::bar_linear;
    Matrix V = Matrix::from_columns(src, dim), W = Matrix::from_columns(dst, dim);
    TransportedMap t{W * inverse(bl ? V.bar() : V), bl, s.name};
    for (const auto& [v, w] : pins)
        if (t.apply(v) != w) throw ConsistencyError("transported " + s.name + " does not honor its pins");
    const auto rep = verify_compatibility(m, t, s);
    if (!rep.pass())
        throw ConsistencyError("transported " + s.name + " is not compatible with its morphism: " +
                               rep.counterexamples.front().where);
    return t;
}

/// A module with a chosen global basis, recorded through its components:
/// each component is generated by a highest-weight pin, and its global basis
/// is the image of V_nu's global basis under hw -> pin.
struct BasedModule {
    const QuantumGroup* group = nullptr;
    Module module;
    std::vector<std::pair<Weight, Vector>> pins;
    IsotypicDecomposition decomposition;

    const CartanDatum& cartan() const { return module.cartan(); }

    std::vector<Vector> component_global_basis(std::size_t k) const {
        const auto& comp = decomposition.components[k];
        std::vector<Vector> out;
        for (const auto& g : bases_of(*group, comp.nu).global) out.push_back(comp.embedding * g);
        return out;
    }
    Vector component_lowest(std::size_t k) const {
        const auto& comp = decomposition.components[k];
        const auto& b = bases_of(*group, comp.nu);
        return comp.embedding * b.global[b.lowest];
    }
    /// Union of the component global bases.
    std::vector<Vector> global_basis() const {
        std::vector<Vector> out;
        for (std::size_t k = 0; k < pins.size(); ++k)
            for (auto& v : component_global_basis(k)) out.push_back(std::move(v));
        return out;
    }
};

inline BasedModule make_based(const QuantumGroup& g, Module m, std::vector<std::pair<Weight, Vector>> pins) {
    BasedModule b{&g, std::move(m), std::move(pins), {}};
    b.decomposition = decompose_along(g, b.module, b.pins);
    for (const auto& [nu, h] : b.pins)
        for (std::size_t i = 0; i < b.module.rank(); ++i)
            if (!is_zero(b.module.E(i) * h)) throw ConsistencyError("pin of weight " + nu.str() + " is not highest weight");
    return b;
}

/// V_lambda with its global basis pinned at z * hw.
inline BasedModule based_irreducible(const QuantumGroup& g, const Weight& lambda,
                                     const FieldElement& z = FieldElement::one()) {
    const auto& irr = g.irreducible(lambda);
    return make_based(g, irr.module, {{lambda, z * irr.hw()}});
}

inline Exponent theta_exponent(const CartanDatum& c, const Weight& nu) {
    return -c.form(nu, nu) * Fraction(1, 2) + c.form(nu, c.rho());
}
inline Exponent j_exponent(const CartanDatum& c, const Weight& nu) {
    return c.form(nu, nu) * Fraction(1, 2) + c.form(nu, c.rho());
}

/// bar_{(V,B)}: compatible with C_bar and fixing every pin.
inline TransportedMap make_bar(const BasedModule& b) {
    std::vector<std::pair<Vector, Vector>> pins;
    for (const auto& [nu, h] : b.pins) pins.emplace_back(h, h);
    return transport(b.module, spec::bar(b.cartan()), pins);
}

/// Theta_{(V,B)}: pins h -> q^{-(nu,nu)/2 + (nu,rho)} h. With flip_sign the
/// exponent is negated (a deliberately wrong variant for negative controls).
inline TransportedMap make_theta(const BasedModule& b, bool flip_sign = false) {
    const auto& c = b.cartan();
    std::vector<std::pair<Vector, Vector>> pins;
    for (const auto& [nu, h] : b.pins) {
        const Exponent e = flip_sign ? -theta_exponent(c, nu) : theta_exponent(c, nu);
        pins.emplace_back(h, c.q(e) * h);
    }
    auto t = transport(b.module, spec::theta(c), pins);
    t.provenance = "theta";
    return t;
}

/// J: q^{(mu,mu)/2 + (mu,rho)} on the mu weight space.
inline TransportedMap make_J(const Module& m) {
    const auto& c = m.cartan();
    Matrix d(m.dim(), m.dim());
    for (std::size_t k = 0; k < m.dim(); ++k) d(k, k) = c.q(j_exponent(c, m.weight(k)));
    return {d, false, "J"};
}

/// J from C_J and the pin value on each component's highest weight vector.
inline TransportedMap make_J_transport(const BasedModule& b) {
    const auto& c = b.cartan();
    std::vector<std::pair<Vector, Vector>> pins;
    for (const auto& [nu, h] : b.pins) pins.emplace_back(h, c.q(j_exponent(c, nu)) * h);
    return transport(b.module, spec::j(c), pins);
}

/// K_{2H_rho}: q^{2(rho, mu)} on the mu weight space.
inline TransportedMap make_K2rho(const Module& m) {
    const auto& c = m.cartan();
    Matrix d(m.dim(), m.dim());
    for (std::size_t k = 0; k < m.dim(); ++k) d(k, k) = c.q(Fraction(2) * c.form(c.rho(), m.weight(k)));
    return {d, false, "K2rho"};
}

/// Gamma_{(V,B)}: compatible with C_Gamma, pins hw -> lowest global basis element.
inline TransportedMap make_gamma(const BasedModule& b) {
    std::vector<std::pair<Vector, Vector>> pins;
    for (std::size_t k = 0; k < b.pins.size(); ++k) pins.emplace_back(b.pins[k].second, b.component_lowest(k));
    auto t = transport(b.module, spec::gamma(b.cartan()), pins);
    t.provenance = "gamma";
    return t;
}

/// Rank-one symmetry operators. Variants 0,1: T'_{i,e} with e = +1,-1;
/// variants 2,3: T''_{i,e} with e = +1,-1. On a vector of weight mu with n = <H_i, mu>:
///   T'_{i,e}  v = sum_{a-b+c=n}  (-1)^b q_i^{e(b-ac)} F^{(a)} E^{(b)} F^{(c)} v
///   T''_{i,e} v = sum_{-a+b-c=n} (-1)^b q_i^{e(b-ac)} E^{(a)} F^{(b)} E^{(c)} v
inline Matrix braid_operator(const Module& m, std::size_t i, int variant) {
    const auto& c = m.cartan();
    const std::size_t dim = m.dim();
    const bool dprime = variant >= 2;
    const int e = (variant % 2 == 0) ? 1 : -1;
    std::int64_t top = 0;
    for (const auto& w : m.weights()) top = std::max<std::int64_t>(top, std::abs(w[i]));
    std::vector<Matrix> Ed, Fd;
    for (std::int64_t k = 0; k <= top; ++k) {
        Ed.push_back(divided_power(m, i, k, true));
        Fd.push_back(divided_power(m, i, k, false));
    }
    const auto& outer = dprime ? Ed : Fd;
    const auto& middle = dprime ? Fd : Ed;
    Matrix out(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const std::int64_t n = m.weight(col)[i];
        Vector v = unit_vector(dim, col);
        Vector acc(dim);
        for (std::int64_t cc = 0; cc <= top; ++cc) {
            const Vector v1 = outer[static_cast<std::size_t>(cc)] * v;
            if (is_zero(v1)) continue;
            for (std::int64_t b = 0; b <= top; ++b) {
                // a - b + c = n (T') or -a + b - c = n (T'')
                const std::int64_t a = dprime ? b - cc - n : n + b - cc;
                if (a < 0 || a > top) continue;
                const Vector v2 = middle[static_cast<std::size_t>(b)] * v1;
                if (is_zero(v2)) continue;
                const Vector v3 = outer[static_cast<std::size_t>(a)] * v2;
                if (is_zero(v3)) continue;
                const Exponent ex = Fraction(c.d(i) * e * (b - a * cc));
                const FieldElement coef = c.q(ex, (b % 2 == 0) ? 1 : -1);
                acc = acc + coef * v3;
            }
        }
        out.set_column(col, acc);
    }
    return out;
}

/// Product of braid operators along the reduced word of w0.
inline Matrix braid_product(const Module& m, int variant) {
    Matrix t = Matrix::identity(m.dim());
    for (auto i : m.cartan().longest_word()) t = t * braid_operator(m, i, variant);
    return t;
}

namespace detail {

// Scalar c with braid_product(V_nu)(lowest global element) = c * hw, or
// nullopt when the image is not a multiple of hw.
inline std::optional<FieldElement> braid_scale(const QuantumGroup& g, const Weight& nu, int variant) {
    const auto& irr = g.irreducible(nu);
    const auto& b = bases_of(g, nu);
    const Vector img = braid_product(irr.module, variant) * b.global[b.lowest];
    for (std::size_t k = 1; k < img.size(); ++k)
        if (!img[k].is_zero()) return std::nullopt;
    if (img[0].is_zero()) return std::nullopt;
    return img[0];
}

} // namespace detail

/// Braid-operator variant that, rescaled per component, is compatible with
/// C_{T_w0}; chosen once per datum by probing V_{omega_i} and V_{2 omega_i}
/// (a fundamental module alone can admit a wrong variant).
inline int calibrated_braid_variant(const QuantumGroup& g) {
    return g.memo<int>("braid-variant", [&] {
        const auto& c = g.cartan();
        for (int variant = 0; variant < 4; ++variant) {
            bool ok = true;
            std::vector<Weight> probes;
            for (std::size_t i = 0; i < c.rank(); ++i) {
                probes.push_back(c.fundamental(i));
                probes.push_back(2 * c.fundamental(i));
            }
            for (const auto& w : probes) {
                const auto& irr = g.irreducible(w);
                const auto s = detail::braid_scale(g, w, variant);
                if (!s) {
                    ok = false;
                    break;
                }
                const TransportedMap t{s->inverse() * braid_product(irr.module, variant), false, "tw0"};
                ok = verify_compatibility(irr.module, t, spec::tw0(c)).pass();
                if (!ok) break;
            }
            if (ok) return variant;
        }
        throw ConsistencyError("no braid-operator variant is compatible with C_Tw0 for " + c.label());
    });
}

enum class Tw0Method { braid_product, transport };

/// T_w0 with T_w0(b^low) = b_lambda on every component.
inline TransportedMap make_Tw0(const BasedModule& b, Tw0Method method) {
    const auto& g = *b.group;
    if (method == Tw0Method::transport) {
        std::vector<std::pair<Vector, Vector>> pins;
        for (std::size_t k = 0; k < b.pins.size(); ++k) pins.emplace_back(b.component_lowest(k), b.pins[k].second);
        auto t = transport(b.module, spec::tw0(b.cartan()), pins, Generation::raising);
        t.provenance = "tw0";
        return t;
    }
    const int variant = calibrated_braid_variant(g);
    const Matrix raw = braid_product(b.module, variant);
    // rescale each isotypic block by the inverse of its scalar
    std::map<Weight, bool> types;
    for (const auto& comp : b.decomposition.components) types[comp.nu] = true;
    Matrix out(b.module.dim(), b.module.dim());
    for (const auto& [nu, _] : types) {
        const auto s = g.memo<FieldElement>("braid-scale" + nu.str(), [&] {
            auto v = detail::braid_scale(g, nu, variant);
            if (!v) throw ConsistencyError("braid product does not map the lowest element to a multiple of hw");
            return *v;
        });
        out = out + s.inverse() * (raw * b.decomposition.projector(nu));
    }
    TransportedMap t{out, false, "tw0"};
    const auto rep = verify_compatibility(b.module, t, spec::tw0(b.cartan()));
    if (!rep.pass()) throw ConsistencyError("rescaled braid product is not compatible with C_Tw0");
    return t;
}

} // namespace uqr
