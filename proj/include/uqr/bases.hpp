#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqr/module.hpp"

namespace uqr {

/// Crystal graph: vertices with weights and partial maps e_i, f_i.
struct CrystalGraph {
    std::vector<Weight> weights;
    std::vector<std::vector<std::optional<std::size_t>>> f; // f[i][v]
    std::vector<std::vector<std::optional<std::size_t>>> e; // e[i][v]
    std::size_t highest = 0;

    std::size_t size() const { return weights.size(); }
    std::size_t rank() const { return f.size(); }

    std::int64_t epsilon(std::size_t i, std::size_t v) const {
        std::int64_t n = 0;
        for (auto x = e[i][v]; x; x = e[i][*x]) ++n;
        return n;
    }
    std::int64_t phi(std::size_t i, std::size_t v) const {
        std::int64_t n = 0;
        for (auto x = f[i][v]; x; x = f[i][*x]) ++n;
        return n;
    }
    std::vector<std::size_t> highest_weight_vertices() const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < size(); ++v) {
            bool top = true;
            for (std::size_t i = 0; i < rank(); ++i) top = top && !e[i][v];
            if (top) out.push_back(v);
        }
        return out;
    }
};

/// Checks the crystal axioms: e_i b = b' iff f_i b' = b, weight shifts on
/// edges, and phi - epsilon = <H_i, wt>.
inline CheckReport check_crystal_axioms(const CartanDatum& c, const CrystalGraph& g) {
    return timed_check("crystal-axioms", [&](CheckReport& r) {
        for (std::size_t i = 0; i < g.rank(); ++i)
            for (std::size_t v = 0; v < g.size(); ++v) {
                const std::string at = "node " + std::to_string(i + 1) + " vertex " + std::to_string(v);
                if (auto w = g.f[i][v]) {
                    if (g.e[i][*w] != v) r.fail(at + ": e_i f_i b != b");
                    if (g.weights[*w] != g.weights[v] - c.simple_root(i)) r.fail(at + ": f_i breaks weight");
                }
                if (auto w = g.e[i][v]) {
                    if (g.f[i][*w] != v) r.fail(at + ": f_i e_i b != b");
                    if (g.weights[*w] != g.weights[v] + c.simple_root(i)) r.fail(at + ": e_i breaks weight");
                }
                if (g.phi(i, v) - g.epsilon(i, v) != g.weights[v][i]) r.fail(at + ": phi - epsilon != <H_i, wt>");
            }
    });
}

namespace detail {

// A_infinity-basis of the A_infinity-span of gens (column echelon over the
// valuation ring, pivoting on the entry with the most negative order).
inline std::vector<Vector> ainf_basis(std::vector<Vector> gens) {
    std::vector<Vector> basis;
    gens.erase(std::remove_if(gens.begin(), gens.end(), [](const Vector& v) { return is_zero(v); }), gens.end());
    while (!gens.empty()) {
        std::size_t bg = 0, br = 0;
        std::optional<std::int64_t> best;
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (std::size_t r = 0; r < gens[g].size(); ++r) {
                if (gens[g][r].is_zero()) continue;
                const auto o = gens[g][r].order_at_infinity();
                if (!best || o < *best) {
                    best = o;
                    bg = g;
                    br = r;
                }
            }
        Vector piv = std::move(gens[bg]);
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(bg));
        const FieldElement pinv = piv[br].inverse();
        for (auto& h : gens)
            if (!h[br].is_zero()) h = h - (h[br] * pinv) * piv;
        gens.erase(std::remove_if(gens.begin(), gens.end(), [](const Vector& v) { return is_zero(v); }), gens.end());
        basis.push_back(std::move(piv));
    }
    return basis;
}

// Residue at q = infinity of coordinates that must be regular there.
inline std::optional<std::vector<Rational>> residues(const Vector& coords) {
    std::vector<Rational> out(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (!coords[k].regular_at_infinity()) return std::nullopt;
        out[k] = coords[k].residue_at_infinity();
    }
    return out;
}

inline std::optional<std::size_t> unit_position(const std::vector<Rational>& r, bool& is_unit) {
    std::optional<std::size_t> pos;
    is_unit = true;
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] == 0) continue;
        if (pos || r[k] != 1) is_unit = false;
        pos = k;
    }
    if (!pos) is_unit = true;
    return is_unit ? pos : std::nullopt;
}

inline Vector restrict_to(const Vector& v, const std::vector<std::size_t>& idx) {
    Vector out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
    return out;
}

} // namespace detail

/// Crystal lattice, crystal graph and global basis of one V_lambda.
struct IrreducibleBases {
    CrystalGraph crystal;
    std::vector<Vector> lattice;          // l_b: an A_infinity-basis whose residues are the vertices
    Matrix lattice_inv;                   // coordinates with respect to {l_b}
    std::vector<Vector> global;           // G(b) in module coordinates
    std::vector<std::size_t> vertex_of;   // vertex -> column position within its weight space
    std::size_t lowest = 0;
    std::vector<KashiwaraPair> kashiwara; // per node, on the module
};

/// Crystal basis of V_lambda: L_mu is the A_infinity-span of Ftilde_i L_{mu+alpha_i},
/// vertices are the distinct nonzero residues of those generators.
inline void build_crystal(const Irreducible& irr, IrreducibleBases& out) {
    const Module& m = irr.module;
    const auto& c = m.cartan();
    const std::size_t n = c.rank(), dim = m.dim();
    for (std::size_t i = 0; i < n; ++i) out.kashiwara.push_back(kashiwara_operators(m, i));
    auto& cr = out.crystal;
    cr.f.assign(n, {});
    cr.e.assign(n, {});
    std::map<Weight, std::vector<std::size_t>> vertices_at;
    std::vector<Vector> reps;
    auto add_vertex = [&](const Weight& w, Vector rep) {
        const std::size_t v = cr.weights.size();
        cr.weights.push_back(w);
        reps.push_back(std::move(rep));
        vertices_at[w].push_back(v);
        for (std::size_t i = 0; i < n; ++i) {
            cr.f[i].emplace_back();
            cr.e[i].emplace_back();
        }
        return v;
    };
    cr.highest = add_vertex(irr.lambda, irr.hw());
    std::map<Weight, Matrix> coord_map; // weight -> inverse of [l_b] restricted to the weight space
    {
        Matrix one(1, 1);
        one(0, 0) = FieldElement::one();
        coord_map[irr.lambda] = one;
    }
    for (const auto& mu : m.weights_by_height()) {
        if (mu == irr.lambda) continue;
        const auto& idx = m.space(mu);
        struct Gen {
            std::size_t node, parent;
            Vector full;
        };
        std::vector<Gen> gens;
        for (std::size_t i = 0; i < n; ++i)
            for (auto b : vertices_at[mu + c.simple_root(i)])
                gens.push_back({i, b, out.kashiwara[i].Ftilde * reps[b]});
        std::vector<Vector> local;
        for (const auto& g : gens) local.push_back(detail::restrict_to(g.full, idx));
        const auto basis = detail::ainf_basis(local);
        if (basis.size() != idx.size())
            throw ConsistencyError("lattice at weight " + mu.str() + " has rank " + std::to_string(basis.size()) +
                                   ", expected " + std::to_string(idx.size()));
        const Matrix binv = inverse(Matrix::from_columns(basis, idx.size()));
        std::vector<std::vector<Rational>> seen;
        std::vector<std::size_t> seen_vertex;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            auto res = detail::residues(binv * local[k]);
            if (!res) throw ConsistencyError("Ftilde leaves the crystal lattice at weight " + mu.str());
            if (std::all_of(res->begin(), res->end(), [](const Rational& x) { return x == 0; })) continue;
            auto it = std::find(seen.begin(), seen.end(), *res);
            std::size_t v;
            if (it == seen.end()) {
                v = add_vertex(mu, gens[k].full);
                seen.push_back(*res);
                seen_vertex.push_back(v);
            } else {
                v = seen_vertex[static_cast<std::size_t>(it - seen.begin())];
            }
            if (cr.f[gens[k].node][gens[k].parent])
                throw ConsistencyError("two f-images for one vertex");
            cr.f[gens[k].node][gens[k].parent] = v;
        }
        if (seen.size() != idx.size())
            throw ConsistencyError("weight " + mu.str() + " has " + std::to_string(seen.size()) +
                                   " crystal vertices, expected " + std::to_string(idx.size()));
        std::vector<Vector> lb;
        for (auto v : vertices_at[mu]) lb.push_back(detail::restrict_to(reps[v], idx));
        coord_map[mu] = inverse(Matrix::from_columns(lb, idx.size()));
    }
    // e-edges from residues of Etilde
    for (std::size_t v = 0; v < cr.size(); ++v)
        for (std::size_t i = 0; i < n; ++i) {
            const Weight up = cr.weights[v] + c.simple_root(i);
            if (m.space(up).empty()) continue;
            const Vector x = out.kashiwara[i].Etilde * reps[v];
            auto res = detail::residues(coord_map[up] * detail::restrict_to(x, m.space(up)));
            if (!res) throw ConsistencyError("Etilde leaves the crystal lattice at vertex " + std::to_string(v));
            bool unit = false;
            auto pos = detail::unit_position(*res, unit);
            if (!unit) throw ConsistencyError("Etilde residue is not a crystal vertex at " + std::to_string(v));
            if (pos) cr.e[i][v] = vertices_at[up][*pos];
        }
    // f-edges must also be unit residues in the l_b coordinates
    for (std::size_t v = 0; v < cr.size(); ++v)
        for (std::size_t i = 0; i < n; ++i) {
            const Weight down = cr.weights[v] - c.simple_root(i);
            if (m.space(down).empty()) continue;
            const Vector x = out.kashiwara[i].Ftilde * reps[v];
            auto res = detail::residues(coord_map[down] * detail::restrict_to(x, m.space(down)));
            bool unit = false;
            auto pos = res ? detail::unit_position(*res, unit) : std::nullopt;
            if (!res || !unit) throw ConsistencyError("Ftilde residue is not a crystal vertex at " + std::to_string(v));
            const std::optional<std::size_t> want = pos ? std::optional<std::size_t>(vertices_at[down][*pos]) : std::nullopt;
            if (want != cr.f[i][v]) throw ConsistencyError("f-edge disagrees with residue at vertex " + std::to_string(v));
        }
    out.lattice = reps;
    // full coordinate map: block diagonal over weight spaces
    Matrix linv(dim, dim);
    out.vertex_of.assign(cr.size(), 0);
    std::vector<std::size_t> order; // vertex occupying each lattice column
    for (const auto& [mu, idx] : m.spaces()) {
        const auto& vs = vertices_at[mu];
        const Matrix& cm = coord_map[mu];
        for (std::size_t a = 0; a < vs.size(); ++a) {
            out.vertex_of[vs[a]] = a;
            for (std::size_t b = 0; b < idx.size(); ++b) linv(vs[a], idx[b]) = cm(a, b);
        }
    }
    out.lattice_inv = std::move(linv);
    const Weight low = c.apply_w0(irr.lambda);
    out.lowest = vertices_at[low].at(0);
}

/// Global basis: per weight, per node i, vertices with eps_i(b) > 0 in
/// decreasing eps_i; X = F_i^{(a)} G(e_i^a b) is bar-invariant and equals
/// G(b) plus bar-invariant Laurent multiples of finished elements, which are
/// read off from the polar parts of X's coordinates.
inline void build_global_basis(const Irreducible& irr, IrreducibleBases& out) {
    const Module& m = irr.module;
    const auto& c = m.cartan();
    const auto& cr = out.crystal;
    const std::size_t n = c.rank();
    out.global.assign(cr.size(), Vector());
    std::vector<bool> done(cr.size(), false);
    out.global[cr.highest] = irr.hw();
    done[cr.highest] = true;
    std::map<Weight, std::vector<std::size_t>> at;
    for (std::size_t v = 0; v < cr.size(); ++v) at[cr.weights[v]].push_back(v);
    auto lcoords = [&](const Vector& x) { return out.lattice_inv * x; };
    for (const auto& mu : m.weights_by_height()) {
        if (mu == irr.lambda) continue;
        std::vector<std::size_t> finished;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> cand;
            for (auto v : at[mu])
                if (!done[v] && cr.epsilon(i, v) > 0) cand.push_back(v);
            std::stable_sort(cand.begin(), cand.end(),
                             [&](std::size_t a, std::size_t b) { return cr.epsilon(i, a) > cr.epsilon(i, b); });
            for (auto b : cand) {
                const std::int64_t a = cr.epsilon(i, b);
                std::size_t top = b;
                for (std::int64_t k = 0; k < a; ++k) top = *cr.e[i][top];
                Vector X = divided_power_apply(m, i, a, out.global[top]);
                if (!finished.empty()) {
                    const Vector x = lcoords(X);
                    const std::size_t s = finished.size();
                    Matrix ps(s, s);
                    Vector xs(s);
                    std::vector<Vector> gcoords;
                    for (std::size_t k = 0; k < s; ++k) gcoords.push_back(lcoords(out.global[finished[k]]));
                    for (std::size_t r = 0; r < s; ++r) {
                        xs[r] = x[finished[r]];
                        for (std::size_t k = 0; k < s; ++k) ps(r, k) = gcoords[k][finished[r]];
                    }
                    const Vector z = inverse(ps) * xs;
                    for (std::size_t k = 0; k < s; ++k) {
                        if (z[k].is_zero()) continue;
                        const auto polar = z[k].polar_part();
                        if (polar.is_zero()) continue;
                        const FieldElement coef = symmetric_completion(polar, z[k].root_order());
                        X = X - coef * out.global[finished[k]];
                    }
                }
                auto res = detail::residues(lcoords(X));
                bool ok = res.has_value();
                if (ok)
                    for (std::size_t v = 0; v < cr.size(); ++v)
                        if ((*res)[v] != (v == b ? 1 : 0)) ok = false;
                if (!ok)
                    throw ConsistencyError("global basis element for vertex " + std::to_string(b) + " of weight " +
                                           mu.str() + " is not congruent to its crystal vertex");
                out.global[b] = std::move(X);
                done[b] = true;
                finished.push_back(b);
            }
        }
        for (auto v : at[mu])
            if (!done[v]) throw ConsistencyError("vertex " + std::to_string(v) + " was never reached");
    }
}

inline IrreducibleBases compute_bases(const Irreducible& irr) {
    IrreducibleBases out;
    build_crystal(irr, out);
    build_global_basis(irr, out);
    return out;
}

inline const IrreducibleBases& bases_of(const QuantumGroup& g, const Weight& lambda) {
    return g.memo<IrreducibleBases>("bases" + lambda.str(), [&] { return compute_bases(g.irreducible(lambda)); });
}

/// Global basis of V_lambda pinned at an arbitrary highest-weight vector z*hw.
inline std::vector<Vector> global_basis_scaled(const QuantumGroup& g, const Weight& lambda, const FieldElement& z) {
    std::vector<Vector> out;
    for (const auto& v : bases_of(g, lambda).global) out.push_back(z * v);
    return out;
}

/// Certification of a global basis: bar-fixedness (coefficient-wise, as the
/// module basis consists of F-words on hw), basis property, and residues
/// matching the crystal including every edge.
inline CheckReport certify_global_basis(const Irreducible& irr, const IrreducibleBases& b) {
    return timed_check("global-basis", [&](CheckReport& r) {
        const Module& m = irr.module;
        const std::size_t dim = m.dim();
        for (std::size_t v = 0; v < b.global.size(); ++v) {
            if (bar(b.global[v]) != b.global[v]) r.fail("element " + std::to_string(v) + " is not bar-invariant", b.global[v], bar(b.global[v]));
            if (!m.weight_of(b.global[v]) || *m.weight_of(b.global[v]) != b.crystal.weights[v])
                r.fail("element " + std::to_string(v) + " is not a weight vector of the vertex weight");
        }
        if (!try_inverse(Matrix::from_columns(b.global, dim))) r.fail("elements are not a basis");
        std::vector<std::vector<Rational>> res;
        for (std::size_t v = 0; v < b.global.size(); ++v) {
            auto x = detail::residues(b.lattice_inv * b.global[v]);
            if (!x) {
                r.fail("element " + std::to_string(v) + " is outside the crystal lattice");
                return;
            }
            for (std::size_t k = 0; k < dim; ++k)
                if ((*x)[k] != (k == v ? 1 : 0)) r.fail("element " + std::to_string(v) + " has the wrong residue");
        }
        // residue-edge agreement: Ftilde G(b) = G(f b) mod q^{-1}L, likewise Etilde
        for (std::size_t i = 0; i < b.crystal.rank(); ++i)
            for (std::size_t v = 0; v < b.global.size(); ++v)
                for (int which = 0; which < 2; ++which) {
                    const Matrix& op = which == 0 ? b.kashiwara[i].Ftilde : b.kashiwara[i].Etilde;
                    const auto target = which == 0 ? b.crystal.f[i][v] : b.crystal.e[i][v];
                    auto x = detail::residues(b.lattice_inv * (op * b.global[v]));
                    bool good = x.has_value();
                    if (good)
                        for (std::size_t k = 0; k < dim; ++k)
                            if ((*x)[k] != ((target && *target == k) ? 1 : 0)) good = false;
                    if (!good)
                        r.fail(std::string(which == 0 ? "Ftilde_" : "Etilde_") + std::to_string(i + 1) +
                               " residue disagrees with the crystal at vertex " + std::to_string(v));
                }
    });
}

/// Which factor the signature rule acts on first.
enum class TensorRule {
    /// f_i(a (x) b) = f_i a (x) b if phi_i(a) > eps_i(b), else a (x) f_i b.
    left_first,
    /// The mirror image: the rule above applied to b (x) a.
    right_first,
};

inline const char* rule_name(TensorRule r) { return r == TensorRule::left_first ? "left-first" : "right-first"; }

/// Tensor product of crystals; vertex (a, b) has index a * |B| + b.
inline CrystalGraph tensor_crystal(const CrystalGraph& A, const CrystalGraph& B, TensorRule rule,
                                   const CartanDatum& c) {
    CrystalGraph t;
    const std::size_t n = A.rank(), nb = B.size();
    t.f.assign(n, std::vector<std::optional<std::size_t>>(A.size() * nb));
    t.e.assign(n, std::vector<std::optional<std::size_t>>(A.size() * nb));
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = 0; b < nb; ++b) t.weights.push_back(A.weights[a] + B.weights[b]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < A.size(); ++a)
            for (std::size_t b = 0; b < nb; ++b) {
                const std::size_t v = a * nb + b;
                const auto pa = A.phi(i, a), ea = A.epsilon(i, a), pb = B.phi(i, b), eb = B.epsilon(i, b);
                bool f_left, e_left;
                if (rule == TensorRule::left_first) {
                    f_left = pa > eb;
                    e_left = pa >= eb;
                } else {
                    f_left = !(pb > ea);
                    e_left = !(pb >= ea);
                }
                if (f_left) {
                    if (auto x = A.f[i][a]) t.f[i][v] = *x * nb + b;
                } else if (auto x = B.f[i][b]) {
                    t.f[i][v] = a * nb + *x;
                }
                if (e_left) {
                    if (auto x = A.e[i][a]) t.e[i][v] = *x * nb + b;
                } else if (auto x = B.e[i][b]) {
                    t.e[i][v] = a * nb + *x;
                }
            }
    (void)c;
    t.highest = 0;
    return t;
}

/// V_lambda (x) V_mu with its isotypic decomposition, cached per pair.
struct TensorPair {
    Weight lambda, mu;
    Module module;
    IsotypicDecomposition iso;
};

inline const TensorPair& tensor_pair(const QuantumGroup& g, const Weight& lambda, const Weight& mu) {
    return g.memo<TensorPair>("pair" + lambda.str() + mu.str(), [&] {
        TensorPair p{lambda, mu, tensor(g.irreducible(lambda).module, g.irreducible(mu).module), {}};
        p.iso = isotypic_decomposition(g, p.module);
        return p;
    });
}

/// Compares the signature rule with residues of the algebraic Kashiwara
/// operators on V_lambda (x) V_mu, using the lattice L_lambda (x) L_mu.
inline CheckReport crystal_crossval(const QuantumGroup& g, const Weight& lambda, const Weight& mu, TensorRule rule) {
    return timed_check("crystal-crossval" + lambda.str() + mu.str(), [&](CheckReport& r) {
        const auto& c = g.cartan();
        const auto& ba = bases_of(g, lambda);
        const auto& bb = bases_of(g, mu);
        const auto& pair = tensor_pair(g, lambda, mu);
        const CrystalGraph t = tensor_crystal(ba.crystal, bb.crystal, rule, c);
        const Matrix coords = kron(ba.lattice_inv, bb.lattice_inv);
        const std::size_t nb = bb.crystal.size();
        for (std::size_t i = 0; i < c.rank(); ++i) {
            const auto k = kashiwara_operators(pair.module, i);
            for (std::size_t a = 0; a < ba.crystal.size(); ++a)
                for (std::size_t b = 0; b < nb; ++b) {
                    const Vector v = kron(ba.lattice[a], bb.lattice[b]);
                    for (int which = 0; which < 2; ++which) {
                        const Vector img = (which == 0 ? k.Ftilde : k.Etilde) * v;
                        auto res = detail::residues(coords * img);
                        const auto want = which == 0 ? t.f[i][a * nb + b] : t.e[i][a * nb + b];
                        bool good = res.has_value();
                        if (good)
                            for (std::size_t x = 0; x < res->size(); ++x)
                                if ((*res)[x] != ((want && *want == x) ? 1 : 0)) good = false;
                        if (!good) {
                            r.fail(std::string(which == 0 ? "f_" : "e_") + std::to_string(i + 1) + " on (" +
                                   std::to_string(a) + "," + std::to_string(b) + ")");
                            if (r.counterexamples.size() > 8) return;
                        }
                    }
                }
        }
    });
}

/// Signature-rule orientation matching this coproduct, found once per datum
/// by comparing both rules against algebraic residues on V_{omega_i} (x) V_{omega_i}.
inline TensorRule calibrated_rule(const QuantumGroup& g) {
    return g.memo<TensorRule>("tensor-rule", [&] {
        const auto& c = g.cartan();
        std::vector<TensorRule> ok;
        for (auto rule : {TensorRule::left_first, TensorRule::right_first}) {
            bool all = true;
            for (std::size_t i = 0; i < c.rank() && all; ++i)
                all = crystal_crossval(g, c.fundamental(i), c.fundamental(i), rule).pass();
            if (all) ok.push_back(rule);
        }
        if (ok.empty()) throw ConsistencyError("neither signature-rule orientation matches the algebra");
        return ok.front();
    });
}

/// S^nu_{lambda,mu}: vertices b of B(mu) with wt b = nu - lambda such that
/// b_lambda (x) b is highest weight in the tensor crystal. Cross-checked by
/// projecting b_lambda (x) G(b) onto the nu-isotypic component.
inline std::vector<std::size_t> highest_weight_set(const QuantumGroup& g, const Weight& lambda, const Weight& mu,
                                                   const Weight& nu, bool cross_check = true) {
    const auto& c = g.cartan();
    const auto& ba = bases_of(g, lambda);
    const auto& bb = bases_of(g, mu);
    const CrystalGraph t = tensor_crystal(ba.crystal, bb.crystal, calibrated_rule(g), c);
    const std::size_t nb = bb.crystal.size();
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < nb; ++b) {
        if (bb.crystal.weights[b] != nu - lambda) continue;
        const std::size_t v = ba.crystal.highest * nb + b;
        bool top = true;
        for (std::size_t i = 0; i < c.rank(); ++i) top = top && !t.e[i][v];
        if (top) out.push_back(b);
    }
    if (cross_check) {
        const auto& pair = tensor_pair(g, lambda, mu);
        for (auto b : out) {
            const Vector v = kron(ba.global[ba.crystal.highest], bb.global[b]);
            if (is_zero(pair.iso.project(v, nu)))
                throw ConsistencyError("b_lambda (x) G(" + std::to_string(b) + ") has no " + nu.str() + " component");
        }
        const auto mult = pair.iso.multiplicities();
        const auto it = mult.find(nu);
        if ((it == mult.end() ? 0 : it->second) != out.size())
            throw ConsistencyError("|S^nu| disagrees with the isotypic multiplicity at " + nu.str());
    }
    return out;
}

} // namespace uqr
