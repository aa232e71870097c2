#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "uqr/bases.hpp"
#include "uqr/sysmorph.hpp"

namespace uqr {

/// Highest-weight pin of the tensor global basis on V_kappa (x) V_tau:
/// the nu-isotypic projection of b_kappa (x) G(b).
struct TensorPin {
    Weight nu;
    std::size_t b; // vertex of B(tau)
    Vector h;
};

inline const std::vector<TensorPin>& tensor_pinning(const QuantumGroup& g, const Weight& kappa, const Weight& tau) {
    return g.memo<std::vector<TensorPin>>("pins" + kappa.str() + tau.str(), [&] {
        const auto& pair = tensor_pair(g, kappa, tau);
        const auto& ba = bases_of(g, kappa);
        const auto& bb = bases_of(g, tau);
        std::vector<TensorPin> out;
        for (const auto& [nu, mult] : pair.iso.multiplicities()) {
            for (auto b : highest_weight_set(g, kappa, tau, nu)) {
                Vector h = pair.iso.project(kron(ba.global[ba.crystal.highest], bb.global[b]), nu);
                if (is_zero(h)) throw ConsistencyError("zero tensor pin at " + nu.str());
                for (std::size_t i = 0; i < g.cartan().rank(); ++i)
                    if (!is_zero(pair.module.E(i) * h))
                        throw ConsistencyError("tensor pin at " + nu.str() + " is not highest weight");
                out.push_back({nu, b, std::move(h)});
            }
            (void)mult;
        }
        return out;
    });
}

/// X (x) Y with its tensor global basis, recorded through hw pins. For
/// reducible factors the pins of every pair of components are transported
/// along the component embeddings.
inline BasedModule based_tensor(const BasedModule& X, const BasedModule& Y) {
    const auto& g = *X.group;
    std::vector<std::pair<Weight, Vector>> pins;
    for (const auto& a : X.decomposition.components)
        for (const auto& c : Y.decomposition.components) {
            const Matrix emb = kron(a.embedding, c.embedding);
            for (const auto& p : tensor_pinning(g, a.nu, c.nu)) pins.emplace_back(p.nu, emb * p.h);
        }
    return make_based(g, tensor(X.module, Y.module), std::move(pins));
}

/// Action of Delta^op(X) for the generators, in the left-major basis of V (x) W.
inline Matrix coproduct_op(const Module& v, const Module& w, char gen, std::size_t i) {
    const Matrix Iv = Matrix::identity(v.dim()), Iw = Matrix::identity(w.dim());
    switch (gen) {
    case 'E': return kron(v.E(i), Iw) + kron(v.K(i), w.E(i));
    case 'F': return kron(v.F(i), w.K(i, -1)) + kron(Iv, w.F(i));
    default: return kron(v.K(i), w.K(i));
    }
}

/// v (x) w -> q^{(wt v, wt w)} v (x) w
inline Matrix weight_prefactor(const Module& v, const Module& w) {
    const auto& c = v.cartan();
    Matrix d(v.dim() * w.dim(), v.dim() * w.dim());
    for (std::size_t a = 0; a < v.dim(); ++a)
        for (std::size_t b = 0; b < w.dim(); ++b) d(a * w.dim() + b, a * w.dim() + b) = c.q(c.form(v.weight(a), w.weight(b)));
    return d;
}

/// (Theta_X^{-1} (x) Theta_Y^{-1}) o Theta_{X (x) Y}
inline Matrix r_theta(const BasedModule& X, const BasedModule& Y, bool flip_theta_sign = false) {
    const BasedModule XY = based_tensor(X, Y);
    const auto t = compose(inverse(tensor(make_theta(X, flip_theta_sign), make_theta(Y, flip_theta_sign))),
                           make_theta(XY, flip_theta_sign));
    if (t.bar_linear) throw ConsistencyError("r_theta is not q-linear");
    return t.matrix;
}

/// Pi o (T_X^{-1} (x) T_Y^{-1}) o T_{X (x) Y} with Pi the weight prefactor.
inline Matrix r_krls(const BasedModule& X, const BasedModule& Y, Tw0Method method) {
    const BasedModule XY = based_tensor(X, Y);
    const auto t = compose(inverse(tensor(make_Tw0(X, method), make_Tw0(Y, method))), make_Tw0(XY, method));
    return weight_prefactor(X.module, Y.module) * t.matrix;
}

struct OracleResult {
    Matrix matrix;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
};

/// The operator R = Pi + N on V (x) W with R Delta(X) = Delta^op(X) R for all
/// generators, N supported on pairs whose left-factor weight rises strictly
/// in dominance. Throws unless the solution is unique.
inline OracleResult r_oracle_detail(const Module& v, const Module& w) {
    const auto& c = v.cartan();
    const std::size_t n = v.dim() * w.dim(), wd = w.dim();
    const Matrix Pi = weight_prefactor(v, w);
    auto left = [&](std::size_t k) { return v.weight(k / wd); };
    auto total = [&](std::size_t k) { return v.weight(k / wd) + w.weight(k % wd); };
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> unk;
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t col = 0; col < n; ++col)
            if (r != col && total(r) == total(col) && left(r) != left(col) && c.dominance_leq(left(col), left(r))) {
                unk[{r, col}] = pos.size();
                pos.push_back({r, col});
            }
    const Module vw = tensor(v, w);
    using Row = std::vector<std::pair<std::size_t, FieldElement>>;
    std::vector<Row> rows;
    std::vector<FieldElement> rhs;
    for (std::size_t i = 0; i < c.rank(); ++i)
        for (char gen : {'E', 'F'}) {
            const Matrix D = gen == 'E' ? vw.E(i) : vw.F(i);
            const Matrix Dop = coproduct_op(v, w, gen, i);
            // Dop N - N D = Pi D - Dop Pi
            const Matrix b = Pi * D - Dop * Pi;
            std::map<std::pair<std::size_t, std::size_t>, Row> eq;
            for (std::size_t u = 0; u < pos.size(); ++u) {
                const auto [k, col] = pos[u];
                for (std::size_t r = 0; r < n; ++r)
                    if (!Dop(r, k).is_zero()) eq[{r, col}].push_back({u, Dop(r, k)});
                for (std::size_t col2 = 0; col2 < n; ++col2)
                    if (!D(col, col2).is_zero()) eq[{k, col2}].push_back({u, -D(col, col2)});
            }
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t col = 0; col < n; ++col)
                    if (!b(r, col).is_zero()) eq[{r, col}];
            for (auto& [rc, row] : eq) {
                rows.push_back(std::move(row));
                rhs.push_back(b(rc.first, rc.second));
            }
        }
    OracleResult out{Pi, pos.size(), rows.size()};
    const auto sol = solve_sparse_system(std::move(rows), std::move(rhs), pos.size());
    if (!sol.consistent) throw ConsistencyError("triangular R system is inconsistent");
    if (sol.free_dims != 0)
        throw ConsistencyError("triangular R system has " + std::to_string(sol.free_dims) + " free dimensions");
    for (std::size_t u = 0; u < pos.size(); ++u) out.matrix(pos[u].first, pos[u].second) = (*sol.solution)[u];
    return out;
}

inline Matrix r_oracle(const Module& v, const Module& w) { return r_oracle_detail(v, w).matrix; }

enum class Fault { none, theta_sign, scale_block, wrong_flip, identity_system };

inline const char* fault_name(Fault f) {
    switch (f) {
    case Fault::none: return "none";
    case Fault::theta_sign: return "theta-sign";
    case Fault::scale_block: return "scale-block";
    case Fault::wrong_flip: return "wrong-flip";
    case Fault::identity_system: return "identity-system";
    }
    return "?";
}

inline std::optional<Fault> parse_fault(const std::string& s) {
    for (auto f : {Fault::none, Fault::theta_sign, Fault::scale_block, Fault::wrong_flip, Fault::identity_system})
        if (s == fault_name(f)) return f;
    return std::nullopt;
}

/// sigma_{X,Y}: X (x) Y -> Y (x) X, normally Flip o R. Faults replace it by a
/// deliberately wrong map for negative controls.
inline Matrix braiding(const BasedModule& X, const BasedModule& Y, Fault fault = Fault::none) {
    const Matrix flip = flip_matrix(X.module.dim(), Y.module.dim());
    switch (fault) {
    case Fault::none: return flip * r_theta(X, Y);
    case Fault::theta_sign: return flip * r_theta(X, Y, true);
    case Fault::scale_block: {
        const BasedModule XY = based_tensor(X, Y);
        const Matrix P = XY.decomposition.projector(XY.pins.front().first);
        const FieldElement q = X.cartan().q(Fraction(1));
        return flip * r_theta(X, Y) * (Matrix::identity(P.rows()) + (q - FieldElement::one()) * P);
    }
    case Fault::wrong_flip: return r_theta(Y, X) * flip;
    case Fault::identity_system: return flip;
    }
    return flip;
}

/// M Delta_src(X) = Delta_dst(X) M for every generator.
inline CheckReport check_intertwiner(const std::string& name, const Matrix& M, const Module& src, const Module& dst) {
    return timed_check(name, [&](CheckReport& r) {
        for (std::size_t i = 0; i < src.rank(); ++i) {
            const std::string s = std::to_string(i + 1);
            detail::compare_columns(r, "E_" + s, M * src.E(i), dst.E(i) * M);
            detail::compare_columns(r, "F_" + s, M * src.F(i), dst.F(i) * M);
            detail::compare_columns(r, "K_" + s, M * src.K(i), dst.K(i) * M);
        }
    });
}

enum class System { theta, gamma, identity };

/// The commutor of a system of transported maps: Flip o (xi_V^{-1} (x) xi_W^{-1}) o xi_{V (x) W}
/// for coalgebra anti-automorphisms, without the Flip for automorphisms.
/// Throws unless the result intertwines the module actions.
inline Matrix build_commutor(System sys, const BasedModule& X, const BasedModule& Y) {
    const BasedModule XY = based_tensor(X, Y);
    const Matrix flip = flip_matrix(X.module.dim(), Y.module.dim());
    const Module YX = tensor(Y.module, X.module);
    Matrix out;
    bool flips = true;
    switch (sys) {
    case System::theta:
        out = flip * compose(inverse(tensor(make_theta(X), make_theta(Y))), make_theta(XY)).matrix;
        break;
    case System::gamma:
        out = compose(inverse(tensor(make_gamma(X), make_gamma(Y))), make_gamma(XY)).matrix;
        flips = false;
        break;
    case System::identity: out = flip; break;
    }
    const auto rep = check_intertwiner("commutor", out, XY.module, flips ? YX : XY.module);
    if (!rep.pass()) throw ConsistencyError("commutor is not a module map: " + rep.counterexamples.front().where);
    return out;
}

using BraidingFn = std::function<Matrix(const BasedModule&, const BasedModule&)>;

inline BraidingFn braiding_fn(Fault fault = Fault::none) {
    return [fault](const BasedModule& a, const BasedModule& b) { return braiding(a, b, fault); };
}

/// Both cabling equalities for sigma on U, V, W, with the tensor-object
/// sides built from the tensor global basis.
inline CheckReport check_hexagon(const BasedModule& U, const BasedModule& V, const BasedModule& W,
                                 const BraidingFn& sigma = braiding_fn()) {
    return timed_check("hexagon", [&](CheckReport& r) {
        const std::size_t u = U.module.dim(), v = V.module.dim(), w = W.module.dim();
        const Matrix Iu = Matrix::identity(u), Iv = Matrix::identity(v), Iw = Matrix::identity(w);
        const Matrix sUW = sigma(U, W), sVW = sigma(V, W), sUV = sigma(U, V);
        const Matrix lhs1 = kron(sUW, Iv) * kron(Iu, sVW);
        const Matrix rhs1 = sigma(based_tensor(U, V), W);
        detail::compare_columns(r, "sigma_{U(x)V,W}", lhs1, rhs1);
        const Matrix lhs2 = kron(Iv, sUW) * kron(sUV, Iw);
        const Matrix rhs2 = sigma(U, based_tensor(V, W));
        detail::compare_columns(r, "sigma_{U,V(x)W}", lhs2, rhs2);
    });
}

/// Braid relation for sigma on V (x) V (x) V, together with the module-map
/// property of sigma itself.
inline CheckReport check_ybe(const BasedModule& V, const BraidingFn& sigma = braiding_fn()) {
    return timed_check("ybe", [&](CheckReport& r) {
        const Matrix s = sigma(V, V);
        const Matrix I = Matrix::identity(V.module.dim());
        const Matrix s1 = kron(s, I), s2 = kron(I, s);
        detail::compare_columns(r, "braid relation", s1 * s2 * s1, s2 * s1 * s2);
        const Module VV = tensor(V.module, V.module);
        r.absorb(check_intertwiner("sigma module map", s, VV, VV));
    });
}

/// Equality of all R constructions, and invariance of r_theta under pin rescaling.
struct AgreementResult {
    Matrix theta, krls_braid, krls_transport, oracle;
};

inline std::vector<FieldElement> rescaling_list(const CartanDatum& c) {
    const FieldElement q = c.q(Fraction(1));
    return {q, FieldElement::one() + q, FieldElement(2) - q.inverse()};
}

/// With Fault::theta_sign the Theta route uses the sign-flipped exponent.
inline CheckReport check_method_agreement(const QuantumGroup& g, const Weight& lambda, const Weight& mu,
                                          AgreementResult* keep = nullptr, Fault fault = Fault::none) {
    return timed_check("method-agreement" + lambda.str() + mu.str(), [&](CheckReport& r) {
        const auto X = based_irreducible(g, lambda), Y = based_irreducible(g, mu);
        AgreementResult a{r_theta(X, Y, fault == Fault::theta_sign), r_krls(X, Y, Tw0Method::braid_product), r_krls(X, Y, Tw0Method::transport),
                          r_oracle(X.module, Y.module)};
        detail::compare_columns(r, "r_krls(braid) vs r_theta", a.krls_braid, a.theta);
        detail::compare_columns(r, "r_krls(transport) vs r_theta", a.krls_transport, a.theta);
        detail::compare_columns(r, "r_oracle vs r_theta", a.oracle, a.theta);
        for (const auto& z : rescaling_list(g.cartan())) {
            const auto Xz = based_irreducible(g, lambda, z), Yz = based_irreducible(g, mu, z * z);
            detail::compare_columns(r, "r_theta rescaled by " + z.str(), r_theta(Xz, Yz, fault == Fault::theta_sign),
                                    a.theta);
        }
        if (keep) *keep = std::move(a);
    });
}

/// Theta for pins scaled by z equals (z / bar z) Theta.
inline CheckReport check_theta_scaling(const QuantumGroup& g, const Weight& lambda) {
    return timed_check("theta-scaling" + lambda.str(), [&](CheckReport& r) {
        const auto t = make_theta(based_irreducible(g, lambda));
        for (const auto& z : rescaling_list(g.cartan())) {
            const auto tz = make_theta(based_irreducible(g, lambda, z));
            detail::compare_columns(r, "z = " + z.str(), tz.matrix, (z / z.bar()) * t.matrix);
        }
    });
}

/// R (b_lambda (x) c) = q^{(lambda, wt c)} b_lambda (x) c for every global basis element c.
inline CheckReport check_normalization_row(const BasedModule& X, const BasedModule& Y, const Matrix& R) {
    return timed_check("normalization-row", [&](CheckReport& r) {
        const auto& c = X.cartan();
        const auto& [lambda, hw] = X.pins.front();
        for (const auto& g : Y.global_basis()) {
            const Vector v = kron(hw, g);
            const Vector lhs = R * v;
            const Vector rhs = c.q(c.form(lambda, *Y.module.weight_of(g))) * v;
            if (lhs != rhs) r.fail("b_lambda (x) c", lhs, rhs);
        }
    });
}

/// Identities relating Gamma, Theta, J, T_w0, bar and K_{2H_rho} on one based module.
inline CheckReport check_lemma_identities(const BasedModule& b) {
    return timed_check("lemma-identities", [&](CheckReport& r) {
        const auto& c = b.cartan();
        const auto theta = make_theta(b);
        const auto gamma = make_gamma(b);
        const auto barm = make_bar(b);
        const auto J = make_J(b.module);
        const auto T = make_Tw0(b, Tw0Method::transport);
        const auto Tb = make_Tw0(b, Tw0Method::braid_product);
        const auto K = make_K2rho(b.module);
        detail::compare_columns(r, "Gamma = bar o Tw0^-1", gamma.matrix, compose(barm, inverse(T)).matrix);
        detail::compare_columns(r, "Theta = K2rho o bar o J", theta.matrix, compose(K, compose(barm, J)).matrix);
        detail::compare_columns(r, "J transported vs diagonal", make_J_transport(b).matrix, J.matrix);
        for (const auto& g : b.global_basis()) {
            const Weight mu = *b.module.weight_of(g);
            const Vector lhs = theta.apply(g), rhs = c.q(theta_exponent(c, mu)) * g;
            if (lhs != rhs) r.fail("Theta on global basis element of weight " + mu.str(), lhs, rhs);
        }
        detail::compare_columns(r, "Gamma^-1 Theta = J Tw0", compose(inverse(gamma), theta).matrix,
                                compose(J, T).matrix);
        detail::compare_columns(r, "Theta o Theta = id", compose(theta, theta).matrix, Matrix::identity(b.module.dim()));
        detail::compare_columns(r, "Tw0 braid product vs transport", Tb.matrix, T.matrix);
    });
}

/// (Gamma_X (x) Gamma_Y) o Gamma_{X (x) Y}^{-1} = id
inline CheckReport check_gamma_lemma(const BasedModule& X, const BasedModule& Y) {
    return timed_check("gamma-lemma", [&](CheckReport& r) {
        const auto XY = based_tensor(X, Y);
        const auto m = compose(tensor(make_gamma(X), make_gamma(Y)), inverse(make_gamma(XY)));
        if (m.bar_linear) r.fail("composite is not q-linear");
        detail::compare_columns(r, "(Gamma (x) Gamma) Gamma^-1", m.matrix, Matrix::identity(XY.module.dim()));
    });
}

/// sigma_{Y,X} sigma_{X,Y} restricted to each isotypic block is a scalar;
/// the scalars are returned in scalars.
inline CheckReport check_double_braiding(const BasedModule& X, const BasedModule& Y,
                                         std::map<Weight, FieldElement>* scalars = nullptr) {
    return timed_check("double-braiding", [&](CheckReport& r) {
        const auto XY = based_tensor(X, Y);
        const Matrix s2 = braiding(Y, X) * braiding(X, Y);
        for (const auto& [nu, h] : XY.pins) {
            const Vector img = s2 * h;
            std::size_t k = 0;
            while (h[k].is_zero()) ++k;
            const FieldElement s = img[k] / h[k];
            const Matrix P = XY.decomposition.projector(nu);
            detail::compare_columns(r, "block " + nu.str(), s2 * P, s * P);
            if (scalars) (*scalars)[nu] = s;
        }
    });
}

} // namespace uqr
