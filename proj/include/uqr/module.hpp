#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqr/cartan.hpp"
#include "uqr/error.hpp"
#include "uqr/linalg.hpp"
#include "uqr/qscalar.hpp"
#include "uqr/report.hpp"

namespace uqr {

using CartanPtr = std::shared_ptr<const CartanDatum>;

/// Weight-graded module with explicit matrices for E_i and F_i. K_H acts
/// diagonally through the weights and is never stored.
class Module {
public:
    Module() = default;
    Module(CartanPtr cartan, std::vector<Weight> weights, std::vector<Matrix> e, std::vector<Matrix> f)
        : cartan_(std::move(cartan)), weights_(std::move(weights)), e_(std::move(e)), f_(std::move(f)) {
        for (std::size_t k = 0; k < weights_.size(); ++k) spaces_[weights_[k]].push_back(k);
    }

    const CartanDatum& cartan() const { return *cartan_; }
    const CartanPtr& cartan_ptr() const { return cartan_; }
    std::size_t dim() const { return weights_.size(); }
    std::size_t rank() const { return e_.size(); }
    const Weight& weight(std::size_t k) const { return weights_[k]; }
    const std::vector<Weight>& weights() const { return weights_; }
    const Matrix& E(std::size_t i) const { return e_[i]; }
    const Matrix& F(std::size_t i) const { return f_[i]; }

    const std::map<Weight, std::vector<std::size_t>>& spaces() const { return spaces_; }
    const std::vector<std::size_t>& space(const Weight& w) const {
        static const std::vector<std::size_t> empty;
        auto it = spaces_.find(w);
        return it == spaces_.end() ? empty : it->second;
    }
    std::size_t multiplicity(const Weight& w) const { return space(w).size(); }

    /// Distinct weights, highest first (by height, ties broken by coordinates).
    std::vector<Weight> weights_by_height() const {
        std::vector<Weight> ws;
        for (const auto& [w, _] : spaces_) ws.push_back(w);
        std::stable_sort(ws.begin(), ws.end(), [&](const Weight& a, const Weight& b) {
            const auto ha = cartan_->height(a), hb = cartan_->height(b);
            return ha != hb ? ha > hb : a > b;
        });
        return ws;
    }

    /// Diagonal of q^{scale * (w, wt)}; K_i is kform(alpha_i, 1).
    Matrix kform(const Weight& w, Fraction scale) const {
        Matrix m(dim(), dim());
        for (std::size_t k = 0; k < dim(); ++k) m(k, k) = cartan_->q(scale * cartan_->form(w, weights_[k]));
        return m;
    }
    Matrix K(std::size_t i, int power = 1) const { return kform(cartan_->simple_root(i), Fraction(power)); }

    /// Weight-space block check of a vector.
    std::optional<Weight> weight_of(const Vector& v) const {
        std::optional<Weight> w;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k].is_zero()) continue;
            if (w && *w != weights_[k]) return std::nullopt;
            w = weights_[k];
        }
        return w;
    }

private:
    CartanPtr cartan_;
    std::vector<Weight> weights_;
    std::vector<Matrix> e_, f_;
    std::map<Weight, std::vector<std::size_t>> spaces_;
};

/// V_lambda together with the F-word that produced each basis vector:
/// basis[k] = F_{word[k].first} basis[word[k].second] for k > 0, basis[0] = hw.
struct Irreducible {
    Weight lambda;
    Module module;
    std::vector<std::pair<std::size_t, std::size_t>> word;

    Vector hw() const { return unit_vector(module.dim(), 0); }
};

namespace detail {

inline FieldElement qint(const CartanDatum& c, std::size_t i, std::int64_t n) {
    return quantum_integer(n, static_cast<int>(c.d(i)), c.root_order());
}

inline void compare_columns(CheckReport& r, const std::string& what, const Matrix& lhs, const Matrix& rhs,
                            std::size_t cap = 4) {
    std::size_t found = 0;
    for (std::size_t c = 0; c < lhs.cols() && found < cap; ++c) {
        auto a = lhs.column(c), b = rhs.column(c);
        if (a != b) {
            r.fail(what + " on basis vector " + std::to_string(c), std::move(a), std::move(b));
            ++found;
        }
    }
}

} // namespace detail

/// Checks weight grading, [E_i,F_j], K-conjugation, quantum Serre and local
/// nilpotency as exact matrix identities.
inline CheckReport check_module_relations(const Module& m) {
    return timed_check("module-relations", [&](CheckReport& r) {
        const auto& c = m.cartan();
        const std::size_t n = m.rank(), dim = m.dim();
        for (std::size_t i = 0; i < n; ++i) {
            const Weight a = c.simple_root(i);
            for (std::size_t row = 0; row < dim; ++row)
                for (std::size_t col = 0; col < dim; ++col) {
                    if (!m.E(i)(row, col).is_zero() && m.weight(row) != m.weight(col) + a)
                        r.fail("E_" + std::to_string(i + 1) + " breaks grading at (" + std::to_string(row) + "," +
                               std::to_string(col) + ")");
                    if (!m.F(i)(row, col).is_zero() && m.weight(row) != m.weight(col) - a)
                        r.fail("F_" + std::to_string(i + 1) + " breaks grading at (" + std::to_string(row) + "," +
                               std::to_string(col) + ")");
                }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Matrix lhs = m.E(i) * m.F(j) - m.F(j) * m.E(i);
                Matrix rhs(dim, dim);
                if (i == j)
                    for (std::size_t k = 0; k < dim; ++k) rhs(k, k) = detail::qint(c, i, m.weight(k)[i]);
                detail::compare_columns(r, "[E_" + std::to_string(i + 1) + ",F_" + std::to_string(j + 1) + "]", lhs,
                                        rhs);
            }
        // K_H X K_H^{-1} = q^{<H, wt X>} X for H = d_j H_j
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                const FieldElement s = c.q(Fraction(c.d(j) * c.a(j, i)));
                detail::compare_columns(r, "K_" + std::to_string(j + 1) + " E_" + std::to_string(i + 1) + " K^-1",
                                        m.K(j) * m.E(i) * m.K(j, -1), s * m.E(i));
                detail::compare_columns(r, "K_" + std::to_string(j + 1) + " F_" + std::to_string(i + 1) + " K^-1",
                                        m.K(j) * m.F(i) * m.K(j, -1), s.inverse() * m.F(i));
            }
        // quantum Serre: sum_k (-1)^k X_i^{(1-a_ij-k)} X_j X_i^{(k)} = 0
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const std::int64_t top = 1 - c.a(i, j);
                for (int which = 0; which < 2; ++which) {
                    const auto& X = which == 0 ? m.E(i) : m.F(i);
                    const auto& Y = which == 0 ? m.E(j) : m.F(j);
                    std::vector<Matrix> pw{Matrix::identity(dim)};
                    for (std::int64_t k = 1; k <= top; ++k)
                        pw.push_back(detail::qint(c, i, k).inverse() * (X * pw.back()));
                    Matrix sum(dim, dim);
                    for (std::int64_t k = 0; k <= top; ++k) {
                        Matrix term = pw[static_cast<std::size_t>(top - k)] * Y * pw[static_cast<std::size_t>(k)];
                        sum = (k % 2 == 0) ? sum + term : sum - term;
                    }
                    detail::compare_columns(r,
                                            std::string(which == 0 ? "E" : "F") + "-Serre(" + std::to_string(i + 1) +
                                                "," + std::to_string(j + 1) + ")",
                                            sum, Matrix(dim, dim));
                }
            }
        for (std::size_t i = 0; i < n; ++i) {
            Matrix pe = Matrix::identity(dim), pf = Matrix::identity(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                pe = m.E(i) * pe;
                pf = m.F(i) * pf;
            }
            if (!pe.is_zero()) r.fail("E_" + std::to_string(i + 1) + " is not nilpotent");
            if (!pf.is_zero()) r.fail("F_" + std::to_string(i + 1) + " is not nilpotent");
        }
    });
}

/// Builds V_lambda level by level: candidates F_i b are kept when their
/// E-images are independent. A vector of weight below lambda vanishes in the
/// irreducible quotient iff all E_j kill it, so this is the radical quotient.
/// A positive max_depth truncates the construction (no correctness contract).
inline Irreducible build_irreducible(CartanPtr cartan, const Weight& lambda, std::size_t max_depth = 0) {
    const auto& c = *cartan;
    const std::size_t n = c.rank();
    if (lambda.rank() != n) throw DomainError("weight rank does not match the Cartan datum");
    if (!lambda.is_dominant()) throw DomainError("weight not dominant: " + lambda.str());
    if (!c.is_finite() && max_depth == 0) throw DomainError("non-finite type needs a depth bound");

    using Sparse = std::map<std::size_t, FieldElement>;
    std::vector<Weight> weights{lambda};
    std::vector<std::pair<std::size_t, std::size_t>> word{{0, 0}};
    std::vector<std::vector<Sparse>> ecol(n, std::vector<Sparse>(1)); // ecol[j][b] = E_j b
    std::vector<std::vector<Sparse>> fcol(n, std::vector<Sparse>(1)); // fcol[i][b] = F_i b
    std::vector<std::size_t> prev{0};
    std::vector<std::vector<std::size_t>> levels{{0}};

    auto apply_f = [&](std::size_t i, const Sparse& v) {
        Sparse out;
        for (const auto& [b, x] : v)
            for (const auto& [t, y] : fcol[i][b]) {
                auto& slot = out[t];
                slot += x * y;
            }
        for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    };

    for (std::size_t depth = 1; !prev.empty() && (max_depth == 0 || depth <= max_depth); ++depth) {
        // candidates grouped by weight, in (parent, node) order
        std::map<Weight, std::vector<std::pair<std::size_t, std::size_t>>> cands;
        std::vector<Weight> order;
        for (auto b : prev)
            for (std::size_t i = 0; i < n; ++i) {
                Weight mu = weights[b] - c.simple_root(i);
                auto [it, fresh] = cands.try_emplace(mu);
                if (fresh) order.push_back(mu);
                it->second.push_back({i, b});
            }
        std::vector<std::size_t> next;
        for (const auto& mu : order) {
            const auto& list = cands[mu];
            // coordinates of E-images: (j, index of the mu + alpha_j vector in prev level)
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
            for (auto b : prev)
                for (std::size_t j = 0; j < n; ++j)
                    if (weights[b] == mu + c.simple_root(j)) pos.emplace(std::make_pair(j, b), pos.size());
            std::vector<std::vector<Sparse>> images;
            std::vector<Vector> dense;
            for (const auto& [i, b] : list) {
                std::vector<Sparse> img(n);
                for (std::size_t j = 0; j < n; ++j) {
                    img[j] = apply_f(i, ecol[j][b]);
                    if (i == j) {
                        const auto coef = detail::qint(c, i, weights[b][i]);
                        if (!coef.is_zero()) {
                            auto& slot = img[j][b];
                            slot += coef;
                            if (slot.is_zero()) img[j].erase(b);
                        }
                    }
                }
                Vector v(pos.size());
                for (std::size_t j = 0; j < n; ++j)
                    for (const auto& [t, x] : img[j]) {
                        auto it = pos.find({j, t});
                        if (it == pos.end()) throw ConsistencyError("E-image leaves its weight space");
                        v[it->second] = x;
                    }
                images.push_back(std::move(img));
                dense.push_back(std::move(v));
            }
            EchelonBasis eb(pos.size());
            std::vector<std::size_t> accepted;
            for (std::size_t k = 0; k < list.size(); ++k) {
                if (!eb.add(dense[k])) continue;
                const std::size_t idx = weights.size();
                weights.push_back(mu);
                word.push_back(list[k]);
                for (std::size_t j = 0; j < n; ++j) {
                    ecol[j].push_back(images[k][j]);
                    fcol[j].emplace_back();
                }
                accepted.push_back(idx);
                next.push_back(idx);
            }
            for (std::size_t k = 0; k < list.size(); ++k) {
                const auto coords = eb.coordinates(dense[k]);
                if (!coords) throw ConsistencyError("candidate outside the span of accepted vectors");
                Sparse col;
                for (std::size_t a = 0; a < accepted.size(); ++a)
                    if (!(*coords)[a].is_zero()) col[accepted[a]] = (*coords)[a];
                fcol[list[k].first][list[k].second] = std::move(col);
            }
        }
        prev = std::move(next);
        if (!prev.empty()) levels.push_back(prev);
    }

    const std::size_t dim = weights.size();
    std::vector<Matrix> E(n, Matrix(dim, dim)), F(n, Matrix(dim, dim));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < dim; ++b) {
            for (const auto& [t, x] : ecol[j][b]) E[j](t, b) = x;
            for (const auto& [t, x] : fcol[j][b]) F[j](t, b) = x;
        }
    Irreducible irr{lambda, Module(std::move(cartan), std::move(weights), std::move(E), std::move(F)), std::move(word)};
    if (max_depth == 0) {
        const auto rep = check_module_relations(irr.module);
        if (!rep.pass())
            throw ConsistencyError("V" + lambda.str() + " fails relation check: " + rep.counterexamples.front().where);
    }
    return irr;
}

/// Delta(E_i) = E_i (x) K_i + 1 (x) E_i, Delta(F_i) = F_i (x) 1 + K_i^{-1} (x) F_i,
/// basis ordered with the left factor major.
inline Module tensor(const Module& m, const Module& n) {
    if (m.cartan_ptr() != n.cartan_ptr() && m.cartan().matrix() != n.cartan().matrix())
        throw DomainError("tensor product of modules over different Cartan data");
    const std::size_t r = m.rank();
    std::vector<Weight> w;
    w.reserve(m.dim() * n.dim());
    for (std::size_t a = 0; a < m.dim(); ++a)
        for (std::size_t b = 0; b < n.dim(); ++b) w.push_back(m.weight(a) + n.weight(b));
    std::vector<Matrix> E, F;
    const Matrix im = Matrix::identity(m.dim()), in = Matrix::identity(n.dim());
    for (std::size_t i = 0; i < r; ++i) {
        E.push_back(kron(m.E(i), n.K(i)) + kron(im, n.E(i)));
        F.push_back(kron(m.F(i), in) + kron(m.K(i, -1), n.F(i)));
    }
    return Module(m.cartan_ptr(), std::move(w), std::move(E), std::move(F));
}

/// X^{(n)} = X^n / [n]_i! for X = E_i or F_i.
inline Matrix divided_power(const Module& m, std::size_t i, std::int64_t n, bool raising = false) {
    if (n < 0) throw DomainError("negative divided power");
    const Matrix& X = raising ? m.E(i) : m.F(i);
    Matrix p = Matrix::identity(m.dim());
    for (std::int64_t k = 1; k <= n; ++k) p = detail::qint(m.cartan(), i, k).inverse() * (X * p);
    return p;
}

/// Applies X^{(n)} to a vector without forming the matrix power.
inline Vector divided_power_apply(const Module& m, std::size_t i, std::int64_t n, Vector v, bool raising = false) {
    const Matrix& X = raising ? m.E(i) : m.F(i);
    for (std::int64_t k = 1; k <= n; ++k) v = detail::qint(m.cartan(), i, k).inverse() * (X * v);
    return v;
}

/// Basis of the joint kernel of all E_i on the nu weight space.
inline std::vector<Vector> highest_weight_vectors(const Module& m, const Weight& nu) {
    const auto& cols = m.space(nu);
    if (cols.empty()) return {};
    const auto& c = m.cartan();
    std::vector<std::size_t> rows_e;
    std::vector<std::size_t> node;
    for (std::size_t j = 0; j < m.rank(); ++j)
        for (auto r : m.space(nu + c.simple_root(j))) {
            rows_e.push_back(r);
            node.push_back(j);
        }
    Matrix a(rows_e.size(), cols.size());
    for (std::size_t r = 0; r < rows_e.size(); ++r)
        for (std::size_t k = 0; k < cols.size(); ++k) a(r, k) = m.E(node[r])(rows_e[r], cols[k]);
    std::vector<Vector> out;
    for (const auto& x : nullspace(a)) {
        Vector v(m.dim());
        for (std::size_t k = 0; k < cols.size(); ++k) v[cols[k]] = x[k];
        out.push_back(std::move(v));
    }
    return out;
}

/// Thread-safe build-once cache for per-datum objects (irreducibles, global
/// bases, tensor pinnings, calibration choices).
class QuantumGroup {
public:
    explicit QuantumGroup(CartanDatum c) : cartan_(std::make_shared<const CartanDatum>(std::move(c))) {}
    explicit QuantumGroup(const std::string& type) : QuantumGroup(CartanDatum::of_type(type)) {}

    const CartanDatum& cartan() const { return *cartan_; }
    const CartanPtr& cartan_ptr() const { return cartan_; }

    const Irreducible& irreducible(const Weight& lambda) const {
        return memo<Irreducible>("irr" + lambda.str(), [&] { return build_irreducible(cartan_, lambda); });
    }

    /// Returns the cached value for key, building it once with make().
    template <class T, class Make>
    const T& memo(const std::string& key, Make&& make) const {
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto& s = slots_[key];
            if (!s) s = std::make_shared<Slot>();
            slot = s;
        }
        std::call_once(slot->once, [&] { slot->value = std::make_shared<T>(make()); });
        return *static_cast<const T*>(slot->value.get());
    }

private:
    struct Slot {
        std::once_flag once;
        std::shared_ptr<void> value;
    };
    CartanPtr cartan_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<Slot>> slots_;
};

/// Image of V_nu's basis under the module map sending its hw to h.
inline Matrix embed_component(const QuantumGroup& g, const Module& m, const Weight& nu, const Vector& h) {
    const auto& irr = g.irreducible(nu);
    const std::size_t d = irr.module.dim();
    std::vector<Vector> cols(d);
    cols[0] = h;
    for (std::size_t k = 1; k < d; ++k) cols[k] = m.F(irr.word[k].first) * cols[irr.word[k].second];
    return Matrix::from_columns(cols, m.dim());
}

struct Component {
    Weight nu;
    Vector hw;
    Matrix embedding; // m.dim x dim V_nu
};

/// A direct-sum decomposition into irreducible components with its change of basis.
struct IsotypicDecomposition {
    std::vector<Component> components;
    Matrix change;     // columns: concatenated component embeddings
    Matrix change_inv;
    std::vector<std::size_t> offset; // first column of each component

    /// Projection onto the sum of components of type nu, along the others.
    Matrix projector(const Weight& nu) const {
        Matrix mask(change.cols(), change.cols());
        for (std::size_t c = 0; c < components.size(); ++c)
            if (components[c].nu == nu)
                for (std::size_t k = 0; k < components[c].embedding.cols(); ++k)
                    mask(offset[c] + k, offset[c] + k) = FieldElement::one();
        return change * (mask * change_inv);
    }
    Vector project(const Vector& v, const Weight& nu) const {
        Vector coords = change_inv * v;
        for (std::size_t c = 0; c < components.size(); ++c)
            if (components[c].nu != nu)
                for (std::size_t k = 0; k < components[c].embedding.cols(); ++k) coords[offset[c] + k] = {};
        return change * coords;
    }
    std::map<Weight, std::size_t> multiplicities() const {
        std::map<Weight, std::size_t> out;
        for (const auto& c : components) ++out[c.nu];
        return out;
    }
};

/// Decomposition generated by the given highest-weight vectors.
inline IsotypicDecomposition decompose_along(const QuantumGroup& g, const Module& m,
                                             const std::vector<std::pair<Weight, Vector>>& hws) {
    IsotypicDecomposition d;
    std::vector<Vector> cols;
    for (const auto& [nu, h] : hws) {
        Matrix emb = embed_component(g, m, nu, h);
        d.offset.push_back(cols.size());
        for (std::size_t k = 0; k < emb.cols(); ++k) cols.push_back(emb.column(k));
        d.components.push_back({nu, h, std::move(emb)});
    }
    if (cols.size() != m.dim())
        throw ConsistencyError("components have total dimension " + std::to_string(cols.size()) + ", module has " +
                               std::to_string(m.dim()));
    d.change = Matrix::from_columns(cols, m.dim());
    auto inv = try_inverse(d.change);
    if (!inv) throw ConsistencyError("components fail to span the module");
    d.change_inv = std::move(*inv);
    return d;
}

inline IsotypicDecomposition isotypic_decomposition(const QuantumGroup& g, const Module& m) {
    std::vector<std::pair<Weight, Vector>> hws;
    for (const auto& nu : m.weights_by_height()) {
        if (!nu.is_dominant()) continue;
        for (auto& v : highest_weight_vectors(m, nu)) hws.emplace_back(nu, std::move(v));
    }
    return decompose_along(g, m, hws);
}

/// Kashiwara operators from the i-string decomposition:
/// Ftilde(F_i^{(n)} v) = F_i^{(n+1)} v and Etilde(F_i^{(n)} v) = F_i^{(n-1)} v for E_i v = 0.
struct KashiwaraPair {
    Matrix Etilde;
    Matrix Ftilde;
};

inline KashiwaraPair kashiwara_operators(const Module& m, std::size_t i) {
    const auto& c = m.cartan();
    const std::size_t dim = m.dim();
    std::vector<Vector> strings;  // columns of P
    std::vector<std::optional<std::size_t>> up, down; // index of F-image / E-image column in P
    for (const auto& [mu, cols] : m.spaces()) {
        if (mu[i] < 0) continue;
        // kernel of E_i on the mu space
        const auto& rows = m.space(mu + c.simple_root(i));
        Matrix a(rows.size(), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t k = 0; k < cols.size(); ++k) a(r, k) = m.E(i)(rows[r], cols[k]);
        for (const auto& x : nullspace(a)) {
            Vector v(dim);
            for (std::size_t k = 0; k < cols.size(); ++k) v[cols[k]] = x[k];
            const std::int64_t len = mu[i];
            for (std::int64_t s = 0; s <= len; ++s) {
                const std::size_t idx = strings.size();
                strings.push_back(v);
                down.push_back(s > 0 ? std::optional<std::size_t>(idx - 1) : std::nullopt);
                up.push_back(s < len ? std::optional<std::size_t>(idx + 1) : std::nullopt);
                if (s < len) v = detail::qint(c, i, s + 1).inverse() * (m.F(i) * v);
            }
        }
    }
    if (strings.size() != dim)
        throw ConsistencyError("i-string decomposition has " + std::to_string(strings.size()) + " vectors for dim " +
                               std::to_string(dim));
    const Matrix P = Matrix::from_columns(strings, dim);
    auto Pinv = try_inverse(P);
    if (!Pinv) throw ConsistencyError("i-strings are linearly dependent");
    Matrix fs(dim, dim), es(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        if (up[k]) fs.set_column(k, strings[*up[k]]);
        if (down[k]) es.set_column(k, strings[*down[k]]);
    }
    return {es * *Pinv, fs * *Pinv};
}

} // namespace uqr
