#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "uqr/error.hpp"
#include "uqr/fraction.hpp"
#include "uqr/qscalar.hpp"

namespace uqr {

/// Weight in fundamental-weight coordinates: c[i] = <H_i, weight>.
class Weight {
public:
    Weight() = default;
    explicit Weight(std::size_t rank) : c_(rank, 0) {}
    explicit Weight(std::vector<std::int64_t> coords) : c_(std::move(coords)) {}
    Weight(std::initializer_list<std::int64_t> coords) : c_(coords) {}

    std::size_t rank() const { return c_.size(); }
    std::int64_t operator[](std::size_t i) const { return c_[i]; }
    std::int64_t& operator[](std::size_t i) { return c_[i]; }
    const std::vector<std::int64_t>& coords() const { return c_; }

    friend Weight operator+(Weight a, const Weight& b) {
        a.check(b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    friend Weight operator-(Weight a, const Weight& b) {
        a.check(b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
        return a;
    }
    Weight operator-() const {
        Weight r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Weight operator*(std::int64_t k, Weight a) {
        for (auto& x : a.c_) x *= k;
        return a;
    }
    Weight& operator+=(const Weight& b) { return *this = *this + b; }
    Weight& operator-=(const Weight& b) { return *this = *this - b; }

    friend bool operator==(const Weight&, const Weight&) = default;
    friend auto operator<=>(const Weight&, const Weight&) = default;

    bool is_dominant() const {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x >= 0; });
    }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; });
    }

    /// "(a,b,...)" for messages and DOT labels.
    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + ")";
    }

private:
    void check(const Weight& b) const {
        if (c_.size() != b.c_.size()) throw DomainError("weights of different rank");
    }
    std::vector<std::int64_t> c_;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using FracMatrix = std::vector<std::vector<Fraction>>;

namespace detail {

inline std::optional<FracMatrix> invert(const IntMatrix& a) {
    const std::size_t n = a.size();
    FracMatrix m(n, std::vector<Fraction>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        const Fraction piv = m[c][c];
        for (auto& x : m[c]) x = x / piv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c].is_zero()) continue;
            const Fraction f = m[r][c];
            for (std::size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    FracMatrix inv(n, std::vector<Fraction>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

inline Fraction determinant(FracMatrix m) {
    const std::size_t n = m.size();
    Fraction det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            const Fraction f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

} // namespace detail

/// Cartan datum of a symmetrizable generalized Cartan matrix, with the
/// finite-type extras (Gram matrix of fundamental weights, w0, theta).
class CartanDatum {
public:
    /// Validates a raw GCM; `label` is used for display and JSON only.
    CartanDatum(IntMatrix a, std::string label = "custom") : label_(std::move(label)), a_(std::move(a)) {
        const std::size_t n = a_.size();
        if (n == 0) throw DomainError("empty Cartan matrix");
        for (const auto& row : a_)
            if (row.size() != n) throw DomainError("Cartan matrix is not square");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j && a_[i][j] != 2) throw DomainError("diagonal Cartan entries must be 2");
                if (i != j && a_[i][j] > 0) throw DomainError("off-diagonal Cartan entries must be <= 0");
                if ((a_[i][j] == 0) != (a_[j][i] == 0)) throw DomainError("a_ij = 0 must imply a_ji = 0");
            }
        compute_symmetrizers();
        FracMatrix sym(n, std::vector<Fraction>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sym[i][j] = d_[i] * a_[i][j];
        finite_ = true;
        for (std::size_t k = 1; k <= n && finite_; ++k) {
            FracMatrix minor(k, std::vector<Fraction>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) minor[i][j] = sym[i][j];
            if (detail::determinant(minor) <= Fraction(0)) finite_ = false;
        }
        if (auto inv = detail::invert(a_)) {
            ainv_ = *inv;
            gram_.assign(n, std::vector<Fraction>(n));
            std::int64_t l = 1;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t m = 0; m < n; ++m) {
                    gram_[j][m] = d_[m] * ainv_[m][j];
                    l = std::lcm(l, gram_[j][m].den());
                }
            root_order_ = static_cast<int>(2 * l);
        }
        if (finite_) compute_longest_word();
    }

    /// A_n, B_n, C_n, D_n, G_2 by label ("A2", "B2", ...). Node n of B_n is
    /// short; node n of C_n is long.
    static CartanDatum of_type(const std::string& label) {
        if (label.size() < 2) throw DomainError("unknown Cartan type '" + label + "'");
        const char t = label[0];
        int n = 0;
        try {
            std::size_t pos = 0;
            n = std::stoi(label.substr(1), &pos);
            if (pos != label.size() - 1) throw DomainError("bad rank");
        } catch (const std::exception&) {
            throw DomainError("unknown Cartan type '" + label + "'");
        }
        if (n < 1) throw DomainError("rank must be positive");
        IntMatrix a(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        const auto N = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < N; ++i) a[i][i] = 2;
        auto chain = [&](std::size_t upto) {
            for (std::size_t i = 0; i + 1 < upto; ++i) a[i][i + 1] = a[i + 1][i] = -1;
        };
        switch (t) {
        case 'A':
            chain(N);
            break;
        case 'B':
            if (n < 2) throw DomainError("B_n needs n >= 2");
            chain(N);
            a[N - 1][N - 2] = -2;
            break;
        case 'C':
            if (n < 2) throw DomainError("C_n needs n >= 2");
            chain(N);
            a[N - 2][N - 1] = -2;
            break;
        case 'D':
            if (n < 4) throw DomainError("D_n needs n >= 4");
            chain(N - 1);
            a[N - 3][N - 1] = a[N - 1][N - 3] = -1;
            break;
        case 'G':
            if (n != 2) throw DomainError("only G_2 exists");
            a[0][1] = -3;
            a[1][0] = -1;
            break;
        default:
            throw DomainError("unknown Cartan type '" + label + "'");
        }
        return CartanDatum(std::move(a), label);
    }

    const std::string& label() const { return label_; }
    std::size_t rank() const { return a_.size(); }
    std::int64_t a(std::size_t i, std::size_t j) const { return a_[i][j]; }
    const IntMatrix& matrix() const { return a_; }
    std::int64_t d(std::size_t i) const { return d_[i]; }
    const std::vector<std::int64_t>& symmetrizers() const { return d_; }
    bool is_finite() const { return finite_; }

    int root_order() const {
        if (!root_order_) throw DomainError("Cartan matrix is singular; no fundamental-weight form");
        return root_order_;
    }
    const std::vector<std::size_t>& longest_word() const {
        require_finite("w0");
        return w0_;
    }
    std::size_t theta(std::size_t i) const {
        require_finite("theta");
        return theta_[i];
    }
    const std::vector<std::size_t>& theta() const {
        require_finite("theta");
        return theta_;
    }

    Weight zero() const { return Weight(rank()); }
    Weight fundamental(std::size_t i) const {
        Weight w(rank());
        w[i] = 1;
        return w;
    }
    /// alpha_i = sum_j a_ji omega_j
    Weight simple_root(std::size_t i) const {
        Weight w(rank());
        for (std::size_t j = 0; j < rank(); ++j) w[j] = a_[j][i];
        return w;
    }
    Weight rho() const {
        if (!finite_) throw DomainError("rho is only provided in finite type");
        return Weight(std::vector<std::int64_t>(rank(), 1));
    }

    std::int64_t pairing(std::size_t i, const Weight& w) const { return w[i]; }

    /// (mu, nu) from the Gram matrix of fundamental weights.
    Fraction form(const Weight& mu, const Weight& nu) const {
        if (gram_.empty()) throw DomainError("Cartan matrix is singular; no fundamental-weight form");
        Fraction s = 0;
        for (std::size_t j = 0; j < rank(); ++j) {
            if (mu[j] == 0) continue;
            for (std::size_t m = 0; m < rank(); ++m)
                if (nu[m] != 0) s += gram_[j][m] * (mu[j] * nu[m]);
        }
        return s;
    }

    /// Coefficients c with w = sum c_i alpha_i.
    std::vector<Fraction> root_coordinates(const Weight& w) const {
        if (ainv_.empty()) throw DomainError("Cartan matrix is singular");
        std::vector<Fraction> c(rank());
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                if (w[j] != 0) c[i] += ainv_[i][j] * w[j];
        return c;
    }

    /// mu <= nu in dominance order: nu - mu is a nonnegative integral
    /// combination of simple roots.
    bool dominance_leq(const Weight& mu, const Weight& nu) const {
        for (const auto& c : root_coordinates(nu - mu))
            if (!c.is_integer() || c < Fraction(0)) return false;
        return true;
    }

    /// Height sum_i c_i for w = sum c_i alpha_i; strictly monotone in dominance.
    Fraction height(const Weight& w) const {
        Fraction h = 0;
        for (const auto& c : root_coordinates(w)) h += c;
        return h;
    }

    Weight reflect(std::size_t i, const Weight& w) const { return w - w[i] * simple_root(i); }

    /// w0 applied to a weight (word read right to left).
    Weight apply_w0(Weight w) const {
        const auto& word = longest_word();
        for (auto it = word.rbegin(); it != word.rend(); ++it) w = reflect(*it, w);
        return w;
    }

    /// c * q^e in this datum's root order.
    FieldElement q(Fraction e, const Rational& c = 1) const { return FieldElement::q_power(e, root_order(), c); }

private:
    void require_finite(const char* what) const {
        if (!finite_) throw DomainError(std::string(what) + " requires a finite-type Cartan datum");
    }

    void compute_symmetrizers() {
        const std::size_t n = rank();
        std::vector<Fraction> d(n, Fraction(0));
        for (std::size_t start = 0; start < n; ++start) {
            if (!d[start].is_zero()) continue;
            d[start] = 1;
            std::vector<std::size_t> stack{start};
            std::vector<std::size_t> comp{start};
            while (!stack.empty()) {
                const auto i = stack.back();
                stack.pop_back();
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || a_[i][j] == 0) continue;
                    const Fraction want = d[i] * Fraction(a_[i][j], a_[j][i]);
                    if (d[j].is_zero()) {
                        d[j] = want;
                        stack.push_back(j);
                        comp.push_back(j);
                    } else if (d[j] != want) {
                        throw DomainError("Cartan matrix is not symmetrizable");
                    }
                }
            }
            std::int64_t l = 1;
            for (auto j : comp) l = std::lcm(l, d[j].den());
            std::int64_t g = 0;
            for (auto j : comp) g = std::gcd(g, (d[j] * l).num());
            for (auto j : comp) d[j] = d[j] * Fraction(l, g);
        }
        d_.resize(n);
        for (std::size_t i = 0; i < n; ++i) d_[i] = d[i].num();
    }

    // Walk from -rho to rho, always reflecting in the smallest index with a
    // negative coordinate; the recorded indices form a reduced word for w0.
    void compute_longest_word() {
        Weight x = -rho();
        const Weight target = rho();
        while (x != target) {
            std::size_t i = 0;
            while (x[i] >= 0) ++i;
            w0_.push_back(i);
            x = reflect(i, x);
        }
        theta_.assign(rank(), 0);
        for (std::size_t i = 0; i < rank(); ++i) {
            const Weight img = -apply_w0(simple_root(i));
            bool found = false;
            for (std::size_t j = 0; j < rank(); ++j)
                if (img == simple_root(j)) {
                    theta_[i] = j;
                    found = true;
                }
            if (!found) throw ConsistencyError("w0 does not permute the negative simple roots");
        }
    }

    std::string label_;
    IntMatrix a_;
    std::vector<std::int64_t> d_;
    bool finite_ = false;
    FracMatrix ainv_;
    FracMatrix gram_;
    int root_order_ = 0;
    std::vector<std::size_t> w0_;
    std::vector<std::size_t> theta_;
};

} // namespace uqr
