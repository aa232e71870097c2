#pragma once

// Deterministic generators and small independent oracles shared by the tests.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "uqr/uqr.hpp"

namespace uqr::testing {

/// Fixed-seed source of random exact values.
class Gen {
public:
    explicit Gen(std::uint64_t seed = 0x5eed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational() {
        Rational r(integer(-6, 6), integer(1, 4));
        r.canonicalize();
        return r;
    }

    /// Sparse Laurent polynomial with exponents in [-span, span] (units of 1/D).
    LaurentPoly laurent(std::int64_t span, std::size_t max_terms = 4) {
        std::vector<LaurentPoly::Term> t;
        const auto n = static_cast<std::size_t>(integer(1, static_cast<std::int64_t>(max_terms)));
        for (std::size_t k = 0; k < n; ++k) t.push_back({integer(-span, span), rational()});
        return LaurentPoly::from_terms(std::move(t));
    }

    /// Random element of Q(q^{1/D}); a third are Laurent polynomials.
    FieldElement field(int D) {
        LaurentPoly num = laurent(2 * D);
        if (integer(0, 2) == 0) return {num, LaurentPoly(Rational(1)), D};
        LaurentPoly den = laurent(2 * D, 3);
        while (den.is_zero()) den = laurent(2 * D, 3);
        return {num, den, D};
    }
    FieldElement nonzero_field(int D) {
        FieldElement x = field(D);
        while (x.is_zero()) x = field(D);
        return x;
    }

    Weight weight(std::size_t rank, std::int64_t bound = 3) {
        Weight w(rank);
        for (std::size_t i = 0; i < rank; ++i) w[i] = integer(-bound, bound);
        return w;
    }
    Weight dominant(std::size_t rank, std::int64_t bound = 2) {
        Weight w(rank);
        for (std::size_t i = 0; i < rank; ++i) w[i] = integer(0, bound);
        return w;
    }

private:
    std::mt19937_64 rng_;
};

inline CartanDatum a1() { return CartanDatum::of_type("A1"); }

/// Positive roots by closing the simple roots under simple reflections,
/// independent of the library's longest-word computation.
inline std::vector<Weight> positive_roots(const CartanDatum& c) {
    std::set<Weight> all;
    std::vector<Weight> todo;
    for (std::size_t i = 0; i < c.rank(); ++i) {
        all.insert(c.simple_root(i));
        todo.push_back(c.simple_root(i));
    }
    while (!todo.empty()) {
        const Weight w = todo.back();
        todo.pop_back();
        for (std::size_t i = 0; i < c.rank(); ++i) {
            Weight r = w - w[i] * c.simple_root(i);
            if (all.insert(r).second) todo.push_back(r);
        }
    }
    std::vector<Weight> pos;
    for (const auto& w : all) {
        const auto coords = c.root_coordinates(w);
        bool nonneg = true;
        for (const auto& x : coords) nonneg = nonneg && !(x < Fraction(0));
        if (nonneg) pos.push_back(w);
    }
    return pos;
}

/// Weyl dimension formula.
inline std::size_t weyl_dimension(const CartanDatum& c, const Weight& lambda) {
    Fraction num(1), den(1);
    const Weight lr = lambda + c.rho();
    for (const auto& b : positive_roots(c)) {
        num = num * c.form(lr, b);
        den = den * c.form(c.rho(), b);
    }
    const Fraction d = num / den;
    return static_cast<std::size_t>(d.num() / d.den());
}

/// Weight multiplicities of V_lambda (x) V_mu by convolution.
inline std::map<Weight, std::size_t> convolve(const Module& a, const Module& b) {
    std::map<Weight, std::size_t> out;
    for (const auto& [wa, ia] : a.spaces())
        for (const auto& [wb, ib] : b.spaces()) out[wa + wb] += ia.size() * ib.size();
    return out;
}

/// (nu, nu + 2 rho)
inline Fraction casimir(const CartanDatum& c, const Weight& nu) { return c.form(nu, nu + 2 * c.rho()); }

} // namespace uqr::testing
