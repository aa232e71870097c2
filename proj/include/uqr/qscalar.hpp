#pragma once

// Exact arithmetic in Q(q^{1/D}).
//
// Every element is stored as num/den, two Laurent polynomials in t = q^{1/D}
// with rational coefficients. Exponents are kept as integers counted in units
// of 1/D. Canonical form: gcd(num, den) = 1 and den has its highest-exponent
// term equal to 1 * t^0. Equality is structural comparison of canonical forms.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uqr/error.hpp"
#include "uqr/fraction.hpp"

namespace uqr {

using Rational = mpq_class;

/// Finite sum of c_e t^e, sorted by ascending e, no zero coefficients.
class LaurentPoly {
public:
    struct Term {
        std::int64_t exp;
        Rational coef;
        friend bool operator==(const Term&, const Term&) = default;
    };

    LaurentPoly() = default;
    explicit LaurentPoly(const Rational& c) {
        if (c != 0) terms_.push_back({0, c});
    }
    static LaurentPoly monomial(std::int64_t e, const Rational& c) {
        LaurentPoly p;
        if (c != 0) p.terms_.push_back({e, c});
        return p;
    }
    /// Takes terms in any order; merges duplicates and drops zeros.
    static LaurentPoly from_terms(std::vector<Term> terms) {
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
        LaurentPoly p;
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().exp == t.exp)
                p.terms_.back().coef += t.coef;
            else
                p.terms_.push_back(std::move(t));
            if (p.terms_.back().coef == 0) p.terms_.pop_back();
        }
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const { return terms_.size() == 1 && terms_[0].exp == 0 && terms_[0].coef == 1; }
    std::int64_t min_exp() const { return terms_.front().exp; }
    std::int64_t max_exp() const { return terms_.back().exp; }
    const Rational& lead() const { return terms_.back().coef; }
    Rational coefficient(std::int64_t e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, std::int64_t x) { return t.exp < x; });
        return (it != terms_.end() && it->exp == e) ? it->coef : Rational(0);
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, false); }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, true); }
    LaurentPoly operator-() const {
        LaurentPoly r = *this;
        for (auto& t : r.terms_) t.coef = -t.coef;
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_monomial()) return b.times_monomial(a.terms_[0].exp, a.terms_[0].coef);
        if (b.is_monomial()) return a.times_monomial(b.terms_[0].exp, b.terms_[0].coef);
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) out.push_back({x.exp + y.exp, x.coef * y.coef});
        return from_terms(std::move(out));
    }
    LaurentPoly times_monomial(std::int64_t e, const Rational& c) const {
        LaurentPoly r;
        if (c == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.exp + e, t.coef * c});
        return r;
    }
    /// t -> t^{-1}
    LaurentPoly reflected() const {
        LaurentPoly r;
        r.terms_.reserve(terms_.size());
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.terms_.push_back({-it->exp, it->coef});
        return r;
    }
    LaurentPoly scaled_exponents(std::int64_t factor) const {
        LaurentPoly r = *this;
        for (auto& t : r.terms_) t.exp *= factor;
        return r;
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

private:
    static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool subtract) {
        LaurentPoly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exp < b.terms_[j].exp)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].exp < a.terms_[i].exp) {
                r.terms_.push_back({b.terms_[j].exp, subtract ? Rational(-b.terms_[j].coef) : b.terms_[j].coef});
                ++j;
            } else {
                Rational c = subtract ? Rational(a.terms_[i].coef - b.terms_[j].coef)
                                      : Rational(a.terms_[i].coef + b.terms_[j].coef);
                if (c != 0) r.terms_.push_back({a.terms_[i].exp, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<Term> terms_;
};

namespace detail {

// Dense univariate polynomial helpers; index = degree.
using Dense = std::vector<Rational>;

inline void trim(Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void make_monic(Dense& p) {
    const Rational lc = p.back();
    if (lc == 1) return;
    for (auto& c : p) c /= lc;
}

// a mod b, b nonzero.
inline Dense poly_rem(Dense a, const Dense& b) {
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline Dense poly_divexact(Dense a, const Dense& b) {
    if (a.size() < b.size()) throw ConsistencyError("inexact polynomial division");
    Dense q(a.size() - b.size() + 1);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
        a.pop_back();
        trim(a);
    }
    if (!a.empty()) throw ConsistencyError("inexact polynomial division");
    return q;
}

inline Dense poly_gcd(Dense a, Dense b) {
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        make_monic(b);
        Dense r = poly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) make_monic(a);
    return a;
}

// Laurent polynomial -> t^shift * P(t^stride).
struct Packed {
    std::int64_t shift;
    Dense poly;
};

inline Packed pack(const LaurentPoly& p, std::int64_t shift, std::int64_t stride) {
    Packed out{shift, Dense(static_cast<std::size_t>((p.max_exp() - shift) / stride) + 1)};
    for (const auto& t : p.terms()) out.poly[static_cast<std::size_t>((t.exp - shift) / stride)] = t.coef;
    return out;
}

inline LaurentPoly unpack(const Dense& poly, std::int64_t shift, std::int64_t stride) {
    std::vector<LaurentPoly::Term> terms;
    for (std::size_t k = 0; k < poly.size(); ++k)
        if (poly[k] != 0) terms.push_back({shift + static_cast<std::int64_t>(k) * stride, poly[k]});
    return LaurentPoly::from_terms(std::move(terms));
}

inline std::int64_t stride_of(const LaurentPoly& p, std::int64_t g = 0) {
    const auto base = p.min_exp();
    for (const auto& t : p.terms()) g = std::gcd(g, t.exp - base);
    return g;
}

// Reduces a/b by their gcd in the Laurent ring (monomials are units).
inline void cancel_common(LaurentPoly& a, LaurentPoly& b) {
    if (a.is_monomial() || b.is_monomial()) return;
    const std::int64_t stride = stride_of(b, stride_of(a));
    if (stride == 0) return;
    const auto pa = pack(a, a.min_exp(), stride);
    const auto pb = pack(b, b.min_exp(), stride);
    Dense g = poly_gcd(pa.poly, pb.poly);
    if (g.size() <= 1) return;
    a = unpack(poly_divexact(pa.poly, g), pa.shift, stride);
    b = unpack(poly_divexact(pb.poly, g), pb.shift, stride);
}

} // namespace detail

/// Element of Q(q^{1/D}). Immutable value type; arithmetic returns canonical forms.
class FieldElement {
public:
    FieldElement() : den_(Rational(1)) {}
    FieldElement(long n) : num_(Rational(n)), den_(Rational(1)) {} // NOLINT(implicit)
    FieldElement(int n) : FieldElement(static_cast<long>(n)) {}      // NOLINT(implicit)
    explicit FieldElement(const Rational& c) : num_(c), den_(Rational(1)) {}

    /// num/den with exponents in units of 1/root_order.
    FieldElement(LaurentPoly num, LaurentPoly den, int root_order)
        : num_(std::move(num)), den_(std::move(den)), root_order_(root_order) {
        if (root_order_ <= 0) throw DomainError("root order must be positive");
        if (den_.is_zero()) throw DomainError("division by zero");
        canonicalize();
    }

    static FieldElement zero() { return {}; }
    static FieldElement one() { return FieldElement(1); }

    /// c * q^e; the denominator of e must divide root_order.
    static FieldElement q_power(Exponent e, int root_order, const Rational& c = 1) {
        if (root_order <= 0) throw DomainError("root order must be positive");
        if (root_order % e.den() != 0)
            throw DomainError("exponent " + e.str() + " not representable with root order " +
                              std::to_string(root_order));
        return {LaurentPoly::monomial(e.num() * (root_order / e.den()), c), LaurentPoly(Rational(1)), root_order};
    }

    const LaurentPoly& numerator() const { return num_; }
    const LaurentPoly& denominator() const { return den_; }
    int root_order() const { return root_order_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return den_.is_one() && (num_.is_zero() || (num_.is_monomial() && num_.min_exp() == 0)); }
    bool is_laurent() const { return den_.is_one(); }
    bool is_monomial() const { return den_.is_one() && num_.is_monomial(); }
    /// Term count; a crude size measure used for pivot selection.
    std::size_t weight() const { return num_.terms().size() + den_.terms().size(); }

    FieldElement operator-() const {
        FieldElement r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const int D = common_root_order(a, b);
        if (a.den_ == b.den_) return FieldElement(a.num_ + b.num_, a.den_, D);
        return FieldElement(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, D);
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        if (a.is_zero() || b.is_zero()) return {};
        const int D = common_root_order(a, b);
        if (a.den_.is_one() && b.den_.is_one()) {
            FieldElement r;
            r.num_ = a.num_ * b.num_;
            r.root_order_ = D;
            r.settle_root_order();
            return r;
        }
        LaurentPoly an = a.num_, bd = b.den_, bn = b.num_, ad = a.den_;
        detail::cancel_common(an, bd);
        detail::cancel_common(bn, ad);
        FieldElement r;
        r.num_ = an * bn;
        r.den_ = ad * bd;
        r.root_order_ = D;
        r.normalize_unit();
        r.settle_root_order();
        return r;
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
    FieldElement& operator/=(const FieldElement& b) { return *this = *this / b; }

    FieldElement inverse() const {
        if (is_zero()) throw DomainError("division by zero");
        FieldElement r;
        r.num_ = den_;
        r.den_ = num_;
        r.root_order_ = root_order_;
        r.normalize_unit();
        return r;
    }

    /// q -> q^{-1}.
    FieldElement bar() const {
        if (is_constant()) return *this;
        FieldElement r;
        r.num_ = num_.reflected();
        r.den_ = den_.reflected();
        r.root_order_ = root_order_;
        r.normalize_unit();
        return r;
    }

    /// Same element written with a root order that is a multiple of the current one.
    FieldElement with_root_order(int D) const {
        if (is_constant() || D == root_order_) {
            FieldElement r = *this;
            if (!is_constant()) r.root_order_ = D;
            return r;
        }
        if (D % root_order_ != 0)
            throw DomainError("root order " + std::to_string(D) + " is not a multiple of " +
                              std::to_string(root_order_));
        const std::int64_t f = D / root_order_;
        FieldElement r;
        r.num_ = num_.scaled_exponents(f);
        r.den_ = den_.scaled_exponents(f);
        r.root_order_ = D;
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        if (a.is_constant() && b.is_constant()) return a.num_ == b.num_;
        return a.root_order_ == b.root_order_ && a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// True iff the element has no pole at q = infinity.
    bool regular_at_infinity() const { return num_.is_zero() || num_.max_exp() <= 0; }

    /// Value at q = infinity; requires regular_at_infinity().
    Rational residue_at_infinity() const {
        if (!regular_at_infinity()) throw DomainError("element has a pole at q = infinity");
        return num_.coefficient(0);
    }

    /// Order of vanishing at q = infinity, in units of 1/D (negative = pole).
    std::int64_t order_at_infinity() const {
        if (is_zero()) throw DomainError("order of zero is undefined");
        return -num_.max_exp(); // den's top exponent is 0
    }

    /// The terms c_e q^{e/D} with e >= 0 of the expansion in powers of q^{-1/D}.
    LaurentPoly polar_part() const {
        if (is_zero() || num_.max_exp() < 0) return {};
        const std::int64_t top = num_.max_exp();
        std::vector<LaurentPoly::Term> out;
        if (den_.is_one()) {
            for (const auto& t : num_.terms())
                if (t.exp >= 0) out.push_back(t);
            return LaurentPoly::from_terms(std::move(out));
        }
        // den = 1 + sum_{e<0} d_e t^e ; invert as a series in t^{-step}
        std::int64_t step = 0;
        for (const auto& t : den_.terms()) step = std::gcd(step, t.exp);
        const auto n = static_cast<std::size_t>(top / step) + 1;
        std::vector<Rational> d(n), inv(n);
        for (const auto& t : den_.terms()) {
            const auto k = static_cast<std::size_t>(-t.exp / step);
            if (k < n) d[k] = t.coef;
        }
        inv[0] = 1;
        for (std::size_t k = 1; k < n; ++k) {
            Rational s = 0;
            for (std::size_t j = 1; j <= k; ++j)
                if (d[j] != 0 && inv[k - j] != 0) s += d[j] * inv[k - j];
            inv[k] = -s;
        }
        for (const auto& t : num_.terms()) {
            if (t.exp < 0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                const std::int64_t e = t.exp - static_cast<std::int64_t>(k) * step;
                if (e < 0) break;
                if (inv[k] != 0) out.push_back({e, t.coef * inv[k]});
            }
        }
        return LaurentPoly::from_terms(std::move(out));
    }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.str(); }

private:
    static int common_root_order(const FieldElement& a, const FieldElement& b) {
        if (a.root_order_ == b.root_order_) return a.root_order_;
        if (a.is_constant()) return b.root_order_;
        if (b.is_constant()) return a.root_order_;
        throw DomainError("mismatched root orders " + std::to_string(a.root_order_) + " and " +
                          std::to_string(b.root_order_));
    }

    // Divide through by den's leading monomial so den = 1*t^0 + lower terms.
    void normalize_unit() {
        if (num_.is_zero()) {
            den_ = LaurentPoly(Rational(1));
            root_order_ = 1;
            return;
        }
        if (den_.is_one()) return;
        const std::int64_t e = den_.max_exp();
        const Rational c = den_.lead();
        const Rational inv = 1 / c;
        num_ = num_.times_monomial(-e, inv);
        den_ = den_.times_monomial(-e, inv);
    }

    void settle_root_order() {
        if (is_constant()) root_order_ = 1;
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_ = LaurentPoly(Rational(1));
            root_order_ = 1;
            return;
        }
        detail::cancel_common(num_, den_);
        normalize_unit();
        settle_root_order();
    }

    LaurentPoly num_;
    LaurentPoly den_;
    int root_order_ = 1;
};

namespace detail {

inline std::string rational_str(const Rational& r) { return r.get_str(); }

inline std::string laurent_str(const LaurentPoly& p, int D) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        Rational c = it->coef;
        const bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        const Fraction e(it->exp, D);
        if (e.is_zero()) {
            os << c.get_str();
            continue;
        }
        if (c != 1) os << c.get_str() << "*";
        os << "q";
        if (e != Fraction(1)) os << (e.is_integer() ? "^" + e.str() : "^(" + e.str() + ")");
    }
    return os.str();
}

} // namespace detail

inline std::string FieldElement::str() const {
    if (den_.is_one()) return detail::laurent_str(num_, root_order_);
    return "(" + detail::laurent_str(num_, root_order_) + ")/(" + detail::laurent_str(den_, root_order_) + ")";
}

/// (flag, residue) pair of the regularity test at q = infinity.
struct InfinityValue {
    bool regular;
    Rational residue;
};

inline InfinityValue regular_at_infinity(const FieldElement& a) {
    if (!a.regular_at_infinity()) return {false, 0};
    return {true, a.residue_at_infinity()};
}

/// a_0 + sum_{e>0} a_e (q^e + q^{-e}) from the nonnegative-exponent part of p.
inline FieldElement symmetric_completion(const LaurentPoly& p, int D) {
    std::vector<LaurentPoly::Term> terms;
    for (const auto& t : p.terms()) {
        if (t.exp < 0) throw DomainError("symmetric completion expects exponents >= 0");
        terms.push_back(t);
        if (t.exp > 0) terms.push_back({-t.exp, t.coef});
    }
    return {LaurentPoly::from_terms(std::move(terms)), LaurentPoly(Rational(1)), D};
}

/// [n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d}), as a Laurent polynomial.
inline FieldElement quantum_integer(long n, int d, int D = 1) {
    if (d <= 0) throw DomainError("quantum integer needs d > 0");
    if (n == 0) return {};
    const long m = n < 0 ? -n : n;
    std::vector<LaurentPoly::Term> terms;
    for (long k = -(m - 1); k <= m - 1; k += 2) terms.push_back({k * d * D, Rational(1)});
    FieldElement r(LaurentPoly::from_terms(std::move(terms)), LaurentPoly(Rational(1)), D);
    return n < 0 ? -r : r;
}

/// [n]_{q^d}! = [n][n-1]...[1]
inline FieldElement quantum_factorial(long n, int d, int D = 1) {
    if (n < 0) throw DomainError("quantum factorial of a negative integer");
    FieldElement r = FieldElement::one();
    for (long k = 2; k <= n; ++k) r *= quantum_integer(k, d, D);
    return r;
}

/// Quantum binomial [n choose k]_{q^d} for 0 <= k <= n; a Laurent polynomial.
inline FieldElement quantum_binomial(long n, long k, int d, int D = 1) {
    if (k < 0 || k > n) return {};
    FieldElement num = FieldElement::one(), den = FieldElement::one();
    for (long j = 0; j < k; ++j) {
        num *= quantum_integer(n - j, d, D);
        den *= quantum_integer(j + 1, d, D);
    }
    return num / den;
}

} // namespace uqr
