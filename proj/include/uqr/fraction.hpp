#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "uqr/error.hpp"

namespace uqr {

/// Small exact rational with 64-bit parts. Used for q-exponents and for
/// values of the bilinear form, which stay tiny for every Cartan datum.
class Fraction {
public:
    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t n) : num_(n) {} // NOLINT(implicit)
    Fraction(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0) throw DomainError("fraction with zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    friend Fraction operator+(Fraction a, Fraction b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Fraction operator-(Fraction a, Fraction b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Fraction operator*(Fraction a, Fraction b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend Fraction operator/(Fraction a, Fraction b) {
        if (b.num_ == 0) throw DomainError("fraction division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    Fraction operator-() const { return {-num_, den_}; }
    Fraction& operator+=(Fraction b) { return *this = *this + b; }
    Fraction& operator-=(Fraction b) { return *this = *this - b; }
    Fraction& operator*=(Fraction b) { return *this = *this * b; }

    friend bool operator==(Fraction a, Fraction b) = default;
    friend auto operator<=>(Fraction a, Fraction b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, Fraction f) { return os << f.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const auto g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using Exponent = Fraction;

} // namespace uqr
