#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace xcsit {

// Exact rational arithmetic for degrees-of-freedom bookkeeping. Values stay
// tiny (denominators like 3, 5, 45), so long long never overflows here.
struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    constexpr Rational(long long n, long long d = 1) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

constexpr Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

constexpr Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
}

constexpr bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

inline std::string to_string(const Rational& r) {
    return r.den == 1 ? std::to_string(r.num)
                      : std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace xcsit
