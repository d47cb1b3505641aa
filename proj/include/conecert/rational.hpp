#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace conecert {

/// Small exact rational used to keep catalog slopes exact (all catalog
/// slopes are rational, so class-(b) membership can be decided without a
/// floating tolerance).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rational{n, d};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        // cross multiplication; catalog values are tiny, no overflow concern
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    Rational operator*(const Rational& o) const { return of(num * o.num, den * o.den); }
    Rational operator/(const Rational& o) const { return of(num * o.den, den * o.num); }
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace conecert
