#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <compare>

namespace prsweep::numeric {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dyadic value mant * 2^exp. Addition, subtraction and multiplication are
/// exact; division, square root and conversion from Rational round in a
/// caller-chosen direction at a caller-chosen precision.
struct Dyadic {
    BigInt mant;
    std::int64_t exp = 0;

    Dyadic() = default;
    Dyadic(BigInt m, std::int64_t e) : mant(std::move(m)), exp(e) { normalize(); }
    explicit Dyadic(long v) : mant(v), exp(0) {}

    bool is_zero() const { return mant == 0; }
    int sign() const { return mant == 0 ? 0 : (mant < 0 ? -1 : 1); }

    // strip trailing zero bits into exp
    void normalize();

    Dyadic operator-() const { return Dyadic(-mant, exp); }
    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a <=> b) == 0; }

    /// Round toward -inf (down) / +inf (up), keeping at most `bits` mantissa bits.
    Dyadic round_down(unsigned bits) const;
    Dyadic round_up(unsigned bits) const;

    Rational to_rational() const;
    double to_double() const;

    static Dyadic from_rational(const Rational& r, unsigned bits, bool round_up);
    /// Directed-rounding quotient at `bits` mantissa bits. b must be nonzero.
    static Dyadic div(const Dyadic& a, const Dyadic& b, unsigned bits, bool round_up);
    /// Directed-rounding square root. a must be >= 0.
    static Dyadic sqrt(const Dyadic& a, unsigned bits, bool round_up);
};

/// Closed interval [lo, hi] with dyadic endpoints; guaranteed to contain the
/// value it encloses. All operations round outward at precision `bits`.
struct Interval {
    Dyadic lo, hi;

    Interval() = default;
    Interval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {}
    static Interval exact(const Dyadic& d) { return {d, d}; }
    static Interval of_rational(const Rational& r, unsigned bits);

    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    /// +1 if strictly positive, -1 if strictly negative, 0 if sign unknown.
    int sign() const;
    bool disjoint_below(const Interval& other) const { return hi < other.lo; }

    Interval operator-() const { return {-hi, -lo}; }
    static Interval add(const Interval& a, const Interval& b, unsigned bits);
    static Interval sub(const Interval& a, const Interval& b, unsigned bits);
    static Interval mul(const Interval& a, const Interval& b, unsigned bits);
    /// b must not contain zero.
    static Interval div(const Interval& a, const Interval& b, unsigned bits);
    /// Enclosed value must be >= 0; a slightly negative lower bound is clamped.
    static Interval sqrt(const Interval& a, unsigned bits);
    /// Intersection; both must overlap (they enclose the same value).
    static Interval meet(const Interval& a, const Interval& b);

    double mid_double() const { return (lo.to_double() + hi.to_double()) / 2.0; }
};

/// msb position (bit length) of |v|; 0 for v == 0.
unsigned bit_length(const BigInt& v);

}  // namespace prsweep::numeric
