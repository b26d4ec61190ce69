#include "prsweep/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prsweep::numeric {

unsigned bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(v < 0 ? BigInt(-v) : v)) + 1;
}

void Dyadic::normalize() {
    if (mant == 0) { exp = 0; return; }
    unsigned tz = static_cast<unsigned>(boost::multiprecision::lsb(mant < 0 ? BigInt(-mant) : mant));
    if (tz > 0) {
        mant >>= tz;
        exp += tz;
    }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.mant == 0) return b;
    if (b.mant == 0) return a;
    if (a.exp >= b.exp) {
        BigInt m = (a.mant << static_cast<unsigned>(a.exp - b.exp)) + b.mant;
        return Dyadic(std::move(m), b.exp);
    }
    BigInt m = a.mant + (b.mant << static_cast<unsigned>(b.exp - a.exp));
    return Dyadic(std::move(m), a.exp);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.mant * b.mant, a.exp + b.exp);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::strong_ordering::equal;
    Dyadic d = a - b;
    int s = d.sign();
    return s <=> 0;
}

Dyadic Dyadic::round_down(unsigned bits) const {
    unsigned len = bit_length(mant);
    if (len <= bits) return *this;
    unsigned drop = len - bits;
    BigInt m = mant >> drop;  // arithmetic shift: floor for negatives
    return Dyadic(std::move(m), exp + drop);
}

Dyadic Dyadic::round_up(unsigned bits) const {
    unsigned len = bit_length(mant);
    if (len <= bits) return *this;
    unsigned drop = len - bits;
    BigInt m = mant >> drop;
    BigInt rest = mant - (m << drop);
    if (rest != 0) m += 1;
    return Dyadic(std::move(m), exp + drop);
}

Rational Dyadic::to_rational() const {
    if (exp >= 0) return Rational(mant << static_cast<unsigned>(exp));
    return Rational(mant, BigInt(1) << static_cast<unsigned>(-exp));
}

double Dyadic::to_double() const {
    if (mant == 0) return 0.0;
    unsigned len = bit_length(mant);
    if (len <= 63) {
        return std::ldexp(static_cast<double>(mant.convert_to<std::int64_t>()),
                          static_cast<int>(exp));
    }
    unsigned drop = len - 63;
    BigInt top = mant >> drop;
    return std::ldexp(static_cast<double>(top.convert_to<std::int64_t>()),
                      static_cast<int>(exp + drop));
}

namespace {

// floor / ceil division of BigInt (den > 0)
BigInt div_floor(const BigInt& num, const BigInt& den) {
    BigInt q = num / den, r = num % den;
    if (r != 0 && num < 0) q -= 1;
    return q;
}
BigInt div_ceil(const BigInt& num, const BigInt& den) {
    BigInt q = num / den, r = num % den;
    if (r != 0 && num > 0) q += 1;
    return q;
}

}  // namespace

Dyadic Dyadic::from_rational(const Rational& r, unsigned bits, bool up) {
    if (r == 0) return Dyadic();
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    // scale so the quotient has ~bits+2 significant bits
    std::int64_t shift = static_cast<std::int64_t>(bits) + 2 +
                         static_cast<std::int64_t>(bit_length(den)) -
                         static_cast<std::int64_t>(bit_length(num));
    BigInt n = num, d = den;
    if (shift >= 0) n <<= static_cast<unsigned>(shift);
    else d <<= static_cast<unsigned>(-shift);
    BigInt q = up ? div_ceil(n, d) : div_floor(n, d);
    return Dyadic(std::move(q), -shift);
}

Dyadic Dyadic::div(const Dyadic& a, const Dyadic& b, unsigned bits, bool up) {
    if (b.mant == 0) throw std::invalid_argument("Dyadic::div by zero");
    if (a.mant == 0) return Dyadic();
    std::int64_t shift = static_cast<std::int64_t>(bits) + 2 +
                         static_cast<std::int64_t>(bit_length(b.mant)) -
                         static_cast<std::int64_t>(bit_length(a.mant));
    BigInt n = a.mant, d = b.mant;
    if (shift >= 0) n <<= static_cast<unsigned>(shift);
    else d <<= static_cast<unsigned>(-shift);
    if (d < 0) { n = -n; d = -d; }
    BigInt q = up ? div_ceil(n, d) : div_floor(n, d);
    return Dyadic(std::move(q), a.exp - b.exp - shift);
}

Dyadic Dyadic::sqrt(const Dyadic& a, unsigned bits, bool up) {
    if (a.sign() < 0) throw std::invalid_argument("Dyadic::sqrt of negative");
    if (a.mant == 0) return Dyadic();
    // scale mantissa to >= 2*bits+2 significant bits with even exponent
    BigInt m = a.mant;
    std::int64_t e = a.exp;
    std::int64_t want = 2 * static_cast<std::int64_t>(bits) + 2;
    std::int64_t have = static_cast<std::int64_t>(bit_length(m));
    std::int64_t extra = std::max<std::int64_t>(0, want - have);
    if ((e - extra) % 2 != 0) extra += 1;
    m <<= static_cast<unsigned>(extra);
    e -= extra;
    BigInt s = boost::multiprecision::sqrt(m);  // floor sqrt
    if (up && s * s != m) s += 1;
    return Dyadic(std::move(s), e / 2);
}

Interval Interval::of_rational(const Rational& r, unsigned bits) {
    return {Dyadic::from_rational(r, bits, false), Dyadic::from_rational(r, bits, true)};
}

int Interval::sign() const {
    if (lo.sign() > 0) return 1;
    if (hi.sign() < 0) return -1;
    return 0;
}

Interval Interval::add(const Interval& a, const Interval& b, unsigned bits) {
    return {(a.lo + b.lo).round_down(bits), (a.hi + b.hi).round_up(bits)};
}

Interval Interval::sub(const Interval& a, const Interval& b, unsigned bits) {
    return {(a.lo - b.hi).round_down(bits), (a.hi - b.lo).round_up(bits)};
}

Interval Interval::mul(const Interval& a, const Interval& b, unsigned bits) {
    Dyadic c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    Dyadic lo = c[0], hi = c[0];
    for (int i = 1; i < 4; ++i) {
        if (c[i] < lo) lo = c[i];
        if (hi < c[i]) hi = c[i];
    }
    return {lo.round_down(bits), hi.round_up(bits)};
}

Interval Interval::div(const Interval& a, const Interval& b, unsigned bits) {
    if (b.contains_zero()) throw std::invalid_argument("Interval::div by interval containing zero");
    Dyadic c[4] = {Dyadic::div(a.lo, b.lo, bits, false), Dyadic::div(a.lo, b.hi, bits, false),
                   Dyadic::div(a.hi, b.lo, bits, false), Dyadic::div(a.hi, b.hi, bits, false)};
    Dyadic d[4] = {Dyadic::div(a.lo, b.lo, bits, true), Dyadic::div(a.lo, b.hi, bits, true),
                   Dyadic::div(a.hi, b.lo, bits, true), Dyadic::div(a.hi, b.hi, bits, true)};
    Dyadic lo = c[0], hi = d[0];
    for (int i = 1; i < 4; ++i) {
        if (c[i] < lo) lo = c[i];
        if (hi < d[i]) hi = d[i];
    }
    return {lo, hi};
}

Interval Interval::sqrt(const Interval& a, unsigned bits) {
    Dyadic lo = a.lo.sign() <= 0 ? Dyadic() : Dyadic::sqrt(a.lo, bits, false);
    if (a.hi.sign() < 0) throw std::invalid_argument("Interval::sqrt of negative interval");
    return {std::move(lo), Dyadic::sqrt(a.hi, bits, true)};
}

Interval Interval::meet(const Interval& a, const Interval& b) {
    Interval r{std::max(a.lo, b.lo, [](const Dyadic& x, const Dyadic& y) { return x < y; }),
               std::min(a.hi, b.hi, [](const Dyadic& x, const Dyadic& y) { return x < y; })};
    if (r.hi < r.lo) throw std::logic_error("Interval::meet of disjoint enclosures");
    return r;
}

}  // namespace prsweep::numeric
