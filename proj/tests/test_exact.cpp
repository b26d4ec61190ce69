#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prsweep/exact.hpp"
#include "test_util.hpp"

using namespace prsweep;
using namespace prsweep::numeric;
using prsweep::testutil::BigFloat;
using prsweep::testutil::bigfloat_of;

namespace {

Exact surd(long p_num, long p_den, long q_num, long q_den, long s) {
    return Exact(Surd{Rational(p_num, p_den), Rational(q_num, q_den), BigInt(s)});
}

int oracle_sign(const Exact& a, const Exact& b, const BigFloat& margin) {
    BigFloat d = bigfloat_of(a) - bigfloat_of(b);
    if (d > margin) return 1;
    if (d < -margin) return -1;
    return 0;  // oracle not confident
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(rational_to_string(parse_rational("3/2")) == "3/2");
    CHECK(rational_to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(rational_to_string(parse_rational("7")) == "7");
    CHECK(rational_to_string(parse_rational("0/5")) == "0");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("compare on rationals and surds") {
    CHECK(compare(Exact(Rational(3, 2)), Exact(Rational(3, 2))) == std::strong_ordering::equal);

    // 1 + sqrt(2) = 2.41421356... < 5/2, margin confirmed by the 256-bit oracle
    Exact a = surd(1, 1, 1, 1, 2);
    Exact b{Rational(5, 2)};
    REQUIRE(oracle_sign(a, b, BigFloat(1e-9)) == -1);
    CHECK(compare(a, b) == std::strong_ordering::less);

    // 2 - sqrt(2) = 0.58578643... > 1/2
    Exact c = surd(2, 1, -1, 1, 2);
    Exact d{Rational(1, 2)};
    REQUIRE(oracle_sign(c, d, BigFloat(1e-9)) == 1);
    CHECK(compare(c, d) == std::strong_ordering::greater);

    // same-radicand equality through different normal forms
    CHECK(exact_eq(sqrt_exact(Rational(8)), surd(0, 1, 2, 1, 2)));
    // cross-radicand comparisons
    CHECK(compare(surd(0, 1, 1, 1, 2), surd(0, 1, 1, 1, 3)) == std::strong_ordering::less);
    CHECK(compare(surd(1, 1, 1, 1, 5), surd(2, 1, 1, 1, 2)) ==
          (bigfloat_of(surd(1, 1, 1, 1, 5)) < bigfloat_of(surd(2, 1, 1, 1, 2))
               ? std::strong_ordering::less
               : std::strong_ordering::greater));
}

TEST_CASE("1000 random surd comparisons agree with the 256-bit oracle") {
    std::mt19937_64 rng(20240811);
    BigFloat margin = boost::multiprecision::pow(BigFloat(2), -128);
    int confident = 0;
    for (int i = 0; i < 1000; ++i) {
        Exact a = testutil::random_surd(rng);
        Exact b = testutil::random_surd(rng);
        int os = oracle_sign(a, b, margin);
        if (os == 0) continue;
        ++confident;
        auto c = compare(a, b);
        CHECK((os < 0 ? c == std::strong_ordering::less : c == std::strong_ordering::greater));
    }
    CHECK(confident > 900);
}

TEST_CASE("compare is a total order on random triples") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Exact a = testutil::random_surd(rng);
        Exact b = testutil::random_surd(rng);
        Exact c = testutil::random_surd(rng);
        auto ab = compare(a, b), ba = compare(b, a);
        CHECK((ab == std::strong_ordering::equal) == (ba == std::strong_ordering::equal));
        if (ab == std::strong_ordering::less) CHECK(ba == std::strong_ordering::greater);
        if (ab != std::strong_ordering::greater && compare(b, c) != std::strong_ordering::greater)
            CHECK(compare(a, c) != std::strong_ordering::greater);
    }
}

TEST_CASE("surd arithmetic stays closed within one radicand") {
    Exact a = surd(1, 2, 3, 1, 5);
    Exact b = surd(-2, 1, 1, 3, 5);
    for (const Exact& v : {a + b, a - b, a * b, a / b}) CHECK_FALSE(v.is_certified());
    // mixing radicands promotes to certified
    CHECK((surd(1, 1, 1, 1, 2) + surd(0, 1, 1, 1, 3)).is_certified());
    // except for products of pure roots
    Exact prod = surd(0, 1, 1, 1, 2) * surd(0, 1, 1, 1, 3);
    REQUIRE(prod.is_surd());
    CHECK(prod.surd().s == 6);
    // and arithmetic agrees with the oracle
    BigFloat expect = bigfloat_of(a) * bigfloat_of(b);
    CHECK(abs(bigfloat_of(a * b) - expect) < BigFloat(1e-60));
}

TEST_CASE("solve_quadratic") {
    auto roots = solve_quadratic(1, -2, -1);
    REQUIRE(roots.size() == 2);
    CHECK(exact_eq(roots[0], surd(1, 1, -1, 1, 2)));
    CHECK(exact_eq(roots[1], surd(1, 1, 1, 1, 2)));

    roots = solve_quadratic(1, 0, -4);
    REQUIRE(roots.size() == 2);
    CHECK(exact_eq(roots[0], Exact(-2L)));
    CHECK(exact_eq(roots[1], Exact(2L)));

    CHECK(solve_quadratic(1, 0, 1).empty());
    CHECK(solve_quadratic(0, 0, 3).empty());
    CHECK_THROWS_AS(solve_quadratic(0, 0, 0), Error);
    auto lin = solve_quadratic(0, 2, -3);
    REQUIRE(lin.size() == 1);
    CHECK(exact_eq(lin[0], Exact(Rational(3, 2))));
}

TEST_CASE("quadratic roots satisfy the equation symbolically") {
    std::mt19937_64 rng(99);
    int checked = 0;
    while (checked < 200) {
        Rational a = testutil::random_rational(rng, 10, 5);
        Rational b = testutil::random_rational(rng, 10, 5);
        Rational c = testutil::random_rational(rng, 10, 5);
        if (a == 0 && b == 0) continue;
        for (const Exact& r : solve_quadratic(a, b, c)) {
            Exact residue = Exact(a) * r * r + Exact(b) * r + Exact(c);
            REQUIRE_FALSE(residue.is_certified());
            CHECK(sign(residue) == 0);
        }
        ++checked;
    }
}

TEST_CASE("sqrt_exact") {
    CHECK(exact_eq(sqrt_exact(Rational(4)), Exact(2L)));
    CHECK(exact_eq(sqrt_exact(Rational(8)), surd(0, 1, 2, 1, 2)));
    CHECK(exact_eq(sqrt_exact(Rational(9, 16)), Exact(Rational(3, 4))));
    CHECK(exact_eq(sqrt_exact(Rational(0)), Exact(0L)));
    CHECK_THROWS_AS(sqrt_exact(Rational(-1)), Error);
    // radicand reduction keeps s square-free
    Exact v = sqrt_exact(Rational(2700));  // 2700 = 900 * 3
    REQUIRE(v.is_surd());
    CHECK(v.surd().s == 3);
    CHECK(v.surd().q == 30);
}

TEST_CASE("field square roots of surds") {
    // sqrt(3 + 2 sqrt(2)) = 1 + sqrt(2)
    Exact r = sqrt_exact(surd(3, 1, 2, 1, 2));
    REQUIRE(r.is_surd());
    CHECK(exact_eq(r, surd(1, 1, 1, 1, 2)));
    // square of any surd has an exact field root
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Exact x = testutil::random_surd(rng);
        if (sign(x) < 0) x = -x;
        Exact sq = x * x;  // rational when x is a pure root
        Exact back = sqrt_exact(sq);
        REQUIRE_FALSE(back.is_certified());
        CHECK(exact_eq(back, x));
    }
    // sqrt(1 + sqrt(2)) has no degree-2 form; falls back to certified
    CHECK(sqrt_exact(surd(1, 1, 1, 1, 2)).is_certified());
}

TEST_CASE("certified refinement is monotone") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 50; ++i) {
        // nested expression sqrt(|a| + sqrt(|b| + 1)) / (|c| + 1/7)
        Rational a = abs(testutil::random_rational(rng));
        Rational b = abs(testutil::random_rational(rng));
        Rational c = abs(testutil::random_rational(rng));
        ExprPtr e = expr_binary(
            ExprOp::Div,
            expr_sqrt(expr_binary(ExprOp::Add, expr_const(a),
                                  expr_sqrt(expr_binary(ExprOp::Add, expr_const(b), expr_const(1))))),
            expr_binary(ExprOp::Add, expr_const(c), expr_const(Rational(1, 7))));
        for (unsigned p : {64u, 128u, 256u}) {
            Interval wide = expr_eval(e, p);
            Interval tight = expr_eval(e, 2 * p);
            CHECK(wide.lo <= tight.lo);
            CHECK(tight.hi <= wide.hi);
            CHECK(tight.lo <= tight.hi);
        }
    }
}

TEST_CASE("certified comparison separates distinct values and stays stable") {
    // sqrt(2)+sqrt(3) vs the certified sqrt(9.899...) would exhaust; distinct
    // values separate quickly instead
    Exact lhs = Exact(Certified(expr_sqrt(expr_const(2)))) + Exact(Certified(expr_sqrt(expr_const(3))));
    REQUIRE(lhs.is_certified());
    CHECK(compare(lhs, Exact(Rational(31, 10))) == std::strong_ordering::greater);
    CHECK(compare(lhs, Exact(Rational(33, 10))) == std::strong_ordering::less);

    // decisions are identical when the precision cap doubles
    unsigned base = max_precision_bits();
    auto r1 = compare(lhs, Exact(Rational(314, 100)));
    set_max_precision_bits(base * 2);
    auto r2 = compare(lhs, Exact(Rational(314, 100)));
    set_max_precision_bits(base);
    CHECK(r1 == r2);
}

TEST_CASE("identical expression trees compare equal symbolically") {
    ExprPtr e = expr_sqrt(expr_binary(ExprOp::Add, expr_const(1), expr_sqrt(expr_const(2))));
    Exact a{Certified(e)};
    Exact b{Certified(e)};
    CHECK(compare(a, b) == std::strong_ordering::equal);
    // structural equality, not just pointer equality
    ExprPtr e2 = expr_sqrt(expr_binary(ExprOp::Add, expr_const(1), expr_sqrt(expr_const(2))));
    CHECK(compare(a, Exact(Certified(e2))) == std::strong_ordering::equal);
}

TEST_CASE("equal values without a symbolic path exhaust precision loudly") {
    // sqrt(2)*sqrt(3) == sqrt(6) but the trees differ
    Exact a = Exact(Certified(expr_sqrt(expr_const(2)))) * Exact(Certified(expr_sqrt(expr_const(3))));
    Exact b{Certified(expr_sqrt(expr_const(6)))};
    unsigned base = max_precision_bits();
    set_max_precision_bits(512);
    CHECK_THROWS_AS((void)compare(a, b), Error);
    try {
        (void)compare(a, b);
    } catch (const Error& err) {
        CHECK(err.code() == Errc::PrecisionExhausted);
    }
    set_max_precision_bits(base);
}

TEST_CASE("enclosures always contain the oracle value") {
    std::mt19937_64 rng(8086);
    for (int i = 0; i < 100; ++i) {
        Exact x = testutil::random_surd(rng);
        Interval iv = x.enclosure(96);
        BigFloat v = bigfloat_of(x);
        CHECK(BigFloat(iv.lo.to_double()) <= v + BigFloat(1e-12));
        CHECK(v - BigFloat(1e-12) <= BigFloat(iv.hi.to_double()));
    }
}
