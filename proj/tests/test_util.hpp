#pragma once

#include "prsweep/exact.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

namespace prsweep::testutil {

// independent high-precision float used as a comparison oracle
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

inline BigFloat bigfloat_of(const numeric::Rational& r) {
    return BigFloat(numeric::BigInt(boost::multiprecision::numerator(r))) /
           BigFloat(numeric::BigInt(boost::multiprecision::denominator(r)));
}

inline BigFloat bigfloat_of(const numeric::Exact& e) {
    using boost::multiprecision::sqrt;
    if (e.is_rational()) return bigfloat_of(e.rational());
    if (e.is_surd()) {
        const auto& s = e.surd();
        return bigfloat_of(s.p) + bigfloat_of(s.q) * sqrt(BigFloat(s.s));
    }
    // evaluate the expression tree directly
    struct Eval {
        static BigFloat run(const numeric::ExprNode* n) {
            using numeric::ExprOp;
            switch (n->op) {
                case ExprOp::Const: return bigfloat_of(n->value);
                case ExprOp::Add: return run(n->a.get()) + run(n->b.get());
                case ExprOp::Sub: return run(n->a.get()) - run(n->b.get());
                case ExprOp::Mul: return run(n->a.get()) * run(n->b.get());
                case ExprOp::Div: return run(n->a.get()) / run(n->b.get());
                case ExprOp::Sqrt: return sqrt(run(n->a.get()));
            }
            return BigFloat(0);
        }
    };
    return Eval::run(e.certified().expr().get());
}

inline numeric::Rational random_rational(std::mt19937_64& rng, long max_num = 100,
                                         long max_den = 20) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return numeric::Rational(num(rng), den(rng));
}

inline numeric::BigInt random_squarefree(std::mt19937_64& rng) {
    static const long choices[] = {2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(choices) - 1);
    return numeric::BigInt(choices[pick(rng)]);
}

inline numeric::Exact random_surd(std::mt19937_64& rng) {
    numeric::Rational q = random_rational(rng);
    while (q == 0) q = random_rational(rng);
    return numeric::Exact(numeric::Surd{random_rational(rng), q, random_squarefree(rng)});
}

}  // namespace prsweep::testutil
