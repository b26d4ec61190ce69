#pragma once

#include "prsweep/dyadic.hpp"

#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace prsweep {

enum class Errc {
    PrecisionExhausted,
    NegativeRadicand,
    DegenerateEquation,
    NotATree,
    InvalidSpec,
    LevelCountMismatch,
    IdenticalCircles,
    EmptyRegion,
    DisconnectedRegion,
    UnboundedRegion,
    NonGenericEvent,
    UnrepresentableEvent,
    SynthesisFailed,
    InvalidInstance,
    InvalidInput,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

const char* errc_name(Errc c);

namespace numeric {

/// Hard cap on certified-comparison working precision, in bits. Hitting it
/// raises PrecisionExhausted; it is never silently ignored.
unsigned max_precision_bits();
void set_max_precision_bits(unsigned bits);

Rational make_rational(const BigInt& num, const BigInt& den);
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

/// Square-free decomposition n = square * sf with sf square-free. n > 0.
struct SquareFree {
    BigInt root;  // sqrt of the square part
    BigInt sf;    // square-free part
};
SquareFree square_free_decompose(const BigInt& n);

/// p + q*sqrt(s) with q != 0 and s square-free, s >= 2.
struct Surd {
    Rational p, q;
    BigInt s;
};

// --- certified expression trees -------------------------------------------

enum class ExprOp { Const, Add, Sub, Mul, Div, Sqrt };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprOp op;
    Rational value;  // Const only
    ExprPtr a, b;
    std::size_t hash = 0;
};

ExprPtr expr_const(const Rational& r);
ExprPtr expr_binary(ExprOp op, ExprPtr a, ExprPtr b);
ExprPtr expr_sqrt(ExprPtr a);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
/// Outward enclosure of the expression value at the given working precision.
Interval expr_eval(const ExprPtr& e, unsigned bits);

/// Certified real number: an exact expression plus a refinable dyadic
/// enclosure. The true value always lies in the enclosure and refining never
/// widens it.
class Certified {
public:
    explicit Certified(ExprPtr expr);
    const ExprPtr& expr() const { return expr_; }
    /// Enclosure at >= bits working precision (cached, monotone).
    Interval enclosure(unsigned bits) const;

private:
    struct Cache;
    ExprPtr expr_;
    std::shared_ptr<Cache> cache_;
};

// --- the exact value -------------------------------------------------------

/// A real number: rational, quadratic surd, or certified expression.
/// Arithmetic stays exact within one radicand; anything mixing radicands is
/// promoted to Certified. Values are immutable.
class Exact {
public:
    Exact() : v_(Rational(0)) {}
    Exact(const Rational& r) : v_(r) {}
    Exact(Rational&& r) : v_(std::move(r)) {}
    Exact(long n) : v_(Rational(n)) {}
    Exact(const Surd& s) : v_(normalize(s)) {}
    Exact(const Certified& c) : v_(c) {}

    bool is_rational() const { return std::holds_alternative<Rational>(v_); }
    bool is_surd() const { return std::holds_alternative<Surd>(v_); }
    bool is_certified() const { return std::holds_alternative<Certified>(v_); }

    const Rational& rational() const { return std::get<Rational>(v_); }
    const Surd& surd() const { return std::get<Surd>(v_); }
    const Certified& certified() const { return std::get<Certified>(v_); }

    Exact operator-() const;
    friend Exact operator+(const Exact& a, const Exact& b);
    friend Exact operator-(const Exact& a, const Exact& b);
    friend Exact operator*(const Exact& a, const Exact& b);
    /// b must be exactly nonzero (rational or surd, or certified built from a
    /// symbolically nonzero value).
    friend Exact operator/(const Exact& a, const Exact& b);

    double to_double() const;
    /// Outward dyadic enclosure at the given precision.
    Interval enclosure(unsigned bits) const;
    ExprPtr to_expr() const;
    std::string to_string() const;

private:
    static std::variant<Rational, Surd, Certified> normalize(const Surd& s);
    std::variant<Rational, Surd, Certified> v_;
};

/// Exact total-order comparison. Rational/Surd pairs are decided by sign
/// tests with repeated squaring; Certified operands are refined until the
/// enclosures separate or the expressions are structurally equal. Equal is
/// only ever returned from the exact/symbolic path.
std::strong_ordering compare(const Exact& a, const Exact& b);
int sign(const Exact& a);
bool exact_eq(const Exact& a, const Exact& b);
inline bool exact_lt(const Exact& a, const Exact& b) { return compare(a, b) < 0; }
inline bool exact_le(const Exact& a, const Exact& b) { return compare(a, b) <= 0; }

/// sqrt of a nonnegative rational: rational when possible, else a pure surd.
Exact sqrt_exact(const Rational& a);
/// sqrt of any nonnegative exact value; tries the exact field square root for
/// surds and falls back to a certified expression.
Exact sqrt_exact(const Exact& a);
/// Square root of p+q*sqrt(s) inside Q(sqrt(s)), if one exists there.
std::optional<Exact> field_sqrt(const Surd& x);

/// Real roots of a*x^2 + b*x + c in increasing order. Rejects a=b=c=0.
std::vector<Exact> solve_quadratic(const Rational& a, const Rational& b, const Rational& c);

}  // namespace numeric
}  // namespace prsweep
