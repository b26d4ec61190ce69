#include "prsweep/exact.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace prsweep {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::PrecisionExhausted: return "PrecisionExhausted";
        case Errc::NegativeRadicand: return "NegativeRadicand";
        case Errc::DegenerateEquation: return "DegenerateEquation";
        case Errc::NotATree: return "NotATree";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::LevelCountMismatch: return "LevelCountMismatch";
        case Errc::IdenticalCircles: return "IdenticalCircles";
        case Errc::EmptyRegion: return "EmptyRegion";
        case Errc::DisconnectedRegion: return "DisconnectedRegion";
        case Errc::UnboundedRegion: return "UnboundedRegion";
        case Errc::NonGenericEvent: return "NonGenericEvent";
        case Errc::UnrepresentableEvent: return "UnrepresentableEvent";
        case Errc::SynthesisFailed: return "SynthesisFailed";
        case Errc::InvalidInstance: return "InvalidInstance";
        case Errc::InvalidInput: return "InvalidInput";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

namespace numeric {

namespace {

std::atomic<unsigned> g_max_bits{4096};

// signalled when an interval operation cannot proceed at the current
// precision (division by an enclosure still straddling zero)
struct RefineSignal {};

}  // namespace

unsigned max_precision_bits() { return g_max_bits.load(); }
void set_max_precision_bits(unsigned bits) { g_max_bits.store(bits == 0 ? 64 : bits); }

Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(Errc::InvalidInput, "rational with zero denominator");
    return Rational(num, den);
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error(Errc::InvalidInput, "bad rational: '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const std::exception&) {
        throw bad();
    }
}

std::string rational_to_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// --- integer factorization (for radicand reduction) ------------------------

namespace {

// raised when a radicand resists the factoring budget; callers fall back to
// certified arithmetic
struct FactorBudgetExceeded {};

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t pollard_rho64(std::uint64_t n, long& budget) {
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            if (--budget < 0) throw FactorBudgetExceeded{};
            x = (mulmod64(x, x, n) + c) % n;
            y = (mulmod64(y, y, n) + c) % n;
            y = (mulmod64(y, y, n) + c) % n;
            std::uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

BigInt pollard_rho_big(const BigInt& n, long& budget) {
    for (BigInt c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        while (d == 1) {
            if (--budget < 0) throw FactorBudgetExceeded{};
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            BigInt diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = boost::multiprecision::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(const BigInt& n, std::map<BigInt, unsigned>& out, long& budget) {
    if (n == 1) return;
    if (boost::multiprecision::miller_rabin_test(n, 32)) {
        out[n] += 1;
        return;
    }
    // perfect-square shortcut keeps pollard off squares of primes
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) {
        std::map<BigInt, unsigned> sub;
        factor_into(r, sub, budget);
        for (auto& [p, e] : sub) out[p] += 2 * e;
        return;
    }
    BigInt d = n <= std::numeric_limits<std::uint64_t>::max() / 4
                   ? BigInt(pollard_rho64(n.convert_to<std::uint64_t>(), budget))
                   : pollard_rho_big(n, budget);
    factor_into(d, out, budget);
    factor_into(n / d, out, budget);
}

std::mutex g_sf_mutex;
std::map<BigInt, SquareFree> g_sf_cache;

SquareFree square_free_decompose_budgeted(const BigInt& n) {
    if (n <= 0) throw Error(Errc::Internal, "square_free_decompose of non-positive value");
    {
        std::lock_guard<std::mutex> lock(g_sf_mutex);
        auto it = g_sf_cache.find(n);
        if (it != g_sf_cache.end()) return it->second;
    }
    BigInt m = n;
    std::map<BigInt, unsigned> factors;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (m % p == 0) { factors[BigInt(p)] += 1; m /= p; }
    }
    for (long p = 17; m > 1 && static_cast<double>(p) * p <= m.convert_to<double>() * 1.01 &&
                      p < 100000;
         p += 2) {
        while (m % p == 0) { factors[BigInt(p)] += 1; m /= p; }
    }
    long budget = 400000;
    if (m > 1) factor_into(m, factors, budget);
    SquareFree result{1, 1};
    for (auto& [p, e] : factors) {
        for (unsigned i = 0; i < e / 2; ++i) result.root *= p;
        if (e % 2) result.sf *= p;
    }
    std::lock_guard<std::mutex> lock(g_sf_mutex);
    g_sf_cache.emplace(n, result);
    return result;
}

// exact square root of a nonnegative rational when one exists, without any
// factorization
std::optional<Rational> perfect_square_root(const Rational& a) {
    if (a < 0) return std::nullopt;
    if (a == 0) return Rational(0);
    BigInt num = boost::multiprecision::numerator(a);
    BigInt den = boost::multiprecision::denominator(a);
    BigInt rn = boost::multiprecision::sqrt(num);
    if (rn * rn != num) return std::nullopt;
    BigInt rd = boost::multiprecision::sqrt(den);
    if (rd * rd != den) return std::nullopt;
    return Rational(rn, rd);
}

}  // namespace

SquareFree square_free_decompose(const BigInt& n) {
    try {
        return square_free_decompose_budgeted(n);
    } catch (const FactorBudgetExceeded&) {
        throw Error(Errc::PrecisionExhausted,
                    "radicand " + n.str() + " resists the factoring budget");
    }
}

// --- expression trees -------------------------------------------------------

namespace {

std::size_t hash_combine(std::size_t a, std::size_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

std::size_t hash_rational(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt mod = BigInt(1) << 61;
    auto low = [&](const BigInt& v) {
        BigInt m = v % mod;
        if (m < 0) m += mod;
        return static_cast<std::size_t>(m.convert_to<std::uint64_t>());
    };
    return hash_combine(low(num), low(den));
}

}  // namespace

ExprPtr expr_const(const Rational& r) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Const;
    n->value = r;
    n->hash = hash_combine(0x1001, hash_rational(r));
    return n;
}

ExprPtr expr_binary(ExprOp op, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->hash = hash_combine(hash_combine(static_cast<std::size_t>(op) * 0x9e37, n->a->hash),
                           n->b->hash);
    return n;
}

ExprPtr expr_sqrt(ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Sqrt;
    n->a = std::move(a);
    n->hash = hash_combine(0x5057, n->a->hash);
    return n;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->op != b->op) return false;
    if (a->op == ExprOp::Const) return a->value == b->value;
    if (!expr_equal(a->a, b->a)) return false;
    if (a->op == ExprOp::Sqrt) return true;
    return expr_equal(a->b, b->b);
}

namespace {

Interval eval_rec(const ExprNode* e, unsigned bits,
                  std::unordered_map<const ExprNode*, Interval>& memo) {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    Interval r;
    switch (e->op) {
        case ExprOp::Const: r = Interval::of_rational(e->value, bits); break;
        case ExprOp::Add:
            r = Interval::add(eval_rec(e->a.get(), bits, memo), eval_rec(e->b.get(), bits, memo), bits);
            break;
        case ExprOp::Sub:
            r = Interval::sub(eval_rec(e->a.get(), bits, memo), eval_rec(e->b.get(), bits, memo), bits);
            break;
        case ExprOp::Mul:
            r = Interval::mul(eval_rec(e->a.get(), bits, memo), eval_rec(e->b.get(), bits, memo), bits);
            break;
        case ExprOp::Div: {
            Interval den = eval_rec(e->b.get(), bits, memo);
            if (den.contains_zero()) throw RefineSignal{};
            r = Interval::div(eval_rec(e->a.get(), bits, memo), den, bits);
            break;
        }
        case ExprOp::Sqrt: {
            Interval a = eval_rec(e->a.get(), bits, memo);
            if (a.hi.sign() < 0)
                throw Error(Errc::NegativeRadicand, "sqrt of provably negative expression");
            r = Interval::sqrt(a, bits);
            break;
        }
    }
    memo.emplace(e, r);
    return r;
}

}  // namespace

Interval expr_eval(const ExprPtr& e, unsigned bits) {
    std::unordered_map<const ExprNode*, Interval> memo;
    try {
        return eval_rec(e.get(), bits, memo);
    } catch (const RefineSignal&) {
        throw Error(Errc::PrecisionExhausted,
                    "expression not evaluable at requested precision");
    }
}

struct Certified::Cache {
    std::mutex mu;
    unsigned bits = 0;
    std::optional<Interval> iv;
};

Certified::Certified(ExprPtr expr)
    : expr_(std::move(expr)), cache_(std::make_shared<Cache>()) {}

Interval Certified::enclosure(unsigned bits) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->iv && cache_->bits >= bits) return *cache_->iv;
    unsigned work = std::max(bits, 64u);
    for (;;) {
        std::unordered_map<const ExprNode*, Interval> memo;
        try {
            Interval r = eval_rec(expr_.get(), work, memo);
            if (cache_->iv) r = Interval::meet(r, *cache_->iv);
            cache_->iv = r;
            cache_->bits = std::max(cache_->bits, bits);
            return r;
        } catch (const RefineSignal&) {
            if (work >= max_precision_bits())
                throw Error(Errc::PrecisionExhausted,
                            "certified enclosure needs more than the precision cap");
            work *= 2;
        }
    }
}

// --- Exact -------------------------------------------------------------------

std::variant<Rational, Surd, Certified> Exact::normalize(const Surd& s) {
    if (s.q == 0) return s.p;
    if (s.s < 0) throw Error(Errc::NegativeRadicand, "surd with negative radicand");
    if (s.s == 0) return s.p;
    if (s.s == 1) return Rational(s.p + s.q);
    SquareFree d = square_free_decompose(s.s);
    Rational q = s.q * Rational(d.root);
    if (d.sf == 1) return Rational(s.p + q);
    return Surd{s.p, q, d.sf};
}

Exact Exact::operator-() const {
    if (is_rational()) return Exact(Rational(-rational()));
    if (is_surd()) return Exact(Surd{-surd().p, -surd().q, surd().s});
    return Exact(Certified(expr_binary(ExprOp::Sub, expr_const(0), certified().expr())));
}

namespace {

Exact certified_binary(ExprOp op, const Exact& a, const Exact& b) {
    return Exact(Certified(expr_binary(op, a.to_expr(), b.to_expr())));
}

}  // namespace

Exact operator+(const Exact& a, const Exact& b) {
    if (a.is_rational() && b.is_rational()) return Exact(Rational(a.rational() + b.rational()));
    if (a.is_rational() && b.is_surd())
        return Exact(Surd{a.rational() + b.surd().p, b.surd().q, b.surd().s});
    if (a.is_surd() && b.is_rational()) return b + a;
    if (a.is_surd() && b.is_surd() && a.surd().s == b.surd().s)
        return Exact(Surd{a.surd().p + b.surd().p, a.surd().q + b.surd().q, a.surd().s});
    return certified_binary(ExprOp::Add, a, b);
}

Exact operator-(const Exact& a, const Exact& b) {
    if (!a.is_certified() && !b.is_certified()) return a + (-b);
    return certified_binary(ExprOp::Sub, a, b);
}

Exact operator*(const Exact& a, const Exact& b) {
    if (a.is_rational() && b.is_rational()) return Exact(Rational(a.rational() * b.rational()));
    if (a.is_rational() && b.is_surd()) {
        if (a.rational() == 0) return Exact(0L);
        return Exact(Surd{a.rational() * b.surd().p, a.rational() * b.surd().q, b.surd().s});
    }
    if (a.is_surd() && b.is_rational()) return b * a;
    if (a.is_surd() && b.is_surd()) {
        const Surd& x = a.surd();
        const Surd& y = b.surd();
        if (x.s == y.s) {
            Rational p = x.p * y.p + x.q * y.q * Rational(x.s);
            Rational q = x.p * y.q + x.q * y.p;
            return Exact(Surd{p, q, x.s});
        }
        if (x.p == 0 && y.p == 0)  // q1*sqrt(s1) * q2*sqrt(s2) = q1*q2*sqrt(s1*s2)
            return Exact(Surd{0, x.q * y.q, x.s * y.s});
    }
    return certified_binary(ExprOp::Mul, a, b);
}

Exact operator/(const Exact& a, const Exact& b) {
    if (b.is_rational()) {
        if (b.rational() == 0) throw Error(Errc::InvalidInput, "exact division by zero");
        return a * Exact(Rational(1 / b.rational()));
    }
    if (b.is_surd() && (a.is_rational() || (a.is_surd() && a.surd().s == b.surd().s))) {
        const Surd& d = b.surd();
        Rational norm = d.p * d.p - d.q * d.q * Rational(d.s);  // nonzero: surds are irrational
        Exact conj{Surd{d.p / norm, -d.q / norm, d.s}};
        return a * conj;
    }
    return certified_binary(ExprOp::Div, a, b);
}

double Exact::to_double() const {
    return enclosure(64).mid_double();
}

Interval Exact::enclosure(unsigned bits) const {
    if (is_rational()) return Interval::of_rational(rational(), bits);
    if (is_surd()) {
        const Surd& s = surd();
        Interval p = Interval::of_rational(s.p, bits);
        Interval q = Interval::of_rational(s.q, bits);
        Interval rad = Interval::of_rational(Rational(s.s), bits);
        return Interval::add(p, Interval::mul(q, Interval::sqrt(rad, bits), bits), bits);
    }
    return certified().enclosure(bits);
}

ExprPtr Exact::to_expr() const {
    if (is_rational()) return expr_const(rational());
    if (is_surd()) {
        const Surd& s = surd();
        ExprPtr root = expr_sqrt(expr_const(Rational(s.s)));
        return expr_binary(ExprOp::Add, expr_const(s.p),
                           expr_binary(ExprOp::Mul, expr_const(s.q), root));
    }
    return certified().expr();
}

std::string Exact::to_string() const {
    if (is_rational()) return rational_to_string(rational());
    if (is_surd()) {
        const Surd& s = surd();
        std::ostringstream os;
        os << rational_to_string(s.p) << (s.q < 0 ? "-" : "+");
        Rational aq = s.q < 0 ? Rational(-s.q) : s.q;
        os << rational_to_string(aq) << "*sqrt(" << s.s.str() << ")";
        return os.str();
    }
    std::ostringstream os;
    os << "~" << to_double();
    return os.str();
}

// --- comparison --------------------------------------------------------------

namespace {

int sign_rational(const Rational& r) { return r == 0 ? 0 : (r < 0 ? -1 : 1); }

// sign of a + b*sqrt(s), s square-free >= 2
int sign_surd_parts(const Rational& a, const Rational& b, const BigInt& s) {
    int sa = sign_rational(a), sb = sign_rational(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rational a2 = a * a, b2s = b * b * Rational(s);
    if (sa > 0) {  // sb < 0: positive iff a^2 > b^2 s
        if (a2 > b2s) return 1;
        if (a2 == b2s) return 0;
        return -1;
    }
    // sa < 0, sb > 0: positive iff b^2 s > a^2
    if (b2s > a2) return 1;
    if (b2s == a2) return 0;
    return -1;
}

// sign of (p1 + q1 sqrt(s1)) - (p2 + q2 sqrt(s2)) with s1 != s2, q1,q2 != 0
int sign_surd_diff(const Surd& x, const Surd& y) {
    Rational A = x.p - y.p;
    const Rational& B = x.q;
    Rational C = -y.q;
    int sB = sign_rational(B), sC = sign_rational(C);
    int sL;
    if (sB == sC) {
        sL = sB;
    } else {
        Rational b2s1 = B * B * Rational(x.s), c2s2 = C * C * Rational(y.s);
        // equality impossible: square-free parts of B^2 s1 and C^2 s2 differ
        sL = sB > 0 ? (b2s1 > c2s2 ? 1 : -1) : (c2s2 > b2s1 ? 1 : -1);
    }
    int sA = sign_rational(A);
    if (sA == 0) return sL;
    if (sA == sL) return sA;
    // |A| versus |L|: compare A^2 with L^2 = B^2 s1 + C^2 s2 + 2BC sqrt(s1 s2)
    BigInt g = boost::multiprecision::gcd(x.s, y.s);
    BigInt rad = (x.s / g) * (y.s / g);
    Rational rp = A * A - B * B * Rational(x.s) - C * C * Rational(y.s);
    Rational rq = Rational(-2) * B * C * Rational(g);
    int sD = sign_surd_parts(rp, rq, rad);  // sign of A^2 - L^2
    if (sD == 0) throw Error(Errc::Internal, "rational equal to proper two-surd sum");
    return sD > 0 ? sA : sL;
}

std::strong_ordering from_sign(int s) {
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::strong_ordering compare_refining(const Exact& a, const Exact& b) {
    if (expr_equal(a.to_expr(), b.to_expr())) return std::strong_ordering::equal;
    unsigned cap = max_precision_bits();
    for (unsigned bits = 64;; bits *= 2) {
        Interval ia = a.enclosure(bits);
        Interval ib = b.enclosure(bits);
        if (ia.disjoint_below(ib)) return std::strong_ordering::less;
        if (ib.disjoint_below(ia)) return std::strong_ordering::greater;
        if (bits >= cap)
            throw Error(Errc::PrecisionExhausted,
                        "enclosures still overlap at the precision cap (" +
                            std::to_string(cap) + " bits); near-degenerate input");
    }
}

}  // namespace

std::strong_ordering compare(const Exact& a, const Exact& b) {
    if (a.is_rational() && b.is_rational()) {
        if (a.rational() < b.rational()) return std::strong_ordering::less;
        if (a.rational() == b.rational()) return std::strong_ordering::equal;
        return std::strong_ordering::greater;
    }
    if (a.is_rational() && b.is_surd()) {
        const Surd& s = b.surd();
        return from_sign(-sign_surd_parts(s.p - a.rational(), s.q, s.s));
    }
    if (a.is_surd() && b.is_rational()) {
        const Surd& s = a.surd();
        return from_sign(sign_surd_parts(s.p - b.rational(), s.q, s.s));
    }
    if (a.is_surd() && b.is_surd()) {
        const Surd& x = a.surd();
        const Surd& y = b.surd();
        if (x.s == y.s) return from_sign(sign_surd_parts(x.p - y.p, x.q - y.q, x.s));
        return from_sign(sign_surd_diff(x, y));
    }
    return compare_refining(a, b);
}

int sign(const Exact& a) {
    if (a.is_rational()) return sign_rational(a.rational());
    if (a.is_surd()) return sign_surd_parts(a.surd().p, a.surd().q, a.surd().s);
    auto c = compare(a, Exact(0L));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool exact_eq(const Exact& a, const Exact& b) { return compare(a, b) == 0; }

// --- roots -------------------------------------------------------------------

Exact sqrt_exact(const Rational& a) {
    if (a < 0) throw Error(Errc::NegativeRadicand, "sqrt_exact of negative rational");
    if (a == 0) return Exact(0L);
    if (auto r = perfect_square_root(a)) return Exact(*r);
    BigInt num = boost::multiprecision::numerator(a);
    BigInt den = boost::multiprecision::denominator(a);
    try {
        SquareFree d = square_free_decompose_budgeted(num * den);
        Rational coeff(d.root, den);
        if (d.sf == 1) return Exact(coeff);
        return Exact(Surd{0, coeff, d.sf});
    } catch (const FactorBudgetExceeded&) {
        // radicand too hard to reduce to square-free form; fall back to a
        // certified enclosure of the same exact value
        return Exact(Certified(expr_sqrt(expr_const(a))));
    }
}

std::optional<Exact> field_sqrt(const Surd& x) {
    // (u + v sqrt(s))^2 = p + q sqrt(s): u^2 + v^2 s = p, 2uv = q.
    // u^2 is a root of t^2 - p t + s q^2 / 4.
    Rational disc = x.p * x.p - Rational(x.s) * x.q * x.q;
    auto n = perfect_square_root(disc);
    if (!n) return std::nullopt;
    for (Rational t : {Rational((x.p + *n) / 2), Rational((x.p - *n) / 2)}) {
        if (t <= 0) continue;
        auto u = perfect_square_root(t);
        if (!u || *u == 0) continue;
        Rational v = x.q / (2 * *u);
        Exact w{Surd{*u, v, x.s}};
        if (sign(w) < 0) w = -w;
        return w;
    }
    return std::nullopt;
}

Exact sqrt_exact(const Exact& a) {
    if (a.is_rational()) return sqrt_exact(a.rational());
    if (a.is_surd()) {
        int s = sign(a);
        if (s < 0) throw Error(Errc::NegativeRadicand, "sqrt_exact of negative surd");
        if (s == 0) return Exact(0L);
        if (auto r = field_sqrt(a.surd())) return *r;
    }
    return Exact(Certified(expr_sqrt(a.to_expr())));
}

std::vector<Exact> solve_quadratic(const Rational& a, const Rational& b, const Rational& c) {
    if (a == 0 && b == 0) {
        if (c == 0)
            throw Error(Errc::DegenerateEquation, "identically zero quadratic equation");
        return {};
    }
    if (a == 0) return {Exact(Rational(-c / b))};
    Rational disc = b * b - 4 * a * c;
    if (disc < 0) return {};
    if (disc == 0) return {Exact(Rational(-b / (2 * a)))};
    Exact root = sqrt_exact(disc);
    Exact two_a{Rational(2 * a)};
    Exact r1 = (Exact(Rational(-b)) - root) / two_a;
    Exact r2 = (Exact(Rational(-b)) + root) / two_a;
    if (compare(r1, r2) > 0) std::swap(r1, r2);
    return {r1, r2};
}

}  // namespace numeric
}  // namespace prsweep
