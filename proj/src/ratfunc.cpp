#include "qtrm/ratfunc.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace qtrm {

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw division_by_zero("RatFunc: zero denominator");
    normalize();
}

RatFunc RatFunc::fraction(const mpz_class& n, const mpz_class& d) {
    return RatFunc(MultiPoly(n), MultiPoly(d));
}

RatFunc RatFunc::fraction(long long n, long long d) {
    return RatFunc(MultiPoly(n), MultiPoly(d));
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = MultiPoly(1);
        return;
    }
    if (!den_.is_one()) {
        MultiPoly g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = *MultiPoly::divide_exact(num_, g);
            den_ = *MultiPoly::divide_exact(den_, g);
        }
    }
    if (den_.leading().second < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RatFunc RatFunc::operator-() const {
    RatFunc r(*this);
    r.num_ = -r.num_;
    return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    // classic gcd trick: only the common part g of the denominators can
    // cancel against the combined numerator
    MultiPoly g = poly_gcd(a.den_, b.den_);
    if (g.is_one()) return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    MultiPoly da = *MultiPoly::divide_exact(a.den_, g);
    MultiPoly db = *MultiPoly::divide_exact(b.den_, g);
    MultiPoly num = a.num_ * db + b.num_ * da;
    MultiPoly h = poly_gcd(num, g);
    if (!h.is_one()) {
        num = *MultiPoly::divide_exact(num, h);
        g = *MultiPoly::divide_exact(g, h);
    }
    return RatFunc(std::move(num), g * da * db);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return a + (-b);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    MultiPoly g1 = poly_gcd(a.num_, b.den_);
    MultiPoly g2 = poly_gcd(b.num_, a.den_);
    const MultiPoly an = g1.is_one() ? a.num_ : *MultiPoly::divide_exact(a.num_, g1);
    const MultiPoly bd = g1.is_one() ? b.den_ : *MultiPoly::divide_exact(b.den_, g1);
    const MultiPoly bn = g2.is_one() ? b.num_ : *MultiPoly::divide_exact(b.num_, g2);
    const MultiPoly ad = g2.is_one() ? a.den_ : *MultiPoly::divide_exact(a.den_, g2);
    RatFunc r;
    r.num_ = an * bn;
    r.den_ = ad * bd;
    if (!r.den_.is_one() && r.den_.leading().second < 0) {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
    }
    return r;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    return a * b.inverse();
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw division_by_zero("RatFunc: division by zero");
    RatFunc r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.leading().second < 0) {
        r.num_ = -r.num_;
        r.den_ = -r.den_;
    }
    return r;
}

RatFunc RatFunc::pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    RatFunc acc(1);
    RatFunc base(*this);
    while (n > 0) {
        if (n & 1) acc *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return acc;
}

bool operator==(const RatFunc& a, const RatFunc& b) {
    if (a.num_ == b.num_ && a.den_ == b.den_) return true;
    return a.num_ * b.den_ == b.num_ * a.den_;
}

RatFunc RatFunc::substitute(Var v, const RatFunc& value) const {
    auto subst_poly = [&](const MultiPoly& p) {
        int d = p.degree(v);
        if (d <= 0) return RatFunc(p, MultiPoly(1));
        // Horner in v with rational-function coefficients
        RatFunc acc(MultiPoly(p.coeff_in_var(v, d)), MultiPoly(1));
        for (int k = d - 1; k >= 0; --k) {
            acc = acc * value;
            MultiPoly ck = p.coeff_in_var(v, k);
            if (!ck.is_zero()) acc += RatFunc(std::move(ck), MultiPoly(1));
        }
        return acc;
    };
    RatFunc dv = subst_poly(den_);
    if (dv.is_zero())
        throw pole_error(std::string("substitute: denominator vanishes in ") + var_name(v));
    return subst_poly(num_) / dv;
}

RatFunc RatFunc::limit_t0() const {
    if (is_zero()) return RatFunc();
    int kn = num_.min_exponents()[static_cast<int>(Var::t)];
    int kd = den_.min_exponents()[static_cast<int>(Var::t)];
    int k = std::min(kn, kd);
    Expo shift{0, k, 0, 0};
    MultiPoly n = num_.shift_down(shift).set_var_zero(Var::t);
    MultiPoly d = den_.shift_down(shift).set_var_zero(Var::t);
    if (d.is_zero()) throw pole_error("limit_t0: pole at t = 0");
    return RatFunc(std::move(n), std::move(d));
}

std::string RatFunc::to_string() const {
    if (den_.is_one()) return num_.to_string();
    std::ostringstream os;
    os << '(' << num_.to_string() << ")/(" << den_.to_string() << ')';
    return os.str();
}

RatFunc rf_eval(const RatFunc& a, const EvalContext& ctx) {
    if (ctx.mode == EvalMode::Symbolic) return a;
    RatFunc r = a;
    for (const auto& [v, val] : ctx.assignments) {
        if (!r.num().depends_on(v) && !r.den().depends_on(v)) continue;
        r = r.substitute(v, val.to_ratfunc());
    }
    return r;
}

namespace {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t n, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (n) {
        if (n & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        n >>= 1;
    }
    return r;
}

}  // namespace

std::uint64_t rf_eval_mod(const RatFunc& a, const EvalContext& ctx) {
    std::array<std::uint64_t, kNumVars> point{};
    for (int i = 0; i < kNumVars; ++i) {
        Var v = static_cast<Var>(i);
        bool used = a.num().degree(v) > 0 || a.den().degree(v) > 0;
        auto it = ctx.assignments.find(v);
        if (it == ctx.assignments.end()) {
            if (used)
                throw math_error(std::string("rf_eval_mod: missing assignment for ") +
                                 var_name(v));
            continue;
        }
        std::uint64_t n = mpz_fdiv_ui(it->second.num.get_mpz_t(), ctx.prime);
        std::uint64_t d = mpz_fdiv_ui(it->second.den.get_mpz_t(), ctx.prime);
        if (d == 0) throw division_by_zero("rf_eval_mod: assignment denominator is 0 mod p");
        point[static_cast<std::size_t>(i)] = mulmod(n, powmod(d, ctx.prime - 2, ctx.prime), ctx.prime);
    }
    std::uint64_t den = a.den().eval_mod(point, ctx.prime);
    if (den == 0) throw division_by_zero("rf_eval_mod: denominator vanishes at point");
    std::uint64_t num = a.num().eval_mod(point, ctx.prime);
    return mulmod(num, powmod(den, ctx.prime - 2, ctx.prime), ctx.prime);
}

}  // namespace qtrm
