#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "qtrm/multipoly.hpp"

namespace qtrm {

struct math_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct division_by_zero : math_error {
    using math_error::math_error;
};
struct pole_error : math_error {
    using math_error::math_error;
};

/// Exact rational function in (q, t, u, v) over the integers, kept in
/// canonical form: numerator and denominator coprime, denominator nonzero
/// with positive leading coefficient, zero stored as 0/1.
///
/// Values are immutable; all operations are pure, so RatFuncs can be
/// shared freely across threads.
class RatFunc {
public:
    RatFunc() : num_(), den_(1) {}
    RatFunc(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    explicit RatFunc(const mpz_class& n) : num_(n), den_(1) {}
    RatFunc(MultiPoly num, MultiPoly den);

    static RatFunc variable(Var v) { return RatFunc(MultiPoly::variable(v), MultiPoly(1)); }
    static RatFunc fraction(const mpz_class& n, const mpz_class& d);
    static RatFunc fraction(long long n, long long d);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);  // throws on b == 0
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    RatFunc inverse() const;
    RatFunc pow(int n) const;  // negative n inverts

    /// Equality by cross-multiplication (robust even if an operand were
    /// not fully reduced).
    friend bool operator==(const RatFunc& a, const RatFunc& b);
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /// Substitute one variable by a rational function (the remaining
    /// variables stay symbolic).
    RatFunc substitute(Var v, const RatFunc& value) const;

    /// t -> 0 limit: cancels the largest common power of t between
    /// numerator and denominator, then sets t = 0.  Throws pole_error if
    /// a genuine pole remains.
    RatFunc limit_t0() const;

    std::string to_string() const;

private:
    void normalize();
    MultiPoly num_, den_;
};

/// Exact rational number used for evaluation points.
struct Rational {
    mpz_class num{0};
    mpz_class den{1};
    RatFunc to_ratfunc() const { return RatFunc::fraction(num, den); }
};

enum class EvalMode { Symbolic, RationalPoint, PrimeField };

/// Evaluation request shared by the verifier and the CLI.  In
/// RationalPoint and PrimeField modes, every variable a check consumes
/// numerically must carry an assignment; draws are seeded and re-drawn
/// when a denominator vanishes.
struct EvalContext {
    EvalMode mode = EvalMode::Symbolic;
    std::map<Var, Rational> assignments;
    std::uint64_t prime = 4611686018427387847ULL;  // fixed 62-bit prime
    std::uint64_t seed = 0;

    bool has(Var v) const { return assignments.count(v) != 0; }
};

/// Evaluate under a context.  Symbolic mode is the identity; in
/// RationalPoint mode the assigned variables are substituted exactly and
/// the (possibly constant) rational function is returned.  Throws
/// pole_error naming the offending variable when the denominator
/// vanishes at the point.
RatFunc rf_eval(const RatFunc& a, const EvalContext& ctx);

/// PrimeField evaluation of an already reduced value; all variables that
/// occur must be assigned.  Throws division_by_zero if the denominator
/// vanishes mod p.
std::uint64_t rf_eval_mod(const RatFunc& a, const EvalContext& ctx);

}  // namespace qtrm
