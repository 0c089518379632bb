#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtrm {

/// The four global indeterminates, in fixed order.  q and t are the
/// algebra parameters, u the spectral ratio, v a second spectral slot.
enum class Var : int { q = 0, t = 1, u = 2, v = 3 };

constexpr int kNumVars = 4;

const char* var_name(Var v);

/// Exponent vector of a monomial q^e0 t^e1 u^e2 v^e3.
using Expo = std::array<int, kNumVars>;

/// Graded lexicographic order on exponent vectors: total degree first,
/// then lexicographic on (e_q, e_t, e_u, e_v).  Fixes term order for
/// leading coefficients and serialization.
struct ExpoGrlex {
    bool operator()(const Expo& a, const Expo& b) const;
};

/// Multivariate polynomial in (q, t, u, v) over arbitrary-precision
/// integers.  No zero coefficients are stored; the term map order is the
/// canonical graded-lex order.  Values are immutable in spirit: all
/// operations return new polynomials.
class MultiPoly {
public:
    using TermMap = std::map<Expo, mpz_class, ExpoGrlex>;

    MultiPoly() = default;
    explicit MultiPoly(long long c);
    explicit MultiPoly(const mpz_class& c);
    static MultiPoly variable(Var v, int exp = 1);
    static MultiPoly monomial(mpz_class coef, const Expo& e);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;
    /// Constant term value (polynomial must be constant).
    const mpz_class& constant_value() const;

    int degree(Var v) const;      // -1 for the zero polynomial
    int total_degree() const;     // -1 for the zero polynomial
    bool depends_on(Var v) const { return degree(v) > 0; }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Leading term in the canonical order (largest exponent vector).
    const std::pair<const Expo, mpz_class>& leading() const;

    MultiPoly operator-() const;
    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);

    MultiPoly mul_mpz(const mpz_class& c) const;
    MultiPoly mul_monomial(const mpz_class& c, const Expo& e) const;
    MultiPoly pow(int n) const;  // n >= 0

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.terms_ == b.terms_;
    }

    /// Integer content (gcd of all coefficients, non-negative; 0 for 0).
    mpz_class content() const;
    /// Per-variable minimal exponents (the monomial content).
    Expo min_exponents() const;
    MultiPoly shift_down(const Expo& e) const;  // divide by monomial x^e
    MultiPoly div_mpz_exact(const mpz_class& c) const;

    /// Exact division: returns a/b when b divides a, nullopt otherwise.
    static std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b);

    /// Coefficient of x^k in *this viewed as univariate in `v`
    /// (a polynomial in the remaining variables).
    MultiPoly coeff_in_var(Var v, int k) const;

    /// Substitute var := 0 (drops all terms with positive exponent).
    MultiPoly set_var_zero(Var v) const;

    /// Evaluate all variables modulo p (values given per variable).
    std::uint64_t eval_mod(const std::array<std::uint64_t, kNumVars>& point,
                           std::uint64_t p) const;

    std::string to_string() const;

private:
    TermMap terms_;
};

/// Multivariate gcd over the integers.  Result has positive leading
/// coefficient (canonical order) and gcd(0, b) = +-b normalized.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

}  // namespace qtrm
