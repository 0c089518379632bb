#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qtrm/ratfunc.hpp"

namespace qtrm {

/// Raised when a prime-field computation divides by zero; the verifier
/// treats this as "re-draw the evaluation point".
struct redraw_needed : math_error {
    using math_error::math_error;
};

/// Prime-field scalar for fast verification runs.  The modulus is a
/// process-wide setting (one verification job per process); the default
/// is the fixed 62-bit prime 2^62 - 57.
class Fp64 {
public:
    static constexpr std::uint64_t kDefaultPrime = 4611686018427387847ULL;

    static std::uint64_t modulus() { return modulus_; }
    static void set_modulus(std::uint64_t p) { modulus_ = p; }

    Fp64() : v_(0) {}
    Fp64(long long x) {  // NOLINT(google-explicit-constructor)
        long long m = static_cast<long long>(modulus_);
        long long r = x % m;
        if (r < 0) r += m;
        v_ = static_cast<std::uint64_t>(r);
    }
    static Fp64 from_raw(std::uint64_t x) {
        Fp64 f;
        f.v_ = x % modulus_;
        return f;
    }

    std::uint64_t raw() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    friend Fp64 operator+(Fp64 a, Fp64 b) {
        std::uint64_t s = a.v_ + b.v_;  // p < 2^63, no overflow
        if (s >= modulus_) s -= modulus_;
        return from_raw0(s);
    }
    friend Fp64 operator-(Fp64 a, Fp64 b) {
        return from_raw0(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + modulus_ - b.v_);
    }
    Fp64 operator-() const { return from_raw0(v_ ? modulus_ - v_ : 0); }
    friend Fp64 operator*(Fp64 a, Fp64 b) {
        return from_raw0(static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(a.v_) * b.v_) % modulus_));
    }
    friend Fp64 operator/(Fp64 a, Fp64 b) {
        if (b.v_ == 0) throw redraw_needed("Fp64: division by zero");
        return a * b.inverse();
    }
    Fp64& operator+=(Fp64 o) { return *this = *this + o; }
    Fp64& operator-=(Fp64 o) { return *this = *this - o; }
    Fp64& operator*=(Fp64 o) { return *this = *this * o; }
    Fp64& operator/=(Fp64 o) { return *this = *this / o; }

    Fp64 inverse() const {
        if (v_ == 0) throw redraw_needed("Fp64: inverse of zero");
        return pow_u64(modulus_ - 2);
    }
    Fp64 pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        return pow_u64(static_cast<std::uint64_t>(n));
    }

    friend bool operator==(Fp64 a, Fp64 b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp64 a, Fp64 b) { return a.v_ != b.v_; }

    std::string to_string() const { return std::to_string(v_); }

private:
    static Fp64 from_raw0(std::uint64_t x) {
        Fp64 f;
        f.v_ = x;
        return f;
    }
    Fp64 pow_u64(std::uint64_t n) const {
        Fp64 r = from_raw0(1 % modulus_);
        Fp64 a = *this;
        while (n) {
            if (n & 1) r = r * a;
            a = a * a;
            n >>= 1;
        }
        return r;
    }
    inline static std::uint64_t modulus_ = kDefaultPrime;
    std::uint64_t v_;
};

// --- uniform scalar shims used by the templated engine ---------------------

inline bool scalar_is_zero(const RatFunc& x) { return x.is_zero(); }
inline bool scalar_is_zero(const Fp64& x) { return x.is_zero(); }
inline std::string scalar_str(const RatFunc& x) { return x.to_string(); }
inline std::string scalar_str(const Fp64& x) { return x.to_string(); }

/// Division that flags "zero denominator" uniformly for both scalars.
template <typename K>
K scalar_div(const K& a, const K& b) {
    if (scalar_is_zero(b)) throw division_by_zero("scalar division by zero");
    return a / b;
}
inline Fp64 scalar_div(const Fp64& a, const Fp64& b) { return a / b; }

}  // namespace qtrm
