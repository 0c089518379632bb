#include "qtrm/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qtrm {

const char* var_name(Var v) {
    switch (v) {
        case Var::q: return "q";
        case Var::t: return "t";
        case Var::u: return "u";
        case Var::v: return "v";
    }
    return "?";
}

bool ExpoGrlex::operator()(const Expo& a, const Expo& b) const {
    int da = a[0] + a[1] + a[2] + a[3];
    int db = b[0] + b[1] + b[2] + b[3];
    if (da != db) return da < db;
    return a < b;
}

MultiPoly::MultiPoly(long long c) {
    if (c != 0) terms_.emplace(Expo{0, 0, 0, 0}, mpz_class(static_cast<long>(c)));
}

MultiPoly::MultiPoly(const mpz_class& c) {
    if (c != 0) terms_.emplace(Expo{0, 0, 0, 0}, c);
}

MultiPoly MultiPoly::variable(Var v, int exp) {
    if (exp < 0) throw std::invalid_argument("MultiPoly: negative exponent");
    MultiPoly p;
    if (exp == 0) return MultiPoly(1);
    Expo e{0, 0, 0, 0};
    e[static_cast<int>(v)] = exp;
    p.terms_.emplace(e, mpz_class(1));
    return p;
}

MultiPoly MultiPoly::monomial(mpz_class coef, const Expo& e) {
    MultiPoly p;
    if (coef != 0) p.terms_.emplace(e, std::move(coef));
    return p;
}

bool MultiPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0, 0} &&
           terms_.begin()->second == 1;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0, 0});
}

const mpz_class& MultiPoly::constant_value() const {
    static const mpz_class zero(0);
    if (terms_.empty()) return zero;
    if (!is_constant()) throw std::logic_error("MultiPoly: not a constant");
    return terms_.begin()->second;
}

int MultiPoly::degree(Var v) const {
    int d = -1;
    int iv = static_cast<int>(v);
    for (const auto& [e, c] : terms_) d = std::max(d, e[iv]);
    return terms_.empty() ? -1 : d;
}

int MultiPoly::total_degree() const {
    if (terms_.empty()) return -1;
    const Expo& e = terms_.rbegin()->first;  // grlex max has max total degree
    return e[0] + e[1] + e[2] + e[3];
}

const std::pair<const Expo, mpz_class>& MultiPoly::leading() const {
    if (terms_.empty()) throw std::logic_error("MultiPoly: leading term of zero");
    return *terms_.rbegin();
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(e, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a);
    r += b;
    return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a);
    r -= b;
    return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    mpz_class tmp;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Expo e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
            tmp = ca * cb;
            auto [it, inserted] = r.terms_.emplace(e, tmp);
            if (!inserted) {
                it->second += tmp;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

MultiPoly MultiPoly::mul_mpz(const mpz_class& c) const {
    MultiPoly r;
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

MultiPoly MultiPoly::mul_monomial(const mpz_class& c, const Expo& e) const {
    MultiPoly r;
    if (c == 0) return r;
    for (const auto& [ex, k] : terms_)
        r.terms_.emplace(Expo{ex[0] + e[0], ex[1] + e[1], ex[2] + e[2], ex[3] + e[3]},
                         k * c);
    return r;
}

MultiPoly MultiPoly::pow(int n) const {
    if (n < 0) throw std::invalid_argument("MultiPoly::pow: negative exponent");
    MultiPoly acc(1);
    MultiPoly base(*this);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

mpz_class MultiPoly::content() const {
    mpz_class g(0);
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

Expo MultiPoly::min_exponents() const {
    Expo m{0, 0, 0, 0};
    if (terms_.empty()) return m;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (first) {
            m = e;
            first = false;
        } else {
            for (int i = 0; i < kNumVars; ++i) m[i] = std::min(m[i], e[i]);
        }
    }
    return m;
}

MultiPoly MultiPoly::shift_down(const Expo& e) const {
    MultiPoly r;
    for (const auto& [ex, c] : terms_) {
        Expo ne;
        for (int i = 0; i < kNumVars; ++i) {
            ne[i] = ex[i] - e[i];
            if (ne[i] < 0) throw std::logic_error("MultiPoly::shift_down underflow");
        }
        r.terms_.emplace(ne, c);
    }
    return r;
}

MultiPoly MultiPoly::div_mpz_exact(const mpz_class& c) const {
    if (c == 0) throw std::invalid_argument("MultiPoly: division by zero constant");
    MultiPoly r;
    for (const auto& [e, k] : terms_) {
        mpz_class q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), k.get_mpz_t(), c.get_mpz_t());
        if (rem != 0) throw std::logic_error("MultiPoly: inexact constant division");
        r.terms_.emplace(e, std::move(q));
    }
    return r;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return MultiPoly();
    MultiPoly rem(a);
    MultiPoly quo;
    const auto& [eb, cb] = b.leading();
    while (!rem.is_zero()) {
        const auto& [er, cr] = rem.leading();
        Expo eq;
        for (int i = 0; i < kNumVars; ++i) {
            eq[i] = er[i] - eb[i];
            if (eq[i] < 0) return std::nullopt;
        }
        mpz_class cq, crem;
        mpz_tdiv_qr(cq.get_mpz_t(), crem.get_mpz_t(), cr.get_mpz_t(), cb.get_mpz_t());
        if (crem != 0) return std::nullopt;
        quo.terms_.emplace(eq, cq);
        rem -= b.mul_monomial(cq, eq);
    }
    return quo;
}

MultiPoly MultiPoly::coeff_in_var(Var v, int k) const {
    MultiPoly r;
    int iv = static_cast<int>(v);
    for (const auto& [e, c] : terms_) {
        if (e[iv] == k) {
            Expo ne = e;
            ne[iv] = 0;
            r.terms_.emplace(ne, c);
        }
    }
    return r;
}

MultiPoly MultiPoly::set_var_zero(Var v) const {
    return coeff_in_var(v, 0);
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

std::uint64_t MultiPoly::eval_mod(const std::array<std::uint64_t, kNumVars>& point,
                                  std::uint64_t p) const {
    std::uint64_t acc = 0;
    for (const auto& [e, c] : terms_) {
        std::uint64_t term = mpz_fdiv_ui(c.get_mpz_t(), p);
        for (int i = 0; i < kNumVars; ++i)
            if (e[i]) term = mulmod(term, powmod(point[static_cast<std::size_t>(i)],
                                                 static_cast<std::uint64_t>(e[i]), p),
                                    p);
        acc = (acc + term) % p;
    }
    return acc;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c >= 0 ? " + " : " - ");
        if (first && c < 0) os << "-";
        first = false;
        mpz_class a = abs(c);
        bool any_var = e != Expo{0, 0, 0, 0};
        if (a != 1 || !any_var) os << a.get_str();
        bool star = (a != 1);
        for (int i = 0; i < kNumVars; ++i) {
            if (e[i] == 0) continue;
            if (star || i > 0) {
                // separator only between printed factors
            }
            if (star) os << "*";
            os << var_name(static_cast<Var>(i));
            if (e[i] > 1) os << "^" << e[i];
            star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

namespace {

// univariate polynomial with MultiPoly coefficients (index = exponent)
using UniPoly = std::vector<MultiPoly>;

int uni_deg(const UniPoly& f) {
    for (int d = static_cast<int>(f.size()) - 1; d >= 0; --d)
        if (!f[static_cast<std::size_t>(d)].is_zero()) return d;
    return -1;
}

UniPoly to_uni(const MultiPoly& f, Var x) {
    UniPoly u(static_cast<std::size_t>(std::max(0, f.degree(x)) + 1));
    for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = f.coeff_in_var(x, static_cast<int>(k));
    return u;
}

MultiPoly from_uni(const UniPoly& f, Var x) {
    MultiPoly r;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k].is_zero()) continue;
        r += f[k] * MultiPoly::variable(x, static_cast<int>(k));
    }
    return r;
}

MultiPoly exact_div_or_throw(const MultiPoly& a, const MultiPoly& b) {
    auto q = MultiPoly::divide_exact(a, b);
    if (!q) throw std::logic_error("poly_gcd: internal inexact division");
    return *q;
}

// pseudo-remainder: lc(B)^(degA-degB+1) * A  mod  B,  in the main variable
UniPoly pseudo_rem(UniPoly A, const UniPoly& B) {
    int dB = uni_deg(B);
    const MultiPoly& lB = B[static_cast<std::size_t>(dB)];
    int e = uni_deg(A) - dB + 1;
    while (true) {
        int dA = uni_deg(A);
        if (dA < dB) break;
        MultiPoly lA = A[static_cast<std::size_t>(dA)];
        UniPoly next(static_cast<std::size_t>(dA));  // degree drops strictly
        for (int k = 0; k < dA; ++k) {
            MultiPoly v = A[static_cast<std::size_t>(k)] * lB;
            int j = k - (dA - dB);
            if (j >= 0 && j <= dB) v -= lA * B[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(k)] = std::move(v);
        }
        A = std::move(next);
        --e;
    }
    if (e > 0) {
        MultiPoly f = lB.pow(e);
        for (auto& c : A) c = c * f;
    }
    return A;
}

// content of A w.r.t. the main variable: gcd of its coefficients
MultiPoly uni_content(const UniPoly& A) {
    MultiPoly g;
    for (const auto& c : A) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

UniPoly uni_div_exact(const UniPoly& A, const MultiPoly& d) {
    UniPoly r(A.size());
    for (std::size_t k = 0; k < A.size(); ++k)
        r[k] = A[k].is_zero() ? MultiPoly() : exact_div_or_throw(A[k], d);
    return r;
}

// subresultant polynomial remainder sequence; returns gcd of two primitive
// (w.r.t. main variable) inputs, itself primitive
MultiPoly subresultant_gcd(UniPoly F1, UniPoly F2, Var x) {
    if (uni_deg(F1) < uni_deg(F2)) std::swap(F1, F2);
    int delta = uni_deg(F1) - uni_deg(F2);
    MultiPoly beta = (delta % 2 == 0) ? MultiPoly(-1) : MultiPoly(1);
    MultiPoly psi(-1);
    while (true) {
        UniPoly R = pseudo_rem(F1, F2);
        if (uni_deg(R) < 0) break;
        R = uni_div_exact(R, beta);
        const MultiPoly lc = F2[static_cast<std::size_t>(uni_deg(F2))];
        if (delta > 0) {
            MultiPoly num = (-lc).pow(delta);
            psi = (delta == 1) ? num : exact_div_or_throw(num, psi.pow(delta - 1));
        }
        int next_delta = uni_deg(F2) - uni_deg(R);
        F1 = std::move(F2);
        F2 = std::move(R);
        delta = next_delta;
        beta = -(lc * psi.pow(delta));
        if (uni_deg(F2) == 0) break;
    }
    if (uni_deg(F2) == 0) return MultiPoly(1);
    MultiPoly g = from_uni(F2, x);
    // primitive part in x and integer normalization
    MultiPoly c = uni_content(to_uni(g, x));
    if (!c.is_one()) g = exact_div_or_throw(g, c);
    mpz_class ic = g.content();
    if (ic > 1) g = g.div_mpz_exact(ic);
    return g;
}

constexpr std::uint64_t kProbePrime = 4611686018427387847ULL;  // 2^62 - 57

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t uni_gcd_mod_degree(const std::vector<std::uint64_t>& fa,
                                 const std::vector<std::uint64_t>& fb,
                                 std::uint64_t p) {
    std::vector<std::uint64_t> a(fa), b(fb);
    auto deg = [](const std::vector<std::uint64_t>& f) {
        for (int d = static_cast<int>(f.size()) - 1; d >= 0; --d)
            if (f[static_cast<std::size_t>(d)]) return d;
        return -1;
    };
    while (deg(b) >= 0) {
        int da = deg(a), db = deg(b);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        // a -= lc(a)/lc(b) * x^(da-db) * b
        std::uint64_t f = mulmod(a[static_cast<std::size_t>(da)],
                                 powmod(b[static_cast<std::size_t>(db)], p - 2, p), p);
        for (int k = 0; k <= db; ++k) {
            std::uint64_t sub = mulmod(f, b[static_cast<std::size_t>(k)], p);
            std::uint64_t& tgt = a[static_cast<std::size_t>(k + da - db)];
            tgt = (tgt + p - sub) % p;
        }
        if (deg(a) == da) a[static_cast<std::size_t>(da)] = 0;  // guard rounding
    }
    int d = deg(a);
    return d < 0 ? 0 : static_cast<std::uint64_t>(d);
}

// Probes the gcd degree in `x` by evaluating the remaining variables at
// pseudo-random points mod a large prime.  Specialization can only
// enlarge the gcd, so a zero-degree image certifies (up to a vanishing
// leading coefficient, probability ~ deg/p per probe) that the true gcd
// does not involve x.
int probe_gcd_degree(const MultiPoly& a, const MultiPoly& b, Var x,
                     std::uint64_t salt) {
    std::uint64_t state = 0xC0FFEE1234ULL + salt;
    std::array<std::uint64_t, kNumVars> point{};
    for (int i = 0; i < kNumVars; ++i)
        point[static_cast<std::size_t>(i)] = 2 + splitmix64(state) % (kProbePrime - 3);
    int ix = static_cast<int>(x);
    auto img = [&](const MultiPoly& f) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(f.degree(x)) + 1, 0);
        for (const auto& [e, k] : f.terms()) {
            std::uint64_t term = mpz_fdiv_ui(k.get_mpz_t(), kProbePrime);
            for (int i = 0; i < kNumVars; ++i)
                if (i != ix && e[i])
                    term = mulmod(term,
                                  powmod(point[static_cast<std::size_t>(i)],
                                         static_cast<std::uint64_t>(e[i]), kProbePrime),
                                  kProbePrime);
            std::uint64_t& tgt = c[static_cast<std::size_t>(e[ix])];
            tgt = (tgt + term) % kProbePrime;
        }
        return c;
    };
    std::vector<std::uint64_t> ia = img(a), ib = img(b);
    // degenerate images: report "unknown" as a large degree
    auto deg = [](const std::vector<std::uint64_t>& f) {
        for (int d = static_cast<int>(f.size()) - 1; d >= 0; --d)
            if (f[static_cast<std::size_t>(d)]) return d;
        return -1;
    };
    if (deg(ia) != a.degree(x) || deg(ib) != b.degree(x)) return 1 << 20;
    return static_cast<int>(uni_gcd_mod_degree(ia, ib, kProbePrime));
}

MultiPoly normalize_sign(MultiPoly g) {
    if (!g.is_zero() && g.leading().second < 0) g = -g;
    return g;
}

// gcd of integer-content-free, monomial-free nonzero polynomials
MultiPoly gcd_core(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_constant() || b.is_constant()) return MultiPoly(1);
    if (a == b) return normalize_sign(a);

    // main variable: active in both, minimizing the larger degree
    Var x = Var::q;
    int best = -1;
    for (int i = 0; i < kNumVars; ++i) {
        Var v = static_cast<Var>(i);
        int da = a.degree(v), db = b.degree(v);
        if (da > 0 && db > 0) {
            int m = std::max(da, db);
            if (best < 0 || m < best) {
                best = m;
                x = v;
            }
        }
    }
    if (best < 0) {
        // no variable shared: common divisors are constant
        return MultiPoly(1);
    }

    int probe1 = probe_gcd_degree(a, b, x, 1);
    if (probe1 == 0 && probe_gcd_degree(a, b, x, 2) == 0) {
        // gcd free of x: it must divide both contents w.r.t. x
        MultiPoly ca = uni_content(to_uni(a, x));
        MultiPoly cb = uni_content(to_uni(b, x));
        return poly_gcd(ca, cb);
    }

    UniPoly ua = to_uni(a, x), ub = to_uni(b, x);
    MultiPoly ca = uni_content(ua), cb = uni_content(ub);
    UniPoly pa = ca.is_one() ? std::move(ua) : uni_div_exact(ua, ca);
    UniPoly pb = cb.is_one() ? std::move(ub) : uni_div_exact(ub, cb);
    MultiPoly cg = poly_gcd(ca, cb);

    // quick exit when one primitive part divides the other
    const MultiPoly fa = from_uni(pa, x);
    const MultiPoly fb = from_uni(pb, x);
    if (probe1 == std::min(uni_deg(pa), uni_deg(pb))) {
        const MultiPoly& small = uni_deg(pa) <= uni_deg(pb) ? fa : fb;
        const MultiPoly& large = uni_deg(pa) <= uni_deg(pb) ? fb : fa;
        if (MultiPoly::divide_exact(large, small)) return normalize_sign(cg * small);
    }

    MultiPoly g = subresultant_gcd(std::move(pa), std::move(pb), x);
    if (!g.is_one()) {
        // the subresultant output is exact; this guards implementation bugs
        if (!MultiPoly::divide_exact(fa, g) || !MultiPoly::divide_exact(fb, g))
            throw std::logic_error("poly_gcd: subresultant result rejected");
    }
    return normalize_sign(cg * g);
}

}  // namespace

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return normalize_sign(b);
    if (b.is_zero()) return normalize_sign(a);
    mpz_class ia = a.content(), ib = b.content();
    mpz_class ic;
    mpz_gcd(ic.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
    Expo ea = a.min_exponents(), eb = b.min_exponents();
    Expo e;
    for (int i = 0; i < kNumVars; ++i) e[i] = std::min(ea[i], eb[i]);
    MultiPoly a1 = a.shift_down(ea).div_mpz_exact(ia);
    MultiPoly b1 = b.shift_down(eb).div_mpz_exact(ib);
    MultiPoly g = gcd_core(a1, b1);
    return normalize_sign(g.mul_monomial(ic, e));
}

}  // namespace qtrm
