#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qtrm/symfunc.hpp"

namespace qtrm {

/// Parameter pack of the algebra.  Everything is derived from the two
/// primitive variables (q, t) plus the spectral ratio u; the derived
/// quantities are never independent symbols, which keeps the two
/// parameter dialects (q1,q2,q3 vs sq,st) consistent by construction.
template <typename K>
struct ToroidalParams {
    K q, t, u;
    K q1, q2, q3;  // q1 = 1/(qt), q2 = q^2, q3 = t/q; q1 q2 q3 = 1
    K s;           // s = kappa_1 / (1 - q2) = (1 - q1)(1 - q3)
    MacdonaldParams<K> mac;

    static ToroidalParams make(const K& q, const K& t, const K& u) {
        ToroidalParams p;
        p.q = q;
        p.t = t;
        p.u = u;
        p.q1 = K(1) / (q * t);
        p.q2 = q * q;
        p.q3 = t / q;
        p.s = (K(1) - p.q1) * (K(1) - p.q3);
        p.mac = MacdonaldParams<K>::make(q, t);
        return p;
    }

    K qpow(int n) const { return int_pow(q, n); }
    K q1pow(int n) const { return int_pow(q1, n); }
    K q2pow(int n) const { return int_pow(q2, n); }
    K q3pow(int n) const { return int_pow(q3, n); }
    /// kappa_r = (1 - q1^r)(1 - q2^r)(1 - q3^r)
    K kappa(int r) const {
        return (K(1) - q1pow(r)) * (K(1) - q2pow(r)) * (K(1) - q3pow(r));
    }

    static K int_pow(const K& x, int n) {
        if (n < 0) return K(1) / int_pow(x, -n);
        K r(1);
        for (int i = 0; i < n; ++i) r *= x;
        return r;
    }
};

/// Fully symbolic parameters (K = RatFunc).
inline ToroidalParams<RatFunc> symbolic_params() {
    return ToroidalParams<RatFunc>::make(RatFunc::variable(Var::q),
                                         RatFunc::variable(Var::t),
                                         RatFunc::variable(Var::u));
}

/// Worker count for the parallel map over recursion cells.  Defaults to
/// the hardware concurrency; QTRM_THREADS overrides it (results are
/// byte-identical for every setting).
inline std::size_t recursion_threads() {
    if (const char* env = std::getenv("QTRM_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Expansion coefficients of R(x,y;u) over Macdonald P (x) P at one
/// weight: entries only for |alpha| = |beta| = w.
template <typename K>
struct LTable {
    int weight = 0;
    std::map<PartitionPair, K, PartitionPairLess> entries;

    K at(const Partition& a, const Partition& b) const {
        auto it = entries.find({a, b});
        return it == entries.end() ? K(0) : it->second;
    }
};

/// Heisenberg-basis coefficients R_{mu,nu}(u) at one weight.
template <typename K>
struct RbarCoeffs {
    int weight = 0;
    std::map<PartitionPair, K, PartitionPairLess> entries;

    K at(const Partition& a, const Partition& b) const {
        auto it = entries.find({a, b});
        return it == entries.end() ? K(0) : it->second;
    }
};

enum class ASkewRoute { Kernel, SkewQ };

/// The recursion pipeline: eigenvalues, skew a-coefficients (two
/// independent routes), the weight-by-weight L recursion, the symmetric
/// function R(x,y;u) and the Heisenberg-basis coefficients R_{mu,nu}(u).
template <typename K>
class ToroidalEngine {
public:
    explicit ToroidalEngine(const ToroidalParams<K>& par)
        : par_(par), mac_(std::make_shared<MacdonaldEngine<K>>(par.mac)) {}
    /// Share a Macdonald engine (it depends on (q,t) only, not on u), so
    /// several spectral values can reuse the same transition matrices.
    ToroidalEngine(const ToroidalParams<K>& par, std::shared_ptr<MacdonaldEngine<K>> mac)
        : par_(par), mac_(std::move(mac)) {}

    std::shared_ptr<MacdonaldEngine<K>> mac_ptr() const { return mac_; }

    const ToroidalParams<K>& params() const { return par_; }
    MacdonaldEngine<K>& mac() { return *mac_; }

    K epsilon(const Partition& la, const K& u, const K& v) const {
        return epsilon_poly(la, u, v);
    }
    K eps(const Partition& la) { return mac_->eps(la); }
    K epsbar(const Partition& la) { return mac_->epsbar(la); }

    /// Skew coefficient a_{la/mu}; the two routes are algebraically
    /// independent and must agree (checked by the verifier).
    K a_skew(const Partition& la, const Partition& mu, ASkewRoute route);

    /// One recursion step coefficient L_{alpha/lambda, beta/mu}(u); zero
    /// unless lambda (resp. mu) sits inside alpha (resp. beta) as a
    /// diagram with |lambda| = |mu| < |alpha| = |beta|.
    K L_skew(const Partition& alpha, const Partition& lambda, const Partition& beta,
             const Partition& mu);

    /// The weight-w table, computed recursively from L_{0,0} = 1.
    const LTable<K>& L_table(int w);

    /// Bidegree-(w,w) component of R(x,y;u) in the requested basis pair
    /// (MacP (x) MacP or p (x) p).
    BiSymFunc<K> R_sym_component(int w, Basis pair_basis);

    /// Heisenberg-basis coefficients at weight w, obtained by inverting
    /// the power-sum dictionary on R_sym_component(w).
    const RbarCoeffs<K>& rbar_coeffs(int w);

    /// Snapshot/restore of the a-coefficient memo (used by the CLI disk
    /// cache; keys are (route, lambda, mu)).
    struct ASkewKeyLess {
        bool operator()(const std::tuple<int, Partition, Partition>& a,
                        const std::tuple<int, Partition, Partition>& b) const {
            if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
            if (canonical_less(std::get<1>(a), std::get<1>(b))) return true;
            if (canonical_less(std::get<1>(b), std::get<1>(a))) return false;
            return canonical_less(std::get<2>(a), std::get<2>(b));
        }
    };
    using ASkewMemo = std::map<std::tuple<int, Partition, Partition>, K, ASkewKeyLess>;
    ASkewMemo export_askew_memo() {
        std::lock_guard<std::mutex> lock(mutex_);
        return askew_memo_;
    }
    void import_askew_memo(const ASkewMemo& memo) {
        std::lock_guard<std::mutex> lock(mutex_);
        for (const auto& [k, v] : memo) askew_memo_.emplace(k, v);
    }
    void import_ltable(LTable<K> table) {
        std::lock_guard<std::mutex> lock(mutex_);
        ltables_.emplace(table.weight, std::move(table));
    }

private:
    ToroidalParams<K> par_;
    std::shared_ptr<MacdonaldEngine<K>> mac_;
    std::mutex mutex_;  // guards the three memo maps below
    ASkewMemo askew_memo_;
    std::map<int, LTable<K>> ltables_;
    std::map<int, RbarCoeffs<K>> rbar_;
};

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

template <typename K>
K ToroidalEngine<K>::a_skew(const Partition& la, const Partition& mu, ASkewRoute route) {
    if (la.weight() < mu.weight())
        throw std::invalid_argument("a_skew: |lambda| < |mu|");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = askew_memo_.find({static_cast<int>(route), la, mu});
        if (it != askew_memo_.end()) return it->second;
    }
    K val(0);
    if (route == ASkewRoute::Kernel) {
        const int d = la.weight() - mu.weight();
        SymFunc<K> Pmu = mac_->convert(mac_->macdonald_P(mu), Basis::PowerSum);
        SymFunc<K> prod =
            mac_->multiply(mac_->psi_kernel_component(d), Pmu, la.weight());
        SymFunc<K> inP = mac_->convert(prod.component(la.weight()), Basis::MacP);
        val = inP.coeff(la);
    } else {
        SymFunc<K> skew = mac_->skew_Q(la, mu);
        if (!skew.is_zero()) {
            const K& q = par_.q;
            const K& sq = par_.mac.sq;
            const K& st = par_.mac.st;
            auto delta = [&](int r) {
                K qr = ToroidalParams<K>::int_pow(q, r);
                K sqr = ToroidalParams<K>::int_pow(sq, r);
                K str = ToroidalParams<K>::int_pow(st, r);
                return scalar_div((K(1) - str) * (sqr - str), qr * str);
            };
            val = mac_->plethystic_eval(skew, delta);
        }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    askew_memo_.emplace(std::make_tuple(static_cast<int>(route), la, mu), val);
    return val;
}

template <typename K>
K ToroidalEngine<K>::L_skew(const Partition& alpha, const Partition& lambda,
                            const Partition& beta, const Partition& mu) {
    if (alpha.weight() != beta.weight() || lambda.weight() != mu.weight())
        throw std::invalid_argument("L_skew: weight mismatch");
    if (lambda.weight() >= alpha.weight())
        throw std::invalid_argument("L_skew: skew part must be non-empty");
    if (!alpha.diagram_contains(lambda) || !beta.diagram_contains(mu)) return K(0);

    K a1 = a_skew(alpha, lambda, ASkewRoute::Kernel);
    if (scalar_is_zero(a1)) return K(0);
    K a2 = a_skew(beta, mu, ASkewRoute::Kernel);
    if (scalar_is_zero(a2)) return K(0);

    const K& sq = par_.mac.sq;
    const K& st = par_.mac.st;
    K ebar_diff = epsbar(alpha) - epsbar(lambda);
    if (scalar_is_zero(ebar_diff))
        throw math_error("L_skew: epsbar(alpha) - epsbar(lambda) vanishes");
    K denom1 = eps(alpha) - par_.u * epsbar(beta);
    if (scalar_is_zero(denom1))
        throw math_error("L_skew: eps(alpha) - u epsbar(beta) vanishes");
    K qpow = par_.qpow(2 + alpha.weight() - lambda.weight());
    K factor = scalar_div((K(1) - st) * (K(1) - scalar_div(K(1), sq)) * qpow,
                          (K(1) - par_.q2) * ebar_diff);
    return scalar_div(K(1), denom1) * factor * a1 * a2;
}

template <typename K>
const LTable<K>& ToroidalEngine<K>::L_table(int w) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = ltables_.find(w);
        if (it != ltables_.end()) return it->second;
    }
    LTable<K> tbl;
    tbl.weight = w;
    if (w == 0) {
        tbl.entries.emplace(PartitionPair{Partition{}, Partition{}}, K(1));
    } else {
        for (int wp = 0; wp < w; ++wp) L_table(wp);  // ensure lower tables
        // warm the a-coefficient memo serially; the cell map below only reads
        for (const Partition& ga : partitions_of(w))
            for (const Partition& la : proper_subdiagrams(ga))
                a_skew(ga, la, ASkewRoute::Kernel);
        const std::vector<PartitionPair> cells = equal_weight_pairs(w);
        std::vector<K> values(cells.size(), K(0));
        auto cell_value = [&](const PartitionPair& cell) {
            const Partition& alpha = cell.first;
            const Partition& beta = cell.second;
            std::vector<K> terms;
            for (const Partition& lambda : proper_subdiagrams(alpha)) {
                for (const Partition& mu : proper_subdiagrams(beta)) {
                    if (lambda.weight() != mu.weight()) continue;
                    K prev = L_table(lambda.weight()).at(lambda, mu);
                    if (scalar_is_zero(prev)) continue;
                    K step = L_skew(alpha, lambda, beta, mu);
                    if (scalar_is_zero(step)) continue;
                    terms.push_back(step * prev);
                }
            }
            // balanced reduction keeps the intermediate denominators small
            while (terms.size() > 1) {
                std::vector<K> next;
                next.reserve(terms.size() / 2 + 1);
                for (std::size_t i = 0; i + 1 < terms.size(); i += 2)
                    next.push_back(terms[i] + terms[i + 1]);
                if (terms.size() % 2) next.push_back(terms.back());
                terms = std::move(next);
            }
            return terms.empty() ? K(0) : terms.front();
        };
        const std::size_t n_threads = std::min(recursion_threads(), cells.size());
        if (n_threads <= 1) {
            for (std::size_t i = 0; i < cells.size(); ++i) values[i] = cell_value(cells[i]);
        } else {
            std::atomic<std::size_t> cursor{0};
            std::vector<std::thread> pool;
            pool.reserve(n_threads);
            for (std::size_t k = 0; k < n_threads; ++k)
                pool.emplace_back([&] {
                    for (std::size_t i = cursor.fetch_add(1); i < cells.size();
                         i = cursor.fetch_add(1))
                        values[i] = cell_value(cells[i]);
                });
            for (auto& th : pool) th.join();
        }
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!scalar_is_zero(values[i])) tbl.entries.emplace(cells[i], values[i]);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return ltables_.emplace(w, std::move(tbl)).first->second;
}

template <typename K>
BiSymFunc<K> ToroidalEngine<K>::R_sym_component(int w, Basis pair_basis) {
    const LTable<K>& tbl = L_table(w);
    BiSymFunc<K> out;
    out.max_bidegree = w;
    if (pair_basis == Basis::MacP) {
        out.basis_x = out.basis_y = Basis::MacP;
        for (const auto& [pr, c] : tbl.entries) out.add_term(pr.first, pr.second, c);
        return out;
    }
    if (pair_basis != Basis::PowerSum)
        throw std::invalid_argument("R_sym_component: unsupported basis");
    out.basis_x = out.basis_y = Basis::PowerSum;
    // expand both Macdonald factors over power sums
    std::map<Partition, SymFunc<K>, PartitionLess> p_of_P;
    for (const Partition& la : partitions_of(w))
        p_of_P.emplace(la, mac_->convert(mac_->macdonald_P(la), Basis::PowerSum));
    for (const auto& [pr, c] : tbl.entries) {
        const SymFunc<K>& fx = p_of_P.at(pr.first);
        const SymFunc<K>& fy = p_of_P.at(pr.second);
        for (const auto& [mu, cx] : fx.coeffs)
            for (const auto& [nu, cy] : fy.coeffs) out.add_term(mu, nu, c * cx * cy);
    }
    return out;
}

template <typename K>
const RbarCoeffs<K>& ToroidalEngine<K>::rbar_coeffs(int w) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = rbar_.find(w);
        if (it != rbar_.end()) return it->second;
    }
    BiSymFunc<K> rsym = R_sym_component(w, Basis::PowerSum);
    RbarCoeffs<K> rc;
    rc.weight = w;
    // The dictionary c_{-r} -> q^{-r}(1 - q1^r)/r p_r turns the p_mu p_nu
    // coefficient C of R(x,y;u) into
    //   C = (-1)^{l(nu)} R_{mu,nu} prod_{r in mu,nu} (1 - q1^r)/r / (m(mu)! m(nu)!)
    // (all powers of q cancel against the q^{|mu|+|nu|} prefactor of the
    // vector expansion); docs/rbar-normalization.md derives this in full.
    for (const auto& [pr, c] : rsym.coeffs) {
        const Partition& mu = pr.first;
        const Partition& nu = pr.second;
        K conv(1);
        for (int r : mu.parts()) conv *= scalar_div(K(1) - par_.q1pow(r), K(r));
        for (int r : nu.parts()) conv *= scalar_div(K(1) - par_.q1pow(r), K(r));
        if (scalar_is_zero(conv))
            throw math_error("rbar_coeffs: conversion factor vanishes");
        K val = scalar_div(c * K(mu.mult_factorial()) * K(nu.mult_factorial()), conv);
        if (nu.length() % 2 == 1) val = -val;
        if (!scalar_is_zero(val)) rc.entries.emplace(pr, val);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return rbar_.emplace(w, std::move(rc)).first->second;
}

}  // namespace qtrm
