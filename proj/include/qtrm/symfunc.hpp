#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "qtrm/fp64.hpp"
#include "qtrm/params.hpp"
#include "qtrm/partition.hpp"
#include "qtrm/ratfunc.hpp"

namespace qtrm {

enum class Basis { PowerSum, Monomial, MacP, MacQ };
enum class Alphabet { X, Y };

inline const char* basis_name(Basis b) {
    switch (b) {
        case Basis::PowerSum: return "power-sum";
        case Basis::Monomial: return "monomial";
        case Basis::MacP: return "macdonald-P";
        case Basis::MacQ: return "macdonald-Q";
    }
    return "?";
}

/// Dominance order on partitions of equal weight: mu <= la iff every
/// prefix sum of mu is bounded by the matching prefix sum of la.
inline bool dominance_leq(const Partition& mu, const Partition& la) {
    if (mu.weight() != la.weight()) return false;
    int smu = 0, sla = 0;
    int n = std::max(mu.length(), la.length());
    for (int i = 1; i <= n; ++i) {
        smu += mu.part(i);
        sla += la.part(i);
        if (smu > sla) return false;
    }
    return true;
}

/// Graded symmetric function: finitely many coefficients indexed by
/// partitions, tagged with the basis they refer to.  All operations keep
/// only terms of weight <= max_degree.
template <typename K>
struct SymFunc {
    Basis basis = Basis::PowerSum;
    Alphabet alphabet = Alphabet::X;
    int max_degree = 0;
    std::map<Partition, K, PartitionLess> coeffs;

    static SymFunc constant(const K& c, int maxdeg, Basis b = Basis::PowerSum) {
        SymFunc f;
        f.basis = b;
        f.max_degree = maxdeg;
        if (!scalar_is_zero(c)) f.coeffs.emplace(Partition{}, c);
        return f;
    }
    static SymFunc single(const Partition& la, const K& c, Basis b, int maxdeg) {
        SymFunc f;
        f.basis = b;
        f.max_degree = maxdeg;
        if (!scalar_is_zero(c)) f.coeffs.emplace(la, c);
        return f;
    }

    bool is_zero() const { return coeffs.empty(); }
    K coeff(const Partition& la) const {
        auto it = coeffs.find(la);
        return it == coeffs.end() ? K(0) : it->second;
    }
    void add_term(const Partition& la, const K& c) {
        if (scalar_is_zero(c) || la.weight() > max_degree) return;
        auto [it, fresh] = coeffs.emplace(la, c);
        if (!fresh) {
            it->second += c;
            if (scalar_is_zero(it->second)) coeffs.erase(it);
        }
    }
    SymFunc& operator+=(const SymFunc& o) {
        for (const auto& [la, c] : o.coeffs) add_term(la, c);
        return *this;
    }
    SymFunc operator*(const K& s) const {
        SymFunc f;
        f.basis = basis;
        f.alphabet = alphabet;
        f.max_degree = max_degree;
        if (scalar_is_zero(s)) return f;
        for (const auto& [la, c] : coeffs) f.add_term(la, c * s);
        return f;
    }
    /// Weight-w homogeneous component.
    SymFunc component(int w) const {
        SymFunc f;
        f.basis = basis;
        f.alphabet = alphabet;
        f.max_degree = max_degree;
        for (const auto& [la, c] : coeffs)
            if (la.weight() == w) f.coeffs.emplace(la, c);
        return f;
    }
};

/// Function of two alphabets, coefficients indexed by partition pairs
/// (x-part, y-part); graded by bidegree (|lambda|, |mu|).
template <typename K>
struct BiSymFunc {
    Basis basis_x = Basis::PowerSum;
    Basis basis_y = Basis::PowerSum;
    int max_bidegree = 0;
    std::map<PartitionPair, K, PartitionPairLess> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    K coeff(const Partition& la, const Partition& mu) const {
        auto it = coeffs.find({la, mu});
        return it == coeffs.end() ? K(0) : it->second;
    }
    void add_term(const Partition& la, const Partition& mu, const K& c) {
        if (scalar_is_zero(c)) return;
        if (la.weight() > max_bidegree || mu.weight() > max_bidegree) return;
        auto [it, fresh] = coeffs.emplace(PartitionPair{la, mu}, c);
        if (!fresh) {
            it->second += c;
            if (scalar_is_zero(it->second)) coeffs.erase(it);
        }
    }
    BiSymFunc component(int nx, int ny) const {
        BiSymFunc f;
        f.basis_x = basis_x;
        f.basis_y = basis_y;
        f.max_bidegree = max_bidegree;
        for (const auto& [pr, c] : coeffs)
            if (pr.first.weight() == nx && pr.second.weight() == ny)
                f.coeffs.emplace(pr, c);
        return f;
    }
    friend bool operator==(const BiSymFunc& a, const BiSymFunc& b) {
        return a.coeffs == b.coeffs;
    }
};

/// Normal-ordered polynomial operator on power sums:
///   sum_{mu,nu} c_{mu,nu} p_mu d/dp_nu   (all multiplications left of all
/// derivatives).  The vertex-operator modes used here preserve degree,
/// i.e. |mu| = |nu| in every stored term.
template <typename K>
struct PowerSumOperator {
    std::map<PartitionPair, K, PartitionPairLess> terms;

    SymFunc<K> apply(const SymFunc<K>& f) const;  // f must be in p-basis
};

template <typename K>
using Matrix = std::vector<std::vector<K>>;

/// Disk-backed store for the m<->P transition matrices (symbolic runs
/// only; wired up by the CLI).
struct TransitionStore {
    virtual ~TransitionStore() = default;
    virtual bool load(int w, Matrix<RatFunc>& P_in_m, Matrix<RatFunc>& m_in_P) = 0;
    virtual void store(int w, const Matrix<RatFunc>& P_in_m,
                       const Matrix<RatFunc>& m_in_P) = 0;
};

/// Exact symmetric-function engine over a field K in Macdonald's
/// parameters (sq, st), themselves derived from the primitive (q, t).
///
/// Weight-graded data (basis transitions, Macdonald polynomials, norms)
/// is computed once per weight and cached; reads are lock-protected so
/// the engine can serve several verification jobs at once.
template <typename K>
class MacdonaldEngine {
public:
    explicit MacdonaldEngine(const MacdonaldParams<K>& par) : par_(par) {}

    const MacdonaldParams<K>& params() const { return par_; }
    void set_transition_store(std::shared_ptr<TransitionStore> s) { store_ = std::move(s); }

    // --- basis conversions -------------------------------------------------
    SymFunc<K> convert(const SymFunc<K>& f, Basis target);

    // --- scalar products ---------------------------------------------------
    /// <p_lambda, p_lambda> = m(lambda)! prod_a a (1 - sq^a)/(1 - st^a).
    K p_norm(const Partition& la);
    K scalar_product(const SymFunc<K>& f, const SymFunc<K>& g);

    // --- Macdonald polynomials ----------------------------------------------
    /// P_lambda in the monomial basis (computed per weight, cached).
    SymFunc<K> macdonald_P(const Partition& la);
    /// <P_lambda, P_lambda>.
    K P_norm(const Partition& la);

    // --- products and skew functions ----------------------------------------
    SymFunc<K> multiply(const SymFunc<K>& f, const SymFunc<K>& g, int maxdeg);
    /// Q_{lambda/mu} expressed in the Q basis; the zero function if mu is
    /// not contained in lambda as a diagram.
    SymFunc<K> skew_Q(const Partition& la, const Partition& mu);

    // --- plethystic evaluation ----------------------------------------------
    /// Ring homomorphism p_r -> (sq^r - 1)/(1 - st^r) * delta(r).
    K plethystic_eval(const SymFunc<K>& f, const std::function<K(int)>& delta);

    // --- kernels -------------------------------------------------------------
    /// Cauchy kernel Pi(x,y), diagonal in p_la(x) p_la(y), to bidegree maxdeg.
    BiSymFunc<K> cauchy_kernel(int maxdeg);
    /// Modified kernel Pi(qx, sq y)^{-1} Pi(qx, st y).
    BiSymFunc<K> modified_kernel(int maxdeg);
    /// Degree-j component of the one-alphabet series
    /// exp(sum_r (1/r)(1 - st^r)(1 - sq^r st^{-r}) q^{-r} p_r z^r).
    SymFunc<K> psi_kernel_component(int j);

    // --- diagonal operators ---------------------------------------------------
    K eps(const Partition& la);     // epsilon_lambda(1/sq, st)
    K epsbar(const Partition& la);  // epsilon_lambda(sq, 1/st)
    enum class DiagOp { E, Ebar };
    /// Diagonal action in the P basis: P_la -> eps_la P_la (resp. epsbar).
    SymFunc<K> apply_macdonald_operator(const SymFunc<K>& f, DiagOp which);

    /// E and Ebar built from the zero mode of their vertex-operator form,
    /// as normal-ordered polynomial operators on power sums, restricted to
    /// degree <= maxdeg.  Independent route from the diagonal action.
    PowerSumOperator<K> vertex_E(int maxdeg);
    PowerSumOperator<K> vertex_Ebar(int maxdeg);

    // weight-graded partition layout shared with callers
    static int index_of(const Partition& la);

private:
    struct WeightData {
        std::vector<Partition> parts;
        Matrix<K> p_in_m;  // column la: p_la expressed in m
        Matrix<K> m_in_p;
        Matrix<K> P_in_m;  // column la: P_la expressed in m
        Matrix<K> m_in_P;
        std::vector<K> p_norms;
        std::vector<K> P_norms;
    };
    const WeightData& weight_data(int w);
    static Matrix<K> invert(const Matrix<K>& m);
    static std::vector<K> mat_vec(const Matrix<K>& m, const std::vector<K>& x);

    MacdonaldParams<K> par_;
    std::shared_ptr<TransitionStore> store_;
    std::mutex mutex_;
    std::map<int, WeightData> weights_;
};

using MacdonaldEngineR = MacdonaldEngine<RatFunc>;

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

template <typename K>
SymFunc<K> PowerSumOperator<K>::apply(const SymFunc<K>& f) const {
    if (f.basis != Basis::PowerSum)
        throw std::logic_error("PowerSumOperator: operand not in power-sum basis");
    SymFunc<K> out;
    out.basis = Basis::PowerSum;
    out.alphabet = f.alphabet;
    out.max_degree = f.max_degree;
    for (const auto& [mn, c] : terms) {
        const Partition& mu = mn.first;
        const Partition& nu = mn.second;
        for (const auto& [ka, fc] : f.coeffs) {
            if (!nu.submultiset_of(ka)) continue;
            // d/dp_nu p_ka = prod_r m_r(ka) (m_r(ka)-1) ... falling factorials
            long long fall = 1;
            {
                Partition rest = ka;
                for (int p : nu.parts()) {
                    fall *= rest.mult(p);
                    rest = rest.multiset_minus(Partition({p}));
                }
            }
            if (fall == 0) continue;
            Partition target = ka.multiset_minus(nu).multiset_union(mu);
            out.add_term(target, c * fc * K(fall));
        }
    }
    return out;
}

template <typename K>
int MacdonaldEngine<K>::index_of(const Partition& la) {
    return partition_index(la);
}

template <typename K>
Matrix<K> MacdonaldEngine<K>::invert(const Matrix<K>& m) {
    const std::size_t n = m.size();
    Matrix<K> a(m);
    Matrix<K> inv(n, std::vector<K>(n, K(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = K(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && scalar_is_zero(a[piv][col])) ++piv;
        if (piv == n) throw std::logic_error("matrix inversion: singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        K d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] = scalar_div(a[col][j], d);
            inv[col][j] = scalar_div(inv[col][j], d);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || scalar_is_zero(a[r][col])) continue;
            K f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

template <typename K>
std::vector<K> MacdonaldEngine<K>::mat_vec(const Matrix<K>& m, const std::vector<K>& x) {
    std::vector<K> y(m.size(), K(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!scalar_is_zero(x[j])) y[i] += m[i][j] * x[j];
    return y;
}

template <typename K>
const typename MacdonaldEngine<K>::WeightData& MacdonaldEngine<K>::weight_data(int w) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = weights_.find(w);
    if (it != weights_.end()) return it->second;

    WeightData wd;
    wd.parts = partitions_of(w);
    const std::size_t n = wd.parts.size();
    std::map<Partition, int, PartitionLess> idx;
    for (std::size_t i = 0; i < n; ++i) idx.emplace(wd.parts[i], static_cast<int>(i));

    // p_mu in the monomial basis, via augmented monomials m~_la = m(la)! m_la:
    //   p_r m~_la = m~_{la u (r)} + sum over distinct parts a of la of
    //               m_a(la) m~_{la with one part a -> a+r}
    wd.p_in_m.assign(n, std::vector<K>(n, K(0)));
    for (std::size_t j = 0; j < n; ++j) {
        std::map<Partition, long long, PartitionLess> state;
        state.emplace(Partition{}, 1);
        for (int r : wd.parts[j].parts()) {
            std::map<Partition, long long, PartitionLess> next;
            for (const auto& [la, c] : state) {
                next[la.multiset_union(Partition({r}))] += c;
                std::vector<int> seen;
                for (int a : la.parts()) {
                    bool dup = false;
                    for (int s : seen) dup |= (s == a);
                    if (dup) continue;
                    seen.push_back(a);
                    Partition bumped = la.multiset_minus(Partition({a}))
                                           .multiset_union(Partition({a + r}));
                    next[bumped] += c * la.mult(a);
                }
            }
            state = std::move(next);
        }
        for (const auto& [la, c] : state)
            wd.p_in_m[static_cast<std::size_t>(idx.at(la))][j] =
                K(c * la.mult_factorial());
    }
    wd.m_in_p = invert(wd.p_in_m);

    // <p_la, p_la>
    wd.p_norms.reserve(n);
    for (const auto& la : wd.parts) {
        K v(la.mult_factorial());
        for (int a : la.parts()) {
            K sqa(1), sta(1);
            for (int k = 0; k < a; ++k) {
                sqa *= par_.sq;
                sta *= par_.st;
            }
            v *= K(a) * scalar_div(K(1) - sqa, K(1) - sta);
        }
        wd.p_norms.push_back(v);
    }

    bool loaded = false;
    if constexpr (std::is_same_v<K, RatFunc>) {
        if (store_ && store_->load(w, wd.P_in_m, wd.m_in_P)) loaded = true;
    }
    if (!loaded) {
        // Gram-Schmidt over dominance order.  The canonical order within a
        // weight is a linear extension of dominance (largest first), so
        // processing indices from the back goes up the dominance order.
        Matrix<K> P_in_p(n, std::vector<K>(n, K(0)));  // column la
        auto dot = [&](const std::vector<K>& f, const std::vector<K>& g) {
            K s(0);
            for (std::size_t k = 0; k < n; ++k)
                if (!scalar_is_zero(f[k]) && !scalar_is_zero(g[k]))
                    s += f[k] * g[k] * wd.p_norms[k];
            return s;
        };
        std::vector<K> Pnorm(n, K(0));
        for (std::size_t jj = n; jj-- > 0;) {
            std::vector<K> v(n, K(0));
            for (std::size_t k = 0; k < n; ++k) v[k] = wd.m_in_p[k][jj];
            for (std::size_t mm = jj + 1; mm < n; ++mm) {
                std::vector<K> Pm(n, K(0));
                for (std::size_t k = 0; k < n; ++k) Pm[k] = P_in_p[k][mm];
                K c = scalar_div(dot(v, Pm), Pnorm[mm]);
                if (scalar_is_zero(c)) continue;
                for (std::size_t k = 0; k < n; ++k) v[k] -= c * Pm[k];
            }
            for (std::size_t k = 0; k < n; ++k) P_in_p[k][jj] = v[k];
            Pnorm[jj] = dot(v, v);
        }
        wd.P_norms = std::move(Pnorm);
        // P in monomial coordinates and its inverse
        wd.P_in_m.assign(n, std::vector<K>(n, K(0)));
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<K> col(n, K(0));
            for (std::size_t k = 0; k < n; ++k) col[k] = P_in_p[k][j];
            std::vector<K> mcol = mat_vec(wd.p_in_m, col);
            for (std::size_t k = 0; k < n; ++k) wd.P_in_m[k][j] = mcol[k];
        }
        wd.m_in_P = invert(wd.P_in_m);
        if constexpr (std::is_same_v<K, RatFunc>) {
            if (store_) store_->store(w, wd.P_in_m, wd.m_in_P);
        }
    } else {
        wd.P_norms.assign(n, K(0));
        // norms recomputed from the loaded matrices
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<K> mcol(n, K(0));
            for (std::size_t k = 0; k < n; ++k) mcol[k] = wd.P_in_m[k][j];
            std::vector<K> pcol = mat_vec(wd.m_in_p, mcol);
            K s(0);
            for (std::size_t k = 0; k < n; ++k)
                if (!scalar_is_zero(pcol[k])) s += pcol[k] * pcol[k] * wd.p_norms[k];
            wd.P_norms[j] = s;
        }
    }

    return weights_.emplace(w, std::move(wd)).first->second;
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::convert(const SymFunc<K>& f, Basis target) {
    if (f.basis == target) return f;
    SymFunc<K> out;
    out.basis = target;
    out.alphabet = f.alphabet;
    out.max_degree = f.max_degree;
    // group by weight
    std::map<int, std::vector<std::pair<int, K>>> by_weight;
    for (const auto& [la, c] : f.coeffs)
        by_weight[la.weight()].emplace_back(index_of(la), c);
    for (const auto& [w, entries] : by_weight) {
        const WeightData& wd = weight_data(w);
        const std::size_t n = wd.parts.size();
        std::vector<K> x(n, K(0));
        for (const auto& [i, c] : entries) x[static_cast<std::size_t>(i)] = c;
        // into monomial coordinates
        switch (f.basis) {
            case Basis::Monomial: break;
            case Basis::PowerSum: x = mat_vec(wd.p_in_m, x); break;
            case Basis::MacQ:
                for (std::size_t i = 0; i < n; ++i)
                    x[i] = scalar_div(x[i], wd.P_norms[i]);
                [[fallthrough]];
            case Basis::MacP: x = mat_vec(wd.P_in_m, x); break;
        }
        // out of monomial coordinates
        switch (target) {
            case Basis::Monomial: break;
            case Basis::PowerSum: x = mat_vec(wd.m_in_p, x); break;
            case Basis::MacP:
            case Basis::MacQ:
                x = mat_vec(wd.m_in_P, x);
                if (target == Basis::MacQ)
                    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * wd.P_norms[i];
                break;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!scalar_is_zero(x[i])) out.coeffs.emplace(wd.parts[i], x[i]);
    }
    return out;
}

template <typename K>
K MacdonaldEngine<K>::p_norm(const Partition& la) {
    const WeightData& wd = weight_data(la.weight());
    return wd.p_norms[static_cast<std::size_t>(index_of(la))];
}

template <typename K>
K MacdonaldEngine<K>::scalar_product(const SymFunc<K>& f, const SymFunc<K>& g) {
    if (f.alphabet != g.alphabet)
        throw std::logic_error("scalar_product: different alphabets");
    SymFunc<K> fp = convert(f, Basis::PowerSum);
    SymFunc<K> gp = convert(g, Basis::PowerSum);
    K s(0);
    for (const auto& [la, c] : fp.coeffs) {
        auto it = gp.coeffs.find(la);
        if (it != gp.coeffs.end()) s += c * it->second * p_norm(la);
    }
    return s;
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::macdonald_P(const Partition& la) {
    const WeightData& wd = weight_data(la.weight());
    const std::size_t j = static_cast<std::size_t>(index_of(la));
    SymFunc<K> f;
    f.basis = Basis::Monomial;
    f.max_degree = la.weight();
    for (std::size_t k = 0; k < wd.parts.size(); ++k)
        if (!scalar_is_zero(wd.P_in_m[k][j])) f.coeffs.emplace(wd.parts[k], wd.P_in_m[k][j]);
    return f;
}

template <typename K>
K MacdonaldEngine<K>::P_norm(const Partition& la) {
    const WeightData& wd = weight_data(la.weight());
    return wd.P_norms[static_cast<std::size_t>(index_of(la))];
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::multiply(const SymFunc<K>& f, const SymFunc<K>& g,
                                        int maxdeg) {
    SymFunc<K> fp = convert(f, Basis::PowerSum);
    SymFunc<K> gp = convert(g, Basis::PowerSum);
    SymFunc<K> out;
    out.basis = Basis::PowerSum;
    out.alphabet = f.alphabet;
    out.max_degree = maxdeg;
    for (const auto& [la, a] : fp.coeffs)
        for (const auto& [mu, b] : gp.coeffs) {
            if (la.weight() + mu.weight() > maxdeg) continue;
            out.add_term(la.multiset_union(mu), a * b);
        }
    return out;
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::skew_Q(const Partition& la, const Partition& mu) {
    SymFunc<K> out;
    out.basis = Basis::MacQ;
    out.max_degree = la.weight();
    if (!la.diagram_contains(mu)) return out;  // zero function
    const int d = la.weight() - mu.weight();
    SymFunc<K> Qla = convert(macdonald_P(la), Basis::PowerSum) *
                     scalar_div(K(1), P_norm(la));
    SymFunc<K> Pmu = convert(macdonald_P(mu), Basis::PowerSum);
    for (const Partition& nu : partitions_of(d)) {
        SymFunc<K> prod = multiply(Pmu, convert(macdonald_P(nu), Basis::PowerSum),
                                   la.weight());
        K dnu = scalar_product(Qla, prod);
        if (!scalar_is_zero(dnu)) out.coeffs.emplace(nu, dnu);
    }
    return out;
}

template <typename K>
K MacdonaldEngine<K>::plethystic_eval(const SymFunc<K>& f,
                                      const std::function<K(int)>& delta) {
    SymFunc<K> fp = convert(f, Basis::PowerSum);
    K total(0);
    for (const auto& [la, c] : fp.coeffs) {
        K v = c;
        for (int r : la.parts()) {
            K sqr(1), str(1);
            for (int k = 0; k < r; ++k) {
                sqr *= par_.sq;
                str *= par_.st;
            }
            v *= scalar_div(sqr - K(1), K(1) - str) * delta(r);
        }
        total += v;
    }
    return total;
}

template <typename K>
BiSymFunc<K> MacdonaldEngine<K>::cauchy_kernel(int maxdeg) {
    BiSymFunc<K> ker;
    ker.max_bidegree = maxdeg;
    for (int w = 0; w <= maxdeg; ++w)
        for (const Partition& la : partitions_of(w)) {
            K c = scalar_div(K(1), K(la.mult_factorial()));
            for (int r : la.parts()) {
                K sqr(1), str(1);
                for (int k = 0; k < r; ++k) {
                    sqr *= par_.sq;
                    str *= par_.st;
                }
                c *= scalar_div(K(1) - str, K(r) * (K(1) - sqr));
            }
            ker.add_term(la, la, c);
        }
    return ker;
}

template <typename K>
BiSymFunc<K> MacdonaldEngine<K>::modified_kernel(int maxdeg) {
    BiSymFunc<K> ker;
    ker.max_bidegree = maxdeg;
    for (int w = 0; w <= maxdeg; ++w)
        for (const Partition& la : partitions_of(w)) {
            K c = scalar_div(K(1), K(la.mult_factorial()));
            for (int r : la.parts()) {
                K qr(1), sqr(1), str(1);
                for (int k = 0; k < r; ++k) {
                    qr *= par_.q;
                    sqr *= par_.sq;
                    str *= par_.st;
                }
                c *= scalar_div(-qr * (K(1) - str) * (sqr - str), K(r) * (K(1) - sqr));
            }
            ker.add_term(la, la, c);
        }
    return ker;
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::psi_kernel_component(int j) {
    SymFunc<K> f;
    f.basis = Basis::PowerSum;
    f.max_degree = j;
    for (const Partition& mu : partitions_of(j)) {
        K c = scalar_div(K(1), K(mu.mult_factorial()));
        for (int r : mu.parts()) {
            K qr(1), sqr(1), str(1);
            for (int k = 0; k < r; ++k) {
                qr *= par_.q;
                sqr *= par_.sq;
                str *= par_.st;
            }
            // (1 - st^r)(1 - sq^r st^{-r}) q^{-r} / r
            c *= scalar_div((K(1) - str) * (K(1) - scalar_div(sqr, str)), K(r) * qr);
        }
        f.add_term(mu, c);
    }
    return f;
}

template <typename K>
K MacdonaldEngine<K>::eps(const Partition& la) {
    return epsilon_poly(la, scalar_div(K(1), par_.sq), par_.st);
}

template <typename K>
K MacdonaldEngine<K>::epsbar(const Partition& la) {
    return epsilon_poly(la, par_.sq, scalar_div(K(1), par_.st));
}

template <typename K>
SymFunc<K> MacdonaldEngine<K>::apply_macdonald_operator(const SymFunc<K>& f, DiagOp which) {
    SymFunc<K> fP = convert(f, Basis::MacP);
    SymFunc<K> scaled;
    scaled.basis = Basis::MacP;
    scaled.alphabet = f.alphabet;
    scaled.max_degree = f.max_degree;
    for (const auto& [la, c] : fP.coeffs) {
        K e = which == DiagOp::E ? eps(la) : epsbar(la);
        if (!scalar_is_zero(e)) scaled.coeffs.emplace(la, c * e);
    }
    return convert(scaled, f.basis);
}

namespace detail {

/// z^0 mode of exp(sum_r a_r p_r z^r) exp(sum_r b_r d/dp_r z^{-r}) as a
/// normal-ordered power-sum operator, truncated to degree maxdeg.
template <typename K>
PowerSumOperator<K> vertex_zero_mode(const std::function<K(int)>& a,
                                     const std::function<K(int)>& b, int maxdeg) {
    PowerSumOperator<K> op;
    for (int j = 0; j <= maxdeg; ++j) {
        for (const Partition& mu : partitions_of(j)) {
            K cmu = scalar_div(K(1), K(mu.mult_factorial()));
            for (int r : mu.parts()) cmu *= a(r);
            for (const Partition& nu : partitions_of(j)) {
                K cnu = scalar_div(K(1), K(nu.mult_factorial()));
                for (int r : nu.parts()) cnu *= b(r);
                K c = cmu * cnu;
                if (!scalar_is_zero(c)) op.terms.emplace(PartitionPair{mu, nu}, c);
            }
        }
    }
    return op;
}

}  // namespace detail

template <typename K>
PowerSumOperator<K> MacdonaldEngine<K>::vertex_E(int maxdeg) {
    // creation part: q^{-r}(1 - q1^r)/r  p_r ;  annihilation: -q^r(1 - q3^r) d_r
    // with q1 = st, q3 = 1/sq
    auto a = [this](int r) {
        K qr(1), q1r(1);
        for (int k = 0; k < r; ++k) {
            qr *= par_.q;
            q1r *= par_.st;
        }
        return scalar_div(K(1) - q1r, K(r) * qr);
    };
    auto b = [this](int r) {
        K qr(1), q3r(1);
        for (int k = 0; k < r; ++k) {
            qr *= par_.q;
            q3r = scalar_div(q3r, par_.sq);
        }
        return -qr * (K(1) - q3r);
    };
    PowerSumOperator<K> op = detail::vertex_zero_mode<K>(a, b, maxdeg);
    auto it = op.terms.find(PartitionPair{Partition{}, Partition{}});
    it->second -= K(1);  // E = s pi(e0bar) - 1; the (0,0) term of the mode is 1
    if (scalar_is_zero(it->second)) op.terms.erase(it);
    return op;
}

/// Product of two-alphabet functions in the p (x) p basis, truncated so
/// that both partial degrees stay <= maxdeg.
template <typename K>
BiSymFunc<K> multiply_bisym(const BiSymFunc<K>& a, const BiSymFunc<K>& b, int maxdeg) {
    if (a.basis_x != Basis::PowerSum || b.basis_x != Basis::PowerSum ||
        a.basis_y != Basis::PowerSum || b.basis_y != Basis::PowerSum)
        throw std::logic_error("multiply_bisym: operands must be in p (x) p basis");
    BiSymFunc<K> out;
    out.max_bidegree = maxdeg;
    for (const auto& [pa, ca] : a.coeffs)
        for (const auto& [pb, cb] : b.coeffs) {
            if (pa.first.weight() + pb.first.weight() > maxdeg) continue;
            if (pa.second.weight() + pb.second.weight() > maxdeg) continue;
            out.add_term(pa.first.multiset_union(pb.first),
                         pa.second.multiset_union(pb.second), ca * cb);
        }
    return out;
}

/// Apply a power-sum operator to the x side (resp. y side) of a
/// two-alphabet function in the p (x) p basis.
template <typename K>
BiSymFunc<K> apply_op_x(const PowerSumOperator<K>& op, const BiSymFunc<K>& f) {
    BiSymFunc<K> out;
    out.max_bidegree = f.max_bidegree;
    // regroup by y-part and act on the x-part
    std::map<Partition, SymFunc<K>, PartitionLess> rows;
    for (const auto& [pr, c] : f.coeffs) {
        auto [it, fresh] = rows.try_emplace(pr.second);
        if (fresh) {
            it->second.basis = Basis::PowerSum;
            it->second.max_degree = f.max_bidegree;
        }
        it->second.coeffs.emplace(pr.first, c);
    }
    for (const auto& [ypart, row] : rows) {
        SymFunc<K> acted = op.apply(row);
        for (const auto& [xpart, c] : acted.coeffs) out.add_term(xpart, ypart, c);
    }
    return out;
}

template <typename K>
BiSymFunc<K> apply_op_y(const PowerSumOperator<K>& op, const BiSymFunc<K>& f) {
    BiSymFunc<K> out;
    out.max_bidegree = f.max_bidegree;
    std::map<Partition, SymFunc<K>, PartitionLess> cols;
    for (const auto& [pr, c] : f.coeffs) {
        auto [it, fresh] = cols.try_emplace(pr.first);
        if (fresh) {
            it->second.basis = Basis::PowerSum;
            it->second.max_degree = f.max_bidegree;
        }
        it->second.coeffs.emplace(pr.second, c);
    }
    for (const auto& [xpart, col] : cols) {
        SymFunc<K> acted = op.apply(col);
        for (const auto& [ypart, c] : acted.coeffs) out.add_term(xpart, ypart, c);
    }
    return out;
}

template <typename K>
PowerSumOperator<K> MacdonaldEngine<K>::vertex_Ebar(int maxdeg) {
    // creation part: -(1 - q1^r)/r p_r ;  annihilation: q^{2r}(1 - q3^r) d_r
    auto a = [this](int r) {
        K q1r(1);
        for (int k = 0; k < r; ++k) q1r *= par_.st;
        return scalar_div(q1r - K(1), K(r));
    };
    auto b = [this](int r) {
        K q2r(1), q3r(1);
        for (int k = 0; k < r; ++k) {
            q2r *= par_.q * par_.q;
            q3r = scalar_div(q3r, par_.sq);
        }
        return q2r * (K(1) - q3r);
    };
    PowerSumOperator<K> op = detail::vertex_zero_mode<K>(a, b, maxdeg);
    auto it = op.terms.find(PartitionPair{Partition{}, Partition{}});
    it->second -= K(1);
    if (scalar_is_zero(it->second)) op.terms.erase(it);
    return op;
}

}  // namespace qtrm
