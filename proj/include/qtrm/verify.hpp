#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qtrm/fock.hpp"

namespace qtrm {

/// Outcome of one verification job.  Failing reports always carry a
/// reproducible counterexample (indices plus both sides) and the full
/// parameter set (mode, seed, weights) needed to replay it.
struct CheckReport {
    std::string name;
    std::map<std::string, std::string> parameters;
    bool pass = false;
    std::string counterexample;  // empty iff pass

    void param(const std::string& k, const std::string& v) { parameters[k] = v; }
};

struct VerifySettings {
    EvalMode mode = EvalMode::Symbolic;
    std::uint64_t seed = 0;
    std::uint64_t prime = Fp64::kDefaultPrime;
    /// Explicit assignments (RationalPoint mode); drawn from the seed when
    /// absent.  Only q and t are ever assigned here; spectral parameters
    /// stay symbolic in RationalPoint mode.
    std::map<Var, Rational> assignments;
};

const char* mode_name(EvalMode m);

CheckReport verify_sixvertex();
CheckReport verify_symmetry(int wmax, const VerifySettings& vs);
CheckReport verify_coproduct(int nmax, const VerifySettings& vs);
CheckReport verify_ybe(int wmax, const VerifySettings& vs);
CheckReport verify_askew(int wmax, const VerifySettings& vs);
CheckReport verify_macdonald(int wmax, const VerifySettings& vs);

/// Dispatch by name ("sixvertex", "symmetry", "coproduct", "ybe",
/// "askew", "macdonald"); `level` is the weight or degree bound.
CheckReport run_check(const std::string& name, int level, const VerifySettings& vs);

// ---------------------------------------------------------------------------
// templated check bodies (shared between the scalar instantiations)
// ---------------------------------------------------------------------------

namespace checks {

template <typename K>
struct Session {
    ToroidalParams<K> par;
    std::shared_ptr<ToroidalEngine<K>> tor;
    std::shared_ptr<FockEngine<K>> fock;

    explicit Session(const ToroidalParams<K>& p)
        : par(p),
          tor(std::make_shared<ToroidalEngine<K>>(p)),
          fock(std::make_shared<FockEngine<K>>(tor)) {}
    Session(const ToroidalParams<K>& p, std::shared_ptr<MacdonaldEngine<K>> mac)
        : par(p),
          tor(std::make_shared<ToroidalEngine<K>>(p, std::move(mac))),
          fock(std::make_shared<FockEngine<K>>(tor)) {}
};

template <typename K>
bool check_symmetry(Session<K>& s, int wmax, std::string& cex) {
    for (int w = 1; w <= wmax; ++w) {
        const LTable<K>& tbl = s.tor->L_table(w);
        for (const auto& [alpha, beta] : equal_weight_pairs(w)) {
            K lhs = tbl.at(alpha, beta);
            K rhs = tbl.at(beta, alpha);
            if (!(lhs == rhs)) {
                std::ostringstream os;
                os << "w=" << w << " alpha=" << alpha.to_string()
                   << " beta=" << beta.to_string() << " L(alpha,beta)=" << scalar_str(lhs)
                   << " L(beta,alpha)=" << scalar_str(rhs);
                cex = os.str();
                return false;
            }
        }
    }
    return true;
}

template <typename K>
bool check_askew(Session<K>& s, int wmax, std::string& cex) {
    for (int wl = 0; wl <= wmax; ++wl) {
        for (const Partition& la : partitions_of(wl)) {
            for (int wm = 0; wm <= wl; ++wm) {
                for (const Partition& mu : partitions_of(wm)) {
                    K a = s.tor->a_skew(la, mu, ASkewRoute::Kernel);
                    K b = s.tor->a_skew(la, mu, ASkewRoute::SkewQ);
                    bool contained = la.diagram_contains(mu);
                    if (!(a == b) || (!contained && !scalar_is_zero(a))) {
                        std::ostringstream os;
                        os << "lambda=" << la.to_string() << " mu=" << mu.to_string()
                           << " kernel=" << scalar_str(a) << " skewQ=" << scalar_str(b);
                        cex = os.str();
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

template <typename K>
bool check_macdonald(Session<K>& s, int wmax, std::string& cex) {
    MacdonaldEngine<K>& mac = s.tor->mac();
    // orthogonality and dominance triangularity
    for (int w = 1; w <= wmax; ++w) {
        for (const Partition& la : partitions_of(w)) {
            SymFunc<K> Pla = mac.macdonald_P(la);
            for (const auto& [mu, c] : Pla.coeffs) {
                if (!dominance_leq(mu, la)) {
                    cex = "triangularity: coefficient of m_" + mu.to_string() + " in P_" +
                          la.to_string() + " is " + scalar_str(c);
                    return false;
                }
            }
            if (!(Pla.coeff(la) == K(1))) {
                cex = "normalization: P_" + la.to_string() + " not monic over m";
                return false;
            }
            for (const Partition& mu : partitions_of(w)) {
                if (mu == la || canonical_less(la, mu)) continue;
                K sp = mac.scalar_product(Pla, mac.macdonald_P(mu));
                if (!scalar_is_zero(sp)) {
                    cex = "orthogonality: <P_" + la.to_string() + ", P_" + mu.to_string() +
                          "> = " + scalar_str(sp);
                    return false;
                }
            }
        }
    }
    // vertex-built E against the diagonal eigenvalues
    PowerSumOperator<K> E = mac.vertex_E(wmax);
    for (int w = 0; w <= wmax; ++w) {
        for (const Partition& la : partitions_of(w)) {
            SymFunc<K> Pp = mac.convert(mac.macdonald_P(la), Basis::PowerSum);
            SymFunc<K> lhs = E.apply(Pp);
            SymFunc<K> rhs = Pp * mac.eps(la);
            if (!(lhs.coeffs == rhs.coeffs)) {
                cex = "vertex E on P_" + la.to_string() + " differs from eps*P";
                return false;
            }
        }
    }
    return true;
}

/// One side of the graded functional equation at bidegree (n,n):
/// builds [Pi~ . R]_(n,n) (or with Ebar_y applied to R first).
template <typename K>
bool check_coproduct(Session<K>& s, int nmax, std::string& cex) {
    MacdonaldEngine<K>& mac = s.tor->mac();
    BiSymFunc<K> mker = mac.modified_kernel(nmax);
    PowerSumOperator<K> E = mac.vertex_E(nmax);
    PowerSumOperator<K> Ebar = mac.vertex_Ebar(nmax);
    std::vector<BiSymFunc<K>> R(static_cast<std::size_t>(nmax) + 1);
    for (int k = 0; k <= nmax; ++k)
        R[static_cast<std::size_t>(k)] = s.tor->R_sym_component(k, Basis::PowerSum);
    for (int n = 0; n <= nmax; ++n) {
        BiSymFunc<K> prod;  // [Pi~ R]_(n,n)
        prod.max_bidegree = nmax;
        BiSymFunc<K> prod_bar;  // [Pi~ (Ebar_y R)]_(n,n)
        prod_bar.max_bidegree = nmax;
        for (int k = 0; k <= n; ++k) {
            BiSymFunc<K> pk = mker.component(n - k, n - k);
            const BiSymFunc<K>& rk = R[static_cast<std::size_t>(k)];
            BiSymFunc<K> a = multiply_bisym(pk, rk, nmax);
            for (const auto& [pr, c] : a.coeffs) prod.add_term(pr.first, pr.second, c);
            BiSymFunc<K> b = multiply_bisym(pk, apply_op_y(Ebar, rk), nmax);
            for (const auto& [pr, c] : b.coeffs) prod_bar.add_term(pr.first, pr.second, c);
        }
        BiSymFunc<K> lhs = apply_op_x(E, prod);
        // rhs = u * prod_bar
        BiSymFunc<K> rhs;
        rhs.max_bidegree = nmax;
        for (const auto& [pr, c] : prod_bar.coeffs)
            rhs.add_term(pr.first, pr.second, c * s.par.u);
        if (!(lhs == rhs)) {
            // locate the first differing coefficient
            for (const auto& [pr, c] : lhs.coeffs) {
                if (!(rhs.coeff(pr.first, pr.second) == c)) {
                    std::ostringstream os;
                    os << "n=" << n << " p_mu(x)p_nu(y) coefficient mu="
                       << pr.first.to_string() << " nu=" << pr.second.to_string()
                       << " lhs=" << scalar_str(c)
                       << " rhs=" << scalar_str(rhs.coeff(pr.first, pr.second));
                    cex = os.str();
                    return false;
                }
            }
            for (const auto& [pr, c] : rhs.coeffs) {
                if (!(lhs.coeff(pr.first, pr.second) == c)) {
                    std::ostringstream os;
                    os << "n=" << n << " p_mu(x)p_nu(y) coefficient mu="
                       << pr.first.to_string() << " nu=" << pr.second.to_string()
                       << " lhs=" << scalar_str(lhs.coeff(pr.first, pr.second))
                       << " rhs=" << scalar_str(c);
                    cex = os.str();
                    return false;
                }
            }
        }
    }
    return true;
}

/// Basis of the total-weight <= wmax sector of V (x) V (x) V.
struct TripleBasis {
    std::vector<std::array<Partition, 3>> states;
    std::map<std::array<int, 3>, std::size_t> index;  // indices into partition lists

    static std::array<int, 3> key(const std::array<Partition, 3>& s);
    static TripleBasis build(int wmax);
};

template <typename K>
Matrix<K> triple_matrix(FockEngine<K>& eng, const TripleBasis& basis, int i, int j,
                        bool flip) {
    const std::size_t n = basis.states.size();
    Matrix<K> m(n, std::vector<K>(n, K(0)));
    for (std::size_t col = 0; col < n; ++col) {
        const auto& st = basis.states[col];
        const Partition& first = flip ? st[static_cast<std::size_t>(j)]
                                      : st[static_cast<std::size_t>(i)];
        const Partition& second = flip ? st[static_cast<std::size_t>(i)]
                                       : st[static_cast<std::size_t>(j)];
        PairVector<K> img = eng.apply_full_R(first, second);
        for (const auto& [pr, c] : img.coeffs) {
            auto out = st;
            out[static_cast<std::size_t>(i)] = flip ? pr.second : pr.first;
            out[static_cast<std::size_t>(j)] = flip ? pr.first : pr.second;
            m[basis.index.at(TripleBasis::key(out))][col] += c;
        }
    }
    return m;
}

template <typename K>
Matrix<K> mat_mul(const Matrix<K>& a, const Matrix<K>& b) {
    const std::size_t n = a.size();
    Matrix<K> c(n, std::vector<K>(n, K(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (scalar_is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (scalar_is_zero(b[k][j])) continue;
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    return c;
}

/// Yang-Baxter on the truncated triple sector.  R12 carries spectral a,
/// R13 carries ab, R23 carries b; sessions must share (q, t).  Tries the
/// as-stated orientation first, then the pair-flipped one; reports the
/// passing orientation through `orientation`.
template <typename K>
bool check_ybe(Session<K>& sa, Session<K>& sab, Session<K>& sb, int wmax,
               std::string& orientation, std::string& cex) {
    TripleBasis basis = TripleBasis::build(wmax);
    for (bool flip : {false, true}) {
        Matrix<K> r12 = triple_matrix(*sa.fock, basis, 0, 1, flip);
        Matrix<K> r13 = triple_matrix(*sab.fock, basis, 0, 2, flip);
        Matrix<K> r23 = triple_matrix(*sb.fock, basis, 1, 2, flip);
        Matrix<K> lhs = mat_mul(mat_mul(r12, r13), r23);
        Matrix<K> rhs = mat_mul(mat_mul(r23, r13), r12);
        bool ok = true;
        std::string first_diff;
        for (std::size_t i = 0; i < lhs.size() && ok; ++i)
            for (std::size_t j = 0; j < lhs.size() && ok; ++j)
                if (!(lhs[i][j] == rhs[i][j])) {
                    ok = false;
                    std::ostringstream os;
                    os << "out=(" << basis.states[i][0].to_string() << ","
                       << basis.states[i][1].to_string() << ","
                       << basis.states[i][2].to_string() << ") in=("
                       << basis.states[j][0].to_string() << ","
                       << basis.states[j][1].to_string() << ","
                       << basis.states[j][2].to_string()
                       << ") lhs=" << scalar_str(lhs[i][j])
                       << " rhs=" << scalar_str(rhs[i][j]);
                    first_diff = os.str();
                }
        if (ok) {
            orientation = flip ? "pair-flipped" : "as-stated";
            return true;
        }
        if (!flip) cex = first_diff;  // keep the as-stated counterexample
    }
    orientation = "none";
    return false;
}

}  // namespace checks

}  // namespace qtrm
