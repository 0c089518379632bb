#include "qtrm/verify.hpp"

#include <algorithm>
#include <functional>

namespace qtrm {

const char* mode_name(EvalMode m) {
    switch (m) {
        case EvalMode::Symbolic: return "symbolic";
        case EvalMode::RationalPoint: return "eval";
        case EvalMode::PrimeField: return "modp";
    }
    return "?";
}

namespace checks {

std::array<int, 3> TripleBasis::key(const std::array<Partition, 3>& s) {
    auto enc = [](const Partition& p) { return p.weight() * 4096 + partition_index(p); };
    return {enc(s[0]), enc(s[1]), enc(s[2])};
}

TripleBasis TripleBasis::build(int wmax) {
    TripleBasis b;
    for (int w = 0; w <= wmax; ++w)
        for (int w1 = 0; w1 <= w; ++w1)
            for (int w2 = 0; w2 + w1 <= w; ++w2) {
                int w3 = w - w1 - w2;
                for (const Partition& p1 : partitions_of(w1))
                    for (const Partition& p2 : partitions_of(w2))
                        for (const Partition& p3 : partitions_of(w3)) {
                            std::array<Partition, 3> st{p1, p2, p3};
                            b.index.emplace(key(st), b.states.size());
                            b.states.push_back(std::move(st));
                        }
            }
    return b;
}

}  // namespace checks

namespace {

using checks::Session;

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string rational_str(const Rational& r) {
    return r.num.get_str() + "/" + r.den.get_str();
}

/// Draw exact rational values for q and t (unless explicitly assigned).
std::map<Var, Rational> resolve_qt(const VerifySettings& vs, std::uint64_t attempt_seed) {
    std::map<Var, Rational> out = vs.assignments;
    std::uint64_t state = attempt_seed * 0x9E3779B97F4A7C15ULL + 0xA5A5A5A5ULL;
    for (Var v : {Var::q, Var::t}) {
        if (out.count(v)) continue;
        Rational r;
        r.num = mpz_class(static_cast<unsigned long>(2 + splitmix64(state) % 61));
        r.den = mpz_class(static_cast<unsigned long>(2 + splitmix64(state) % 61));
        out[v] = r;
    }
    return out;
}

ToroidalParams<RatFunc> make_rat_params(const std::map<Var, Rational>& qt, Var uvar) {
    return ToroidalParams<RatFunc>::make(qt.at(Var::q).to_ratfunc(),
                                         qt.at(Var::t).to_ratfunc(),
                                         RatFunc::variable(uvar));
}

Fp64 draw_fp(std::uint64_t& state) {
    return Fp64::from_raw(2 + splitmix64(state) % (Fp64::modulus() - 3));
}

/// Runs `body(attempt_seed)`; in evaluation modes a vanishing denominator
/// means the drawn point was unusable, so we re-draw (bounded).
CheckReport with_redraws(const VerifySettings& vs, CheckReport base,
                         const std::function<CheckReport(std::uint64_t)>& body) {
    const int max_attempts = vs.mode == EvalMode::Symbolic ? 1 : 16;
    for (int k = 0; k < max_attempts; ++k) {
        try {
            return body(vs.seed + static_cast<std::uint64_t>(k));
        } catch (const redraw_needed&) {
            if (vs.mode == EvalMode::Symbolic) throw;
        } catch (const division_by_zero&) {
            if (vs.mode == EvalMode::Symbolic) throw;
            if (!vs.assignments.empty()) throw;  // explicit point: not ours to change
        }
    }
    base.pass = false;
    base.counterexample = "no usable evaluation point after 16 draws";
    return base;
}

void stamp(CheckReport& r, const VerifySettings& vs, std::uint64_t attempt_seed) {
    r.param("mode", mode_name(vs.mode));
    r.param("seed", std::to_string(attempt_seed));
    if (vs.mode == EvalMode::PrimeField) r.param("prime", std::to_string(vs.prime));
}

template <typename Body>
CheckReport dispatch(const std::string& name, int level, const std::string& level_key,
                     const VerifySettings& vs, Body&& body) {
    CheckReport base;
    base.name = name;
    base.param(level_key, std::to_string(level));
    return with_redraws(vs, base, [&](std::uint64_t attempt_seed) {
        CheckReport rep = base;
        stamp(rep, vs, attempt_seed);
        if (vs.mode == EvalMode::Symbolic) {
            Session<RatFunc> s(symbolic_params());
            rep.pass = body(s, rep);
        } else if (vs.mode == EvalMode::RationalPoint) {
            auto qt = resolve_qt(vs, attempt_seed);
            rep.param("assign_q", rational_str(qt.at(Var::q)));
            rep.param("assign_t", rational_str(qt.at(Var::t)));
            Session<RatFunc> s(make_rat_params(qt, Var::u));
            rep.pass = body(s, rep);
        } else {
            Fp64::set_modulus(vs.prime);
            std::uint64_t state = attempt_seed * 0x51A7B2C9ULL + 17;
            Fp64 q = draw_fp(state), t = draw_fp(state), u = draw_fp(state);
            rep.param("assign_q", q.to_string());
            rep.param("assign_t", t.to_string());
            rep.param("assign_u", u.to_string());
            Session<Fp64> s(ToroidalParams<Fp64>::make(q, t, u));
            rep.pass = body(s, rep);
        }
        return rep;
    });
}

}  // namespace

CheckReport verify_sixvertex() {
    CheckReport rep;
    rep.name = "sixvertex";
    rep.param("mode", "symbolic");
    rep.param("weights", "0,1");
    Session<RatFunc> s(symbolic_params());

    const RatFunc q = RatFunc::variable(Var::q);
    const RatFunc u = RatFunc::variable(Var::u);
    const RatFunc d0 = RatFunc(1) - q * q * u;
    const RatFunc diag = q * (RatFunc(1) - u) / d0;
    const RatFunc upper = (RatFunc(1) - q * q) * u / d0;
    const RatFunc lower = (RatFunc(1) - q * q) / d0;

    FockBlock<RatFunc> b0 = s.fock->assemble_full_block(0);
    FockBlock<RatFunc> b1 = s.fock->assemble_full_block(1);
    rep.param("convention", convention_name(b1.convention));

    auto fail = [&](const std::string& what, const RatFunc& got, const RatFunc& want) {
        rep.pass = false;
        rep.counterexample = what + ": got " + got.to_string() + ", expected " +
                             want.to_string();
        return rep;
    };
    if (!(b0.at(0, 0) == RatFunc(1))) return fail("w=0 entry", b0.at(0, 0), RatFunc(1));
    if (!(b1.at(0, 0) == diag)) return fail("w=1 entry (0,0)", b1.at(0, 0), diag);
    if (!(b1.at(1, 1) == diag)) return fail("w=1 entry (1,1)", b1.at(1, 1), diag);
    if (!(b1.at(0, 1) == upper)) return fail("w=1 entry (0,1)", b1.at(0, 1), upper);
    if (!(b1.at(1, 0) == lower)) return fail("w=1 entry (1,0)", b1.at(1, 0), lower);
    rep.pass = true;
    return rep;
}

CheckReport verify_symmetry(int wmax, const VerifySettings& vs) {
    return dispatch("symmetry", wmax, "weight", vs, [&](auto& s, CheckReport& rep) {
        return checks::check_symmetry(s, wmax, rep.counterexample);
    });
}

CheckReport verify_coproduct(int nmax, const VerifySettings& vs) {
    return dispatch("coproduct", nmax, "degree", vs, [&](auto& s, CheckReport& rep) {
        rep.param("operator_route", "vertex");
        return checks::check_coproduct(s, nmax, rep.counterexample);
    });
}

CheckReport verify_askew(int wmax, const VerifySettings& vs) {
    return dispatch("askew", wmax, "weight", vs, [&](auto& s, CheckReport& rep) {
        return checks::check_askew(s, wmax, rep.counterexample);
    });
}

CheckReport verify_macdonald(int wmax, const VerifySettings& vs) {
    return dispatch("macdonald", wmax, "weight", vs, [&](auto& s, CheckReport& rep) {
        return checks::check_macdonald(s, wmax, rep.counterexample);
    });
}

CheckReport verify_ybe(int wmax, const VerifySettings& vs) {
    CheckReport base;
    base.name = "ybe";
    base.param("weight", std::to_string(wmax));
    return with_redraws(vs, base, [&](std::uint64_t attempt_seed) {
        CheckReport rep = base;
        stamp(rep, vs, attempt_seed);
        std::string orientation;
        bool ok;
        if (vs.mode == EvalMode::PrimeField) {
            Fp64::set_modulus(vs.prime);
            std::uint64_t state = attempt_seed * 0x51A7B2C9ULL + 17;
            Fp64 q = draw_fp(state), t = draw_fp(state);
            Fp64 a = draw_fp(state), b = draw_fp(state);
            rep.param("assign_q", q.to_string());
            rep.param("assign_t", t.to_string());
            rep.param("assign_a", a.to_string());
            rep.param("assign_b", b.to_string());
            Session<Fp64> sa(ToroidalParams<Fp64>::make(q, t, a));
            Session<Fp64> sab(ToroidalParams<Fp64>::make(q, t, a * b), sa.tor->mac_ptr());
            Session<Fp64> sb(ToroidalParams<Fp64>::make(q, t, b), sa.tor->mac_ptr());
            ok = checks::check_ybe(sa, sab, sb, wmax, orientation, rep.counterexample);
        } else {
            RatFunc q, t;
            if (vs.mode == EvalMode::Symbolic) {
                q = RatFunc::variable(Var::q);
                t = RatFunc::variable(Var::t);
            } else {
                auto qt = resolve_qt(vs, attempt_seed);
                rep.param("assign_q", rational_str(qt.at(Var::q)));
                rep.param("assign_t", rational_str(qt.at(Var::t)));
                q = qt.at(Var::q).to_ratfunc();
                t = qt.at(Var::t).to_ratfunc();
            }
            // spectral ratios stay symbolic: a = u, b = v, ab = u v
            RatFunc a = RatFunc::variable(Var::u);
            RatFunc b = RatFunc::variable(Var::v);
            rep.param("spectral", "symbolic a,b");
            Session<RatFunc> sa(ToroidalParams<RatFunc>::make(q, t, a));
            Session<RatFunc> sab(ToroidalParams<RatFunc>::make(q, t, a * b),
                                 sa.tor->mac_ptr());
            Session<RatFunc> sb(ToroidalParams<RatFunc>::make(q, t, b), sa.tor->mac_ptr());
            ok = checks::check_ybe(sa, sab, sb, wmax, orientation, rep.counterexample);
        }
        rep.param("orientation", orientation);
        rep.pass = ok;
        if (ok) rep.counterexample.clear();
        return rep;
    });
}

CheckReport run_check(const std::string& name, int level, const VerifySettings& vs) {
    if (name == "sixvertex") return verify_sixvertex();
    if (name == "symmetry") return verify_symmetry(level, vs);
    if (name == "coproduct") return verify_coproduct(level, vs);
    if (name == "ybe") return verify_ybe(level, vs);
    if (name == "askew") return verify_askew(level, vs);
    if (name == "macdonald") return verify_macdonald(level, vs);
    throw std::invalid_argument("unknown check: " + name);
}

}  // namespace qtrm
