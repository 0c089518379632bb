#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtrm/toroidal.hpp"

using namespace qtrm;

namespace {

const RatFunc Q = RatFunc::variable(Var::q);
const RatFunc T = RatFunc::variable(Var::t);
const RatFunc U = RatFunc::variable(Var::u);
const RatFunc V = RatFunc::variable(Var::v);

Partition P_(std::initializer_list<int> parts) { return Partition(std::vector<int>(parts)); }

ToroidalEngine<RatFunc>& engine() {
    static ToroidalEngine<RatFunc> eng(symbolic_params());
    return eng;
}

}  // namespace

TEST_CASE("parameter relations") {
    ToroidalParams<RatFunc> p = symbolic_params();
    CHECK(p.q1 * p.q2 * p.q3 == RatFunc(1));
    CHECK(p.q1 == RatFunc(1) / (Q * T));
    CHECK(p.q2 == Q * Q);
    CHECK(p.q3 == T / Q);
    CHECK(p.mac.sq == RatFunc(1) / p.q3);
    CHECK(p.mac.st == p.q1);
    CHECK(p.kappa(1) == (RatFunc(1) - p.q1) * (RatFunc(1) - p.q2) * (RatFunc(1) - p.q3));
    CHECK(p.s == p.kappa(1) / (RatFunc(1) - p.q2));
    CHECK(p.s == (RatFunc(1) - p.q1) * (RatFunc(1) - p.q3));
}

TEST_CASE("eigenvalue coefficients") {
    auto& eng = engine();
    CHECK(eng.epsilon(Partition{}, U, V) == RatFunc(0));
    CHECK(eng.eps(Partition{}) == RatFunc(0));
    // epsilon_(1)(u,v) = (1-v)(u-1)
    CHECK(eng.epsilon(P_({1}), U, V) == (RatFunc(1) - V) * (U - RatFunc(1)));
    // epsilon_(1,1)(u,v) = (1-v)(u-1)(1+v)
    CHECK(eng.epsilon(P_({1, 1}), U, V) ==
          (RatFunc(1) - V) * (U - RatFunc(1)) * (RatFunc(1) + V));
    // the two specializations agree with direct substitution
    const RatFunc sq = eng.params().mac.sq, st = eng.params().mac.st;
    for (int w = 1; w <= 3; ++w)
        for (const Partition& la : partitions_of(w)) {
            CHECK(eng.eps(la) == eng.epsilon(la, RatFunc(1) / sq, st));
            CHECK(eng.epsbar(la) == eng.epsilon(la, sq, RatFunc(1) / st));
        }
}

TEST_CASE("a-coefficients") {
    auto& eng = engine();
    const RatFunc sq = eng.params().mac.sq, st = eng.params().mac.st;
    // a_{mu/mu} = 1
    for (int w = 0; w <= 3; ++w)
        for (const Partition& mu : partitions_of(w)) {
            CHECK(eng.a_skew(mu, mu, ASkewRoute::Kernel) == RatFunc(1));
            CHECK(eng.a_skew(mu, mu, ASkewRoute::SkewQ) == RatFunc(1));
        }
    // a_{(1)/()} = (1-st)(1 - sq/st)/q
    RatFunc expect = (RatFunc(1) - st) * (RatFunc(1) - sq / st) / Q;
    CHECK(eng.a_skew(P_({1}), Partition{}, ASkewRoute::Kernel) == expect);
    CHECK(eng.a_skew(P_({1}), Partition{}, ASkewRoute::SkewQ) == expect);
    // vanishing outside diagram containment, on both routes
    CHECK(eng.a_skew(P_({1, 1}), P_({2}), ASkewRoute::Kernel) == RatFunc(0));
    CHECK(eng.a_skew(P_({1, 1}), P_({2}), ASkewRoute::SkewQ) == RatFunc(0));
    // route agreement for all pairs up to weight 3 (weight 4 in acceptance)
    for (int wl = 0; wl <= 3; ++wl)
        for (const Partition& la : partitions_of(wl))
            for (int wm = 0; wm <= wl; ++wm)
                for (const Partition& mu : partitions_of(wm))
                    CHECK(eng.a_skew(la, mu, ASkewRoute::Kernel) ==
                          eng.a_skew(la, mu, ASkewRoute::SkewQ));
}

TEST_CASE("skew L coefficients") {
    auto& eng = engine();
    // zero when the inner shape pokes out of its outer diagram
    CHECK(eng.L_skew(P_({2, 1}), P_({1, 1}), P_({3}), P_({1, 1})) == RatFunc(0));
    CHECK(eng.L_skew(P_({3}), P_({1, 1}), P_({2, 1}), P_({1, 1})) == RatFunc(0));
    // malformed weight combinations are rejected
    CHECK_THROWS_AS(eng.L_skew(P_({1, 1}), P_({2}), P_({2}), P_({1})), std::invalid_argument);
    // direct substitution for alpha = beta = (1), lambda = mu = ()
    Partition one({1});
    RatFunc a10 = eng.a_skew(one, Partition{}, ASkewRoute::Kernel);
    const RatFunc sq = eng.params().mac.sq, st = eng.params().mac.st;
    RatFunc expect = (RatFunc(1) / (eng.eps(one) - U * eng.epsbar(one))) *
                     ((RatFunc(1) - st) * (RatFunc(1) - RatFunc(1) / sq) * Q.pow(3) /
                      ((RatFunc(1) - Q * Q) * eng.epsbar(one))) *
                     a10 * a10;
    CHECK(eng.L_skew(one, Partition{}, one, Partition{}) == expect);
}

TEST_CASE("L tables") {
    auto& eng = engine();
    // initial condition
    const LTable<RatFunc>& t0 = eng.L_table(0);
    CHECK(t0.entries.size() == 1);
    CHECK(t0.at(Partition{}, Partition{}) == RatFunc(1));
    // w=1: a single entry built from the lambda = mu = () term alone
    Partition one({1});
    const LTable<RatFunc>& t1 = eng.L_table(1);
    CHECK(t1.entries.size() == 1);
    CHECK(t1.at(one, one) == eng.L_skew(one, Partition{}, one, Partition{}));
    // symmetry at w=2 (the full bound runs in the acceptance suite)
    const LTable<RatFunc>& t2 = eng.L_table(2);
    CHECK(t2.at(P_({2}), P_({1, 1})) == t2.at(P_({1, 1}), P_({2})));
    CHECK_FALSE(t2.at(P_({2}), P_({1, 1})).is_zero());

    // denominator structure: regular at u = 0 after clearing
    for (int w = 1; w <= 3; ++w)
        for (const auto& [pr, val] : eng.L_table(w).entries)
            CHECK_FALSE(val.den().set_var_zero(Var::u).is_zero());
}

TEST_CASE("symmetric function component of R") {
    auto& eng = engine();
    Partition one({1});
    BiSymFunc<RatFunc> r0 = eng.R_sym_component(0, Basis::PowerSum);
    CHECK(r0.coeffs.size() == 1);
    CHECK(r0.coeff(Partition{}, Partition{}) == RatFunc(1));
    BiSymFunc<RatFunc> r1P = eng.R_sym_component(1, Basis::MacP);
    CHECK(r1P.coeffs.size() == 1);
    CHECK(r1P.coeff(one, one) == eng.L_table(1).at(one, one));
    // P_(1) = p_1, so the p (x) p coefficient is the same number
    BiSymFunc<RatFunc> r1p = eng.R_sym_component(1, Basis::PowerSum);
    CHECK(r1p.coeff(one, one) == eng.L_table(1).at(one, one));
}

TEST_CASE("Heisenberg-basis coefficients") {
    auto& eng = engine();
    Partition one({1});
    const RbarCoeffs<RatFunc>& rc0 = eng.rbar_coeffs(0);
    CHECK(rc0.at(Partition{}, Partition{}) == RatFunc(1));
    // support respects |mu| = |nu| by construction of the tables
    for (int w = 0; w <= 2; ++w)
        for (const auto& [pr, val] : eng.rbar_coeffs(w).entries) {
            CHECK(pr.first.weight() == w);
            CHECK(pr.second.weight() == w);
            CHECK_FALSE(val.is_zero());
        }
    // w=1 inversion: R_(1),(1) = -L_(1),(1) / (1 - q1)^2
    RatFunc q1 = eng.params().q1;
    RatFunc L11 = eng.L_table(1).at(one, one);
    CHECK(eng.rbar_coeffs(1).at(one, one) ==
          RatFunc(0) - L11 / ((RatFunc(1) - q1) * (RatFunc(1) - q1)));
}
