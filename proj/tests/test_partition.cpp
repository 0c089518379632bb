#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtrm/partition.hpp"

#include <set>

using namespace qtrm;

namespace {

// independent oracle: Euler's recurrence-free double loop
long long count_partitions_brute(int n) {
    // p(n, k): partitions of n with parts <= k
    std::vector<std::vector<long long>> p(static_cast<std::size_t>(n) + 1,
                                          std::vector<long long>(static_cast<std::size_t>(n) + 1, 0));
    for (int k = 0; k <= n; ++k) p[0][static_cast<std::size_t>(k)] = 1;
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k) {
            long long v = p[static_cast<std::size_t>(m)][static_cast<std::size_t>(k) - 1];
            if (m >= k) v += p[static_cast<std::size_t>(m - k)][static_cast<std::size_t>(k)];
            p[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = v;
        }
    return p[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)];
}

}  // namespace

TEST_CASE("construction and invariants") {
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({0}), std::invalid_argument);
    CHECK(Partition::from_unsorted({1, 3, 1}).parts() == std::vector<int>{3, 1, 1});
    Partition mu({3, 1, 1});
    CHECK(mu.weight() == 5);
    CHECK(mu.length() == 3);
    CHECK(mu.mult(1) == 2);
    CHECK(mu.mult(3) == 1);
    CHECK(mu.mult(2) == 0);
    CHECK(mu.mult_factorial() == 2);
    CHECK(Partition{}.weight() == 0);
    CHECK(Partition{}.length() == 0);
    CHECK(Partition({2, 2, 2, 1, 1}).mult_factorial() == 12);  // 3! * 2!
}

TEST_CASE("enumeration in canonical order") {
    CHECK(partitions_of(0).size() == 1);
    CHECK(partitions_of(0)[0] == Partition{});
    const auto& p4 = partitions_of(4);
    REQUIRE(p4.size() == 5);
    CHECK(p4[0] == Partition({4}));
    CHECK(p4[1] == Partition({3, 1}));
    CHECK(p4[2] == Partition({2, 2}));
    CHECK(p4[3] == Partition({2, 1, 1}));
    CHECK(p4[4] == Partition({1, 1, 1, 1}));
    for (int w = 0; w <= 12; ++w) CHECK(partition_count(w) == count_partitions_brute(w));
    // strict canonical order within each weight
    for (int w = 1; w <= 8; ++w) {
        const auto& list = partitions_of(w);
        for (std::size_t i = 0; i + 1 < list.size(); ++i)
            CHECK(canonical_less(list[i], list[i + 1]));
    }
    for (int w = 0; w <= 8; ++w)
        for (const Partition& la : partitions_of(w))
            CHECK(partitions_of(w)[static_cast<std::size_t>(partition_index(la))] == la);
}

TEST_CASE("sector pair counts match the block dimensions") {
    CHECK(sector_pairs(0).size() == 1);
    CHECK(sector_pairs(1).size() == 2);
    CHECK(sector_pairs(2).size() == 5);
    CHECK(sector_pairs(3).size() == 10);
    CHECK(sector_pairs(4).size() == 20);
    CHECK(sector_pairs(5).size() == 36);
    // ordering pinned at w = 1: ((1),()) before ((),(1))
    CHECK(sector_pairs(1)[0] == PartitionPair{Partition({1}), Partition{}});
    CHECK(sector_pairs(1)[1] == PartitionPair{Partition{}, Partition({1})});
}

TEST_CASE("multiset operations") {
    Partition a({2, 1}), b({2});
    CHECK(a.multiset_union(b) == Partition({2, 2, 1}));
    CHECK(Partition({2, 2, 1}).multiset_minus(b) == Partition({2, 1}));
    CHECK_THROWS_AS(Partition({2}).multiset_minus(Partition({1})), std::invalid_argument);
    CHECK(Partition({3, 1}).multiset_intersect(Partition({2, 1})) == Partition({1}));
    CHECK(Partition({2, 2, 1}).multiset_intersect(Partition({2, 1, 1})) == Partition({2, 1}));
    CHECK(b.submultiset_of(a));
    CHECK_FALSE(Partition({1, 1}).submultiset_of(a));

    // union/setminus mutually inverse; weights add
    for (int wa = 0; wa <= 4; ++wa)
        for (int wb = 0; wb <= 4; ++wb)
            for (const Partition& x : partitions_of(wa))
                for (const Partition& y : partitions_of(wb)) {
                    Partition u = x.multiset_union(y);
                    CHECK(u.weight() == wa + wb);
                    CHECK(u.multiset_minus(y) == x);
                }
}

TEST_CASE("bracket") {
    CHECK(bracket(Partition({1, 1}), Partition({1})) == 2);
    CHECK(bracket(Partition({2}), Partition({1})) == 0);
    CHECK(bracket(Partition({2, 1}), Partition({2, 1})) == 1);
    CHECK(bracket(Partition{}, Partition{}) == 1);
    CHECK(bracket(Partition({2, 2, 1}), Partition({2})) == 2);
    // symmetry [mu;nu] = [mu; mu\nu], exhaustive over |mu| <= 8
    for (int w = 0; w <= 8; ++w)
        for (const Partition& mu : partitions_of(w))
            for (int ws = 0; ws <= w; ++ws)
                for (const Partition& nu : partitions_of(ws)) {
                    if (!nu.submultiset_of(mu)) {
                        CHECK(bracket(mu, nu) == 0);
                        continue;
                    }
                    CHECK(bracket(mu, nu) == bracket(mu, mu.multiset_minus(nu)));
                }
}

TEST_CASE("diagram operations") {
    CHECK(Partition({2, 1}).diagram_contains(Partition({1, 1})));
    CHECK_FALSE(Partition({2}).diagram_contains(Partition({1, 1})));
    auto subs = proper_subdiagrams(Partition({2}));
    REQUIRE(subs.size() == 2);
    CHECK(subs[0] == Partition{});
    CHECK(subs[1] == Partition({1}));
    // proper: the diagram itself never appears
    for (int w = 1; w <= 6; ++w)
        for (const Partition& la : partitions_of(w))
            for (const Partition& s : proper_subdiagrams(la)) {
                CHECK(s.weight() < w);
                CHECK(la.diagram_contains(s));
            }
}

TEST_CASE("diagram containment and multiset containment are different orders") {
    // (1,1) sits inside (2,1) as a diagram but is not a sub-multiset;
    // the skew recursion must see it, the operator algebra must not.
    Partition alpha({2, 1}), la({1, 1});
    CHECK(alpha.diagram_contains(la));
    CHECK_FALSE(la.submultiset_of(alpha));
    auto subs = proper_subdiagrams(alpha);
    CHECK(std::find(subs.begin(), subs.end(), la) != subs.end());
}
