// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Criteria (exact arithmetic throughout; "eval" = exact rational points):
//   1. sector dimensions 5, 10, 20, 36 at total weight 2..5
//   2. blocks w <= 1 equal the known six-vertex entries symbolically
//   3. t -> 0 limit of the ((1),(1)) diagonal element of the w=2 block is 1
//   4. L-table symmetry, all |alpha| = |beta| <= 4, symbolic
//   5. a-coefficient route agreement, |lambda| <= 4, symbolic
//   6. graded kernel functional equation: n <= 3 symbolic, n = 4 at 3 seeds
//   7. Yang-Baxter: weight <= 1 symbolic; weight <= 2 at 3 seeds
//   8. Macdonald engine: orthogonality/triangularity and vertex operator
//      eigenvalues through weight 5
//   9. normalization R_(0),(0) = 1 and weight conservation of all stored
//      coefficients

#include <chrono>
#include <cstdio>
#include <string>

#include "qtrm/verify.hpp"

using namespace qtrm;

namespace {

int failures = 0;

void line(int idx, const std::string& what, bool pass, double secs,
          const std::string& detail = "") {
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", idx,
                what.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <typename F>
void timed(int idx, const std::string& what, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = f(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    line(idx, what, ok, secs, ok ? "" : detail);
}

bool report_ok(const CheckReport& r, std::string& detail) {
    if (!r.pass) detail = r.counterexample;
    return r.pass;
}

}  // namespace

int main() {
    VerifySettings sym;  // symbolic, exact

    timed(1, "sector dimensions 5,10,20,36 for w=2..5", [](std::string& detail) {
        const std::size_t expect[] = {5, 10, 20, 36};
        for (int w = 2; w <= 5; ++w) {
            std::size_t n = sector_pairs(w).size();
            if (n != expect[w - 2]) {
                detail = "w=" + std::to_string(w) + " gave " + std::to_string(n);
                return false;
            }
        }
        return true;
    });

    timed(2, "six-vertex blocks at w <= 1 (symbolic)", [&](std::string& detail) {
        return report_ok(verify_sixvertex(), detail);
    });

    timed(3, "t -> 0 limit of the ((1),(1)) element of the w=2 block",
          [&](std::string& detail) {
              checks::Session<RatFunc> s(symbolic_params());
              FockBlock<RatFunc> b2 = s.fock->assemble_full_block(2);
              for (std::size_t i = 0; i < b2.basis.size(); ++i) {
                  if (b2.basis[i] != PartitionPair{Partition({1}), Partition({1})}) continue;
                  RatFunc lim = b2.at(static_cast<int>(i), static_cast<int>(i)).limit_t0();
                  if (lim == RatFunc(1)) return true;
                  detail = "limit is " + lim.to_string();
                  return false;
              }
              detail = "basis pair ((1),(1)) not found";
              return false;
          });

    timed(4, "L-table symmetry through weight 4 (symbolic)", [&](std::string& detail) {
        return report_ok(verify_symmetry(4, sym), detail);
    });

    timed(5, "a-coefficient route agreement through weight 4 (symbolic)",
          [&](std::string& detail) { return report_ok(verify_askew(4, sym), detail); });

    timed(6, "graded kernel equation: n <= 3 symbolic, n = 4 at 3 rational points",
          [&](std::string& detail) {
              if (!report_ok(verify_coproduct(3, sym), detail)) return false;
              for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
                  VerifySettings ev;
                  ev.mode = EvalMode::RationalPoint;
                  ev.seed = seed;
                  if (!report_ok(verify_coproduct(4, ev), detail)) return false;
              }
              return true;
          });

    timed(7, "Yang-Baxter: w <= 1 symbolic, w <= 2 at 3 rational points",
          [&](std::string& detail) {
              if (!report_ok(verify_ybe(1, sym), detail)) return false;
              for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
                  VerifySettings ev;
                  ev.mode = EvalMode::RationalPoint;
                  ev.seed = seed;
                  if (!report_ok(verify_ybe(2, ev), detail)) return false;
              }
              return true;
          });

    timed(8, "Macdonald engine suite through weight 5 (symbolic)",
          [&](std::string& detail) { return report_ok(verify_macdonald(5, sym), detail); });

    timed(9, "normalization and weight conservation", [&](std::string& detail) {
        checks::Session<RatFunc> s(symbolic_params());
        if (!(s.tor->rbar_coeffs(0).at(Partition{}, Partition{}) == RatFunc(1))) {
            detail = "R_(0),(0) != 1";
            return false;
        }
        for (int w = 0; w <= 2; ++w) {
            for (const auto& [pr, c] : s.tor->rbar_coeffs(w).entries) {
                if (pr.first.weight() != pr.second.weight()) {
                    detail = "rbar entry violates |mu| = |nu|";
                    return false;
                }
            }
            for (const auto& [ga, de] : sector_pairs(w)) {
                PairVector<RatFunc> img = s.fock->apply_full_R(ga, de);
                for (const auto& [pr, c] : img.coeffs) {
                    if (pr.first.weight() + pr.second.weight() != w) {
                        detail = "block image leaves its weight sector";
                        return false;
                    }
                }
            }
        }
        return true;
    });

    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 9 criteria passed\n");
    return failures ? 1 : 0;
}
