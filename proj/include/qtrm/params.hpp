#pragma once

#include "qtrm/partition.hpp"

namespace qtrm {

/// Macdonald parameters expressed through the primitive variables:
/// sq = q/t, st = 1/(q t).  Never independent symbols.
template <typename K>
struct MacdonaldParams {
    K q, t;    // primitive variables
    K sq, st;  // Macdonald's two parameters

    static MacdonaldParams make(const K& q, const K& t) {
        MacdonaldParams p;
        p.q = q;
        p.t = t;
        p.sq = q / t;
        p.st = K(1) / (q * t);
        return p;
    }
};

/// Eigenvalue polynomial of the diagonal operators:
/// epsilon_lambda(u, v) = (1/v - 1) * sum_i (u^{lambda_i} - 1) v^i.
template <typename K>
K epsilon_poly(const Partition& la, const K& u, const K& v) {
    K sum(0);
    K vpow(1);
    for (int i = 1; i <= la.length(); ++i) {
        vpow *= v;
        K upow(1);
        for (int k = 0; k < la.part(i); ++k) upow *= u;
        sum += (upow - K(1)) * vpow;
    }
    return (K(1) / v - K(1)) * sum;
}

}  // namespace qtrm
