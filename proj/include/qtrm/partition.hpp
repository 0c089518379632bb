#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qtrm {

/// Integer partition: weakly decreasing sequence of positive parts.
/// The empty partition is a valid value (weight 0, length 0) and is the
/// base case of every recursion in this project.
///
/// Two different containment orders appear throughout and are kept apart
/// on purpose:
///   - multiset containment (subpartition): parts of nu form a sub-multiset
///     of the parts of mu; used by the Heisenberg operator algebra,
///   - diagram containment: nu_i <= mu_i row by row; used by the skew
///     recursion and everything Macdonald-related.
class Partition {
public:
    Partition() = default;
    /// Parts must be positive and weakly decreasing.
    explicit Partition(std::vector<int> parts);
    /// Sorts the given positive parts into canonical decreasing order.
    static Partition from_unsorted(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int weight() const { return weight_; }
    bool empty() const { return parts_.empty(); }
    int part(int i) const;  // 1-based, 0 beyond length

    /// Number of parts equal to r.
    int mult(int r) const;
    /// Multiplicity vector (m_1, ..., m_{mu_1}).
    std::vector<int> mult_vector() const;
    /// m(mu)! = prod_r m_r(mu)!  (fits easily in 64 bits for our weights)
    long long mult_factorial() const;

    // multiset semantics
    Partition multiset_union(const Partition& other) const;
    bool submultiset_of(const Partition& other) const;
    /// Requires other (as multiset) to contain *this... parts of `sub` are
    /// removed from *this; throws std::invalid_argument otherwise.
    Partition multiset_minus(const Partition& sub) const;
    Partition multiset_intersect(const Partition& other) const;

    // Young-diagram semantics
    bool diagram_contains(const Partition& inner) const;

    std::string to_string() const;  // e.g. "(3,1,1)" , "()" for empty

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator!=(const Partition& a, const Partition& b) {
        return !(a == b);
    }

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

/// Canonical global order: by weight, then reverse-lexicographic within a
/// weight ((w) first, (1^w) last).  Used for every deterministic layout.
bool canonical_less(const Partition& a, const Partition& b);

struct PartitionLess {
    bool operator()(const Partition& a, const Partition& b) const {
        return canonical_less(a, b);
    }
};

using PartitionPair = std::pair<Partition, Partition>;

struct PartitionPairLess {
    bool operator()(const PartitionPair& a, const PartitionPair& b) const {
        if (canonical_less(a.first, b.first)) return true;
        if (canonical_less(b.first, a.first)) return false;
        return canonical_less(a.second, b.second);
    }
};

/// All partitions of w in canonical order; w=0 gives { () }.
const std::vector<Partition>& partitions_of(int w);

/// Partition number n(w).
long long partition_count(int w);

/// Index of la within partitions_of(la.weight()).
int partition_index(const Partition& la);

/// All lambda contained in alpha as diagrams with |lambda| < |alpha|.
/// This is the index set of the skew recursion.
std::vector<Partition> proper_subdiagrams(const Partition& alpha);

/// Analogue of the binomial coefficient on multiplicity vectors:
/// m(mu)!/(m(mu\nu)! m(nu)!) when nu is a sub-multiset of mu, else 0.
long long bracket(const Partition& mu, const Partition& nu);

/// Basis of a total-weight sector: all pairs (alpha, beta) with
/// |alpha| + |beta| = w, ordered by |alpha| descending, then each
/// partition canonically.  At w = 1 this puts ((1),()) before ((),(1)),
/// the usual six-vertex ordering.
std::vector<PartitionPair> sector_pairs(int w);

/// Pairs with |alpha| = |beta| = w (the support of an L-table), in
/// canonical order on (alpha, beta).
std::vector<PartitionPair> equal_weight_pairs(int w);

}  // namespace qtrm
