#include "qtrm/partition.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qtrm {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0)
            throw std::invalid_argument("Partition: parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw std::invalid_argument("Partition: parts must be weakly decreasing");
        weight_ += parts_[i];
    }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    return Partition(std::move(parts));
}

int Partition::part(int i) const {
    if (i < 1 || i > length()) return 0;
    return parts_[static_cast<std::size_t>(i) - 1];
}

int Partition::mult(int r) const {
    int n = 0;
    for (int p : parts_) n += (p == r);
    return n;
}

std::vector<int> Partition::mult_vector() const {
    std::vector<int> m(parts_.empty() ? 0 : parts_.front(), 0);
    for (int p : parts_) ++m[static_cast<std::size_t>(p) - 1];
    return m;
}

long long Partition::mult_factorial() const {
    long long f = 1;
    int run = 1;
    for (std::size_t i = 1; i <= parts_.size(); ++i) {
        if (i < parts_.size() && parts_[i] == parts_[i - 1]) {
            ++run;
            f *= run;
        } else {
            run = 1;
        }
    }
    return f;
}

Partition Partition::multiset_union(const Partition& other) const {
    std::vector<int> merged;
    merged.reserve(parts_.size() + other.parts_.size());
    std::merge(parts_.begin(), parts_.end(), other.parts_.begin(), other.parts_.end(),
               std::back_inserter(merged), std::greater<int>());
    return Partition(std::move(merged));
}

bool Partition::submultiset_of(const Partition& other) const {
    // both sorted decreasing: sweep
    std::size_t j = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        while (j < other.parts_.size() && other.parts_[j] > parts_[i]) ++j;
        if (j >= other.parts_.size() || other.parts_[j] != parts_[i]) return false;
        ++j;
    }
    return true;
}

Partition Partition::multiset_minus(const Partition& sub) const {
    if (!sub.submultiset_of(*this))
        throw std::invalid_argument("multiset_minus: not a subpartition");
    std::vector<int> out;
    out.reserve(parts_.size() - sub.parts_.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (j < sub.parts_.size() && sub.parts_[j] == parts_[i]) {
            ++j;
        } else {
            out.push_back(parts_[i]);
        }
    }
    return Partition(std::move(out));
}

Partition Partition::multiset_intersect(const Partition& other) const {
    std::vector<int> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        if (parts_[i] == other.parts_[j]) {
            out.push_back(parts_[i]);
            ++i;
            ++j;
        } else if (parts_[i] > other.parts_[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return Partition(std::move(out));
}

bool Partition::diagram_contains(const Partition& inner) const {
    if (inner.length() > length()) return false;
    for (int i = 0; i < inner.length(); ++i)
        if (inner.parts_[static_cast<std::size_t>(i)] > parts_[static_cast<std::size_t>(i)])
            return false;
    return true;
}

std::string Partition::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << ',';
        os << parts_[i];
    }
    os << ')';
    return os.str();
}

bool canonical_less(const Partition& a, const Partition& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    // reverse-lexicographic within a weight: (w) first, (1^w) last
    return a.parts() > b.parts();
}

namespace {

void gen_partitions(int remaining, int max_part, std::vector<int>& stack,
                    std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition(stack));
        return;
    }
    for (int k = std::min(remaining, max_part); k >= 1; --k) {
        stack.push_back(k);
        gen_partitions(remaining - k, k, stack, out);
        stack.pop_back();
    }
}

}  // namespace

const std::vector<Partition>& partitions_of(int w) {
    if (w < 0) throw std::invalid_argument("partitions_of: negative weight");
    static std::mutex mtx;
    static std::vector<std::vector<Partition>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    while (static_cast<int>(cache.size()) <= w) {
        int n = static_cast<int>(cache.size());
        std::vector<Partition> list;
        std::vector<int> stack;
        gen_partitions(n, n == 0 ? 1 : n, stack, list);
        cache.push_back(std::move(list));
    }
    return cache[static_cast<std::size_t>(w)];
}

long long partition_count(int w) {
    return static_cast<long long>(partitions_of(w).size());
}

int partition_index(const Partition& la) {
    const auto& list = partitions_of(la.weight());
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == la) return static_cast<int>(i);
    throw std::logic_error("partition_index: not found");
}

namespace {

void gen_subdiagrams(const Partition& alpha, int row, int upper, std::vector<int>& stack,
                     std::vector<Partition>& out) {
    out.push_back(Partition(stack));
    if (row > alpha.length()) return;
    int bound = std::min(upper, alpha.part(row));
    for (int k = bound; k >= 1; --k) {
        stack.push_back(k);
        gen_subdiagrams(alpha, row + 1, k, stack, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Partition> proper_subdiagrams(const Partition& alpha) {
    std::vector<Partition> out;
    std::vector<int> stack;
    gen_subdiagrams(alpha, 1, alpha.weight(), stack, out);
    std::erase_if(out, [&](const Partition& p) { return p.weight() == alpha.weight(); });
    std::sort(out.begin(), out.end(), PartitionLess{});
    return out;
}

long long bracket(const Partition& mu, const Partition& nu) {
    if (!nu.submultiset_of(mu)) return 0;
    Partition rest = mu.multiset_minus(nu);
    return mu.mult_factorial() / (rest.mult_factorial() * nu.mult_factorial());
}

std::vector<PartitionPair> sector_pairs(int w) {
    std::vector<PartitionPair> out;
    for (int wa = w; wa >= 0; --wa) {
        for (const Partition& a : partitions_of(wa))
            for (const Partition& b : partitions_of(w - wa)) out.emplace_back(a, b);
    }
    return out;
}

std::vector<PartitionPair> equal_weight_pairs(int w) {
    std::vector<PartitionPair> out;
    for (const Partition& a : partitions_of(w))
        for (const Partition& b : partitions_of(w)) out.emplace_back(a, b);
    return out;
}

}  // namespace qtrm
