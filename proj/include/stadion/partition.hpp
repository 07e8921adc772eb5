#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stadion {

// A hard clustering of N items into clusters 0..k-1. Labels are contiguous and
// non-negative; not every label below k needs to be present (sub-partitions of
// restricted index sets may miss clusters).
struct Partition {
    std::vector<int> labels;
    int k = 0;

    std::size_t n() const { return labels.size(); }
};

// Validates labels and infers k = max label + 1 unless given explicitly.
Partition make_partition(std::vector<int> labels, int k = -1);

// Re-encodes arbitrary integer labels to 0..k-1 in first-appearance order.
Partition relabel_first_appearance(const std::vector<int>& raw);

// Number of clusters actually present.
int distinct_labels(const Partition& p);

// Row/column indexed by cluster of the first/second partition; counts[i][j] is
// the number of items in cluster i of `a` and cluster j of `b`.
struct ContingencyTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> counts;  // row-major rows x cols
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;

    std::int64_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

inline constexpr int kDefaultContingencyCap = 4096;

ContingencyTable contingency(const Partition& a, const Partition& b,
                             int cap = kDefaultContingencyCap);

// Pair-confusion counts over the C(N,2) unordered item pairs:
// n11 together in both, n10 together in a only, n01 together in b only,
// n00 together in neither. Exact in 64-bit.
struct PairCounts {
    std::uint64_t n11 = 0;
    std::uint64_t n10 = 0;
    std::uint64_t n01 = 0;
    std::uint64_t n00 = 0;

    std::uint64_t total() const { return n11 + n10 + n01 + n00; }
};

PairCounts pair_counts(const ContingencyTable& t);

}  // namespace stadion
