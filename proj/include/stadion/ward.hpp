#pragma once

#include <vector>

#include "stadion/matrix.hpp"
#include "stadion/partition.hpp"

namespace stadion {

struct WardMerge {
    int a = 0;       // cluster ids; 0..N-1 are singletons, N+t is the cluster
    int b = 0;       // born at merge t
    double height = 0.0;  // increase of within-cluster variance (Ward cost)
};

inline constexpr std::size_t kDefaultWardCap = 20000;

// Full agglomeration computed with the nearest-neighbor chain and the
// Lance-Williams update for Ward's criterion; merges are returned sorted by
// height (non-decreasing), ids renumbered accordingly.
std::vector<WardMerge> ward_merge_sequence(const Matrix& x, std::size_t cap = kDefaultWardCap);

// Partition after applying the first N-k merges; clusters numbered by first
// row occurrence.
Partition cut_dendrogram(const std::vector<WardMerge>& merges, std::size_t n, int k);

}  // namespace stadion
