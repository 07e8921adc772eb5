#pragma once

#include <string>

#include "stadion/clusterer.hpp"
#include "stadion/dataset.hpp"
#include "stadion/partition.hpp"

namespace stadion {

enum class IndexId {
    silhouette,
    davies_bouldin,
    calinski_harabasz,
    dunn,
    xie_beni,
    ray_turi,
    wemmert_gancarski,
};

// true: larger is better; false: smaller is better.
bool index_maximizes(IndexId id);

const char* to_string(IndexId id);
IndexId index_from_string(const std::string& name);

inline constexpr std::size_t kDefaultIndexCap = 20000;

// Internal validity score of a partition (K >= 2, all clusters non-empty).
// The O(N^2) indices (silhouette, dunn, xie_beni) refuse datasets above cap.
double internal_index(IndexId id, const Dataset& x, const Partition& p,
                      std::size_t cap = kDefaultIndexCap);

// argbest of the index over K in 2..k_max on reference partitions fitted with
// the same per-K seed stream the stability evaluator uses, so comparisons
// against Stadion are on identical partitions. Ties go to the smaller K.
int select_k_by_index(IndexId id, const ClustererConfig& cfg, const Dataset& x, int k_max,
                      std::size_t cap = kDefaultIndexCap);

}  // namespace stadion
