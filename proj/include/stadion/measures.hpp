#pragma once

#include <string>

#include "stadion/partition.hpp"

namespace stadion {

// Partition-similarity measures. VI, NVI, ID, NID are dissimilarities
// (perfect agreement scores 0, larger is worse); the rest are similarities.
enum class Measure {
    ri,
    ari1,  // pair-count adjusted Rand
    ari2,  // Morey-Agresti adjusted Rand (squared-sums expectation)
    fm,
    jacc,
    mi,
    ami,
    vi,
    nvi,
    id,
    nid,
    nmi1,  // I / max(H, H')
    nmi2,  // I / min(H, H')
    nmi3,  // I / sqrt(H * H')
    nmi4,  // I / ((H + H') / 2)
    nmi5,  // I / H(joint)
};

bool measure_is_distance(Measure m);
double perfect_score(Measure m);  // 1 for similarities, 0 for distances

const char* to_string(Measure m);
Measure measure_from_string(const std::string& name);

// Score of partition b against partition a under measure m. Logarithms are
// natural (information measures are in nats). Degenerate conventions:
//  - both partitions trivial (one cluster present): perfect score
//  - ARI denominators of zero: 1 when pair structures agree exactly, else 0
//  - FM with an all-singleton side: 0 (unless both trivial)
//  - ratio-normalized information measures with a 0/0: 0
double compare(Measure m, const Partition& a, const Partition& b,
               int cap = kDefaultContingencyCap);

double entropy_of_row_sums(const ContingencyTable& t);
double entropy_of_col_sums(const ContingencyTable& t);
double joint_entropy(const ContingencyTable& t);
double mutual_information(const ContingencyTable& t);

// Expectation of mutual information over random tables with the given margins
// (hypergeometric model), summed exactly over each cell's support in log space.
double expected_mutual_information(const ContingencyTable& t);

}  // namespace stadion
