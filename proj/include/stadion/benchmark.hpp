#pragma once

#include <map>
#include <string>
#include <vector>

#include "stadion/stability.hpp"
#include "stadion/validity.hpp"

namespace stadion {

struct MethodOutcome {
    std::string method;
    int k_hat = 0;
    double ari = 0.0;   // agreement of the selected reference partition with ground truth
    bool failed = false;
    std::string error;
};

struct BenchmarkDatasetResult {
    std::string name;
    int k_star = 0;  // ground-truth cluster count
    int k_max = 0;
    SelectionReport report;  // the stability run behind the two stadion methods
    std::vector<MethodOutcome> methods;
};

struct BenchmarkSummary {
    int datasets = 0;
    std::vector<std::string> methods;                // fixed evaluation order
    std::map<std::string, int> wins;                 // exact recoveries of k_star
    std::map<std::string, double> mean_rank;         // ARI ranks, midpoint ties
};

// Candidate range ceiling used when none is given: k_star + 20 rounded down to
// a multiple of ten (so 3 -> 20, 15 -> 30).
int default_k_max(int k_star);

// stadion_max, stadion_mean, then the seven internal indices.
const std::vector<std::string>& benchmark_methods();

// Ranks of `scores` (higher is better), 1 = best, ties averaged. NaN scores
// rank behind every finite score and tie with each other.
std::vector<double> midpoint_ranks(const std::vector<double>& scores);

// Runs every method on one dataset. Method failures are recorded in the
// outcome instead of thrown, so one bad method cannot sink the suite.
BenchmarkDatasetResult benchmark_dataset(const std::string& name, const Dataset& x,
                                         const Partition& truth, const ClustererConfig& cfg,
                                         int k_max, const StabilityParams& params,
                                         const EpsilonGrid& grid);

// Pure fold over per-dataset results; artifacts hold everything needed to
// recompute it.
BenchmarkSummary summarize(const std::vector<BenchmarkDatasetResult>& results);

}  // namespace stadion
