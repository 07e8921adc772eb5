#pragma once

#include <cstdint>
#include <string>

#include "stadion/dataset.hpp"
#include "stadion/kmeans.hpp"
#include "stadion/ward.hpp"

namespace stadion {

enum class Algorithm { kmeans, ward };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct ClustererConfig {
    Algorithm algorithm = Algorithm::kmeans;
    int n_runs = 35;
    int max_iters = 300;
    double tol = 1e-6;
    KMeansInit init = KMeansInit::kmeanspp;
    std::uint64_t seed = 0;
    std::size_t ward_cap = kDefaultWardCap;
};

struct FittedModel {
    Algorithm algorithm = Algorithm::kmeans;
    Partition partition;
    // kmeans
    Matrix centers;
    double cost = 0.0;
    std::vector<double> run_costs;
    std::vector<double> iteration_costs;
    // ward
    std::vector<WardMerge> merges;
    bool raw_input_warning = false;
};

// Deterministic in (cfg.seed, x, k). k above the distinct-point count is an
// error (empty clusters would be unavoidable).
FittedModel fit(const ClustererConfig& cfg, const Dataset& x, int k);

// Nearest-center assignment; ward models have no extension operator.
Partition extend(const FittedModel& model, const Dataset& x_new);

}  // namespace stadion
