#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stadion/matrix.hpp"
#include "stadion/partition.hpp"
#include "stadion/rng.hpp"

namespace stadion {

enum class KMeansInit { kmeanspp, random };

const char* to_string(KMeansInit i);
KMeansInit kmeans_init_from_string(const std::string& name);

struct KMeansConfig {
    int runs = 35;         // independent seeded restarts, best cost kept
    int max_iters = 300;
    double tol = 1e-6;     // max center movement for convergence
    KMeansInit init = KMeansInit::kmeanspp;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    Matrix centers;             // k x p
    Partition assignment;       // nearest-center labels under the final centers
    double cost = 0.0;          // sum of squared distances to assigned centers
    std::vector<double> run_costs;        // per restart
    std::vector<double> iteration_costs;  // cost trace of the winning restart
    int best_run = 0;
};

// Lloyd iterations from a k-means++ seeding; ties in assignment go to the
// lowest center index and empty clusters are repaired with the point farthest
// from its center. k must not exceed the number of distinct rows.
KMeansResult kmeans_fit(const Matrix& x, int k, const KMeansConfig& cfg);

// Nearest-center labels (lowest index wins ties); the same rule the fit uses
// for its final assignment, so extending onto the training data is the fit.
Partition assign_to_centers(const Matrix& x, const Matrix& centers);

// k-means++ seeding: first center uniform over rows, each next proportional to
// squared distance to the nearest chosen center; an all-zero weight vector
// (duplicates only) falls back to uniform choice among unchosen rows.
Matrix kmeanspp_init(const Matrix& x, int k, Rng& rng);

// Uniform choice of k rows with distinct coordinates.
Matrix random_init(const Matrix& x, int k, Rng& rng);

std::size_t count_distinct_rows(const Matrix& x, std::size_t stop_after = 0);

}  // namespace stadion
