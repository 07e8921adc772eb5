#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "stadion/clusterer.hpp"
#include "stadion/dataset.hpp"
#include "stadion/measures.hpp"
#include "stadion/perturb.hpp"

namespace stadion {

// standard re-fits the clusterer on every perturbed set; extended reuses the
// reference model's extension operator (k-means only) instead of re-fitting,
// both between clusters and inside the nested within-cluster evaluations.
enum class Variant { standard, extended };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct StabilityParams {
    int d = 10;                                      // perturbations per epsilon
    std::vector<int> omega = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    Measure measure = Measure::ari1;
    NoiseKind noise = NoiseKind::uniform;
    Variant variant = Variant::standard;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0: STADION_THREADS env var or hardware default
};

struct StadionPath {
    int k = 0;
    std::vector<double> stab_b;
    std::vector<double> stab_w;
    std::vector<double> stadion;  // elementwise stab_b - stab_w
};

struct SkippedOmega {
    int k = 0;        // candidate K of the reference partition
    int cluster = 0;  // cluster index within it
    int k_prime = 0;  // skipped Omega entry (exceeds the cluster's distinct points)
};

enum class Aggregation { max, mean };

const char* to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& name);

struct TradeOffRow {
    int k = 0;
    double stab_b = 0.0;
    double stab_w = 0.0;
    double stadion = 0.0;
};

struct SelectionReport {
    int k_max = 0;
    StabilityParams params;
    EpsilonGrid grid;
    std::vector<StadionPath> paths;      // K = 1..k_max
    std::vector<double> aggregate_max;   // path extreme per K (min for distance measures)
    std::vector<double> aggregate_mean;  // path mean per K
    int k_hat_max = 1;
    int k_hat_mean = 1;
    std::vector<Partition> references;   // reference partition per K
    std::vector<SkippedOmega> skipped;
    std::size_t dropped_bootstrap_draws = 0;
    double calibrated_eps_max = -1.0;    // >= 0 when calibration produced the grid
};

// Precomputes everything grid-independent: reference clusterings for every
// K in 1..k_max and, per reference cluster, the sub-reference models for each
// retained Omega entry. evaluate() then walks the (K, eps, d) lattice; all
// randomness is derived from (seed, domain, indices), so results are identical
// for any worker count.
class StadionEvaluator {
public:
    StadionEvaluator(const ClustererConfig& cfg, const Dataset& x, int k_max,
                     const StabilityParams& params);
    ~StadionEvaluator();
    StadionEvaluator(const StadionEvaluator&) = delete;
    StadionEvaluator& operator=(const StadionEvaluator&) = delete;

    std::vector<StadionPath> evaluate(const EpsilonGrid& grid) const;

    const FittedModel& reference_model(int k) const;
    std::vector<Partition> reference_partitions() const;
    const std::vector<SkippedOmega>& skipped() const;
    std::size_t dropped_bootstrap_draws() const;  // of the latest evaluate()

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Mean similarity between the reference and the partitions of D perturbed
// copies of x (re-fit or extended according to params.variant).
double stab_between(const ClustererConfig& cfg, const Dataset& x, const FittedModel& ref,
                    double eps, const StabilityParams& params);

// Size-weighted mean over reference clusters of the between-stability of their
// own sub-clusterings across Omega; sub-datasets are row subsets (not
// re-standardized), Omega entries above a cluster's distinct-point count are
// skipped with the mean renormalized, and clusters with every entry skipped
// count as perfectly stable.
double stab_within(const ClustererConfig& cfg, const Dataset& x, const Partition& ref, double eps,
                   const StabilityParams& params);

std::vector<StadionPath> stadion_paths(const ClustererConfig& cfg, const Dataset& x, int k_max,
                                       const EpsilonGrid& grid, const StabilityParams& params);

SelectionReport select_k(const ClustererConfig& cfg, const Dataset& x, int k_max,
                         const EpsilonGrid& grid, const StabilityParams& params);

// Smallest positive grid epsilon (scanning a grid of m points up to 2*sqrt(p))
// where the K=1 path strictly dominates every K in 2..k_max; sqrt(p) if none.
double calibrate_eps_max(const ClustererConfig& cfg, const Dataset& x, int k_max,
                         const StabilityParams& params, std::size_t m = 21);

// Per-K (stab_b, stab_w, stadion) triples under the given aggregation; the max
// rule reports the triple at the path's selected epsilon so the difference
// identity holds row-wise.
std::vector<TradeOffRow> trade_off_table(const SelectionReport& report, Aggregation agg);

int select_from_aggregates(const std::vector<double>& agg, Measure measure);

}  // namespace stadion
