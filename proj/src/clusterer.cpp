#include "stadion/clusterer.hpp"

#include <stdexcept>

namespace stadion {

const char* to_string(Algorithm a) { return a == Algorithm::kmeans ? "kmeans" : "ward"; }

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "ward") return Algorithm::ward;
    throw std::invalid_argument("unknown algorithm: " + name);
}

FittedModel fit(const ClustererConfig& cfg, const Dataset& x, int k) {
    if (k < 1) throw std::invalid_argument("fit: k must be positive");
    if (static_cast<std::size_t>(k) > x.n())
        throw std::invalid_argument("fit: k exceeds the number of points");
    if (cfg.n_runs < 1 || cfg.max_iters < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("fit: invalid clusterer configuration");

    FittedModel model;
    model.algorithm = cfg.algorithm;
    model.raw_input_warning = x.scaling == Scaling::raw;
    if (cfg.algorithm == Algorithm::kmeans) {
        KMeansConfig kc;
        kc.runs = cfg.n_runs;
        kc.max_iters = cfg.max_iters;
        kc.tol = cfg.tol;
        kc.init = cfg.init;
        kc.seed = cfg.seed;
        KMeansResult r = kmeans_fit(x.x, k, kc);
        model.partition = std::move(r.assignment);
        model.centers = std::move(r.centers);
        model.cost = r.cost;
        model.run_costs = std::move(r.run_costs);
        model.iteration_costs = std::move(r.iteration_costs);
    } else {
        if (count_distinct_rows(x.x, static_cast<std::size_t>(k)) < static_cast<std::size_t>(k))
            throw std::invalid_argument("fit: k exceeds the number of distinct points");
        model.merges = ward_merge_sequence(x.x, cfg.ward_cap);
        model.partition = cut_dendrogram(model.merges, x.n(), k);
    }
    return model;
}

Partition extend(const FittedModel& model, const Dataset& x_new) {
    if (model.algorithm != Algorithm::kmeans)
        throw std::invalid_argument("extend: ward models have no extension operator");
    return assign_to_centers(x_new.x, model.centers);
}

}  // namespace stadion
