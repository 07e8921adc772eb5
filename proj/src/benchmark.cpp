#include "stadion/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stadion/measures.hpp"

namespace stadion {

int default_k_max(int k_star) {
    if (k_star < 1) throw std::invalid_argument("default_k_max: k_star must be positive");
    return (k_star + 20) / 10 * 10;
}

const std::vector<std::string>& benchmark_methods() {
    static const std::vector<std::string> methods = {
        "stadion_max",       "stadion_mean",     "silhouette",
        "davies_bouldin",    "calinski_harabasz", "dunn",
        "xie_beni",          "ray_turi",          "wemmert_gancarski",
    };
    return methods;
}

std::vector<double> midpoint_ranks(const std::vector<double>& scores) {
    const std::size_t n = scores.size();
    auto key = [&](std::size_t i) {
        return std::isnan(scores[i]) ? -std::numeric_limits<double>::infinity() : scores[i];
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && key(order[j + 1]) == key(order[i])) ++j;
        double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mid;
        i = j + 1;
    }
    return ranks;
}

BenchmarkDatasetResult benchmark_dataset(const std::string& name, const Dataset& x,
                                         const Partition& truth, const ClustererConfig& cfg,
                                         int k_max, const StabilityParams& params,
                                         const EpsilonGrid& grid) {
    if (truth.labels.size() != x.n())
        throw std::invalid_argument("benchmark_dataset: ground truth length mismatch");

    BenchmarkDatasetResult result;
    result.name = name;
    result.k_star = truth.k;
    result.k_max = k_max;

    auto score = [&](const Partition& p) { return compare(Measure::ari1, truth, p); };

    bool stadion_ok = false;
    std::string stadion_error;
    try {
        result.report = select_k(cfg, x, k_max, grid, params);
        stadion_ok = true;
    } catch (const std::exception& e) {
        stadion_error = e.what();
    }

    for (const std::string& method : benchmark_methods()) {
        MethodOutcome out;
        out.method = method;
        try {
            if (method == "stadion_max" || method == "stadion_mean") {
                if (!stadion_ok) throw std::runtime_error(stadion_error);
                out.k_hat = method == "stadion_max" ? result.report.k_hat_max
                                                    : result.report.k_hat_mean;
                out.ari = score(result.report.references[static_cast<std::size_t>(out.k_hat) - 1]);
            } else {
                IndexId id = index_from_string(method);
                const bool maximize = index_maximizes(id);
                int best_k = 0;
                double best = 0.0;
                // scored on the same reference partitions the stadion run used
                if (!stadion_ok) throw std::runtime_error(stadion_error);
                for (int k = 2; k <= k_max; ++k) {
                    const Partition& p = result.report.references[static_cast<std::size_t>(k) - 1];
                    if (distinct_labels(p) != p.k) continue;  // degenerate fit at this K
                    double v = internal_index(id, x, p);
                    if (std::isnan(v)) continue;
                    if (best_k == 0 || (maximize && v > best) || (!maximize && v < best)) {
                        best = v;
                        best_k = k;
                    }
                }
                if (best_k == 0)
                    throw std::runtime_error("index undefined for every candidate partition");
                out.k_hat = best_k;
                out.ari = score(result.report.references[static_cast<std::size_t>(best_k) - 1]);
            }
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
            out.ari = std::numeric_limits<double>::quiet_NaN();
            out.k_hat = 0;
        }
        result.methods.push_back(std::move(out));
    }
    return result;
}

BenchmarkSummary summarize(const std::vector<BenchmarkDatasetResult>& results) {
    BenchmarkSummary summary;
    summary.datasets = static_cast<int>(results.size());
    summary.methods = benchmark_methods();
    for (const std::string& m : summary.methods) {
        summary.wins[m] = 0;
        summary.mean_rank[m] = 0.0;
    }
    if (results.empty()) return summary;

    for (const BenchmarkDatasetResult& r : results) {
        if (r.methods.size() != summary.methods.size())
            throw std::invalid_argument("summarize: method list mismatch");
        std::vector<double> scores;
        scores.reserve(r.methods.size());
        for (const MethodOutcome& m : r.methods)
            scores.push_back(m.failed ? std::numeric_limits<double>::quiet_NaN() : m.ari);
        std::vector<double> ranks = midpoint_ranks(scores);
        for (std::size_t i = 0; i < r.methods.size(); ++i) {
            const MethodOutcome& m = r.methods[i];
            if (!m.failed && m.k_hat == r.k_star) summary.wins[m.method] += 1;
            summary.mean_rank[m.method] += ranks[i];
        }
    }
    for (auto& [name, total] : summary.mean_rank) total /= static_cast<double>(summary.datasets);
    return summary;
}

}  // namespace stadion
