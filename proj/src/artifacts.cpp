#include "stadion/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace stadion {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string paths_csv(const SelectionReport& report) {
    std::string out = "k,epsilon,stab_b,stab_w,stadion\n";
    for (const StadionPath& path : report.paths) {
        for (std::size_t i = 0; i < report.grid.m(); ++i) {
            out += std::to_string(path.k);
            out += ',';
            out += fmt17(report.grid.values[i]);
            out += ',';
            out += fmt17(path.stab_b[i]);
            out += ',';
            out += fmt17(path.stab_w[i]);
            out += ',';
            out += fmt17(path.stadion[i]);
            out += '\n';
        }
    }
    return out;
}

std::string report_json(const SelectionReport& report, const RunMeta& meta) {
    using nlohmann::json;
    json j;

    j["config"] = {
        {"data", meta.data_source},
        {"algorithm", to_string(meta.clusterer.algorithm)},
        {"variant", to_string(report.params.variant)},
        {"measure", to_string(report.params.measure)},
        {"noise", to_string(report.params.noise)},
        {"aggregation", to_string(meta.aggregation)},
        {"k_max", report.k_max},
        {"d", report.params.d},
        {"omega", report.params.omega},
        {"seed", report.params.seed},
        {"kmeans",
         {{"runs", meta.clusterer.n_runs},
          {"max_iters", meta.clusterer.max_iters},
          {"tol", meta.clusterer.tol},
          {"init", to_string(meta.clusterer.init)}}},
    };

    j["grid"] = {
        {"m", report.grid.m()},
        {"eps_max", report.grid.eps_max()},
        {"values", report.grid.values},
        {"calibrated", meta.calibrated},
    };
    if (report.calibrated_eps_max >= 0.0) j["grid"]["calibrated_eps_max"] = report.calibrated_eps_max;

    // Every random draw is keyed off the master seed, a purpose tag, and the
    // loop indices below, so reruns and re-orderings reproduce exactly.
    j["seed_scheme"] = {
        {"master", report.params.seed},
        {"reference_fit", "mix(master, 2, K)"},
        {"between_noise", "mix(master, 3, eps_index, draw)"},
        {"between_fit", "mix(master, 4, K, eps_index, draw)"},
        {"within_reference_fit", "mix(master, 5, K, cluster, K')"},
        {"within_noise", "mix(master, 6, K, cluster, K', eps_index, draw)"},
        {"within_fit", "mix(master, 7, K, cluster, K', eps_index, draw)"},
    };

    j["selection"] = {
        {"k_hat_max", report.k_hat_max},
        {"k_hat_mean", report.k_hat_mean},
        {"k_hat", meta.aggregation == Aggregation::max ? report.k_hat_max : report.k_hat_mean},
        {"aggregate_max", report.aggregate_max},
        {"aggregate_mean", report.aggregate_mean},
    };

    json paths = json::array();
    for (const StadionPath& path : report.paths) {
        paths.push_back({{"k", path.k},
                         {"stab_b", path.stab_b},
                         {"stab_w", path.stab_w},
                         {"stadion", path.stadion}});
    }
    j["paths"] = paths;

    for (Aggregation agg : {Aggregation::max, Aggregation::mean}) {
        json rows = json::array();
        for (const TradeOffRow& r : trade_off_table(report, agg))
            rows.push_back(
                {{"k", r.k}, {"stab_b", r.stab_b}, {"stab_w", r.stab_w}, {"stadion", r.stadion}});
        j[agg == Aggregation::max ? "trade_off_max" : "trade_off_mean"] = rows;
    }

    json refs = json::array();
    for (const Partition& p : report.references) refs.push_back(p.labels);
    j["references"] = refs;

    json skipped = json::array();
    for (const SkippedOmega& s : report.skipped)
        skipped.push_back({{"k", s.k}, {"cluster", s.cluster}, {"k_prime", s.k_prime}});
    j["diagnostics"] = {
        {"skipped_omega", skipped},
        {"dropped_bootstrap_draws", report.dropped_bootstrap_draws},
        {"zero_variance_columns", meta.zero_variance_columns},
    };

    return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace stadion
