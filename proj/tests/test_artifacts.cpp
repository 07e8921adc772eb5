#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "stadion/artifacts.hpp"
#include "stadion/benchmark.hpp"
#include "stadion/synthetic.hpp"

using namespace stadion;
namespace fs = std::filesystem;

namespace {

LabeledDataset three_blobs(std::uint64_t seed, int n = 90, double sep = 40.0) {
    GeneratorSpec spec;
    spec.kind = GenKind::gaussian_blobs;
    spec.n = n;
    spec.p = 2;
    spec.blobs.centers = {{0.0, 0.0}, {sep, 0.0}, {0.0, sep}};
    spec.blobs.stds = {1.0, 1.0, 1.0};
    spec.blobs.counts = {n / 3, n / 3, n - 2 * (n / 3)};
    return generate(spec, seed);
}

SelectionReport small_report(int k_max = 4) {
    const Dataset x = standardize(three_blobs(3).data);
    ClustererConfig cfg;
    cfg.seed = 3;
    cfg.n_runs = 8;
    StabilityParams params;
    params.d = 4;
    params.omega = {2, 3};
    params.seed = 3;
    params.threads = 1;
    return select_k(cfg, x, k_max, make_grid({0.0, 0.3, 0.6, 0.9}), params);
}

RunMeta meta_for(const SelectionReport&) {
    RunMeta meta;
    meta.data_source = "synthetic:blobs";
    meta.clusterer.seed = 3;
    meta.clusterer.n_runs = 8;
    return meta;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    return cells;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++count;
    return count;
}

}  // namespace

TEST_CASE("paths csv is a long table whose values reload exactly") {
    const SelectionReport report = small_report();
    const std::string csv = paths_csv(report);
    const auto lines = split_lines(csv);

    REQUIRE(lines.size() == 1 + report.paths.size() * report.grid.m());
    CHECK(lines[0] == "k,epsilon,stab_b,stab_w,stadion");

    std::size_t row = 1;
    for (const StadionPath& path : report.paths) {
        for (std::size_t e = 0; e < report.grid.m(); ++e, ++row) {
            const auto cells = split_csv(lines[row]);
            REQUIRE(cells.size() == 5);
            CHECK(std::stoi(cells[0]) == path.k);
            CHECK(std::strtod(cells[1].c_str(), nullptr) == report.grid.values[e]);
            CHECK(std::strtod(cells[2].c_str(), nullptr) == path.stab_b[e]);
            CHECK(std::strtod(cells[3].c_str(), nullptr) == path.stab_w[e]);
            CHECK(std::strtod(cells[4].c_str(), nullptr) == path.stadion[e]);
        }
    }
}

TEST_CASE("report json carries config, grid, selection, paths and provenance") {
    const SelectionReport report = small_report();
    const RunMeta meta = meta_for(report);
    const std::string text = report_json(report, meta);

    const auto j = nlohmann::json::parse(text);
    for (const char* key : {"config", "grid", "seed_scheme", "selection", "paths", "references",
                            "trade_off_max", "trade_off_mean", "diagnostics"})
        CHECK(j.contains(key));

    CHECK(j["config"]["data"] == "synthetic:blobs");
    CHECK(j["config"]["algorithm"] == "kmeans");
    CHECK(j["config"]["measure"] == "ari1");
    CHECK(j["config"]["k_max"] == report.k_max);
    CHECK(j["grid"]["m"] == report.grid.m());
    CHECK(j["grid"]["values"].size() == report.grid.m());
    CHECK(j["grid"]["calibrated"] == false);
    CHECK(j["selection"]["k_hat_max"] == report.k_hat_max);
    CHECK(j["selection"]["k_hat_mean"] == report.k_hat_mean);
    CHECK(j["selection"]["k_hat"] == report.k_hat_max);
    CHECK(j["paths"].size() == report.paths.size());
    CHECK(j["paths"][0]["k"] == 1);
    CHECK(j["paths"][0]["stab_b"].size() == report.grid.m());
    CHECK(j["references"].size() == report.paths.size());
    CHECK(j["references"][2].size() == 90);
    CHECK(j["seed_scheme"]["master"] == 3);
    CHECK(j["diagnostics"]["dropped_bootstrap_draws"] == report.dropped_bootstrap_draws);

    // Deterministic serialization: same inputs, same bytes.
    CHECK(report_json(report, meta) == text);
}

TEST_CASE("svg draws one polyline per K per stability panel plus the trade-off") {
    const SelectionReport report = small_report();
    const std::string svg = paths_svg(report, meta_for(report));

    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "<polyline") == 3 * report.paths.size() + 3);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    // Every opened tag family is closed.
    CHECK(count_occurrences(svg, "<text") == count_occurrences(svg, "</text>"));
    CHECK(count_occurrences(svg, "<g") == count_occurrences(svg, "</g>"));
}

TEST_CASE("atomic writes create directories, overwrite, and leave no temp files") {
    const fs::path dir = fs::temp_directory_path() / "stadion_artifacts_test";
    fs::remove_all(dir);
    const fs::path target = dir / "nested" / "out.txt";

    write_file_atomic(target, "first");
    write_file_atomic(target, "second");

    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");

    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(target.parent_path())) ++entries;
    CHECK(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("default candidate ceiling rounds k_star + 20 down to tens") {
    CHECK(default_k_max(3) == 20);
    CHECK(default_k_max(10) == 30);
    CHECK(default_k_max(15) == 30);
    CHECK(default_k_max(20) == 40);
    CHECK_THROWS_AS(default_k_max(0), std::invalid_argument);
}

TEST_CASE("benchmark method list is the two stadion rules plus the seven indices") {
    const auto& methods = benchmark_methods();
    REQUIRE(methods.size() == 9);
    CHECK(methods[0] == "stadion_max");
    CHECK(methods[1] == "stadion_mean");
    for (std::size_t i = 2; i < methods.size(); ++i)
        CHECK_NOTHROW(index_from_string(methods[i]));
}

TEST_CASE("midpoint ranks average ties and put failures last") {
    const double nan = std::numeric_limits<double>::quiet_NaN();

    CHECK(midpoint_ranks({3.0, 1.0, 2.0}) == std::vector<double>{1.0, 3.0, 2.0});
    CHECK(midpoint_ranks({5.0, 5.0, 1.0}) == std::vector<double>{1.5, 1.5, 3.0});
    CHECK(midpoint_ranks({2.0, 2.0, 2.0}) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(midpoint_ranks({nan, 2.0, nan, 5.0}) == std::vector<double>{3.5, 2.0, 3.5, 1.0});
    CHECK(midpoint_ranks({nan, nan}) == std::vector<double>{1.5, 1.5});
    CHECK(midpoint_ranks({}).empty());
}

TEST_CASE("benchmark_dataset runs every method on the same reference partitions") {
    const LabeledDataset g = three_blobs(11);
    const Dataset x = standardize(g.data);
    ClustererConfig cfg;
    cfg.seed = 11;
    cfg.n_runs = 8;
    StabilityParams params;
    params.d = 4;
    params.omega = {2, 3};
    params.seed = 11;
    params.threads = 1;

    const auto result = benchmark_dataset("blobs", x, g.labels, cfg, 5, params,
                                          make_grid({0.0, 0.3, 0.6}));

    CHECK(result.name == "blobs");
    CHECK(result.k_star == 3);
    CHECK(result.k_max == 5);
    REQUIRE(result.methods.size() == benchmark_methods().size());
    for (std::size_t i = 0; i < result.methods.size(); ++i)
        CHECK(result.methods[i].method == benchmark_methods()[i]);

    for (const MethodOutcome& m : result.methods) {
        CAPTURE(m.method);
        CHECK_FALSE(m.failed);
        CHECK(m.error.empty());
        if (m.method == "stadion_max" || m.method == "stadion_mean" || m.method == "silhouette" ||
            m.method == "calinski_harabasz") {
            CHECK(m.k_hat == 3);
            CHECK(m.ari == doctest::Approx(1.0));
        }
    }
    CHECK(result.report.k_hat_max == 3);

    CHECK_THROWS_AS(benchmark_dataset("bad", x, Partition{}, cfg, 5, params,
                                      make_grid({0.0, 0.3})),
                    std::invalid_argument);
}

TEST_CASE("summarize counts exact recoveries and averages the ARI ranks") {
    const auto& names = benchmark_methods();
    auto make_result = [&](int k_star, const std::vector<int>& k_hats,
                           const std::vector<double>& aris) {
        BenchmarkDatasetResult r;
        r.name = "d";
        r.k_star = k_star;
        r.k_max = 10;
        for (std::size_t i = 0; i < names.size(); ++i) {
            MethodOutcome m;
            m.method = names[i];
            m.k_hat = k_hats[i];
            m.ari = aris[i];
            if (std::isnan(aris[i])) {
                m.failed = true;
                m.error = "synthetic failure";
            }
            r.methods.push_back(m);
        }
        return r;
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<BenchmarkDatasetResult> results;
    // Dataset 1: method 0 wins alone with top ARI; the last method fails.
    results.push_back(make_result(3, {3, 2, 2, 2, 2, 2, 2, 2, 2},
                                  {1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, nan}));
    // Dataset 2: everyone recovers k_star and ties on ARI.
    results.push_back(make_result(4, {4, 4, 4, 4, 4, 4, 4, 4, 4},
                                  {0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9}));

    const BenchmarkSummary summary = summarize(results);
    CHECK(summary.datasets == 2);
    CHECK(summary.methods == names);
    CHECK(summary.wins.at("stadion_max") == 2);
    CHECK(summary.wins.at("stadion_mean") == 1);
    CHECK(summary.wins.at(names.back()) == 1);

    // Dataset 1 ranks: 1 for the winner, midpoint 5 for the seven tied, 9 for
    // the failure; dataset 2: all tie at 5.
    CHECK(summary.mean_rank.at("stadion_max") == doctest::Approx(3.0));
    CHECK(summary.mean_rank.at("stadion_mean") == doctest::Approx(5.0));
    CHECK(summary.mean_rank.at(names.back()) == doctest::Approx(7.0));

    CHECK(summarize({}).datasets == 0);

    auto broken = results;
    broken[0].methods.pop_back();
    CHECK_THROWS_AS(summarize(broken), std::invalid_argument);
}
