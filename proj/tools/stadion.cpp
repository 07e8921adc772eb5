#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stadion/artifacts.hpp"
#include "stadion/benchmark.hpp"
#include "stadion/csv.hpp"
#include "stadion/stability.hpp"
#include "stadion/synthetic.hpp"
#include "stadion/validity.hpp"

namespace fs = std::filesystem;
using namespace stadion;

namespace {

struct CommonOpts {
    std::string labels_col;  // "", "last", or a zero-based column index
    bool header = false;
    std::string delimiter = ",";
    bool raw = false;

    std::string algorithm = "kmeans";
    std::string variant = "standard";
    int k_max = 10;
    int d = 10;
    std::string omega = "2..10";
    std::string noise = "uniform";
    int grid_m = 21;
    std::string eps_max;  // empty: sqrt(p); "auto": calibrated; else a number
    std::string measure = "ari1";
    std::string agg = "max";
    std::uint64_t seed = 0;
    int runs = 35;
    int max_iters = 300;
    double tol = 1e-6;
    std::string init = "kmeans++";
    std::string out = "stadion_out";
    std::vector<std::string> emit = {"csv", "svg", "json"};
};

void add_input_opts(CLI::App* cmd, CommonOpts& o, const char* labels_default) {
    o.labels_col = labels_default;
    cmd->add_option("--labels-col", o.labels_col,
                    "class label column: zero-based index or 'last' (dropped from features)")
        ->capture_default_str();
    cmd->add_flag("--header", o.header, "first CSV row is a header");
    cmd->add_option("--delimiter", o.delimiter, "CSV field delimiter")->capture_default_str();
    cmd->add_flag("--raw", o.raw, "skip per-column standardization");
}

void add_model_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--algorithm", o.algorithm, "kmeans|ward")->capture_default_str();
    cmd->add_option("--variant", o.variant, "standard|extended (extended requires kmeans)")
        ->capture_default_str();
    cmd->add_option("--d", o.d, "perturbed copies per epsilon")->capture_default_str();
    cmd->add_option("--omega", o.omega, "within-stability cluster counts, 'a..b' or comma list")
        ->capture_default_str();
    cmd->add_option("--noise", o.noise, "uniform|gaussian|bootstrap")->capture_default_str();
    cmd->add_option("--grid-m", o.grid_m, "epsilon grid size (first point is always 0)")
        ->capture_default_str();
    cmd->add_option("--eps-max", o.eps_max,
                    "largest epsilon: a number, 'auto' (calibrated), default sqrt(p)");
    cmd->add_option("--measure", o.measure,
                    "partition agreement measure (ari1, ami, nvi, jacc, ...)")
        ->capture_default_str();
    cmd->add_option("--agg", o.agg, "path aggregation for selection: max|mean")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed; every random stream derives from it")
        ->capture_default_str();
    cmd->add_option("--runs", o.runs, "k-means restarts")->capture_default_str();
    cmd->add_option("--max-iters", o.max_iters, "k-means iteration cap")->capture_default_str();
    cmd->add_option("--tol", o.tol, "k-means convergence tolerance")->capture_default_str();
    cmd->add_option("--init", o.init, "k-means seeding: kmeans++|random")->capture_default_str();
}

void add_output_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--emit", o.emit, "artifact kinds: csv,svg,json")
        ->delimiter(',')
        ->capture_default_str();
}

std::vector<int> parse_omega(const std::string& s) {
    auto parse_int = [&](const std::string& t) {
        std::size_t used = 0;
        int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument("bad omega entry: " + t);
        return v;
    };
    std::vector<int> out;
    std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
        int a = parse_int(s.substr(0, dots));
        int b = parse_int(s.substr(dots + 2));
        if (a > b) throw std::invalid_argument("omega range is reversed: " + s);
        for (int k = a; k <= b; ++k) out.push_back(k);
    } else {
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t comma = s.find(',', pos);
            if (comma == std::string::npos) comma = s.size();
            out.push_back(parse_int(s.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    if (out.empty()) throw std::invalid_argument("omega is empty");
    for (int k : out)
        if (k < 1) throw std::invalid_argument("omega entries must be positive");
    return out;
}

char parse_delimiter(const std::string& s) {
    if (s == "\\t" || s == "tab") return '\t';
    if (s.size() != 1) throw std::invalid_argument("delimiter must be one character");
    return s[0];
}

LoadedCsv load_input(const std::string& path, const CommonOpts& o) {
    CsvOptions opts;
    opts.delimiter = parse_delimiter(o.delimiter);
    opts.has_header = o.header;
    if (o.labels_col.empty()) return load_csv(path, opts);
    if (o.labels_col == "last") {
        LoadedCsv probe = load_csv(path, opts);
        std::size_t total = probe.data.p();
        if (total < 2)
            throw DataError(path + ": need at least one feature column besides the labels");
        opts.label_column = total - 1;
        return load_csv(path, opts);
    }
    std::size_t used = 0;
    long idx = std::stol(o.labels_col, &used);
    if (used != o.labels_col.size() || idx < 0)
        throw std::invalid_argument("labels-col must be a non-negative index or 'last'");
    opts.label_column = static_cast<std::size_t>(idx);
    return load_csv(path, opts);
}

struct Prepared {
    ClustererConfig cfg;
    StabilityParams params;
    Aggregation agg = Aggregation::max;
    std::set<std::string> emit;
};

Prepared prepare(const CommonOpts& o) {
    Prepared p;
    p.cfg.algorithm = algorithm_from_string(o.algorithm);
    p.cfg.n_runs = o.runs;
    p.cfg.max_iters = o.max_iters;
    p.cfg.tol = o.tol;
    p.cfg.init = kmeans_init_from_string(o.init);
    p.cfg.seed = o.seed;
    p.params.d = o.d;
    p.params.omega = parse_omega(o.omega);
    p.params.measure = measure_from_string(o.measure);
    p.params.noise = noise_from_string(o.noise);
    p.params.variant = variant_from_string(o.variant);
    p.params.seed = o.seed;
    p.agg = aggregation_from_string(o.agg);
    if (o.d < 1) throw std::invalid_argument("d must be positive");
    if (o.grid_m < 2) throw std::invalid_argument("grid-m must be at least 2");
    if (o.emit.empty()) throw std::invalid_argument("emit list is empty");
    for (const std::string& e : o.emit) {
        if (e != "csv" && e != "svg" && e != "json")
            throw std::invalid_argument("unknown emit kind: " + e);
        p.emit.insert(e);
    }
    return p;
}

struct GridChoice {
    EpsilonGrid grid;
    bool calibrated = false;
};

GridChoice choose_grid(const CommonOpts& o, const Prepared& p, const Dataset& ds, int k_max) {
    GridChoice gc;
    std::size_t m = static_cast<std::size_t>(o.grid_m);
    if (o.eps_max.empty()) {
        gc.grid = default_grid(ds.p(), m);
    } else if (o.eps_max == "auto") {
        double hat = calibrate_eps_max(p.cfg, ds, k_max, p.params, m);
        gc.grid = default_grid(ds.p(), m, hat);
        gc.calibrated = true;
    } else {
        std::size_t used = 0;
        double v = std::stod(o.eps_max, &used);
        if (used != o.eps_max.size() || !(v > 0))
            throw std::invalid_argument("eps-max must be positive, 'auto', or omitted");
        gc.grid = default_grid(ds.p(), m, v);
    }
    return gc;
}

void emit_artifacts(const fs::path& dir, const SelectionReport& report, const RunMeta& meta,
                    const std::set<std::string>& emit, bool with_json) {
    if (emit.count("csv")) {
        write_file_atomic(dir / "paths.csv", paths_csv(report));
        std::printf("wrote %s\n", (dir / "paths.csv").c_str());
    }
    if (emit.count("svg")) {
        write_file_atomic(dir / "paths.svg", paths_svg(report, meta));
        std::printf("wrote %s\n", (dir / "paths.svg").c_str());
    }
    if (with_json && emit.count("json")) {
        write_file_atomic(dir / "report.json", report_json(report, meta));
        std::printf("wrote %s\n", (dir / "report.json").c_str());
    }
}

int run_select(const std::string& data_path, const CommonOpts& o, bool selection) {
    Prepared p = prepare(o);
    if (o.k_max < 1) throw std::invalid_argument("kmax must be positive");

    LoadedCsv loaded = load_input(data_path, o);
    Dataset ds = o.raw ? loaded.data : standardize(loaded.data);

    GridChoice gc = choose_grid(o, p, ds, o.k_max);
    SelectionReport report = select_k(p.cfg, ds, o.k_max, gc.grid, p.params);
    if (gc.calibrated) report.calibrated_eps_max = gc.grid.eps_max();

    RunMeta meta;
    meta.data_source = data_path;
    meta.clusterer = p.cfg;
    meta.aggregation = p.agg;
    meta.calibrated = gc.calibrated;
    meta.zero_variance_columns = ds.zero_variance_columns;

    emit_artifacts(fs::path(o.out), report, meta, p.emit, selection);
    if (selection) {
        int k_hat = p.agg == Aggregation::max ? report.k_hat_max : report.k_hat_mean;
        std::printf("selected k = %d (aggregation=%s; k_hat_max=%d, k_hat_mean=%d)\n", k_hat,
                    to_string(p.agg), report.k_hat_max, report.k_hat_mean);
        if (loaded.labels) {
            double ari = compare(Measure::ari1, *loaded.labels,
                                 report.references[static_cast<std::size_t>(k_hat) - 1]);
            std::printf("ground truth: k_star=%d, ari(reference@k_hat)=%.4f\n", loaded.labels->k,
                        ari);
        }
    }
    return 0;
}

std::string dataset_stem(const std::string& path, std::map<std::string, int>& seen) {
    std::string stem = fs::path(path).stem().string();
    if (stem.empty()) stem = "dataset";
    int n = ++seen[stem];
    if (n > 1) stem += "_" + std::to_string(n);
    return stem;
}

nlohmann::json methods_json(const BenchmarkDatasetResult& r) {
    nlohmann::json methods = nlohmann::json::array();
    for (const MethodOutcome& m : r.methods) {
        nlohmann::json jm = {{"method", m.method}, {"k_hat", m.k_hat}, {"failed", m.failed}};
        if (m.failed) {
            jm["error"] = m.error;
        } else {
            jm["ari"] = m.ari;
        }
        methods.push_back(jm);
    }
    return {{"name", r.name}, {"k_star", r.k_star}, {"k_max", r.k_max}, {"methods", methods}};
}

int run_benchmark(const std::vector<std::string>& data_paths, const CommonOpts& o, int k_max_flag) {
    Prepared p = prepare(o);
    if (o.labels_col.empty())
        throw std::invalid_argument("benchmark needs --labels-col (ground truth)");

    std::map<std::string, int> seen;
    std::vector<BenchmarkDatasetResult> results;
    for (const std::string& path : data_paths) {
        std::string stem = dataset_stem(path, seen);
        LoadedCsv loaded = load_input(path, o);
        if (!loaded.labels) throw DataError(path + ": no label column resolved");
        Dataset ds = o.raw ? loaded.data : standardize(loaded.data);
        int k_max = k_max_flag > 0 ? k_max_flag : default_k_max(loaded.labels->k);
        GridChoice gc = choose_grid(o, p, ds, k_max);

        BenchmarkDatasetResult r =
            benchmark_dataset(stem, ds, *loaded.labels, p.cfg, k_max, p.params, gc.grid);
        if (gc.calibrated) r.report.calibrated_eps_max = gc.grid.eps_max();

        fs::path dir = fs::path(o.out) / stem;
        RunMeta meta;
        meta.data_source = path;
        meta.clusterer = p.cfg;
        meta.aggregation = p.agg;
        meta.calibrated = gc.calibrated;
        meta.zero_variance_columns = ds.zero_variance_columns;
        emit_artifacts(dir, r.report, meta, p.emit, true);
        write_file_atomic(dir / "methods.json", methods_json(r).dump(2) + "\n");
        std::printf("wrote %s\n", (dir / "methods.json").c_str());

        std::printf("%s: k_star=%d", stem.c_str(), r.k_star);
        for (const MethodOutcome& m : r.methods) {
            if (m.failed)
                std::printf("  %s=FAIL", m.method.c_str());
            else
                std::printf("  %s=%d", m.method.c_str(), m.k_hat);
        }
        std::printf("\n");
        results.push_back(std::move(r));
    }

    BenchmarkSummary summary = summarize(results);
    nlohmann::json js;
    js["datasets"] = nlohmann::json::array();
    for (const BenchmarkDatasetResult& r : results) js["datasets"].push_back(r.name);
    js["methods"] = summary.methods;
    js["wins"] = summary.wins;
    js["mean_rank"] = summary.mean_rank;
    write_file_atomic(fs::path(o.out) / "summary.json", js.dump(2) + "\n");

    std::string csv = "method,wins,mean_rank\n";
    char buf[64];
    for (const std::string& m : summary.methods) {
        std::snprintf(buf, sizeof buf, "%.17g", summary.mean_rank.at(m));
        csv += m + "," + std::to_string(summary.wins.at(m)) + "," + buf + "\n";
    }
    write_file_atomic(fs::path(o.out) / "summary.csv", csv);

    std::printf("\n%-20s %6s %10s\n", "method", "wins", "mean_rank");
    for (const std::string& m : summary.methods)
        std::printf("%-20s %6d %10.3f\n", m.c_str(), summary.wins.at(m), summary.mean_rank.at(m));
    std::printf("wrote %s and summary.csv\n", (fs::path(o.out) / "summary.json").c_str());
    return 0;
}

std::vector<double> parse_reals(const std::string& s, char sep) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad number: " + tok);
        out.push_back(v);
        pos = next + 1;
    }
    return out;
}

struct GenOpts {
    std::string kind = "blobs";
    int n = 300;
    int p = 2;
    int k = 3;
    double std_dev = 1.0;
    double separation = 6.0;
    double radius = 1.0;
    double shell = 0.0;
    double offset = 1.0;
    std::string centers;  // "x:y;x:y"
    std::string stds;     // "s1;s2"
    std::string counts;   // "c1;c2"
    std::uint64_t seed = 0;
    std::string out;
    bool header = false;
    bool no_labels = false;
};

int run_gen(const GenOpts& g) {
    GeneratorSpec spec;
    spec.kind = gen_kind_from_string(g.kind);
    spec.n = g.n;
    spec.p = g.p;
    spec.k = g.k;
    spec.std_dev = g.std_dev;
    spec.separation = g.separation;
    spec.radius = g.radius;
    spec.shell = g.shell;
    spec.offset = g.offset;
    if (!g.centers.empty()) {
        std::size_t pos = 0;
        while (pos <= g.centers.size()) {
            std::size_t next = g.centers.find(';', pos);
            if (next == std::string::npos) next = g.centers.size();
            spec.blobs.centers.push_back(parse_reals(g.centers.substr(pos, next - pos), ':'));
            pos = next + 1;
        }
    }
    if (!g.stds.empty())
        for (double v : parse_reals(g.stds, ';')) spec.blobs.stds.push_back(v);
    if (!g.counts.empty())
        for (double v : parse_reals(g.counts, ';')) spec.blobs.counts.push_back(static_cast<int>(v));

    LabeledDataset data = generate(spec, g.seed);

    std::vector<std::string> header;
    if (g.header) {
        for (std::size_t j = 0; j < data.data.p(); ++j) header.push_back("f" + std::to_string(j));
    }
    fs::path out = g.out;
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    write_csv(out, data.data, header,
              g.no_labels ? std::nullopt : std::optional<Partition>(data.labels));
    std::printf("wrote %s (n=%zu, p=%zu, k=%d)\n", out.c_str(), data.data.n(), data.data.p(),
                data.labels.k);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stability-difference model selection for clustering"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file (sections per subcommand)");

    CommonOpts sel_opts;
    std::string sel_data;
    CLI::App* sel = app.add_subcommand("select", "pick the number of clusters for a dataset");
    sel->add_option("--data", sel_data, "input CSV")->required();
    add_input_opts(sel, sel_opts, "");
    add_model_opts(sel, sel_opts);
    sel->add_option("--kmax", sel_opts.k_max, "largest candidate cluster count")
        ->capture_default_str();
    add_output_opts(sel, sel_opts);

    CommonOpts path_opts;
    std::string path_data;
    CLI::App* paths = app.add_subcommand("paths", "write stability paths without selecting");
    paths->add_option("--data", path_data, "input CSV")->required();
    add_input_opts(paths, path_opts, "");
    add_model_opts(paths, path_opts);
    paths->add_option("--kmax", path_opts.k_max, "largest candidate cluster count")
        ->capture_default_str();
    add_output_opts(paths, path_opts);

    CommonOpts bench_opts;
    std::vector<std::string> bench_data;
    int bench_kmax = 0;
    CLI::App* bench = app.add_subcommand("benchmark", "compare selection methods on labeled data");
    bench->add_option("--data", bench_data, "labeled CSVs")->required();
    add_input_opts(bench, bench_opts, "last");
    add_model_opts(bench, bench_opts);
    bench->add_option("--kmax", bench_kmax,
                      "candidate ceiling (0: per dataset, k_star+20 rounded down to tens)");
    add_output_opts(bench, bench_opts);

    GenOpts gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic labeled dataset");
    gen->add_option("--kind", gen_opts.kind, "blobs|cube|sphere|correlated|letters")
        ->capture_default_str();
    gen->add_option("--n", gen_opts.n)->capture_default_str();
    gen->add_option("--p", gen_opts.p)->capture_default_str();
    gen->add_option("--k", gen_opts.k)->capture_default_str();
    gen->add_option("--std", gen_opts.std_dev, "blob standard deviation")->capture_default_str();
    gen->add_option("--separation", gen_opts.separation, "min center distance in std units")
        ->capture_default_str();
    gen->add_option("--radius", gen_opts.radius)->capture_default_str();
    gen->add_option("--shell", gen_opts.shell)->capture_default_str();
    gen->add_option("--offset", gen_opts.offset)->capture_default_str();
    gen->add_option("--centers", gen_opts.centers, "explicit blob centers, 'x:y;x:y'");
    gen->add_option("--stds", gen_opts.stds, "explicit blob stds, 's1;s2'");
    gen->add_option("--counts", gen_opts.counts, "explicit blob sizes, 'c1;c2'");
    gen->add_option("--seed", gen_opts.seed)->capture_default_str();
    gen->add_option("--out", gen_opts.out, "output CSV")->required();
    gen->add_flag("--header", gen_opts.header, "write column names");
    gen->add_flag("--no-labels", gen_opts.no_labels, "omit the label column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::fprintf(stderr, "config error: invalid command line\n");
        return 2;
    }

    try {
        if (sel->parsed()) return run_select(sel_data, sel_opts, true);
        if (paths->parsed()) return run_select(path_data, path_opts, false);
        if (bench->parsed()) return run_benchmark(bench_data, bench_opts, bench_kmax);
        if (gen->parsed()) return run_gen(gen_opts);
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 4;
    }
    return 0;
}
