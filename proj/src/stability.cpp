#include "stadion/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stadion/parallel.hpp"
#include "stadion/rng.hpp"

namespace stadion {

const char* to_string(Variant v) { return v == Variant::standard ? "standard" : "extended"; }

Variant variant_from_string(const std::string& name) {
    if (name == "standard") return Variant::standard;
    if (name == "extended") return Variant::extended;
    throw std::invalid_argument("unknown variant: " + name);
}

const char* to_string(Aggregation a) { return a == Aggregation::max ? "max" : "mean"; }

Aggregation aggregation_from_string(const std::string& name) {
    if (name == "max") return Aggregation::max;
    if (name == "mean") return Aggregation::mean;
    throw std::invalid_argument("unknown aggregation: " + name);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const StabilityParams& p) {
    if (p.d < 1) throw std::invalid_argument("stability: D must be at least 1");
    if (p.omega.empty()) throw std::invalid_argument("stability: Omega must be non-empty");
    for (int k : p.omega)
        if (k < 2) throw std::invalid_argument("stability: Omega entries must be at least 2");
}

Partition restrict_partition(const Partition& ref, const std::vector<std::size_t>& idx) {
    std::vector<int> labels(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = ref.labels[idx[i]];
    return make_partition(std::move(labels), ref.k);
}

// Identity value of a measure: normalized measures score their perfect value
// against themselves; raw MI scores the partition entropy.
double self_agreement(Measure m, const Partition& p) {
    if (m != Measure::mi) return perfect_score(m);
    return compare(m, p, p);
}

// One perturb-then-label evaluation of a reference model. Returns NaN for
// bootstrap draws whose resample has too few distinct rows to re-fit; such
// draws are dropped from the means (bootstrap is a demonstration mode).
double between_cell(const ClustererConfig& cfg, const Dataset& x, const FittedModel& ref, int k,
                    Measure measure, NoiseKind kind, Variant variant, double eps,
                    std::uint64_t noise_seed, std::uint64_t fit_seed) {
    if (kind != NoiseKind::bootstrap && eps == 0.0) return self_agreement(measure, ref.partition);
    const Partition* ref_part = &ref.partition;
    Partition restricted;
    Dataset xd;
    if (kind == NoiseKind::bootstrap) {
        const std::vector<std::size_t> idx = bootstrap_indices(x.n(), noise_seed);
        xd = x.take_rows(idx);
        restricted = restrict_partition(ref.partition, idx);
        ref_part = &restricted;
    } else {
        xd = perturb(x, NoiseSpec{kind, eps}, noise_seed);
    }
    Partition labels;
    if (variant == Variant::extended) {
        labels = extend(ref, xd);
    } else {
        if (kind == NoiseKind::bootstrap &&
            count_distinct_rows(xd.x, static_cast<std::size_t>(k)) < static_cast<std::size_t>(k))
            return kNaN;
        ClustererConfig fc = cfg;
        fc.seed = fit_seed;
        labels = fit(fc, xd, k).partition;
    }
    return compare(measure, *ref_part, labels);
}

// Mean over valid entries; NaN when none are valid.
double nan_mean(const double* v, std::size_t n, std::size_t* dropped) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(v[i])) {
            if (dropped) ++*dropped;
        } else {
            sum += v[i];
            ++count;
        }
    }
    return count == 0 ? kNaN : sum / static_cast<double>(count);
}

std::uint64_t eps_token(double eps) { return std::bit_cast<std::uint64_t>(eps); }

}  // namespace

struct StadionEvaluator::Impl {
    ClustererConfig cfg;
    Dataset x;
    int k_max = 0;
    StabilityParams params;
    std::size_t threads = 1;

    std::vector<FittedModel> refs;  // [K-1]

    struct Block {
        int K = 0;
        int cluster = 0;
        Dataset rows;
        double size = 0.0;  // cluster row count; weights divide by N once so
                            // an all-perfect column sums to exactly N/N = 1
        std::vector<int> retained;            // Omega entries kept for this cluster
        std::vector<FittedModel> submodels;   // parallel to retained
        std::size_t cell_offset = 0;          // into the within-cell array
    };
    std::vector<Block> blocks;
    std::vector<std::size_t> blocks_of_k;  // first block index per K, size k_max+1
    std::vector<SkippedOmega> skipped;
    std::size_t within_cells = 0;
    mutable std::size_t dropped = 0;

    void fit_references() {
        refs.resize(static_cast<std::size_t>(k_max));
        if (cfg.algorithm == Algorithm::ward) {
            const std::vector<WardMerge> merges = ward_merge_sequence(x.x, cfg.ward_cap);
            const std::size_t distinct =
                count_distinct_rows(x.x, static_cast<std::size_t>(k_max));
            for (int k = 1; k <= k_max; ++k) {
                if (static_cast<std::size_t>(k) > distinct)
                    throw std::invalid_argument("fit: k exceeds the number of distinct points");
                FittedModel m;
                m.algorithm = Algorithm::ward;
                m.merges = merges;
                m.partition = cut_dendrogram(merges, x.n(), k);
                m.raw_input_warning = x.scaling == Scaling::raw;
                refs[static_cast<std::size_t>(k - 1)] = std::move(m);
            }
        } else {
            parallel_for(static_cast<std::size_t>(k_max), threads, [&](std::size_t i) {
                ClustererConfig fc = cfg;
                fc.seed = derive_seed(params.seed, SeedDomain::reference_fit, {i + 1});
                refs[i] = fit(fc, x, static_cast<int>(i) + 1);
            });
        }
    }

    void build_blocks() {
        blocks_of_k.assign(static_cast<std::size_t>(k_max) + 1, 0);
        for (int K = 1; K <= k_max; ++K) {
            blocks_of_k[static_cast<std::size_t>(K - 1)] = blocks.size();
            const Partition& ref = refs[static_cast<std::size_t>(K - 1)].partition;
            std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(ref.k));
            for (std::size_t i = 0; i < ref.n(); ++i)
                members[static_cast<std::size_t>(ref.labels[i])].push_back(i);
            for (int c = 0; c < ref.k; ++c) {
                Block b;
                b.K = K;
                b.cluster = c;
                b.rows = x.take_rows(members[static_cast<std::size_t>(c)]);
                b.size = static_cast<double>(members[static_cast<std::size_t>(c)].size());
                const std::size_t max_k = *std::max_element(params.omega.begin(), params.omega.end());
                const std::size_t distinct = count_distinct_rows(b.rows.x, max_k);
                for (int kp : params.omega) {
                    if (static_cast<std::size_t>(kp) <= distinct)
                        b.retained.push_back(kp);
                    else
                        skipped.push_back(SkippedOmega{K, c, kp});
                }
                b.submodels.resize(b.retained.size());
                blocks.push_back(std::move(b));
            }
        }
        blocks_of_k[static_cast<std::size_t>(k_max)] = blocks.size();

        // Sub-reference fits, parallel over (block, retained-entry) pairs.
        std::vector<std::pair<std::size_t, std::size_t>> jobs;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t r = 0; r < blocks[b].retained.size(); ++r) jobs.emplace_back(b, r);
        parallel_for(jobs.size(), threads, [&](std::size_t j) {
            Block& b = blocks[jobs[j].first];
            const int kp = b.retained[jobs[j].second];
            ClustererConfig fc = cfg;
            fc.seed = derive_seed(params.seed, SeedDomain::within_ref,
                                  {static_cast<std::uint64_t>(b.K),
                                   static_cast<std::uint64_t>(b.cluster),
                                   static_cast<std::uint64_t>(kp)});
            b.submodels[jobs[j].second] = fit(fc, b.rows, kp);
        });

        std::size_t offset = 0;
        for (Block& b : blocks) {
            b.cell_offset = offset;
            offset += b.retained.size();
        }
        within_cells = offset;
    }
};

StadionEvaluator::StadionEvaluator(const ClustererConfig& cfg, const Dataset& x, int k_max,
                                   const StabilityParams& params)
    : impl_(std::make_unique<Impl>()) {
    validate(params);
    if (k_max < 1) throw std::invalid_argument("stability: k_max must be at least 1");
    if (x.n() == 0) throw std::invalid_argument("stability: empty dataset");
    if (params.variant == Variant::extended && cfg.algorithm != Algorithm::kmeans)
        throw std::invalid_argument("stability: extended variant requires an extension operator");
    impl_->cfg = cfg;
    impl_->x = x;
    impl_->k_max = k_max;
    impl_->params = params;
    impl_->threads = params.threads == 0 ? default_thread_count() : params.threads;
    impl_->fit_references();
    impl_->build_blocks();
}

StadionEvaluator::~StadionEvaluator() = default;

const FittedModel& StadionEvaluator::reference_model(int k) const {
    if (k < 1 || k > impl_->k_max) throw std::invalid_argument("reference_model: k out of range");
    return impl_->refs[static_cast<std::size_t>(k - 1)];
}

std::vector<Partition> StadionEvaluator::reference_partitions() const {
    std::vector<Partition> out;
    out.reserve(impl_->refs.size());
    for (const FittedModel& m : impl_->refs) out.push_back(m.partition);
    return out;
}

const std::vector<SkippedOmega>& StadionEvaluator::skipped() const { return impl_->skipped; }

std::size_t StadionEvaluator::dropped_bootstrap_draws() const { return impl_->dropped; }

std::vector<StadionPath> StadionEvaluator::evaluate(const EpsilonGrid& grid) const {
    const Impl& im = *impl_;
    const std::size_t M = grid.m();
    const auto D = static_cast<std::size_t>(im.params.d);
    const auto K_max = static_cast<std::size_t>(im.k_max);
    const Measure measure = im.params.measure;
    const NoiseKind kind = im.params.noise;
    const Variant variant = im.params.variant;
    const bool skip_zero = kind != NoiseKind::bootstrap;  // analytic at eps = 0

    // Between cells, indexed [K-1][i][d]; one task per (i, d) so ward can
    // agglomerate each perturbed set once and cut it for every K.
    std::vector<double> bcell(K_max * M * D, kNaN);
    parallel_for(M * D, im.threads, [&](std::size_t t) {
        const std::size_t i = t / D, d = t % D;
        if (skip_zero && i == 0) return;
        const double eps = grid.values[i];
        const std::uint64_t noise_seed =
            derive_seed(im.params.seed, SeedDomain::between_noise, {i, d});

        Dataset xd;
        std::vector<std::size_t> boot_idx;
        if (kind == NoiseKind::bootstrap) {
            boot_idx = bootstrap_indices(im.x.n(), noise_seed);
            xd = im.x.take_rows(boot_idx);
        } else {
            xd = perturb(im.x, NoiseSpec{kind, eps}, noise_seed);
        }

        std::vector<WardMerge> merges;
        std::size_t ward_distinct = 0;
        if (variant == Variant::standard && im.cfg.algorithm == Algorithm::ward) {
            merges = ward_merge_sequence(xd.x, im.cfg.ward_cap);
            ward_distinct = count_distinct_rows(xd.x, K_max);
        }

        for (std::size_t K = 1; K <= K_max; ++K) {
            const FittedModel& ref = im.refs[K - 1];
            double value;
            if (variant == Variant::extended) {
                const Partition labels = extend(ref, xd);
                value = kind == NoiseKind::bootstrap
                            ? compare(measure, restrict_partition(ref.partition, boot_idx), labels)
                            : compare(measure, ref.partition, labels);
            } else if (im.cfg.algorithm == Algorithm::ward) {
                if (K > ward_distinct) {
                    value = kNaN;
                } else {
                    const Partition labels = cut_dendrogram(merges, xd.n(), static_cast<int>(K));
                    value = kind == NoiseKind::bootstrap
                                ? compare(measure, restrict_partition(ref.partition, boot_idx),
                                          labels)
                                : compare(measure, ref.partition, labels);
                }
            } else {
                const std::uint64_t fit_seed =
                    derive_seed(im.params.seed, SeedDomain::between_fit, {K, i, d});
                value = between_cell(im.cfg, im.x, ref, static_cast<int>(K), measure, kind,
                                     variant, eps, noise_seed, fit_seed);
            }
            bcell[(K - 1) * M * D + i * D + d] = value;
        }
    });

    // Within cells, indexed [block.cell_offset + r][i][d].
    std::vector<double> wcell(im.within_cells * M * D, kNaN);
    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (block, retained index)
    for (std::size_t b = 0; b < im.blocks.size(); ++b)
        for (std::size_t r = 0; r < im.blocks[b].retained.size(); ++r) jobs.emplace_back(b, r);
    parallel_for(jobs.size() * M, im.threads, [&](std::size_t t) {
        const std::size_t j = t / M, i = t % M;
        if (skip_zero && i == 0) return;
        const Impl::Block& b = im.blocks[jobs[j].first];
        const std::size_t r = jobs[j].second;
        const auto kp = static_cast<std::uint64_t>(b.retained[r]);
        const double eps = grid.values[i];
        const std::uint64_t base[3] = {static_cast<std::uint64_t>(b.K),
                                       static_cast<std::uint64_t>(b.cluster), kp};
        for (std::size_t d = 0; d < D; ++d) {
            const std::uint64_t noise_seed = derive_seed(
                im.params.seed, SeedDomain::within_noise, {base[0], base[1], base[2], i, d});
            const std::uint64_t fit_seed = derive_seed(
                im.params.seed, SeedDomain::within_fit, {base[0], base[1], base[2], i, d});
            wcell[(b.cell_offset + r) * M * D + i * D + d] =
                between_cell(im.cfg, b.rows, b.submodels[r], static_cast<int>(kp), measure, kind,
                             variant, eps, noise_seed, fit_seed);
        }
    });

    // Serial reduction in a fixed order makes results independent of scheduling.
    im.dropped = 0;
    const double perfect = perfect_score(measure);
    std::vector<StadionPath> paths(K_max);
    for (std::size_t K = 1; K <= K_max; ++K) {
        StadionPath& path = paths[K - 1];
        path.k = static_cast<int>(K);
        path.stab_b.resize(M);
        path.stab_w.resize(M);
        path.stadion.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            double b_val;
            if (skip_zero && i == 0) {
                b_val = self_agreement(measure, im.refs[K - 1].partition);
            } else {
                b_val = nan_mean(&bcell[(K - 1) * M * D + i * D], D, &im.dropped);
                if (std::isnan(b_val)) b_val = perfect;
            }

            double w_val = 0.0;
            for (std::size_t bi = im.blocks_of_k[K - 1]; bi < im.blocks_of_k[K]; ++bi) {
                const Impl::Block& blk = im.blocks[bi];
                double contrib;
                if (blk.retained.empty()) {
                    contrib = perfect;  // no sub-partition can move: trivially stable
                } else if (skip_zero && i == 0) {
                    contrib = 0.0;
                    for (const FittedModel& sub : blk.submodels)
                        contrib += self_agreement(measure, sub.partition);
                    contrib /= static_cast<double>(blk.submodels.size());
                } else {
                    double sum = 0.0;
                    std::size_t count = 0;
                    for (std::size_t r = 0; r < blk.retained.size(); ++r) {
                        const double v = nan_mean(
                            &wcell[(blk.cell_offset + r) * M * D + i * D], D, &im.dropped);
                        if (!std::isnan(v)) {
                            sum += v;
                            ++count;
                        }
                    }
                    contrib = count == 0 ? perfect : sum / static_cast<double>(count);
                }
                w_val += blk.size * contrib;
            }
            w_val /= static_cast<double>(im.x.n());
            path.stab_b[i] = b_val;
            path.stab_w[i] = w_val;
            path.stadion[i] = b_val - w_val;
        }
    }
    return paths;
}

double stab_between(const ClustererConfig& cfg, const Dataset& x, const FittedModel& ref,
                    double eps, const StabilityParams& params) {
    validate(params);
    if (eps < 0.0) throw std::invalid_argument("stability: negative epsilon");
    if (params.variant == Variant::extended && ref.algorithm != Algorithm::kmeans)
        throw std::invalid_argument("stability: extended variant requires an extension operator");
    const auto K = static_cast<std::uint64_t>(ref.partition.k);
    const std::uint64_t tok = eps_token(eps);
    std::vector<double> cells(static_cast<std::size_t>(params.d));
    for (std::size_t d = 0; d < cells.size(); ++d) {
        cells[d] = between_cell(
            cfg, x, ref, ref.partition.k, params.measure, params.noise, params.variant, eps,
            derive_seed(params.seed, SeedDomain::between_noise, {tok, d}),
            derive_seed(params.seed, SeedDomain::between_fit, {K, tok, d}));
    }
    const double v = nan_mean(cells.data(), cells.size(), nullptr);
    return std::isnan(v) ? perfect_score(params.measure) : v;
}

double stab_within(const ClustererConfig& cfg, const Dataset& x, const Partition& ref, double eps,
                   const StabilityParams& params) {
    validate(params);
    if (eps < 0.0) throw std::invalid_argument("stability: negative epsilon");
    if (ref.n() != x.n()) throw std::invalid_argument("stability: partition/data size mismatch");
    const double perfect = perfect_score(params.measure);
    const std::uint64_t tok = eps_token(eps);
    const auto K = static_cast<std::uint64_t>(ref.k);
    const std::size_t max_omega =
        static_cast<std::size_t>(*std::max_element(params.omega.begin(), params.omega.end()));

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(ref.k));
    for (std::size_t i = 0; i < ref.n(); ++i)
        members[static_cast<std::size_t>(ref.labels[i])].push_back(i);

    double total = 0.0;
    for (int c = 0; c < ref.k; ++c) {
        const auto& idx = members[static_cast<std::size_t>(c)];
        if (idx.empty()) throw std::invalid_argument("stability: empty reference cluster");
        const Dataset rows = x.take_rows(idx);
        const double size = static_cast<double>(idx.size());
        const std::size_t distinct = count_distinct_rows(rows.x, max_omega);
        double sum = 0.0;
        std::size_t count = 0;
        for (int kp : params.omega) {
            if (static_cast<std::size_t>(kp) > distinct) continue;
            ClustererConfig fc = cfg;
            fc.seed = derive_seed(params.seed, SeedDomain::within_ref,
                                  {K, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(kp)});
            const FittedModel sub = fit(fc, rows, kp);
            std::vector<double> cells(static_cast<std::size_t>(params.d));
            for (std::size_t d = 0; d < cells.size(); ++d) {
                const std::uint64_t parts[5] = {K, static_cast<std::uint64_t>(c),
                                                static_cast<std::uint64_t>(kp), tok, d};
                cells[d] = between_cell(
                    cfg, rows, sub, kp, params.measure, params.noise, params.variant, eps,
                    derive_seed(params.seed, SeedDomain::within_noise,
                                {parts[0], parts[1], parts[2], parts[3], parts[4]}),
                    derive_seed(params.seed, SeedDomain::within_fit,
                                {parts[0], parts[1], parts[2], parts[3], parts[4]}));
            }
            const double v = nan_mean(cells.data(), cells.size(), nullptr);
            if (!std::isnan(v)) {
                sum += v;
                ++count;
            }
        }
        total += size * (count == 0 ? perfect : sum / static_cast<double>(count));
    }
    return total / static_cast<double>(x.n());
}

std::vector<StadionPath> stadion_paths(const ClustererConfig& cfg, const Dataset& x, int k_max,
                                       const EpsilonGrid& grid, const StabilityParams& params) {
    StadionEvaluator ev(cfg, x, k_max, params);
    return ev.evaluate(grid);
}

int select_from_aggregates(const std::vector<double>& agg, Measure measure) {
    if (agg.empty()) throw std::invalid_argument("select: no aggregates");
    const double sign = measure_is_distance(measure) ? -1.0 : 1.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < agg.size(); ++i)
        if (sign * agg[i] > sign * agg[best]) best = i;  // ties keep the smaller K
    return static_cast<int>(best) + 1;
}

SelectionReport select_k(const ClustererConfig& cfg, const Dataset& x, int k_max,
                         const EpsilonGrid& grid, const StabilityParams& params) {
    StadionEvaluator ev(cfg, x, k_max, params);
    SelectionReport report;
    report.k_max = k_max;
    report.params = params;
    report.grid = grid;
    report.paths = ev.evaluate(grid);
    report.references = ev.reference_partitions();
    report.skipped = ev.skipped();
    report.dropped_bootstrap_draws = ev.dropped_bootstrap_draws();

    const double sign = measure_is_distance(params.measure) ? -1.0 : 1.0;
    report.aggregate_max.resize(static_cast<std::size_t>(k_max));
    report.aggregate_mean.resize(static_cast<std::size_t>(k_max));
    for (std::size_t k = 0; k < report.paths.size(); ++k) {
        const auto& s = report.paths[k].stadion;
        double extreme = s[0];
        double mean = 0.0;
        for (double v : s) {
            if (sign * v > sign * extreme) extreme = v;
            mean += v;
        }
        report.aggregate_max[k] = extreme;
        report.aggregate_mean[k] = mean / static_cast<double>(s.size());
    }
    report.k_hat_max = select_from_aggregates(report.aggregate_max, params.measure);
    report.k_hat_mean = select_from_aggregates(report.aggregate_mean, params.measure);
    return report;
}

double calibrate_eps_max(const ClustererConfig& cfg, const Dataset& x, int k_max,
                         const StabilityParams& params, std::size_t m) {
    if (k_max < 2) throw std::invalid_argument("calibrate_eps_max: needs k_max >= 2");
    const double sqrt_p = std::sqrt(static_cast<double>(x.p()));
    const EpsilonGrid scan = default_grid(x.p(), m, 2.0 * sqrt_p);
    const std::vector<StadionPath> paths = stadion_paths(cfg, x, k_max, scan, params);
    const double sign = measure_is_distance(params.measure) ? -1.0 : 1.0;
    for (std::size_t i = 1; i < scan.m(); ++i) {
        bool dominates = true;
        for (int k = 2; k <= k_max && dominates; ++k)
            dominates = sign * paths[0].stadion[i] >
                        sign * paths[static_cast<std::size_t>(k - 1)].stadion[i];
        if (dominates) return scan.values[i];
    }
    return sqrt_p;
}

std::vector<TradeOffRow> trade_off_table(const SelectionReport& report, Aggregation agg) {
    std::vector<TradeOffRow> rows;
    rows.reserve(report.paths.size());
    const double sign = measure_is_distance(report.params.measure) ? -1.0 : 1.0;
    for (const StadionPath& p : report.paths) {
        TradeOffRow row;
        row.k = p.k;
        if (agg == Aggregation::mean) {
            const auto M = static_cast<double>(p.stadion.size());
            for (std::size_t i = 0; i < p.stadion.size(); ++i) {
                row.stab_b += p.stab_b[i];
                row.stab_w += p.stab_w[i];
                row.stadion += p.stadion[i];
            }
            row.stab_b /= M;
            row.stab_w /= M;
            row.stadion /= M;
        } else {
            std::size_t best = 0;
            for (std::size_t i = 1; i < p.stadion.size(); ++i)
                if (sign * p.stadion[i] > sign * p.stadion[best]) best = i;
            row.stab_b = p.stab_b[best];
            row.stab_w = p.stab_w[best];
            row.stadion = p.stadion[best];
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stadion
