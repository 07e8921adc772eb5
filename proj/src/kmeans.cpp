#include "stadion/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "stadion/rng.hpp"

namespace stadion {

const char* to_string(KMeansInit i) {
    return i == KMeansInit::kmeanspp ? "kmeans++" : "random";
}

KMeansInit kmeans_init_from_string(const std::string& name) {
    if (name == "kmeans++" || name == "kmeanspp") return KMeansInit::kmeanspp;
    if (name == "random") return KMeansInit::random;
    throw std::invalid_argument("unknown k-means init: " + name);
}

namespace {

struct RowHash {
    const Matrix* m;
    std::size_t operator()(std::size_t i) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        const double* r = m->row(i);
        for (std::size_t j = 0; j < m->cols(); ++j) {
            std::uint64_t bits;
            static_assert(sizeof bits == sizeof r[j]);
            __builtin_memcpy(&bits, &r[j], sizeof bits);
            h = (h ^ bits) * 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

struct RowEq {
    const Matrix* m;
    bool operator()(std::size_t a, std::size_t b) const {
        const double* ra = m->row(a);
        const double* rb = m->row(b);
        for (std::size_t j = 0; j < m->cols(); ++j)
            if (ra[j] != rb[j]) return false;
        return true;
    }
};

}  // namespace

Matrix kmeanspp_init(const Matrix& x, int k, Rng& rng) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix centers(static_cast<std::size_t>(k), p);
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);

    std::size_t first = rng.index(n);
    chosen[first] = 1;
    for (std::size_t j = 0; j < p; ++j) centers(0, j) = x(first, j);

    for (int c = 1; c < k; ++c) {
        const double* prev = centers.row(static_cast<std::size_t>(c - 1));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_d2[i] = std::min(min_d2[i], squared_distance(x.row(i), prev, p));
            total += min_d2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (min_d2[i] <= 0.0) continue;
                cum += min_d2[i];
                if (cum >= target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // numeric tail: last positive-weight row
                for (std::size_t i = n; i-- > 0;)
                    if (min_d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
        }
        if (pick == n) {  // all weights zero: uniform among unchosen rows
            std::size_t free_count = 0;
            for (std::size_t i = 0; i < n; ++i) free_count += chosen[i] ? 0u : 1u;
            std::size_t ord = rng.index(free_count);
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                if (ord == 0) {
                    pick = i;
                    break;
                }
                --ord;
            }
        }
        chosen[pick] = 1;
        for (std::size_t j = 0; j < p; ++j) centers(static_cast<std::size_t>(c), j) = x(pick, j);
    }
    return centers;
}

Matrix random_init(const Matrix& x, int k, Rng& rng) {
    const std::size_t n = x.rows(), p = x.cols();
    const auto uk = static_cast<std::size_t>(k);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i + 1 < n; ++i)
        std::swap(order[i], order[i + rng.index(n - i)]);
    Matrix centers(uk, p);
    std::size_t taken = 0;
    for (std::size_t oi = 0; oi < n && taken < uk; ++oi) {
        const double* cand = x.row(order[oi]);
        bool dup = false;
        for (std::size_t c = 0; c < taken && !dup; ++c)
            dup = squared_distance(cand, centers.row(c), p) == 0.0;
        if (dup) continue;
        for (std::size_t j = 0; j < p; ++j) centers(taken, j) = cand[j];
        ++taken;
    }
    if (taken < uk) throw std::invalid_argument("kmeans: k exceeds the number of distinct points");
    return centers;
}

namespace {

struct LloydOutcome {
    Matrix centers;
    double cost;
    std::vector<double> iteration_costs;
};

LloydOutcome lloyd(const Matrix& x, int k, Rng& rng, const KMeansConfig& cfg) {
    const std::size_t n = x.rows(), p = x.cols();
    const auto uk = static_cast<std::size_t>(k);
    Matrix centers = cfg.init == KMeansInit::kmeanspp ? kmeanspp_init(x, k, rng)
                                                      : random_init(x, k, rng);
    std::vector<int> labels(n, 0);
    std::vector<double> dist(n, 0.0);
    std::vector<std::size_t> sizes(uk, 0);
    Matrix sums(uk, p);
    LloydOutcome out;

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        double cost = 0.0;
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x.row(i);
            int best = 0;
            double best_d = squared_distance(xi, centers.row(0), p);
            for (std::size_t c = 1; c < uk; ++c) {
                const double d = squared_distance(xi, centers.row(c), p);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            labels[i] = best;
            dist[i] = best_d;
            ++sizes[static_cast<std::size_t>(best)];
            cost += best_d;
        }

        // Empty-cluster repair: hand each empty cluster the point farthest
        // from its current center, never emptying another cluster to do so.
        for (std::size_t c = 0; c < uk; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
                if (dist[i] > far_d) {
                    far_d = dist[i];
                    far = i;
                }
            }
            if (far == n) throw std::runtime_error("kmeans: cannot repair empty cluster");
            cost -= dist[far];
            --sizes[static_cast<std::size_t>(labels[far])];
            labels[far] = static_cast<int>(c);
            dist[far] = 0.0;
            sizes[c] = 1;
        }

        if (!out.iteration_costs.empty())
            assert(cost <= out.iteration_costs.back() + 1e-9 * (1.0 + out.iteration_costs.back()));
        out.iteration_costs.push_back(cost);

        std::fill(sums.data().begin(), sums.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x.row(i);
            double* s = sums.row(static_cast<std::size_t>(labels[i]));
            for (std::size_t j = 0; j < p; ++j) s[j] += xi[j];
        }
        double moved = 0.0;
        for (std::size_t c = 0; c < uk; ++c) {
            double* ctr = centers.row(c);
            const double* s = sums.row(c);
            const double inv = 1.0 / static_cast<double>(sizes[c]);
            double delta = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double nc = s[j] * inv;
                const double dj = nc - ctr[j];
                delta += dj * dj;
                ctr[j] = nc;
            }
            moved = std::max(moved, std::sqrt(delta));
        }
        if (moved <= cfg.tol) break;
    }

    // Final cost under the final centers (post-update assignment).
    double final_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.row(i);
        double best_d = squared_distance(xi, centers.row(0), p);
        for (std::size_t c = 1; c < uk; ++c)
            best_d = std::min(best_d, squared_distance(xi, centers.row(c), p));
        final_cost += best_d;
    }
    out.centers = std::move(centers);
    out.cost = final_cost;
    return out;
}

}  // namespace

std::size_t count_distinct_rows(const Matrix& x, std::size_t stop_after) {
    std::unordered_set<std::size_t, RowHash, RowEq> rows(16, RowHash{&x}, RowEq{&x});
    for (std::size_t i = 0; i < x.rows(); ++i) {
        rows.insert(i);
        if (stop_after && rows.size() >= stop_after) break;
    }
    return rows.size();
}

Partition assign_to_centers(const Matrix& x, const Matrix& centers) {
    if (x.cols() != centers.cols())
        throw std::invalid_argument("assign_to_centers: dimensionality mismatch");
    const std::size_t n = x.rows(), p = x.cols(), k = centers.rows();
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.row(i);
        int best = 0;
        double best_d = squared_distance(xi, centers.row(0), p);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_distance(xi, centers.row(c), p);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        labels[i] = best;
    }
    return make_partition(std::move(labels), static_cast<int>(k));
}

KMeansResult kmeans_fit(const Matrix& x, int k, const KMeansConfig& cfg) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be positive");
    if (x.rows() == 0) throw std::invalid_argument("kmeans: empty data");
    const auto uk = static_cast<std::size_t>(k);
    if (count_distinct_rows(x, uk) < uk)
        throw std::invalid_argument("kmeans: k exceeds the number of distinct points");

    KMeansResult best;
    best.cost = std::numeric_limits<double>::infinity();
    best.run_costs.reserve(static_cast<std::size_t>(cfg.runs));
    for (int run = 0; run < cfg.runs; ++run) {
        Rng rng(derive_seed(cfg.seed, SeedDomain::general, {0x6b6dULL, static_cast<std::uint64_t>(run)}));
        LloydOutcome o = lloyd(x, k, rng, cfg);
        best.run_costs.push_back(o.cost);
        if (o.cost < best.cost) {
            best.cost = o.cost;
            best.centers = std::move(o.centers);
            best.iteration_costs = std::move(o.iteration_costs);
            best.best_run = run;
        }
    }
    best.assignment = assign_to_centers(x, best.centers);
    return best;
}

}  // namespace stadion
