#include "stadion/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stadion/rng.hpp"

namespace stadion {

bool index_maximizes(IndexId id) {
    switch (id) {
        case IndexId::silhouette:
        case IndexId::calinski_harabasz:
        case IndexId::dunn:
        case IndexId::wemmert_gancarski:
            return true;
        default:
            return false;
    }
}

const char* to_string(IndexId id) {
    switch (id) {
        case IndexId::silhouette: return "silhouette";
        case IndexId::davies_bouldin: return "davies_bouldin";
        case IndexId::calinski_harabasz: return "calinski_harabasz";
        case IndexId::dunn: return "dunn";
        case IndexId::xie_beni: return "xie_beni";
        case IndexId::ray_turi: return "ray_turi";
        case IndexId::wemmert_gancarski: return "wemmert_gancarski";
    }
    return "?";
}

IndexId index_from_string(const std::string& name) {
    static const std::pair<const char*, IndexId> table[] = {
        {"silhouette", IndexId::silhouette},
        {"davies_bouldin", IndexId::davies_bouldin},
        {"calinski_harabasz", IndexId::calinski_harabasz},
        {"dunn", IndexId::dunn},
        {"xie_beni", IndexId::xie_beni},
        {"ray_turi", IndexId::ray_turi},
        {"wemmert_gancarski", IndexId::wemmert_gancarski},
    };
    for (const auto& [s, id] : table)
        if (name == s) return id;
    throw std::invalid_argument("unknown validity index: " + name);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ClusterGeometry {
    std::size_t k;
    std::vector<std::size_t> sizes;
    Matrix centroids;              // k x p
    std::vector<double> centroid_sq;  // per-cluster sum of squared dists to centroid
    double wgss = 0.0;
    std::vector<double> global_centroid;
};

ClusterGeometry geometry(const Dataset& x, const Partition& p) {
    const std::size_t n = x.n(), dims = x.p();
    const auto k = static_cast<std::size_t>(p.k);
    ClusterGeometry g;
    g.k = k;
    g.sizes.assign(k, 0);
    g.centroids = Matrix(k, dims);
    g.centroid_sq.assign(k, 0.0);
    g.global_centroid.assign(dims, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(p.labels[i]);
        ++g.sizes[c];
        const double* xi = x.x.row(i);
        double* ctr = g.centroids.row(c);
        for (std::size_t j = 0; j < dims; ++j) {
            ctr[j] += xi[j];
            g.global_centroid[j] += xi[j];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (g.sizes[c] == 0) throw std::invalid_argument("validity: empty cluster");
        double* ctr = g.centroids.row(c);
        for (std::size_t j = 0; j < dims; ++j) ctr[j] /= static_cast<double>(g.sizes[c]);
    }
    for (double& v : g.global_centroid) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(p.labels[i]);
        const double d2 = squared_distance(x.x.row(i), g.centroids.row(c), dims);
        g.centroid_sq[c] += d2;
        g.wgss += d2;
    }
    return g;
}

// Silhouette (Rousseeuw 1987): s(i) = (b-a)/max(a,b) with a the mean in-cluster
// distance and b the best mean distance to another cluster; singletons score 0.
double silhouette(const Dataset& x, const Partition& p, const ClusterGeometry& g) {
    const std::size_t n = x.n(), dims = x.p();
    double total = 0.0;
    std::vector<double> sums(g.k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(p.labels[i]);
        if (g.sizes[own] < 2) continue;  // singleton: s(i) = 0
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[static_cast<std::size_t>(p.labels[j])] +=
                std::sqrt(squared_distance(x.x.row(i), x.x.row(j), dims));
        }
        const double a = sums[own] / static_cast<double>(g.sizes[own] - 1);
        double b = kInf;
        for (std::size_t c = 0; c < g.k; ++c)
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(g.sizes[c]));
        const double m = std::max(a, b);
        total += m > 0.0 ? (b - a) / m : 0.0;
    }
    return total / static_cast<double>(n);
}

// Davies-Bouldin (1979): mean over clusters of the worst (d_k + d_l) / |mu_k - mu_l|,
// d_k the mean distance of cluster points to their centroid.
double davies_bouldin(const Dataset& x, const Partition& p, const ClusterGeometry& g) {
    const std::size_t dims = x.p();
    std::vector<double> spread(g.k, 0.0);
    for (std::size_t i = 0; i < x.n(); ++i) {
        const auto c = static_cast<std::size_t>(p.labels[i]);
        spread[c] += std::sqrt(squared_distance(x.x.row(i), g.centroids.row(c), dims));
    }
    for (std::size_t c = 0; c < g.k; ++c) spread[c] /= static_cast<double>(g.sizes[c]);
    double total = 0.0;
    for (std::size_t c = 0; c < g.k; ++c) {
        double worst = 0.0;
        for (std::size_t l = 0; l < g.k; ++l) {
            if (l == c) continue;
            const double sep =
                std::sqrt(squared_distance(g.centroids.row(c), g.centroids.row(l), dims));
            worst = std::max(worst, sep > 0.0 ? (spread[c] + spread[l]) / sep : kInf);
        }
        total += worst;
    }
    return total / static_cast<double>(g.k);
}

// Calinski-Harabasz (1974): ((N-K)/(K-1)) * BGSS / WGSS.
double calinski_harabasz(const Dataset& x, const ClusterGeometry& g) {
    const std::size_t dims = x.p();
    double bgss = 0.0;
    for (std::size_t c = 0; c < g.k; ++c)
        bgss += static_cast<double>(g.sizes[c]) *
                squared_distance(g.centroids.row(c), g.global_centroid.data(), dims);
    const double n = static_cast<double>(x.n());
    const double k = static_cast<double>(g.k);
    if (g.wgss == 0.0) return kInf;
    return ((n - k) / (k - 1.0)) * (bgss / g.wgss);
}

// Dunn (1974): smallest between-cluster point distance over the largest
// cluster diameter.
double dunn(const Dataset& x, const Partition& p) {
    const std::size_t n = x.n(), dims = x.p();
    double min_inter = kInf, max_intra = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = squared_distance(x.x.row(i), x.x.row(j), dims);
            if (p.labels[i] == p.labels[j])
                max_intra = std::max(max_intra, d);
            else
                min_inter = std::min(min_inter, d);
        }
    }
    if (max_intra == 0.0) return kInf;
    return std::sqrt(min_inter) / std::sqrt(max_intra);
}

// Xie-Beni (1991, crisp form per the clusterCrit review): mean squared
// distance to centroids over the smallest squared between-cluster point
// distance.
double xie_beni(const Dataset& x, const Partition& p, const ClusterGeometry& g) {
    const std::size_t n = x.n(), dims = x.p();
    double min_inter = kInf;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (p.labels[i] != p.labels[j])
                min_inter = std::min(min_inter, squared_distance(x.x.row(i), x.x.row(j), dims));
    if (min_inter == 0.0) return kInf;
    return g.wgss / (static_cast<double>(n) * min_inter);
}

// Ray-Turi (1999): mean squared distance to centroids over the smallest
// squared between-centroid distance.
double ray_turi(const Dataset& x, const ClusterGeometry& g) {
    const std::size_t dims = x.p();
    double min_sep = kInf;
    for (std::size_t c = 0; c + 1 < g.k; ++c)
        for (std::size_t l = c + 1; l < g.k; ++l)
            min_sep = std::min(min_sep,
                               squared_distance(g.centroids.row(c), g.centroids.row(l), dims));
    if (min_sep == 0.0) return kInf;
    return g.wgss / (static_cast<double>(x.n()) * min_sep);
}

// Wemmert-Gancarski (per the clusterCrit review): size-weighted mean of
// max(0, 1 - mean_k R(x)) with R the quotient of the distance to the own
// centroid by the distance to the nearest other centroid.
double wemmert_gancarski(const Dataset& x, const Partition& p, const ClusterGeometry& g) {
    const std::size_t n = x.n(), dims = x.p();
    std::vector<double> r_sum(g.k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(p.labels[i]);
        const double own_d = std::sqrt(squared_distance(x.x.row(i), g.centroids.row(own), dims));
        double other = kInf;
        for (std::size_t c = 0; c < g.k; ++c)
            if (c != own)
                other = std::min(other,
                                 squared_distance(x.x.row(i), g.centroids.row(c), dims));
        other = std::sqrt(other);
        r_sum[own] += other > 0.0 ? own_d / other : kInf;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < g.k; ++c) {
        const double j = 1.0 - r_sum[c] / static_cast<double>(g.sizes[c]);
        total += static_cast<double>(g.sizes[c]) * std::max(0.0, j);
    }
    return total / static_cast<double>(n);
}

}  // namespace

double internal_index(IndexId id, const Dataset& x, const Partition& p, std::size_t cap) {
    if (p.n() != x.n()) throw std::invalid_argument("validity: partition/data size mismatch");
    if (p.k < 2) throw std::invalid_argument("validity: indices require K >= 2");
    if (distinct_labels(p) != p.k) throw std::invalid_argument("validity: empty cluster");
    const bool quadratic =
        id == IndexId::silhouette || id == IndexId::dunn || id == IndexId::xie_beni;
    if (quadratic && x.n() > cap)
        throw std::invalid_argument("validity: N exceeds cap for O(N^2) index");

    const ClusterGeometry g = geometry(x, p);
    switch (id) {
        case IndexId::silhouette: return silhouette(x, p, g);
        case IndexId::davies_bouldin: return davies_bouldin(x, p, g);
        case IndexId::calinski_harabasz: return calinski_harabasz(x, g);
        case IndexId::dunn: return dunn(x, p);
        case IndexId::xie_beni: return xie_beni(x, p, g);
        case IndexId::ray_turi: return ray_turi(x, g);
        case IndexId::wemmert_gancarski: return wemmert_gancarski(x, p, g);
    }
    throw std::logic_error("internal_index: unhandled id");
}

int select_k_by_index(IndexId id, const ClustererConfig& cfg, const Dataset& x, int k_max,
                      std::size_t cap) {
    if (k_max < 2) throw std::invalid_argument("select_k_by_index: k_max must be at least 2");
    const bool maximize = index_maximizes(id);
    int best_k = 0;
    double best = maximize ? -kInf : kInf;
    for (int k = 2; k <= k_max; ++k) {
        ClustererConfig fc = cfg;
        fc.seed = derive_seed(cfg.seed, SeedDomain::reference_fit,
                              {static_cast<std::uint64_t>(k)});
        const FittedModel model = fit(fc, x, k);
        const double v = internal_index(id, x, model.partition, cap);
        if (best_k == 0 || (maximize && v > best) || (!maximize && v < best)) {
            best = v;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace stadion
