#include "stadion/ward.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stadion {

namespace {

// Upper-triangular index for i < j over n points.
inline std::size_t tri(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

std::vector<WardMerge> ward_merge_sequence(const Matrix& x, std::size_t cap) {
    const std::size_t n = x.rows();
    if (n == 0) throw std::invalid_argument("ward: empty data");
    if (n > cap)
        throw std::invalid_argument("ward: N=" + std::to_string(n) + " exceeds cap " +
                                    std::to_string(cap));
    if (n == 1) return {};

    // State d(A,B) = 2 * Ward cost of merging A and B; squared Euclidean
    // distance for singletons. Reducibility of Ward linkage makes the
    // nearest-neighbor chain produce the greedy merge set.
    std::vector<double> d(tri(n - 2, n - 1, n) + 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[tri(i, j, n)] = squared_distance(x.row(i), x.row(j), x.cols());

    std::vector<double> size(n, 1.0);
    std::vector<char> active(n, 1);
    std::vector<std::size_t> chain;
    chain.reserve(n);

    struct RawMerge {
        std::size_t a, b;
        double d2;
    };
    std::vector<RawMerge> raw;
    raw.reserve(n - 1);

    auto dist = [&](std::size_t a, std::size_t b) {
        return a < b ? d[tri(a, b, n)] : d[tri(b, a, n)];
    };

    while (raw.size() < n - 1) {
        if (chain.empty()) {
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
        }
        for (;;) {
            const std::size_t a = chain.back();
            std::size_t best = n;
            double best_d = std::numeric_limits<double>::infinity();
            if (chain.size() >= 2) {  // prefer the previous link on ties
                best = chain[chain.size() - 2];
                best_d = dist(a, best);
            }
            for (std::size_t c = 0; c < n; ++c) {
                if (!active[c] || c == a || c == best) continue;
                const double dc = dist(a, c);
                if (dc < best_d) {
                    best_d = dc;
                    best = c;
                }
            }
            if (chain.size() >= 2 && best == chain[chain.size() - 2]) {
                const std::size_t b = best;
                chain.pop_back();
                chain.pop_back();
                raw.push_back(RawMerge{std::min(a, b), std::max(a, b), best_d});
                // Lance-Williams update into slot min(a,b); deactivate the other.
                const std::size_t keep = std::min(a, b), drop = std::max(a, b);
                const double sa = size[a], sb = size[b], dab = best_d;
                for (std::size_t c = 0; c < n; ++c) {
                    if (!active[c] || c == keep || c == drop) continue;
                    const double sc = size[c];
                    const double val = ((sa + sc) * dist(a, c) + (sb + sc) * dist(b, c) - sc * dab) /
                                       (sa + sb + sc);
                    (keep < c ? d[tri(keep, c, n)] : d[tri(c, keep, n)]) = val;
                }
                size[keep] = sa + sb;
                active[drop] = 0;
                break;
            }
            chain.push_back(best);
        }
    }

    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMerge& x1, const RawMerge& x2) { return x1.d2 < x2.d2; });

    // Renumber to the conventional scheme: singleton ids 0..N-1, merge t
    // creates id N+t. Heights are Ward cost increases (state / 2).
    std::vector<WardMerge> merges;
    merges.reserve(raw.size());
    std::vector<int> current_id(n);
    std::iota(current_id.begin(), current_id.end(), 0);
    UnionFind uf(n);
    std::vector<int> root_of_slot(n);
    std::iota(root_of_slot.begin(), root_of_slot.end(), 0);
    // Track, per original slot, the dendrogram id of the cluster it belongs to.
    std::vector<int> id_of_root(2 * n, 0);
    std::iota(id_of_root.begin(), id_of_root.begin() + static_cast<long>(n), 0);
    for (std::size_t t = 0; t < raw.size(); ++t) {
        const int ra = uf.find(static_cast<int>(raw[t].a));
        const int rb = uf.find(static_cast<int>(raw[t].b));
        WardMerge m;
        m.a = id_of_root[static_cast<std::size_t>(ra)];
        m.b = id_of_root[static_cast<std::size_t>(rb)];
        if (m.a > m.b) std::swap(m.a, m.b);
        m.height = raw[t].d2 / 2.0;
        merges.push_back(m);
        uf.unite(ra, rb);
        id_of_root[static_cast<std::size_t>(uf.find(ra))] = static_cast<int>(n + t);
    }
    return merges;
}

Partition cut_dendrogram(const std::vector<WardMerge>& merges, std::size_t n, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("cut_dendrogram: k out of range");
    // Merge ids >= n refer to earlier merges; resolve them to a representative
    // leaf so a union-find over leaves suffices.
    std::vector<int> leaf_of_id(n + merges.size());
    std::iota(leaf_of_id.begin(), leaf_of_id.begin() + static_cast<long>(n), 0);
    UnionFind uf(n);
    const std::size_t applied = n - static_cast<std::size_t>(k);
    for (std::size_t t = 0; t < merges.size(); ++t) {
        const int la = leaf_of_id[static_cast<std::size_t>(merges[t].a)];
        const int lb = leaf_of_id[static_cast<std::size_t>(merges[t].b)];
        if (t < applied) uf.unite(la, lb);
        leaf_of_id[n + t] = la;
    }
    std::vector<int> labels(n);
    std::vector<int> label_of_root(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int r = uf.find(static_cast<int>(i));
        if (label_of_root[static_cast<std::size_t>(r)] < 0)
            label_of_root[static_cast<std::size_t>(r)] = next++;
        labels[i] = label_of_root[static_cast<std::size_t>(r)];
    }
    return make_partition(std::move(labels), k);
}

}  // namespace stadion
