#include "stadion/partition.hpp"

#include <algorithm>
#include <unordered_map>

namespace stadion {

Partition make_partition(std::vector<int> labels, int k) {
    if (labels.empty()) throw std::invalid_argument("partition: empty label vector");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("partition: negative label");
        max_label = std::max(max_label, l);
    }
    if (k < 0) {
        k = max_label + 1;
    } else if (max_label >= k) {
        throw std::invalid_argument("partition: label exceeds cluster count");
    }
    return Partition{std::move(labels), k};
}

Partition relabel_first_appearance(const std::vector<int>& raw) {
    if (raw.empty()) throw std::invalid_argument("partition: empty label vector");
    std::unordered_map<int, int> remap;
    std::vector<int> labels;
    labels.reserve(raw.size());
    for (int v : raw) {
        auto [it, inserted] = remap.try_emplace(v, static_cast<int>(remap.size()));
        labels.push_back(it->second);
    }
    return Partition{std::move(labels), static_cast<int>(remap.size())};
}

int distinct_labels(const Partition& p) {
    std::vector<char> seen(static_cast<std::size_t>(p.k), 0);
    int count = 0;
    for (int l : p.labels) {
        if (!seen[static_cast<std::size_t>(l)]) {
            seen[static_cast<std::size_t>(l)] = 1;
            ++count;
        }
    }
    return count;
}

ContingencyTable contingency(const Partition& a, const Partition& b, int cap) {
    if (a.n() != b.n()) throw std::invalid_argument("contingency: partitions cover different item counts");
    if (a.n() == 0) throw std::invalid_argument("contingency: empty partitions");
    if (a.k > cap || b.k > cap)
        throw std::invalid_argument("contingency: cluster count exceeds cap (" + std::to_string(cap) + ")");
    ContingencyTable t;
    t.rows = static_cast<std::size_t>(a.k);
    t.cols = static_cast<std::size_t>(b.k);
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    t.n = static_cast<std::int64_t>(a.n());
    for (std::size_t i = 0; i < a.n(); ++i) {
        const auto r = static_cast<std::size_t>(a.labels[i]);
        const auto c = static_cast<std::size_t>(b.labels[i]);
        ++t.counts[r * t.cols + c];
        ++t.row_sums[r];
        ++t.col_sums[c];
    }
    return t;
}

namespace {
std::uint64_t choose2(std::int64_t m) {
    const auto u = static_cast<std::uint64_t>(m);
    return m < 2 ? 0 : u * (u - 1) / 2;
}
}  // namespace

PairCounts pair_counts(const ContingencyTable& t) {
    PairCounts pc;
    for (std::int64_t c : t.counts) pc.n11 += choose2(c);
    std::uint64_t row_pairs = 0;
    std::uint64_t col_pairs = 0;
    for (std::int64_t r : t.row_sums) row_pairs += choose2(r);
    for (std::int64_t c : t.col_sums) col_pairs += choose2(c);
    pc.n10 = row_pairs - pc.n11;
    pc.n01 = col_pairs - pc.n11;
    pc.n00 = choose2(t.n) - pc.n11 - pc.n10 - pc.n01;
    return pc;
}

}  // namespace stadion
