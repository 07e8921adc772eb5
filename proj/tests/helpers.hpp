#pragma once

#include <vector>

#include "stadion/dataset.hpp"
#include "stadion/matrix.hpp"
#include "stadion/partition.hpp"
#include "stadion/rng.hpp"

namespace stadion::test {

inline Partition random_partition(std::size_t n, int k_max, Rng& rng) {
    std::vector<int> labels(n);
    int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(k_max)));
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
    return relabel_first_appearance(labels);
}

inline Matrix random_matrix(std::size_t n, std::size_t p, Rng& rng, double scale = 1.0) {
    Matrix m(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) m(i, j) = rng.normal() * scale;
    return m;
}

inline Dataset as_dataset(Matrix m) {
    Dataset d;
    d.x = std::move(m);
    return d;
}

}  // namespace stadion::test
