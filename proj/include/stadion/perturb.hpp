#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stadion/dataset.hpp"

namespace stadion {

enum class NoiseKind { uniform, gaussian, bootstrap };

const char* to_string(NoiseKind k);
NoiseKind noise_from_string(const std::string& name);

// epsilon is the per-entry amplitude for uniform noise (U(-eps, +eps)) and the
// per-entry standard deviation for gaussian noise; bootstrap ignores it.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::uniform;
    double epsilon = 0.0;
};

struct EpsilonGrid {
    std::vector<double> values;  // strictly increasing, values[0] == 0

    std::size_t m() const { return values.size(); }
    double eps_max() const { return values.back(); }
};

// Row indices drawn with replacement; the same (n, seed) pair yields the rows
// perturb() resamples, letting callers align reference labels.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

Dataset perturb(const Dataset& x, const NoiseSpec& spec, std::uint64_t seed);

// Linear grid 0..eps_max with m points; eps_max defaults to sqrt(p).
EpsilonGrid default_grid(std::size_t p, std::size_t m = 21, double eps_max = -1.0);

EpsilonGrid make_grid(std::vector<double> values);

}  // namespace stadion
