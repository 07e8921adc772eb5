#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stadion/dataset.hpp"

namespace stadion {

enum class GenKind {
    gaussian_blobs,
    uniform_cube,
    sphere_surface,
    correlated_gaussians,
    letters_like,
};

const char* to_string(GenKind k);
GenKind gen_kind_from_string(const std::string& name);

// Explicit blob layout; leave centers empty for seeded auto placement.
struct BlobSpec {
    std::vector<std::vector<double>> centers;  // k x p
    std::vector<double> stds;                  // isotropic std per blob
    std::vector<int> counts;
};

struct GeneratorSpec {
    GenKind kind = GenKind::gaussian_blobs;
    int n = 300;
    int p = 2;
    int k = 3;                // auto blob count
    double std_dev = 1.0;     // auto blob std
    double separation = 6.0;  // auto mode: min center distance, in std units
    BlobSpec blobs;
    double radius = 1.0;  // sphere_surface
    double shell = 0.0;   // sphere_surface radial jitter std
    double offset = 1.0;  // correlated_gaussians: center offset off the shared axis
};

// Pure function of (spec, seed): same arguments give bitwise-identical data.
// Labels are the generating component (all zeros for the unstructured kinds).
LabeledDataset generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace stadion
