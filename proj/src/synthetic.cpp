#include "stadion/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stadion/rng.hpp"

namespace stadion {

const char* to_string(GenKind k) {
    switch (k) {
        case GenKind::gaussian_blobs: return "gaussian_blobs";
        case GenKind::uniform_cube: return "uniform_cube";
        case GenKind::sphere_surface: return "sphere_surface";
        case GenKind::correlated_gaussians: return "correlated_gaussians";
        case GenKind::letters_like: return "letters_like";
    }
    return "?";
}

GenKind gen_kind_from_string(const std::string& name) {
    if (name == "gaussian_blobs" || name == "blobs") return GenKind::gaussian_blobs;
    if (name == "uniform_cube" || name == "cube") return GenKind::uniform_cube;
    if (name == "sphere_surface" || name == "sphere") return GenKind::sphere_surface;
    if (name == "correlated_gaussians" || name == "correlated")
        return GenKind::correlated_gaussians;
    if (name == "letters_like" || name == "letters") return GenKind::letters_like;
    throw std::invalid_argument("unknown generator kind: " + name);
}

namespace {

std::vector<int> split_counts(int n, int k) {
    std::vector<int> counts(static_cast<std::size_t>(k), n / k);
    for (int i = 0; i < n % k; ++i) ++counts[static_cast<std::size_t>(i)];
    return counts;
}

LabeledDataset blobs(const GeneratorSpec& spec, Rng& rng) {
    BlobSpec layout = spec.blobs;
    if (layout.centers.empty()) {
        if (spec.k < 1) throw std::invalid_argument("generate: k must be positive");
        const double min_dist = spec.separation * spec.std_dev;
        double side = min_dist * std::max(2.0, std::cbrt(static_cast<double>(spec.k)) * 2.0);
        for (int attempt = 0;; ++attempt) {
            layout.centers.clear();
            bool ok = true;
            for (int c = 0; c < spec.k && ok; ++c) {
                bool placed = false;
                for (int tries = 0; tries < 200; ++tries) {
                    std::vector<double> cand(static_cast<std::size_t>(spec.p));
                    for (auto& v : cand) v = rng.uniform(-side, side);
                    bool far = true;
                    for (const auto& other : layout.centers) {
                        if (std::sqrt(squared_distance(cand.data(), other.data(),
                                                       static_cast<std::size_t>(spec.p))) < min_dist) {
                            far = false;
                            break;
                        }
                    }
                    if (far) {
                        layout.centers.push_back(std::move(cand));
                        placed = true;
                        break;
                    }
                }
                ok = placed;
            }
            if (ok) break;
            if (attempt >= 20) throw std::runtime_error("generate: could not place blob centers");
            side *= 1.5;
        }
        layout.stds.assign(layout.centers.size(), spec.std_dev);
        layout.counts = split_counts(spec.n, spec.k);
    } else {
        if (layout.stds.size() != layout.centers.size())
            throw std::invalid_argument("generate: stds/centers size mismatch");
        if (layout.counts.empty())
            layout.counts = split_counts(spec.n, static_cast<int>(layout.centers.size()));
        if (layout.counts.size() != layout.centers.size())
            throw std::invalid_argument("generate: counts/centers size mismatch");
    }

    const std::size_t p = layout.centers.front().size();
    std::size_t total = 0;
    for (int c : layout.counts) total += static_cast<std::size_t>(c);
    LabeledDataset out;
    out.data.x = Matrix(total, p);
    std::vector<int> labels(total);
    std::size_t row = 0;
    for (std::size_t b = 0; b < layout.centers.size(); ++b) {
        for (int i = 0; i < layout.counts[b]; ++i, ++row) {
            for (std::size_t j = 0; j < p; ++j)
                out.data.x(row, j) = layout.centers[b][j] + layout.stds[b] * rng.normal();
            labels[row] = static_cast<int>(b);
        }
    }
    out.labels = make_partition(std::move(labels));
    return out;
}

LabeledDataset cube(const GeneratorSpec& spec, Rng& rng) {
    LabeledDataset out;
    out.data.x = Matrix(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.p));
    for (double& v : out.data.x.data()) v = rng.uniform01();
    out.labels = make_partition(std::vector<int>(static_cast<std::size_t>(spec.n), 0));
    return out;
}

LabeledDataset sphere(const GeneratorSpec& spec, Rng& rng) {
    const auto p = static_cast<std::size_t>(spec.p);
    LabeledDataset out;
    out.data.x = Matrix(static_cast<std::size_t>(spec.n), p);
    std::vector<double> g(p);
    for (int i = 0; i < spec.n; ++i) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& v : g) {
                v = rng.normal();
                norm += v * v;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-12);
        const double r = spec.radius + (spec.shell > 0.0 ? spec.shell * rng.normal() : 0.0);
        for (std::size_t j = 0; j < p; ++j)
            out.data.x(static_cast<std::size_t>(i), j) = r * g[j] / norm;
    }
    out.labels = make_partition(std::vector<int>(static_cast<std::size_t>(spec.n), 0));
    return out;
}

// Two elongated Gaussians sharing a correlation axis, offset perpendicular to
// it, so that cutting along the shared axis competes with separating them.
LabeledDataset correlated(const GeneratorSpec& spec, Rng& rng) {
    const double inv_sqrt2 = 0.7071067811865475244;
    const double u[2] = {inv_sqrt2, inv_sqrt2};    // long axis
    const double v[2] = {-inv_sqrt2, inv_sqrt2};   // offset axis
    const double sigma_long = 1.0, sigma_short = 0.42;
    const std::vector<int> counts = split_counts(spec.n, 2);
    LabeledDataset out;
    out.data.x = Matrix(static_cast<std::size_t>(spec.n), 2);
    std::vector<int> labels(static_cast<std::size_t>(spec.n));
    std::size_t row = 0;
    for (int c = 0; c < 2; ++c) {
        const double sign = c == 0 ? -1.0 : 1.0;
        for (int i = 0; i < counts[static_cast<std::size_t>(c)]; ++i, ++row) {
            const double a = sigma_long * rng.normal();
            const double b = sigma_short * rng.normal();
            out.data.x(row, 0) = sign * spec.offset * v[0] + a * u[0] + b * v[0];
            out.data.x(row, 1) = sign * spec.offset * v[1] + a * u[1] + b * v[1];
            labels[row] = c;
        }
    }
    out.labels = make_partition(std::move(labels));
    return out;
}

// Three anisotropic clusters, two close together and one far away.
LabeledDataset letters(const GeneratorSpec& spec, Rng& rng) {
    struct Blob {
        double cx, cy, sx, sy, theta;
        double share;
    };
    static const Blob blobs[3] = {
        {-8.0, 0.0, 0.55, 0.42, 0.5, 0.40},
        {2.6, -1.1, 0.42, 0.34, -0.4, 0.32},
        {5.0, 1.1, 0.38, 0.30, 0.9, 0.28},
    };
    std::vector<int> counts(3);
    int assigned = 0;
    for (int b = 0; b < 2; ++b) {
        counts[static_cast<std::size_t>(b)] = static_cast<int>(std::floor(blobs[b].share * spec.n));
        assigned += counts[static_cast<std::size_t>(b)];
    }
    counts[2] = spec.n - assigned;
    LabeledDataset out;
    out.data.x = Matrix(static_cast<std::size_t>(spec.n), 2);
    std::vector<int> labels(static_cast<std::size_t>(spec.n));
    std::size_t row = 0;
    for (int b = 0; b < 3; ++b) {
        const Blob& bl = blobs[b];
        const double ct = std::cos(bl.theta), st = std::sin(bl.theta);
        for (int i = 0; i < counts[static_cast<std::size_t>(b)]; ++i, ++row) {
            const double gx = bl.sx * rng.normal();
            const double gy = bl.sy * rng.normal();
            out.data.x(row, 0) = bl.cx + ct * gx - st * gy;
            out.data.x(row, 1) = bl.cy + st * gx + ct * gy;
            labels[row] = b;
        }
    }
    out.labels = make_partition(std::move(labels));
    return out;
}

}  // namespace

LabeledDataset generate(const GeneratorSpec& spec, std::uint64_t seed) {
    if (spec.n < 1) throw std::invalid_argument("generate: n must be positive");
    if (spec.p < 1) throw std::invalid_argument("generate: p must be positive");
    Rng rng(derive_seed(seed, SeedDomain::generator, {static_cast<std::uint64_t>(spec.kind)}));
    switch (spec.kind) {
        case GenKind::gaussian_blobs: return blobs(spec, rng);
        case GenKind::uniform_cube: return cube(spec, rng);
        case GenKind::sphere_surface: return sphere(spec, rng);
        case GenKind::correlated_gaussians: return correlated(spec, rng);
        case GenKind::letters_like: return letters(spec, rng);
    }
    throw std::logic_error("generate: unhandled kind");
}

}  // namespace stadion
