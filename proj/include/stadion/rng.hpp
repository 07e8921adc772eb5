#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace stadion {

// splitmix64 finalizer; used to fold seed components into stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Every random decision in the toolkit draws from a stream keyed by the master
// seed, a domain tag, and the indices that identify the work item. Streams are
// therefore independent of evaluation order and thread count.
enum class SeedDomain : std::uint64_t {
    generator = 1,     // synthetic data generation
    reference_fit = 2, // reference clustering per K
    between_noise = 3, // perturbation draws shared across K (keyed by eps and d)
    between_fit = 4,   // re-clustering of perturbed data per K
    within_ref = 5,    // sub-reference clustering per (K, cluster, K')
    within_noise = 6,  // perturbation of cluster rows per (K, cluster, K', eps, d)
    within_fit = 7,    // re-clustering of perturbed cluster rows
    general = 8,
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedDomain domain,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = mix64(master ^ 0x5851f42d4c957f2dULL);
    s = mix64(s ^ static_cast<std::uint64_t>(domain));
    for (std::uint64_t p : parts) s = mix64(s ^ p);
    return s;
}

// mt19937_64 with hand-rolled variate mappings. std::*_distribution output is
// implementation-defined, so mappings are spelled out to pin results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, pairwise with a cached spare
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // uniform index in [0, n); n > 0. Fixed-point multiply keeps it exact.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace stadion
