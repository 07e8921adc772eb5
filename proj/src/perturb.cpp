#include "stadion/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "stadion/rng.hpp"

namespace stadion {

const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::bootstrap: return "bootstrap";
    }
    return "?";
}

NoiseKind noise_from_string(const std::string& name) {
    if (name == "uniform") return NoiseKind::uniform;
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "bootstrap") return NoiseKind::bootstrap;
    throw std::invalid_argument("unknown noise kind: " + name);
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    for (auto& v : idx) v = rng.index(n);
    return idx;
}

Dataset perturb(const Dataset& x, const NoiseSpec& spec, std::uint64_t seed) {
    if (spec.epsilon < 0.0) throw std::invalid_argument("perturb: negative epsilon");
    if (x.n() == 0) throw std::invalid_argument("perturb: empty dataset");
    if (spec.kind == NoiseKind::bootstrap) return x.take_rows(bootstrap_indices(x.n(), seed));
    if (spec.epsilon == 0.0) return x;

    Dataset out = x;
    Rng rng(seed);
    if (spec.kind == NoiseKind::uniform) {
        const double e = spec.epsilon;
        for (double& v : out.x.data()) v += rng.uniform(-e, e);
    } else {
        const double e = spec.epsilon;
        for (double& v : out.x.data()) v += e * rng.normal();
    }
    return out;
}

EpsilonGrid default_grid(std::size_t p, std::size_t m, double eps_max) {
    if (m < 2) throw std::invalid_argument("default_grid: need at least 2 grid points");
    if (eps_max < 0.0) eps_max = std::sqrt(static_cast<double>(p));
    if (!(eps_max > 0.0)) throw std::invalid_argument("default_grid: eps_max must be positive");
    EpsilonGrid g;
    g.values.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        g.values[i] = eps_max * static_cast<double>(i) / static_cast<double>(m - 1);
    g.values[0] = 0.0;
    return g;
}

EpsilonGrid make_grid(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("grid: need at least 2 points");
    if (values.front() != 0.0) throw std::invalid_argument("grid: first value must be 0");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("grid: values must be strictly increasing");
    return EpsilonGrid{std::move(values)};
}

}  // namespace stadion
