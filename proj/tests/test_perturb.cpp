#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "stadion/perturb.hpp"

using namespace stadion;

TEST_CASE("uniform noise stays inside the epsilon box") {
    Rng rng(41);
    const Dataset d = stadion::test::as_dataset(stadion::test::random_matrix(50, 3, rng));
    const double eps = 0.3;
    const Dataset out = perturb(d, {NoiseKind::uniform, eps}, 99);
    double max_shift = 0.0, mean_shift = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.p(); ++j) {
            const double shift = out.x(i, j) - d.x(i, j);
            max_shift = std::max(max_shift, std::abs(shift));
            mean_shift += shift;
        }
    mean_shift /= static_cast<double>(d.n() * d.p());
    CHECK(max_shift <= eps);
    CHECK(max_shift > 0.1 * eps);         // noise actually applied
    CHECK(std::abs(mean_shift) < 0.05);   // centered
}

TEST_CASE("gaussian noise has the requested standard deviation") {
    Rng rng(42);
    const Dataset d = stadion::test::as_dataset(stadion::test::random_matrix(200, 10, rng));
    const double eps = 0.5;
    const Dataset out = perturb(d, {NoiseKind::gaussian, eps}, 7);
    double sum = 0.0, sum_sq = 0.0;
    const double count = static_cast<double>(d.n() * d.p());
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.p(); ++j) {
            const double shift = out.x(i, j) - d.x(i, j);
            sum += shift;
            sum_sq += shift * shift;
        }
    const double mean = sum / count;
    const double std_dev = std::sqrt(sum_sq / count - mean * mean);
    CHECK(std::abs(mean) < 0.03);
    CHECK(std_dev == doctest::Approx(eps).epsilon(0.05));
}

TEST_CASE("perturbation is deterministic in the seed and exact at zero") {
    Rng rng(43);
    const Dataset d = stadion::test::as_dataset(stadion::test::random_matrix(30, 2, rng));
    for (NoiseKind kind : {NoiseKind::uniform, NoiseKind::gaussian, NoiseKind::bootstrap}) {
        const Dataset a = perturb(d, {kind, 0.2}, 5);
        const Dataset b = perturb(d, {kind, 0.2}, 5);
        const Dataset c = perturb(d, {kind, 0.2}, 6);
        INFO(to_string(kind));
        CHECK(a.x == b.x);
        CHECK_FALSE(a.x == c.x);
    }
    const Dataset zero = perturb(d, {NoiseKind::uniform, 0.0}, 5);
    CHECK(zero.x == d.x);
    const Dataset gzero = perturb(d, {NoiseKind::gaussian, 0.0}, 5);
    CHECK(gzero.x == d.x);
}

TEST_CASE("perturb validates its inputs") {
    Rng rng(44);
    const Dataset d = stadion::test::as_dataset(stadion::test::random_matrix(5, 2, rng));
    CHECK_THROWS_AS(perturb(d, {NoiseKind::uniform, -0.1}, 1), std::invalid_argument);
    Dataset empty;
    CHECK_THROWS_AS(perturb(empty, {NoiseKind::uniform, 0.1}, 1), std::invalid_argument);
}

TEST_CASE("bootstrap resamples rows of the original dataset") {
    Rng rng(45);
    const Dataset d = stadion::test::as_dataset(stadion::test::random_matrix(40, 2, rng));
    const std::vector<std::size_t> idx = bootstrap_indices(40, 3);
    REQUIRE(idx.size() == 40);
    for (std::size_t v : idx) CHECK(v < 40);
    // with replacement: essentially always at least one repeat at n=40
    std::vector<std::size_t> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end());

    const Dataset out = perturb(d, {NoiseKind::bootstrap, 0.7}, 3);
    REQUIRE(out.n() == 40);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(out.x(i, j) == d.x(idx[i], j));
}

TEST_CASE("the default grid is linear from zero to sqrt(p)") {
    const EpsilonGrid g = default_grid(4);
    REQUIRE(g.m() == 21);
    CHECK(g.values[0] == 0.0);
    CHECK(g.eps_max() == doctest::Approx(2.0).epsilon(1e-15));
    for (std::size_t i = 0; i < g.m(); ++i)
        CHECK(g.values[i] == doctest::Approx(2.0 * static_cast<double>(i) / 20.0).epsilon(1e-15));

    const EpsilonGrid custom = default_grid(4, 5, 1.0);
    REQUIRE(custom.m() == 5);
    CHECK(custom.values == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

    CHECK_THROWS_AS(default_grid(4, 1), std::invalid_argument);
}

TEST_CASE("explicit grids must start at zero and increase") {
    CHECK_NOTHROW(make_grid({0.0, 0.1, 0.5}));
    CHECK_THROWS_AS(make_grid({0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid({0.0, 0.2, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid({0.0}), std::invalid_argument);
}

TEST_CASE("noise names round-trip") {
    for (NoiseKind k : {NoiseKind::uniform, NoiseKind::gaussian, NoiseKind::bootstrap})
        CHECK(noise_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(noise_from_string("laplace"), std::invalid_argument);
}
