#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "stadion/clusterer.hpp"
#include "stadion/kmeans.hpp"
#include "stadion/measures.hpp"
#include "stadion/synthetic.hpp"

using namespace stadion;

namespace {

LabeledDataset two_far_blobs(std::uint64_t seed, int n = 100) {
    GeneratorSpec spec;
    spec.kind = GenKind::gaussian_blobs;
    spec.n = n;
    spec.p = 2;
    spec.blobs.centers = {{0.0, 0.0}, {50.0, 0.0}};
    spec.blobs.stds = {1.0, 1.0};
    spec.blobs.counts = {n / 2, n - n / 2};
    return generate(spec, seed);
}

double sse(const Matrix& x, const Matrix& centers, const Partition& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        total += squared_distance(x.row(i), centers.row(static_cast<std::size_t>(p.labels[i])),
                                  x.cols());
    return total;
}

}  // namespace

TEST_CASE("lloyd iterations never increase the cost") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = stadion::test::random_matrix(60, 3, rng, 2.0);
        KMeansConfig cfg;
        cfg.runs = 3;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const KMeansResult r = kmeans_fit(x, 4, cfg);
        for (std::size_t i = 1; i < r.iteration_costs.size(); ++i)
            CHECK(r.iteration_costs[i] <= r.iteration_costs[i - 1] + 1e-9);
    }
}

TEST_CASE("the kept run has the lowest cost and the reported cost is consistent") {
    Rng rng(22);
    const Matrix x = stadion::test::random_matrix(80, 2, rng, 3.0);
    KMeansConfig cfg;
    cfg.runs = 10;
    cfg.seed = 7;
    const KMeansResult r = kmeans_fit(x, 5, cfg);
    REQUIRE(r.run_costs.size() == 10);
    const double best = *std::min_element(r.run_costs.begin(), r.run_costs.end());
    CHECK(r.cost == best);
    CHECK(r.run_costs[static_cast<std::size_t>(r.best_run)] == best);
    CHECK(r.cost == doctest::Approx(sse(x, r.centers, r.assignment)).epsilon(1e-9));
}

TEST_CASE("well-separated blobs are recovered exactly across seeds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LabeledDataset d = two_far_blobs(seed);
        KMeansConfig cfg;
        cfg.seed = seed * 11 + 1;
        const KMeansResult r = kmeans_fit(d.data.x, 2, cfg);
        CHECK(compare(Measure::ari1, d.labels, r.assignment) == 1.0);
    }
}

TEST_CASE("fits are deterministic in the seed") {
    Rng rng(23);
    const Matrix x = stadion::test::random_matrix(70, 2, rng);
    KMeansConfig cfg;
    cfg.seed = 99;
    const KMeansResult a = kmeans_fit(x, 3, cfg);
    const KMeansResult b = kmeans_fit(x, 3, cfg);
    CHECK(a.assignment.labels == b.assignment.labels);
    CHECK(a.centers == b.centers);
    CHECK(a.cost == b.cost);
    cfg.seed = 100;
    const KMeansResult c = kmeans_fit(x, 3, cfg);
    CHECK(a.cost == doctest::Approx(c.cost).epsilon(0.5));  // same data, similar optimum
}

TEST_CASE("assignment ties go to the lowest center index") {
    Matrix centers(2, 1);
    centers(0, 0) = 0.0;
    centers(1, 0) = 2.0;
    Matrix x(1, 1);
    x(0, 0) = 1.0;  // equidistant
    const Partition p = assign_to_centers(x, centers);
    CHECK(p.labels[0] == 0);
}

TEST_CASE("reported labels are a fixed point of center assignment") {
    Rng rng(24);
    const Matrix x = stadion::test::random_matrix(90, 3, rng, 2.5);
    KMeansConfig cfg;
    cfg.seed = 5;
    const KMeansResult r = kmeans_fit(x, 4, cfg);
    const Partition again = assign_to_centers(x, r.centers);
    CHECK(again.labels == r.assignment.labels);
}

TEST_CASE("k=1 yields the centroid, k=n yields singletons") {
    Rng rng(25);
    const Matrix x = stadion::test::random_matrix(12, 2, rng);
    KMeansConfig cfg;
    cfg.seed = 3;

    const KMeansResult one = kmeans_fit(x, 1, cfg);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 12; ++i) mean += x(i, j);
        mean /= 12.0;
        CHECK(one.centers(0, j) == doctest::Approx(mean).epsilon(1e-12));
    }
    CHECK(distinct_labels(one.assignment) == 1);

    const KMeansResult full = kmeans_fit(x, 12, cfg);
    CHECK(full.cost == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(distinct_labels(full.assignment) == 12);
}

TEST_CASE("asking for more clusters than distinct rows is an error") {
    Matrix x(4, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 1.0;
    x(2, 0) = 2.0;
    x(3, 0) = 2.0;
    KMeansConfig cfg;
    CHECK_THROWS_AS(kmeans_fit(x, 3, cfg), std::invalid_argument);
    CHECK_NOTHROW(kmeans_fit(x, 2, cfg));
    CHECK(count_distinct_rows(x, 10) == 2);
}

TEST_CASE("k-means++ seeding puts initial centers in both far blobs") {
    const LabeledDataset d = two_far_blobs(1, 80);
    int split = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const Matrix centers = kmeanspp_init(d.data.x, 2, rng);
        // one center below x=25, one above
        const bool left0 = centers(0, 0) < 25.0;
        const bool left1 = centers(1, 0) < 25.0;
        if (left0 != left1) ++split;
    }
    CHECK(split >= 45);
}

TEST_CASE("random seeding picks distinct rows") {
    Rng data_rng(26);
    const Matrix x = stadion::test::random_matrix(30, 2, data_rng);
    Rng rng(8);
    const Matrix centers = random_init(x, 5, rng);
    std::set<std::pair<double, double>> seen;
    for (std::size_t c = 0; c < 5; ++c) {
        bool is_row = false;
        for (std::size_t i = 0; i < 30; ++i)
            if (centers(c, 0) == x(i, 0) && centers(c, 1) == x(i, 1)) is_row = true;
        CHECK(is_row);
        seen.insert({centers(c, 0), centers(c, 1)});
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("clusterer front-end dispatches and validates") {
    const LabeledDataset d = two_far_blobs(2, 60);
    ClustererConfig cfg;
    cfg.seed = 4;

    const FittedModel km = fit(cfg, d.data, 2);
    CHECK(km.algorithm == Algorithm::kmeans);
    CHECK(compare(Measure::ari1, d.labels, km.partition) == 1.0);
    CHECK(km.centers.rows() == 2);

    cfg.algorithm = Algorithm::ward;
    const FittedModel w = fit(cfg, d.data, 2);
    CHECK(w.algorithm == Algorithm::ward);
    CHECK(compare(Measure::ari1, d.labels, w.partition) == 1.0);
    CHECK_FALSE(w.merges.empty());

    CHECK_THROWS_AS(fit(cfg, d.data, 0), std::invalid_argument);
    CHECK_THROWS_AS(fit(cfg, d.data, 61), std::invalid_argument);
}

TEST_CASE("extension labels new points by the fitted centers") {
    const LabeledDataset d = two_far_blobs(3, 60);
    ClustererConfig cfg;
    cfg.seed = 12;
    const FittedModel km = fit(cfg, d.data, 2);

    // the training data itself reproduces the fit labels exactly
    const Partition same = extend(km, d.data);
    CHECK(same.labels == km.partition.labels);

    Dataset fresh;
    fresh.x = Matrix(2, 2);
    fresh.x(0, 0) = -1.0;
    fresh.x(0, 1) = 0.5;
    fresh.x(1, 0) = 51.0;
    fresh.x(1, 1) = -0.5;
    const Partition ext = extend(km, fresh);
    const int left = km.partition.labels[0];
    CHECK(ext.labels[0] == left);
    CHECK(ext.labels[1] == 1 - left);

    cfg.algorithm = Algorithm::ward;
    const FittedModel w = fit(cfg, d.data, 2);
    CHECK_THROWS_AS(extend(w, fresh), std::invalid_argument);
}

TEST_CASE("algorithm names round-trip") {
    CHECK(algorithm_from_string("kmeans") == Algorithm::kmeans);
    CHECK(algorithm_from_string("ward") == Algorithm::ward);
    CHECK_THROWS_AS(algorithm_from_string("dbscan"), std::invalid_argument);
    CHECK(kmeans_init_from_string("kmeans++") == KMeansInit::kmeanspp);
    CHECK(kmeans_init_from_string("random") == KMeansInit::random);
}
