#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "stadion/measures.hpp"
#include "stadion/partition.hpp"
#include "stadion/rng.hpp"

using namespace stadion;
using stadion::test::random_partition;

namespace {

// Independent oracle: categorize every unordered item pair directly.
struct PairOracle {
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
};

PairOracle pair_oracle(const Partition& a, const Partition& b) {
    PairOracle o;
    for (std::size_t i = 0; i < a.n(); ++i) {
        for (std::size_t j = i + 1; j < a.n(); ++j) {
            const bool sa = a.labels[i] == a.labels[j];
            const bool sb = b.labels[i] == b.labels[j];
            if (sa && sb)
                o.n11 += 1;
            else if (sa)
                o.n10 += 1;
            else if (sb)
                o.n01 += 1;
            else
                o.n00 += 1;
        }
    }
    return o;
}

// Independent oracle: entropies straight from a probability map.
struct InfoOracle {
    double ha = 0, hb = 0, hj = 0, mi = 0;
};

InfoOracle info_oracle(const Partition& a, const Partition& b) {
    const double n = static_cast<double>(a.n());
    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pj;
    for (std::size_t i = 0; i < a.n(); ++i) {
        pa[a.labels[i]] += 1.0 / n;
        pb[b.labels[i]] += 1.0 / n;
        pj[{a.labels[i], b.labels[i]}] += 1.0 / n;
    }
    InfoOracle o;
    for (auto& [_, p] : pa) o.ha -= p * std::log(p);
    for (auto& [_, p] : pb) o.hb -= p * std::log(p);
    for (auto& [key, p] : pj) {
        o.hj -= p * std::log(p);
        o.mi += p * std::log(p / (pa[key.first] * pb[key.second]));
    }
    return o;
}

double oracle_value(Measure m, const Partition& a, const Partition& b) {
    const PairOracle pc = pair_oracle(a, b);
    const InfoOracle in = info_oracle(a, b);
    const double n = static_cast<double>(a.n());
    const double hmax = std::max(in.ha, in.hb);
    const double hmin = std::min(in.ha, in.hb);
    switch (m) {
        case Measure::ri:
            return (pc.n11 + pc.n00) / (pc.n11 + pc.n10 + pc.n01 + pc.n00);
        case Measure::ari1:
            return 2.0 * (pc.n00 * pc.n11 - pc.n01 * pc.n10) /
                   ((pc.n00 + pc.n01) * (pc.n01 + pc.n11) + (pc.n00 + pc.n10) * (pc.n10 + pc.n11));
        case Measure::ari2: {
            // squared margin sums recovered from the pair categories
            const double sum_sq = 2.0 * pc.n11 + n;
            const double sa = 2.0 * (pc.n11 + pc.n10) + n;
            const double sb = 2.0 * (pc.n11 + pc.n01) + n;
            const double expected = sa * sb / (n * n);
            return (sum_sq - expected) / (0.5 * (sa + sb) - expected);
        }
        case Measure::fm:
            return pc.n11 / std::sqrt((pc.n11 + pc.n10) * (pc.n11 + pc.n01));
        case Measure::jacc:
            return pc.n11 / (pc.n11 + pc.n10 + pc.n01);
        case Measure::mi:
            return in.mi;
        case Measure::vi:
            return in.ha + in.hb - 2.0 * in.mi;
        case Measure::nvi:
            return (in.ha + in.hb - 2.0 * in.mi) / in.hj;
        case Measure::id:
            return hmax - in.mi;
        case Measure::nid:
            return (hmax - in.mi) / hmax;
        case Measure::nmi1:
            return in.mi / hmax;
        case Measure::nmi2:
            return in.mi / hmin;
        case Measure::nmi3:
            return in.mi / std::sqrt(in.ha * in.hb);
        case Measure::nmi4:
            return 2.0 * in.mi / (in.ha + in.hb);
        case Measure::nmi5:
            return in.mi / in.hj;
        default:
            throw std::logic_error("no oracle");
    }
}

// Random partition pair where neither side is trivial and margins have
// at least two clusters, so every ratio oracle is well-defined.
std::pair<Partition, Partition> random_pair(Rng& rng, std::size_t n_max = 60, int k_max = 6) {
    for (;;) {
        std::size_t n = 4 + rng.index(n_max - 3);
        Partition a = random_partition(n, k_max, rng);
        Partition b = random_partition(n, k_max, rng);
        if (distinct_labels(a) > 1 && distinct_labels(b) > 1) return {a, b};
    }
}

const Measure kAllMeasures[] = {
    Measure::ri,   Measure::ari1, Measure::ari2, Measure::fm,   Measure::jacc, Measure::mi,
    Measure::ami,  Measure::vi,   Measure::nvi,  Measure::id,   Measure::nid,  Measure::nmi1,
    Measure::nmi2, Measure::nmi3, Measure::nmi4, Measure::nmi5,
};

}  // namespace

TEST_CASE("pair counts match direct enumeration and cover all pairs") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto [a, b] = random_pair(rng, 200, 8);
        const PairCounts pc = pair_counts(contingency(a, b));
        const PairOracle o = pair_oracle(a, b);
        CHECK(static_cast<double>(pc.n11) == o.n11);
        CHECK(static_cast<double>(pc.n10) == o.n10);
        CHECK(static_cast<double>(pc.n01) == o.n01);
        CHECK(static_cast<double>(pc.n00) == o.n00);
        CHECK(pc.total() == a.n() * (a.n() - 1) / 2);
    }
}

TEST_CASE("count-based measures match the pair enumeration oracle") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        auto [a, b] = random_pair(rng);
        for (Measure m : {Measure::ri, Measure::ari1, Measure::ari2, Measure::fm, Measure::jacc}) {
            const double got = compare(m, a, b);
            const double want = oracle_value(m, a, b);
            if (!std::isfinite(want)) continue;  // 0/0 draws exercise the convention tests
            INFO(to_string(m), " trial ", trial);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("information measures match the probability-table oracle") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        auto [a, b] = random_pair(rng);
        for (Measure m : {Measure::mi, Measure::vi, Measure::nvi, Measure::id, Measure::nid,
                          Measure::nmi1, Measure::nmi2, Measure::nmi3, Measure::nmi4,
                          Measure::nmi5}) {
            const double got = compare(m, a, b);
            const double want = oracle_value(m, a, b);
            INFO(to_string(m), " trial ", trial);
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("worked four-item example") {
    const Partition a = make_partition({0, 0, 1, 1});
    const Partition b = make_partition({0, 1, 0, 1});
    CHECK(compare(Measure::ari1, a, b) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(compare(Measure::ri, a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(compare(Measure::jacc, a, b) == 0.0);
    CHECK(compare(Measure::fm, a, b) == 0.0);
    // margins are uniform, so both entropies are log 2 and MI is 0
    CHECK(compare(Measure::mi, a, b) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(compare(Measure::vi, a, b) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(compare(Measure::nid, a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perfect agreement scores perfectly") {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        auto [a, _] = random_pair(rng);
        for (Measure m : kAllMeasures) {
            INFO(to_string(m));
            if (m == Measure::mi) {
                // the only unnormalized similarity: self-agreement is the entropy
                CHECK(compare(m, a, a) == doctest::Approx(info_oracle(a, a).ha).epsilon(1e-12));
            } else {
                CHECK(compare(m, a, a) == doctest::Approx(perfect_score(m)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("all measures are symmetric") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        auto [a, b] = random_pair(rng);
        for (Measure m : kAllMeasures) {
            INFO(to_string(m));
            CHECK(compare(m, a, b) == doctest::Approx(compare(m, b, a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("relabeling clusters does not change any measure") {
    Rng rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        auto [a, b] = random_pair(rng);
        std::vector<int> perm(static_cast<std::size_t>(b.k));
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);
        Partition b2 = b;
        for (int& l : b2.labels) l = perm[static_cast<std::size_t>(l)];
        for (Measure m : kAllMeasures) {
            INFO(to_string(m));
            CHECK(compare(m, a, b) == doctest::Approx(compare(m, a, b2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalized measures stay inside [0, 1]") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto [a, b] = random_pair(rng);
        for (Measure m : {Measure::ri, Measure::jacc, Measure::fm, Measure::nvi, Measure::nid,
                          Measure::nmi1, Measure::nmi2, Measure::nmi3, Measure::nmi4,
                          Measure::nmi5}) {
            const double v = compare(m, a, b);
            INFO(to_string(m));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(compare(Measure::ari1, a, b) <= 1.0 + 1e-12);
        CHECK(compare(Measure::ari2, a, b) <= 1.0 + 1e-12);
        CHECK(compare(Measure::ami, a, b) <= 1.0 + 1e-12);
        CHECK(compare(Measure::mi, a, b) >= 0.0);
        CHECK(compare(Measure::vi, a, b) >= 0.0);
        CHECK(compare(Measure::id, a, b) >= 0.0);
    }
}

TEST_CASE("mutual information never exceeds either entropy") {
    Rng rng(18);
    for (int trial = 0; trial < 100; ++trial) {
        auto [a, b] = random_pair(rng);
        const InfoOracle in = info_oracle(a, b);
        CHECK(compare(Measure::mi, a, b) <= std::min(in.ha, in.hb) + 1e-12);
    }
}

TEST_CASE("variation of information satisfies the triangle inequality") {
    Rng rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng.index(28);
        const Partition a = random_partition(n, 5, rng);
        const Partition b = random_partition(n, 5, rng);
        const Partition c = random_partition(n, 5, rng);
        const double ab = compare(Measure::vi, a, b);
        const double bc = compare(Measure::vi, b, c);
        const double ac = compare(Measure::vi, a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("expected mutual information matches a permutation Monte Carlo estimate") {
    Rng rng(20);
    Partition a = random_partition(40, 3, rng);
    Partition b = random_partition(40, 4, rng);
    REQUIRE(distinct_labels(a) > 1);
    REQUIRE(distinct_labels(b) > 1);

    const double exact = expected_mutual_information(contingency(a, b));

    // shuffling one side resamples the hypergeometric null with fixed margins
    const int draws = 20000;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<int> shuffled = b.labels;
    for (int t = 0; t < draws; ++t) {
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
        Partition bs{shuffled, b.k};
        const double mi = mutual_information(contingency(a, bs));
        sum += mi;
        sum_sq += mi * mi;
    }
    const double mean = sum / draws;
    const double var = (sum_sq / draws - mean * mean) / draws;
    const double se = std::sqrt(var);
    CHECK(std::abs(exact - mean) < 3.0 * se);
}

TEST_CASE("degenerate partitions follow the documented conventions") {
    const Partition one = make_partition({0, 0, 0, 0});
    const Partition split = make_partition({0, 0, 1, 1});
    const Partition singletons = make_partition({0, 1, 2, 3});

    SUBCASE("two trivial partitions agree perfectly") {
        for (Measure m : kAllMeasures) {
            INFO(to_string(m));
            CHECK(compare(m, one, one) == perfect_score(m));
        }
    }

    SUBCASE("one trivial side") {
        CHECK(compare(Measure::mi, one, split) == 0.0);
        CHECK(compare(Measure::nmi2, one, split) == 0.0);
        CHECK(compare(Measure::nmi3, one, split) == 0.0);
        CHECK(compare(Measure::vi, one, split) == doctest::Approx(std::log(2.0)));
        CHECK(compare(Measure::nvi, one, split) == doctest::Approx(1.0));
        CHECK(compare(Measure::nid, one, split) == doctest::Approx(1.0));
        CHECK(compare(Measure::ami, one, split) == 0.0);
    }

    SUBCASE("identical all-singleton partitions") {
        CHECK(compare(Measure::ari1, singletons, singletons) == 1.0);
        CHECK(compare(Measure::jacc, singletons, singletons) == 1.0);
        CHECK(compare(Measure::ri, singletons, singletons) == 1.0);
        // no co-clustered pair exists, so the geometric mean form stays at 0
        CHECK(compare(Measure::fm, singletons, singletons) == 0.0);
        CHECK(compare(Measure::ami, singletons, singletons) == 1.0);
    }
}

TEST_CASE("measure names round-trip and unknown names are rejected") {
    for (Measure m : kAllMeasures) CHECK(measure_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(measure_from_string("nmi6"), std::invalid_argument);
}

TEST_CASE("contingency refuses sides above the cluster-count cap") {
    std::vector<int> a(5000), b(5000);
    for (int i = 0; i < 5000; ++i) {
        a[static_cast<std::size_t>(i)] = i;  // all singletons: k = 5000
        b[static_cast<std::size_t>(i)] = i % 2;
    }
    const Partition pa = make_partition(a);
    const Partition pb = make_partition(b);
    CHECK_THROWS_AS(contingency(pa, pb, 4096), std::invalid_argument);
    CHECK_NOTHROW(contingency(pa, pb, 5000));
}

TEST_CASE("partitions of different lengths are rejected") {
    const Partition a = make_partition({0, 1, 0});
    const Partition b = make_partition({0, 1});
    CHECK_THROWS_AS(contingency(a, b), std::invalid_argument);
}
