#include "stadion/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stadion {

bool measure_is_distance(Measure m) {
    switch (m) {
        case Measure::vi:
        case Measure::nvi:
        case Measure::id:
        case Measure::nid:
            return true;
        default:
            return false;
    }
}

double perfect_score(Measure m) { return measure_is_distance(m) ? 0.0 : 1.0; }

const char* to_string(Measure m) {
    switch (m) {
        case Measure::ri: return "ri";
        case Measure::ari1: return "ari1";
        case Measure::ari2: return "ari2";
        case Measure::fm: return "fm";
        case Measure::jacc: return "jacc";
        case Measure::mi: return "mi";
        case Measure::ami: return "ami";
        case Measure::vi: return "vi";
        case Measure::nvi: return "nvi";
        case Measure::id: return "id";
        case Measure::nid: return "nid";
        case Measure::nmi1: return "nmi1";
        case Measure::nmi2: return "nmi2";
        case Measure::nmi3: return "nmi3";
        case Measure::nmi4: return "nmi4";
        case Measure::nmi5: return "nmi5";
    }
    return "?";
}

Measure measure_from_string(const std::string& name) {
    static const std::pair<const char*, Measure> table[] = {
        {"ri", Measure::ri},     {"ari1", Measure::ari1}, {"ari2", Measure::ari2},
        {"fm", Measure::fm},     {"jacc", Measure::jacc}, {"mi", Measure::mi},
        {"ami", Measure::ami},   {"vi", Measure::vi},     {"nvi", Measure::nvi},
        {"id", Measure::id},     {"nid", Measure::nid},   {"nmi1", Measure::nmi1},
        {"nmi2", Measure::nmi2}, {"nmi3", Measure::nmi3}, {"nmi4", Measure::nmi4},
        {"nmi5", Measure::nmi5},
    };
    for (const auto& [s, m] : table)
        if (name == s) return m;
    throw std::invalid_argument("unknown measure: " + name);
}

namespace {

double plogp_sum(const std::vector<std::int64_t>& counts, double n) {
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

double entropy_of_row_sums(const ContingencyTable& t) {
    return plogp_sum(t.row_sums, static_cast<double>(t.n));
}

double entropy_of_col_sums(const ContingencyTable& t) {
    return plogp_sum(t.col_sums, static_cast<double>(t.n));
}

double joint_entropy(const ContingencyTable& t) {
    return plogp_sum(t.counts, static_cast<double>(t.n));
}

double mutual_information(const ContingencyTable& t) {
    const double n = static_cast<double>(t.n);
    double mi = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
        const double ai = static_cast<double>(t.row_sums[i]);
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < t.cols; ++j) {
            const std::int64_t c = t.at(i, j);
            if (c == 0) continue;
            const double nij = static_cast<double>(c);
            const double bj = static_cast<double>(t.col_sums[j]);
            mi += (nij / n) * (std::log(n * nij) - std::log(ai * bj));
        }
    }
    return std::max(mi, 0.0);
}

double expected_mutual_information(const ContingencyTable& t) {
    const double n = static_cast<double>(t.n);
    const double lg_n1 = std::lgamma(n + 1.0);
    double emi = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
        const std::int64_t ai = t.row_sums[i];
        if (ai == 0) continue;
        const double dai = static_cast<double>(ai);
        const double lg_ai = std::lgamma(dai + 1.0);
        const double lg_nai = std::lgamma(n - dai + 1.0);
        for (std::size_t j = 0; j < t.cols; ++j) {
            const std::int64_t bj = t.col_sums[j];
            if (bj == 0) continue;
            const double dbj = static_cast<double>(bj);
            const double lg_prefix =
                lg_ai + std::lgamma(dbj + 1.0) + lg_nai + std::lgamma(n - dbj + 1.0) - lg_n1;
            const std::int64_t lo = std::max<std::int64_t>(1, ai + bj - t.n);
            const std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double dn = static_cast<double>(nij);
                const double log_p = lg_prefix - std::lgamma(dn + 1.0) -
                                     std::lgamma(dai - dn + 1.0) - std::lgamma(dbj - dn + 1.0) -
                                     std::lgamma(n - dai - dbj + dn + 1.0);
                emi += (dn / n) * (std::log(n * dn) - std::log(dai * dbj)) * std::exp(log_p);
            }
        }
    }
    return emi;
}

namespace {

constexpr double kTiny = 1e-12;

bool pair_structures_agree(const PairCounts& pc) { return pc.n10 == 0 && pc.n01 == 0; }

double rand_index(const PairCounts& pc) {
    const double total = static_cast<double>(pc.total());
    if (total == 0.0) return 1.0;  // single item
    return static_cast<double>(pc.n11 + pc.n00) / total;
}

double adjusted_rand1(const PairCounts& pc) {
    const double n11 = static_cast<double>(pc.n11), n10 = static_cast<double>(pc.n10);
    const double n01 = static_cast<double>(pc.n01), n00 = static_cast<double>(pc.n00);
    const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if (den == 0.0) return pair_structures_agree(pc) ? 1.0 : 0.0;
    return 2.0 * (n00 * n11 - n01 * n10) / den;
}

double adjusted_rand2(const ContingencyTable& t) {
    const double n = static_cast<double>(t.n);
    double sum_sq = 0.0, sa = 0.0, sb = 0.0;
    for (std::int64_t c : t.counts) sum_sq += static_cast<double>(c) * static_cast<double>(c);
    for (std::int64_t r : t.row_sums) sa += static_cast<double>(r) * static_cast<double>(r);
    for (std::int64_t c : t.col_sums) sb += static_cast<double>(c) * static_cast<double>(c);
    const double expected = sa * sb / (n * n);
    const double den = 0.5 * (sa + sb) - expected;
    if (std::abs(den) < kTiny) {
        const PairCounts pc = pair_counts(t);
        return pair_structures_agree(pc) ? 1.0 : 0.0;
    }
    return (sum_sq - expected) / den;
}

double fowlkes_mallows(const PairCounts& pc) {
    const double a = static_cast<double>(pc.n11 + pc.n10);
    const double b = static_cast<double>(pc.n11 + pc.n01);
    if (a == 0.0 || b == 0.0) return 0.0;
    return static_cast<double>(pc.n11) / std::sqrt(a * b);
}

double jaccard(const PairCounts& pc) {
    const std::uint64_t den = pc.n11 + pc.n10 + pc.n01;
    if (den == 0) return 1.0;  // no co-clustered pairs on either side: structures agree
    return static_cast<double>(pc.n11) / static_cast<double>(den);
}

}  // namespace

double compare(Measure m, const Partition& a, const Partition& b, int cap) {
    const ContingencyTable t = contingency(a, b, cap);
    const bool a_trivial = distinct_labels(a) == 1;
    const bool b_trivial = distinct_labels(b) == 1;
    if (a_trivial && b_trivial) return perfect_score(m);

    switch (m) {
        case Measure::ri:
            return rand_index(pair_counts(t));
        case Measure::ari1:
            return adjusted_rand1(pair_counts(t));
        case Measure::ari2:
            return adjusted_rand2(t);
        case Measure::fm:
            return fowlkes_mallows(pair_counts(t));
        case Measure::jacc:
            return jaccard(pair_counts(t));
        default:
            break;
    }

    const double ha = entropy_of_row_sums(t);
    const double hb = entropy_of_col_sums(t);
    const double hj = joint_entropy(t);
    const double mi = std::min(mutual_information(t), std::min(ha, hb));
    const double hmax = std::max(ha, hb);
    const double hmin = std::min(ha, hb);

    switch (m) {
        case Measure::mi:
            return mi;
        case Measure::vi:
            return std::max(ha + hb - 2.0 * mi, 0.0);
        case Measure::id:
            return std::max(hmax - mi, 0.0);
        case Measure::nvi:
            if (hj < kTiny) return 0.0;
            return std::clamp((ha + hb - 2.0 * mi) / hj, 0.0, 1.0);
        case Measure::nid:
            if (hmax < kTiny) return 0.0;
            return std::clamp((hmax - mi) / hmax, 0.0, 1.0);
        case Measure::nmi1:
            if (hmax < kTiny) return 0.0;
            return std::clamp(mi / hmax, 0.0, 1.0);
        case Measure::nmi2:
            if (hmin < kTiny) return 0.0;
            return std::clamp(mi / hmin, 0.0, 1.0);
        case Measure::nmi3:
            if (ha < kTiny || hb < kTiny) return 0.0;
            return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
        case Measure::nmi4:
            if (ha + hb < kTiny) return 0.0;
            return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
        case Measure::nmi5:
            if (hj < kTiny) return 0.0;
            return std::clamp(mi / hj, 0.0, 1.0);
        case Measure::ami: {
            const double emi = expected_mutual_information(t);
            const double den = hmax - emi;
            if (std::abs(den) < kTiny)
                return pair_structures_agree(pair_counts(t)) ? 1.0 : 0.0;
            return std::min((mi - emi) / den, 1.0);
        }
        default:
            throw std::logic_error("compare: unhandled measure");
    }
}

}  // namespace stadion
