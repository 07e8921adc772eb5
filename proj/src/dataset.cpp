#include "stadion/dataset.hpp"

#include <cmath>

namespace stadion {

Dataset Dataset::take_rows(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.x = x.take_rows(idx);
    out.scaling = scaling;  // a row subset keeps its scaling lineage
    out.column_means = column_means;
    out.column_stds = column_stds;
    out.zero_variance_columns = zero_variance_columns;
    return out;
}

Dataset standardize(const Dataset& d) {
    if (d.scaling == Scaling::standardized)
        throw std::invalid_argument("standardize: dataset is already standardized");
    if (d.n() < 2) throw std::invalid_argument("standardize: need at least 2 rows");
    const std::size_t n = d.n(), p = d.p();
    Dataset out;
    out.scaling = Scaling::standardized;
    out.column_means.resize(p);
    out.column_stds.resize(p);
    out.x = Matrix(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += d.x(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = d.x(i, j) - mean;
            ss += c * c;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        out.column_means[j] = mean;
        out.column_stds[j] = sd;
        if (sd == 0.0) {
            out.zero_variance_columns.push_back(j);
            for (std::size_t i = 0; i < n; ++i) out.x(i, j) = 0.0;
        } else {
            for (std::size_t i = 0; i < n; ++i) out.x(i, j) = (d.x(i, j) - mean) / sd;
        }
    }
    return out;
}

}  // namespace stadion
