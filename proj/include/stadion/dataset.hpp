#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stadion/matrix.hpp"
#include "stadion/partition.hpp"

namespace stadion {

// Raised for malformed input data (files, shapes, empty inputs).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scaling { raw, standardized };

// A numeric dataset. `standardized` output keeps the per-column moments so raw
// coordinates can be recovered; zero-variance columns are flagged and mapped to
// zeros instead of dividing by zero.
struct Dataset {
    Matrix x;
    Scaling scaling = Scaling::raw;
    std::vector<double> column_means;   // filled by standardize()
    std::vector<double> column_stds;    // sample std (N-1 denominator)
    std::vector<std::size_t> zero_variance_columns;

    std::size_t n() const { return x.rows(); }
    std::size_t p() const { return x.cols(); }

    Dataset take_rows(const std::vector<std::size_t>& idx) const;
};

struct LabeledDataset {
    Dataset data;
    Partition labels;
};

// Z-scores every column with the sample standard deviation. Standardizing an
// already standardized dataset is an error.
Dataset standardize(const Dataset& d);

}  // namespace stadion
