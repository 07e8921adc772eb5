#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stadion {

// Dense row-major matrix of doubles. Rows are observations, columns features.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    Matrix take_rows(const std::vector<std::size_t>& idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            if (idx[r] >= rows_) throw std::out_of_range("Matrix::take_rows: index out of range");
            const double* src = row(idx[r]);
            double* dst = out.row(r);
            for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
        }
        return out;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double squared_distance(const double* a, const double* b, std::size_t p) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

}  // namespace stadion
