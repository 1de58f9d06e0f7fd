#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace epc {

/// Dense row-major matrix of 64-bit floats. Embedding matrices are the
/// N x d case (row i = point x_i); attention weights reuse the same type.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * cols_, cols_);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(data_.data() + i * cols_, cols_);
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Throws ValidationError naming the offending row/column on NaN or Inf,
/// or on an empty matrix when require_nonempty is set.
void validate_matrix(const Matrix& m, bool require_nonempty = true);

/// Returns a copy of m with rows reordered so row k of the result is
/// row perm[k] of m. perm must be a permutation of {0..rows-1}.
Matrix permute_rows(const Matrix& m, std::span<const std::size_t> perm);

/// True iff perm has size n and is a bijection on {0..n-1}.
bool is_permutation(std::span<const std::size_t> perm, std::size_t n);

} // namespace epc
