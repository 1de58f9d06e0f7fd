#include "epc/matrix.hpp"

#include <cmath>
#include <string>

#include "epc/errors.hpp"

namespace epc {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError("matrix data size " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
}

void validate_matrix(const Matrix& m, bool require_nonempty) {
    if (require_nonempty && (m.rows() == 0 || m.cols() == 0)) {
        throw ValidationError("matrix must have at least one row and one column");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                throw ValidationError("non-finite value at row " + std::to_string(i) +
                                      ", column " + std::to_string(j));
            }
        }
    }
}

bool is_permutation(std::span<const std::size_t> perm, std::size_t n) {
    if (perm.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (std::size_t v : perm) {
        if (v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Matrix permute_rows(const Matrix& m, std::span<const std::size_t> perm) {
    if (!is_permutation(perm, m.rows())) {
        throw ValidationError("row permutation is not a bijection on {0.." +
                              std::to_string(m.rows() == 0 ? 0 : m.rows() - 1) + "}");
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.rows(); ++k) {
        auto src = m.row(perm[k]);
        auto dst = out.row(k);
        for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[j];
    }
    return out;
}

} // namespace epc
