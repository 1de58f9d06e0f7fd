#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "epc/matrix.hpp"

namespace epc {

/// Uniform discrete measure: N points in R^d, each carrying mass 1/N.
/// The point sequence is storage order only; identity is the multiset.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(std::size_t n, std::size_t dim)
        : n_(n), dim_(dim), xs_(n * dim, 0.0) {}
    PointCloud(std::size_t n, std::size_t dim, std::vector<double> xs);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(xs_.data() + i * dim_, dim_);
    }
    std::span<double> point(std::size_t i) {
        return std::span<double>(xs_.data() + i * dim_, dim_);
    }

    const std::vector<double>& values() const { return xs_; }

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> xs_;
};

/// Row i of the matrix becomes point i of the cloud. Validates finiteness.
PointCloud matrix_to_cloud(const Matrix& e);

/// Materializes one matrix representative of the cloud's equivalence class:
/// row k of the output is point order[k]. order must be a permutation.
Matrix cloud_to_matrix(const PointCloud& mu, std::span<const std::size_t> order);

/// True iff some pairing sigma puts every pair within tol in the max norm.
/// tol == 0 uses a sorted exact comparison; tol > 0 solves a feasibility
/// assignment on the thresholded cost. Duplicate points are fine.
bool clouds_equivalent(const PointCloud& mu, const PointCloud& nu, double tol);

/// Returns a copy of mu with vector v added to every point.
PointCloud translate(const PointCloud& mu, std::span<const double> v);

} // namespace epc
