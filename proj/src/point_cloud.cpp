#include "epc/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "epc/assignment.hpp"
#include "epc/errors.hpp"

namespace epc {

PointCloud::PointCloud(std::size_t n, std::size_t dim, std::vector<double> xs)
    : n_(n), dim_(dim), xs_(std::move(xs)) {
    if (xs_.size() != n_ * dim_) {
        throw ValidationError("point cloud storage size " + std::to_string(xs_.size()) +
                              " does not match " + std::to_string(n_) + " points in R^" +
                              std::to_string(dim_));
    }
}

PointCloud matrix_to_cloud(const Matrix& e) {
    validate_matrix(e);
    return PointCloud(e.rows(), e.cols(), e.data());
}

Matrix cloud_to_matrix(const PointCloud& mu, std::span<const std::size_t> order) {
    if (!is_permutation(order, mu.size())) {
        throw ValidationError("order is not a permutation of {0.." +
                              std::to_string(mu.size() == 0 ? 0 : mu.size() - 1) + "}");
    }
    Matrix out(mu.size(), mu.dim());
    for (std::size_t k = 0; k < mu.size(); ++k) {
        auto src = mu.point(order[k]);
        auto dst = out.row(k);
        for (std::size_t j = 0; j < mu.dim(); ++j) dst[j] = src[j];
    }
    return out;
}

namespace {

bool point_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sorted index order gives a canonical sequence for exact multiset comparison.
std::vector<std::size_t> sorted_order(const PointCloud& mu) {
    std::vector<std::size_t> idx(mu.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return point_less(mu.point(a), mu.point(b));
    });
    return idx;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        m = std::max(m, std::abs(a[c] - b[c]));
    }
    return m;
}

} // namespace

bool clouds_equivalent(const PointCloud& mu, const PointCloud& nu, double tol) {
    if (mu.size() != nu.size() || mu.dim() != nu.dim()) {
        throw DimensionError("clouds differ in shape: " + std::to_string(mu.size()) + "x" +
                             std::to_string(mu.dim()) + " vs " + std::to_string(nu.size()) +
                             "x" + std::to_string(nu.dim()));
    }
    if (tol < 0.0 || !std::isfinite(tol)) {
        throw ValidationError("tolerance must be a finite nonnegative value");
    }
    if (mu.size() == 0) return true;

    if (tol == 0.0) {
        auto ia = sorted_order(mu);
        auto ib = sorted_order(nu);
        for (std::size_t k = 0; k < ia.size(); ++k) {
            auto pa = mu.point(ia[k]);
            auto pb = nu.point(ib[k]);
            for (std::size_t c = 0; c < mu.dim(); ++c) {
                if (pa[c] != pb[c]) return false;
            }
        }
        return true;
    }

    // Feasibility assignment: entry 0 when the pair is within tol, 1 otherwise.
    // A matching of total cost 0 exists iff the clouds are tol-equivalent.
    const std::size_t n = mu.size();
    CostMatrix feas(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            feas.at(i, j) = (max_abs_diff(mu.point(i), nu.point(j)) <= tol) ? 0.0 : 1.0;
        }
    }
    return solve_assignment_exact(feas).squared_cost == 0.0;
}

PointCloud translate(const PointCloud& mu, std::span<const double> v) {
    if (v.size() != mu.dim()) {
        throw DimensionError("translation vector has dimension " + std::to_string(v.size()) +
                             ", cloud lives in R^" + std::to_string(mu.dim()));
    }
    PointCloud out(mu.size(), mu.dim());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto src = mu.point(i);
        auto dst = out.point(i);
        for (std::size_t c = 0; c < mu.dim(); ++c) dst[c] = src[c] + v[c];
    }
    return out;
}

} // namespace epc
