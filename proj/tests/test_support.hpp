#pragma once
#include <cstdint>
#include <vector>

#include "epc/matrix.hpp"
#include "epc/point_cloud.hpp"
#include "epc/rng.hpp"

namespace epc::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Xoshiro256ss& rng,
                            double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = lo + (hi - lo) * rng.next_double();
    return m;
}

inline PointCloud random_cloud(std::size_t n, std::size_t dim, Xoshiro256ss& rng,
                               double lo = -1.0, double hi = 1.0) {
    return matrix_to_cloud(random_matrix(n, dim, rng, lo, hi));
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Xoshiro256ss& rng) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i >= 2; --i) {
        std::swap(p[i - 1], p[rng.next_below(i)]);
    }
    return p;
}

inline double rel_diff(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

} // namespace epc::testing
