#include "epc/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "epc/errors.hpp"
#include "epc/point_cloud.hpp"

namespace epc {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
        const double d = x[c] - y[c];
        s += d * d;
    }
    return s;
}

CostMatrix build_cost_matrix(const PointCloud& mu, const PointCloud& nu) {
    if (mu.size() != nu.size() || mu.dim() != nu.dim()) {
        throw DimensionError("cost matrix needs clouds of equal shape: " +
                             std::to_string(mu.size()) + "x" + std::to_string(mu.dim()) +
                             " vs " + std::to_string(nu.size()) + "x" +
                             std::to_string(nu.dim()));
    }
    CostMatrix c(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            c.at(i, j) = squared_distance(mu.point(i), nu.point(j));
        }
    }
    return c;
}

namespace {

void validate_cost_matrix(const CostMatrix& c) {
    if (c.n == 0) throw ValidationError("cost matrix must be at least 1x1");
    if (c.cost.size() != c.n * c.n) {
        throw ValidationError("cost matrix storage does not match n=" + std::to_string(c.n));
    }
    for (std::size_t i = 0; i < c.n; ++i) {
        for (std::size_t j = 0; j < c.n; ++j) {
            const double v = c.at(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError("cost entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") must be finite and >= 0");
            }
        }
    }
}

} // namespace

double permutation_cost(const CostMatrix& c, std::span<const std::size_t> sigma) {
    if (sigma.size() != c.n) {
        throw ValidationError("permutation size " + std::to_string(sigma.size()) +
                              " does not match cost matrix n=" + std::to_string(c.n));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < c.n; ++i) s += c.at(i, sigma[i]);
    return s;
}

AssignmentResult solve_assignment_exact(const CostMatrix& c) {
    validate_cost_matrix(c);
    const std::size_t n = c.n;
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based with column 0 as the sentinel of the alternating tree.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = c.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult r;
    r.sigma.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) r.sigma[match[j] - 1] = j - 1;
    r.squared_cost = permutation_cost(c, r.sigma);
    r.row_potential.assign(u.begin() + 1, u.end());
    r.col_potential.assign(v.begin() + 1, v.end());
    return r;
}

AssignmentResult solve_assignment_bruteforce(const CostMatrix& c) {
    validate_cost_matrix(c);
    if (c.n > 10) {
        throw ValidationError("brute-force solver is guarded at n <= 10, got n=" +
                              std::to_string(c.n));
    }
    std::vector<std::size_t> perm(c.n);
    std::iota(perm.begin(), perm.end(), 0);

    AssignmentResult best;
    best.sigma = perm;
    best.squared_cost = permutation_cost(c, perm);
    // next_permutation walks lexicographically, so keeping strict improvements
    // leaves the lexicographically smallest optimal permutation.
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double cost = permutation_cost(c, perm);
        if (cost < best.squared_cost) {
            best.squared_cost = cost;
            best.sigma = perm;
        }
    }
    return best;
}

} // namespace epc
