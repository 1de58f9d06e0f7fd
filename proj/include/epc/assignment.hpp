#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace epc {

class PointCloud;

/// Square matrix of pairwise squared distances, cost[i][j] = ||x_i - y_j||^2.
/// Entries must be finite and nonnegative; symmetry is never assumed.
struct CostMatrix {
    explicit CostMatrix(std::size_t n_) : n(n_), cost(n_ * n_, 0.0) {}

    std::size_t n = 0;
    std::vector<double> cost;

    double at(std::size_t i, std::size_t j) const { return cost[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return cost[i * n + j]; }
};

/// cost[i][j] accumulated sequentially over coordinates 0..d-1, so coupling
/// costs recomputed from points and from matrix entries agree bitwise.
CostMatrix build_cost_matrix(const PointCloud& mu, const PointCloud& nu);

struct AssignmentResult {
    std::vector<std::size_t> sigma; // sigma[i] = column assigned to row i
    double squared_cost = 0.0;      // sum_i cost[i][sigma[i]], sequential in i
    // Dual potentials from the exact solver; optimality certificate satisfies
    // cost[i][j] - row_potential[i] - col_potential[j] >= -1e-9 for all i,j.
    std::vector<double> row_potential;
    std::vector<double> col_potential;
};

/// Exact minimum-cost assignment via shortest augmenting paths with dual
/// potentials (Jonker-Volgenant family), O(n^3). Deterministic: ties are
/// broken toward the lowest column index, so the all-zero matrix maps to
/// the identity permutation.
AssignmentResult solve_assignment_exact(const CostMatrix& c);

/// Enumerates all n! permutations (n <= 10) and returns the minimum cost
/// with the lexicographically smallest optimal permutation. Test oracle.
AssignmentResult solve_assignment_bruteforce(const CostMatrix& c);

/// Sum of cost[i][sigma[i]] in increasing i, the pinned summation order.
double permutation_cost(const CostMatrix& c, std::span<const std::size_t> sigma);

/// Squared Euclidean distance accumulated sequentially over coordinates.
double squared_distance(std::span<const double> x, std::span<const double> y);

} // namespace epc
