#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace epc {

class PointCloud;

enum class CouplingMethod { OT, CLIP, Random };

std::string_view method_label(CouplingMethod m); // "OT", "CLIP", "RANDOM"
std::optional<CouplingMethod> parse_method(std::string_view label);

/// A permutation pairing point i of the source with point sigma[i] of the
/// target, with its squared cost under the pinned summation order.
struct Coupling {
    std::vector<std::size_t> sigma;
    double squared_cost = 0.0;
    CouplingMethod method = CouplingMethod::OT;
    std::optional<std::uint64_t> seed; // set for Random

    double cost() const;
};

std::vector<std::size_t> identity_sigma(std::size_t n);

/// sigma[0] = 0 always; indices 1..n-1 get a uniform random permutation via
/// a descending-index Fisher-Yates sweep driven by xoshiro256**(seed).
std::vector<std::size_t> random_sigma_fixed_first(std::size_t n, std::uint64_t seed);

/// Attaches the recomputed squared cost of sigma on (mu, nu).
Coupling make_coupling(const PointCloud& mu, const PointCloud& nu,
                       std::vector<std::size_t> sigma, CouplingMethod method,
                       std::optional<std::uint64_t> seed = std::nullopt);

/// Optimal coupling from the exact assignment solver.
Coupling ot_coupling(const PointCloud& mu, const PointCloud& nu);

/// Row-order coupling: the identity permutation, costed against (mu, nu).
Coupling clip_coupling(const PointCloud& mu, const PointCloud& nu);

/// Seeded random coupling with the first row fixed, costed against (mu, nu).
Coupling random_coupling(const PointCloud& mu, const PointCloud& nu, std::uint64_t seed);

} // namespace epc
