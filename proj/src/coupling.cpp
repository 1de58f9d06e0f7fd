#include "epc/coupling.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "epc/assignment.hpp"
#include "epc/errors.hpp"
#include "epc/matrix.hpp"
#include "epc/point_cloud.hpp"
#include "epc/rng.hpp"

namespace epc {

std::string_view method_label(CouplingMethod m) {
    switch (m) {
        case CouplingMethod::OT: return "OT";
        case CouplingMethod::CLIP: return "CLIP";
        case CouplingMethod::Random: return "RANDOM";
    }
    return "OT";
}

std::optional<CouplingMethod> parse_method(std::string_view label) {
    std::string up;
    up.reserve(label.size());
    for (char ch : label) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up == "OT") return CouplingMethod::OT;
    if (up == "CLIP") return CouplingMethod::CLIP;
    if (up == "RANDOM") return CouplingMethod::Random;
    return std::nullopt;
}

double Coupling::cost() const { return std::sqrt(squared_cost); }

std::vector<std::size_t> identity_sigma(std::size_t n) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    return sigma;
}

std::vector<std::size_t> random_sigma_fixed_first(std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw ValidationError("random coupling needs n >= 2, got n=" + std::to_string(n));
    }
    std::vector<std::size_t> sigma = identity_sigma(n);
    Xoshiro256ss rng(seed);
    // Fisher-Yates over positions 1..n-1 only, descending; position 0 stays put.
    for (std::size_t i = n - 1; i >= 2; --i) {
        const std::size_t j = 1 + static_cast<std::size_t>(rng.next_below(i));
        std::swap(sigma[i], sigma[j]);
    }
    return sigma;
}

namespace {

double sigma_squared_cost(const PointCloud& mu, const PointCloud& nu,
                          std::span<const std::size_t> sigma) {
    if (mu.size() != nu.size() || mu.dim() != nu.dim()) {
        throw DimensionError("coupling needs clouds of equal shape: " +
                             std::to_string(mu.size()) + "x" + std::to_string(mu.dim()) +
                             " vs " + std::to_string(nu.size()) + "x" +
                             std::to_string(nu.dim()));
    }
    if (!is_permutation(sigma, mu.size())) {
        throw ValidationError("sigma is not a permutation of {0.." +
                              std::to_string(mu.size() == 0 ? 0 : mu.size() - 1) + "}");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        s += squared_distance(mu.point(i), nu.point(sigma[i]));
    }
    return s;
}

} // namespace

Coupling make_coupling(const PointCloud& mu, const PointCloud& nu,
                       std::vector<std::size_t> sigma, CouplingMethod method,
                       std::optional<std::uint64_t> seed) {
    Coupling c;
    c.squared_cost = sigma_squared_cost(mu, nu, sigma);
    c.sigma = std::move(sigma);
    c.method = method;
    c.seed = seed;
    return c;
}

Coupling ot_coupling(const PointCloud& mu, const PointCloud& nu) {
    const CostMatrix cm = build_cost_matrix(mu, nu);
    AssignmentResult r = solve_assignment_exact(cm);
    Coupling c;
    c.sigma = std::move(r.sigma);
    c.squared_cost = r.squared_cost;
    c.method = CouplingMethod::OT;
    return c;
}

Coupling clip_coupling(const PointCloud& mu, const PointCloud& nu) {
    return make_coupling(mu, nu, identity_sigma(mu.size()), CouplingMethod::CLIP);
}

Coupling random_coupling(const PointCloud& mu, const PointCloud& nu, std::uint64_t seed) {
    return make_coupling(mu, nu, random_sigma_fixed_first(mu.size(), seed),
                         CouplingMethod::Random, seed);
}

} // namespace epc
