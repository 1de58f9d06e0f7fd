#pragma once
#include <span>
#include <vector>

#include "epc/coupling.hpp"
#include "epc/point_cloud.hpp"

namespace epc {

struct DistanceResult {
    double w2 = 0.0; // sqrt of the optimal squared cost, no 1/N normalization
    Coupling coupling;
};

/// Wasserstein-2 distance between uniform clouds of equal size.
DistanceResult wasserstein_distance(const PointCloud& mu, const PointCloud& nu);

/// sqrt(sum_i ||x_i - y_sigma(i)||^2): same units as w2 so coupling costs
/// and distances compare directly.
double coupling_cost(const PointCloud& mu, const PointCloud& nu,
                     std::span<const std::size_t> sigma);

/// Displacement-interpolation path induced by a coupling. With the OT
/// coupling this is the constant-speed geodesic; any other coupling gives
/// the corresponding longer interpolating path.
struct GeodesicPath {
    PointCloud source;
    PointCloud target;
    Coupling coupling;
    std::vector<double> times; // strictly increasing, times[0]=0, times[last]=1
};

/// Validates shapes, the coupling, and the time grid.
GeodesicPath make_geodesic_path(PointCloud source, PointCloud target,
                                Coupling coupling, std::vector<double> times);

/// K+1 uniform times j/K including both endpoints.
std::vector<double> uniform_grid(std::size_t k);

/// Point i of the result is (1-t) x_i + t y_sigma(i). t in [0,1].
PointCloud geodesic_point(const GeodesicPath& path, double t);

/// geodesic_point at every grid time, in order.
std::vector<PointCloud> sample_path(const GeodesicPath& path);

/// Weighted barycenter of two clouds: the OT displacement interpolant at t,
/// which minimizes (1-t) W2(mu0,.)^2 + t W2(mu1,.)^2.
PointCloud barycenter(const PointCloud& mu0, const PointCloud& mu1, double t);

/// Length of the interpolating path: exactly the cost of its coupling.
double path_length(const GeodesicPath& path);

/// sum_k W2(mu_{t_k}, mu_{t_{k+1}}) over the grid; numerical cross-check
/// for the path-length identity.
double discretized_path_length(const GeodesicPath& path);

} // namespace epc
