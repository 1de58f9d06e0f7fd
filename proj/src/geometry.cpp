#include "epc/geometry.hpp"

#include <cmath>
#include <string>

#include "epc/assignment.hpp"
#include "epc/errors.hpp"
#include "epc/matrix.hpp"

namespace epc {

DistanceResult wasserstein_distance(const PointCloud& mu, const PointCloud& nu) {
    DistanceResult r;
    r.coupling = ot_coupling(mu, nu);
    r.w2 = r.coupling.cost();
    return r;
}

double coupling_cost(const PointCloud& mu, const PointCloud& nu,
                     std::span<const std::size_t> sigma) {
    std::vector<std::size_t> s(sigma.begin(), sigma.end());
    // make_coupling revalidates sigma and recomputes the pinned-order sum
    return make_coupling(mu, nu, std::move(s), CouplingMethod::OT).cost();
}

GeodesicPath make_geodesic_path(PointCloud source, PointCloud target,
                                Coupling coupling, std::vector<double> times) {
    if (source.size() != target.size() || source.dim() != target.dim()) {
        throw DimensionError("path endpoints differ in shape: " +
                             std::to_string(source.size()) + "x" + std::to_string(source.dim()) +
                             " vs " + std::to_string(target.size()) + "x" +
                             std::to_string(target.dim()));
    }
    if (!is_permutation(coupling.sigma, source.size())) {
        throw ValidationError("path coupling sigma is not a permutation of the cloud size");
    }
    if (times.size() < 2 || times.front() != 0.0 || times.back() != 1.0) {
        throw ValidationError("time grid must start at 0 and end at 1");
    }
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        if (!(times[k] < times[k + 1])) {
            throw ValidationError("time grid must be strictly increasing");
        }
    }
    GeodesicPath p;
    p.source = std::move(source);
    p.target = std::move(target);
    p.coupling = std::move(coupling);
    p.times = std::move(times);
    return p;
}

std::vector<double> uniform_grid(std::size_t k) {
    if (k == 0) throw ValidationError("grid needs at least one segment");
    std::vector<double> times(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        times[j] = static_cast<double>(j) / static_cast<double>(k);
    }
    return times;
}

PointCloud geodesic_point(const GeodesicPath& path, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ValidationError("interpolation time " + std::to_string(t) +
                              " is outside [0,1]");
    }
    const PointCloud& mu = path.source;
    const PointCloud& nu = path.target;
    PointCloud out(mu.size(), mu.dim());
    const double s = 1.0 - t;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        auto x = mu.point(i);
        auto y = nu.point(path.coupling.sigma[i]);
        auto dst = out.point(i);
        for (std::size_t c = 0; c < mu.dim(); ++c) {
            dst[c] = s * x[c] + t * y[c];
        }
    }
    return out;
}

std::vector<PointCloud> sample_path(const GeodesicPath& path) {
    std::vector<PointCloud> clouds;
    clouds.reserve(path.times.size());
    for (double t : path.times) clouds.push_back(geodesic_point(path, t));
    return clouds;
}

PointCloud barycenter(const PointCloud& mu0, const PointCloud& mu1, double t) {
    GeodesicPath p = make_geodesic_path(mu0, mu1, ot_coupling(mu0, mu1), uniform_grid(1));
    return geodesic_point(p, t);
}

double path_length(const GeodesicPath& path) {
    return coupling_cost(path.source, path.target, path.coupling.sigma);
}

double discretized_path_length(const GeodesicPath& path) {
    double total = 0.0;
    PointCloud prev = geodesic_point(path, path.times.front());
    for (std::size_t k = 1; k < path.times.size(); ++k) {
        PointCloud cur = geodesic_point(path, path.times[k]);
        total += wasserstein_distance(prev, cur).w2;
        prev = std::move(cur);
    }
    return total;
}

} // namespace epc
