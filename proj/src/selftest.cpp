#include "epc/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "epc/attention.hpp"
#include "epc/geometry.hpp"
#include "epc/rng.hpp"
#include "epc/stats.hpp"

namespace epc {

namespace {

struct Check {
    std::string name;
    std::function<bool()> run;
};

Matrix random_matrix(std::size_t rows, std::size_t cols, Xoshiro256ss& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = 2.0 * rng.next_double() - 1.0;
    return m;
}

} // namespace

int run_selftest(std::ostream& os) {
    const PointCloud mu = matrix_to_cloud(Matrix(2, 2, {0, 0, 1, 0}));
    const PointCloud nu = matrix_to_cloud(Matrix(2, 2, {2, 0, 0, 1}));

    std::vector<Check> checks;
    checks.push_back({"w2 of the worked 2-point pair is sqrt(2)", [&] {
                          return wasserstein_distance(mu, nu).w2 == std::sqrt(2.0);
                      }});
    checks.push_back({"OT sigma of the worked pair is [1,0]", [&] {
                          const auto c = ot_coupling(mu, nu);
                          return c.sigma == std::vector<std::size_t>{1, 0};
                      }});
    checks.push_back({"CLIP cost of the worked pair is sqrt(6)", [&] {
                          return clip_coupling(mu, nu).cost() == std::sqrt(6.0);
                      }});
    checks.push_back({"geodesic endpoints reproduce source and target", [&] {
                          auto path = make_geodesic_path(mu, nu, ot_coupling(mu, nu),
                                                         uniform_grid(4));
                          const auto samples = sample_path(path);
                          return clouds_equivalent(samples.front(), mu, 0.0) &&
                                 clouds_equivalent(samples.back(), nu, 0.0);
                      }});
    checks.push_back({"single-point midpoint lands at (1,0)", [&] {
                          const PointCloud a = matrix_to_cloud(Matrix(1, 2, {0, 0}));
                          const PointCloud b = matrix_to_cloud(Matrix(1, 2, {2, 0}));
                          const PointCloud mid = barycenter(a, b, 0.5);
                          return mid.point(0)[0] == 1.0 && mid.point(0)[1] == 0.0;
                      }});
    checks.push_back({"cross-attention is invariant to conditioning order", [&] {
                          Xoshiro256ss rng(7);
                          const Matrix x = random_matrix(3, 5, rng);
                          const Matrix xp = random_matrix(7, 4, rng);
                          AttentionWeights w{random_matrix(5, 6, rng),
                                             random_matrix(4, 6, rng),
                                             random_matrix(4, 3, rng)};
                          auto perm = random_sigma_fixed_first(7, 11);
                          std::swap(perm[0], perm[3]);
                          return check_cross_attention_invariance(x, xp, w, perm, 1e-9)
                              .within_tol;
                      }});
    checks.push_back({"wilcoxon all-positive n=6 anchor p = 0.03125", [&] {
                          const std::vector<double> a{1, 2, 3, 4, 5, 6};
                          const std::vector<double> b{0, 0, 0, 0, 0, 0};
                          return wilcoxon_signed_rank(a, b).p_value == 0.03125;
                      }});
    checks.push_back({"random coupling keeps the first row fixed", [&] {
                          for (std::uint64_t seed = 0; seed < 32; ++seed) {
                              if (random_sigma_fixed_first(9, seed)[0] != 0) return false;
                          }
                          return true;
                      }});

    int failures = 0;
    for (const auto& check : checks) {
        bool ok = false;
        try {
            ok = check.run();
        } catch (const std::exception& e) {
            os << "[FAIL] " << check.name << " (exception: " << e.what() << ")\n";
            ++failures;
            continue;
        }
        if (ok) {
            os << "[PASS] " << check.name << "\n";
        } else {
            os << "[FAIL] " << check.name << "\n";
            ++failures;
        }
    }
    os << (failures == 0 ? "selftest: all checks passed\n"
                         : "selftest: " + std::to_string(failures) + " check(s) failed\n");
    return failures;
}

} // namespace epc
