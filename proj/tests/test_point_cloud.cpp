#include <doctest.h>

#include <cmath>
#include <limits>

#include "epc/errors.hpp"
#include "epc/matrix.hpp"
#include "epc/point_cloud.hpp"
#include "test_support.hpp"

using namespace epc;
using epc::testing::random_matrix;
using epc::testing::random_permutation;

TEST_CASE("matrix_to_cloud keeps rows as points") {
    const Matrix e(2, 2, {0, 0, 1, 0});
    const PointCloud mu = matrix_to_cloud(e);
    CHECK(mu.size() == 2);
    CHECK(mu.dim() == 2);
    CHECK(mu.point(0)[0] == 0.0);
    CHECK(mu.point(1)[0] == 1.0);
}

TEST_CASE("degenerate all-zero 77x768 matrix is accepted") {
    const Matrix zeros(77, 768);
    const PointCloud mu = matrix_to_cloud(zeros);
    CHECK(mu.size() == 77);
    CHECK(mu.dim() == 768);
    CHECK(clouds_equivalent(mu, mu, 0.0));
}

TEST_CASE("validation rejects NaN and Inf, naming the position") {
    Matrix e(2, 3);
    e(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(matrix_to_cloud(e), doctest::Contains("row 1, column 2"),
                         ValidationError);
    e(1, 2) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(matrix_to_cloud(e), ValidationError);
}

TEST_CASE("cloud_to_matrix reorders points") {
    const PointCloud mu = matrix_to_cloud(Matrix(2, 2, {0, 0, 1, 0}));
    const std::vector<std::size_t> order{1, 0};
    const Matrix out = cloud_to_matrix(mu, order);
    CHECK(out.row(0)[0] == 1.0);
    CHECK(out.row(1)[0] == 0.0);

    const std::vector<std::size_t> bad{0, 0};
    CHECK_THROWS_AS(cloud_to_matrix(mu, bad), ValidationError);
}

TEST_CASE("clouds_equivalent worked examples") {
    const PointCloud a = matrix_to_cloud(Matrix(2, 2, {0, 0, 1, 0}));
    const PointCloud b = matrix_to_cloud(Matrix(2, 2, {1, 0, 0, 0}));
    const PointCloud c = matrix_to_cloud(Matrix(2, 2, {0, 0, 2, 0}));
    CHECK(clouds_equivalent(a, b, 0.0));
    // brute force over both pairings: min max-norm mismatch is 1.0 > 0.5
    CHECK_FALSE(clouds_equivalent(a, c, 0.5));
    CHECK(clouds_equivalent(a, c, 1.0));
    CHECK(clouds_equivalent(a, a, 0.0));

    const PointCloud d = matrix_to_cloud(Matrix(2, 3, {0, 0, 0, 1, 0, 0}));
    CHECK_THROWS_AS(clouds_equivalent(a, d, 0.0), DimensionError);
}

TEST_CASE("row permutation leaves the cloud equivalent") {
    Xoshiro256ss rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.next_below(9);
        const std::size_t d = 1 + rng.next_below(5);
        const Matrix e = random_matrix(n, d, rng);
        const auto perm = random_permutation(n, rng);
        CHECK(clouds_equivalent(matrix_to_cloud(e), matrix_to_cloud(permute_rows(e, perm)),
                                0.0));
    }
}

TEST_CASE("cloud_to_matrix then matrix_to_cloud round-trips for every order") {
    Xoshiro256ss rng(102);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.next_below(8);
        const std::size_t d = 1 + rng.next_below(4);
        const PointCloud mu = epc::testing::random_cloud(n, d, rng);
        const auto order = random_permutation(n, rng);
        CHECK(clouds_equivalent(matrix_to_cloud(cloud_to_matrix(mu, order)), mu, 0.0));
    }
}

TEST_CASE("duplicate points do not break equivalence") {
    const PointCloud dup = matrix_to_cloud(Matrix(3, 1, {2, 2, 5}));
    const PointCloud reordered = matrix_to_cloud(Matrix(3, 1, {5, 2, 2}));
    CHECK(clouds_equivalent(dup, reordered, 0.0));
    const PointCloud other = matrix_to_cloud(Matrix(3, 1, {2, 5, 5}));
    CHECK_FALSE(clouds_equivalent(dup, other, 0.0));
    CHECK(clouds_equivalent(dup, other, 3.0));
}
