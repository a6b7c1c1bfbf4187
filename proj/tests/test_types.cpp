#include "colupi/types.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

using namespace colupi;

TEST_CASE("validate_partition accepts stochastic rows") {
    CHECK_FALSE(validate_partition(test::partition({{0.5, 0.5}, {1.0, 0.0}})).has_value());
}

TEST_CASE("validate_partition names the first bad row sum") {
    const auto violation = validate_partition(test::partition({{0.6, 0.6}}));
    REQUIRE(violation.has_value());
    CHECK(violation->find("row 0 sums to 1.2") != std::string::npos);
}

TEST_CASE("validate_partition rejects K = 1") {
    PartitionMatrix p;
    p.resp = Matrix::Constant(3, 1, 1.0);
    const auto violation = validate_partition(p);
    REQUIRE(violation.has_value());
    CHECK(violation->find("K must be >= 2") != std::string::npos);
}

TEST_CASE("validate_partition rejects entries outside [0,1] and NaN") {
    auto violation = validate_partition(test::partition({{1.2, -0.2}}));
    REQUIRE(violation.has_value());
    CHECK(violation->find("outside [0, 1]") != std::string::npos);

    PartitionMatrix nan_row = test::partition({{0.5, 0.5}});
    nan_row.resp(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK(validate_partition(nan_row).has_value());
}

TEST_CASE("validate_data flags non-finite entries and tiny shapes") {
    DataMatrix one_row = test::data({{1.0, 2.0}});
    CHECK(validate_data(one_row).has_value());

    DataMatrix bad = test::data({{1.0, 2.0}, {3.0, 4.0}});
    bad.values(1, 0) = std::numeric_limits<double>::infinity();
    const auto violation = validate_data(bad);
    REQUIRE(violation.has_value());
    CHECK(violation->find("row 1") != std::string::npos);

    CHECK_FALSE(validate_data(test::data({{1.0}, {2.0}})).has_value());
}

TEST_CASE("validate_config catches each bad field") {
    RunConfig good;
    CHECK_FALSE(validate_config(good).has_value());

    RunConfig bad = good;
    bad.clusters = 1;
    CHECK(validate_config(bad).has_value());
    bad = good;
    bad.max_rounds = 0;
    CHECK(validate_config(bad).has_value());
    bad = good;
    bad.em_tol = 0.0;
    CHECK(validate_config(bad).has_value());
    bad = good;
    bad.rcolupi_restarts = -1;
    CHECK(validate_config(bad).has_value());
    bad = good;
    bad.covariance_floor = 0.0;
    CHECK(validate_config(bad).has_value());
}

TEST_CASE("harden takes the row argmax") {
    CHECK(harden(test::partition({{0.9, 0.1}, {0.2, 0.8}})) == std::vector<int>{0, 1});
    CHECK(harden(test::partition({{0.3, 0.3, 0.4}})) == std::vector<int>{2});
}

TEST_CASE("harden breaks ties toward the smallest index") {
    CHECK(harden(test::partition({{0.5, 0.5}})) == std::vector<int>{0});
    CHECK(harden(test::partition({{0.25, 0.25, 0.25, 0.25}})) == std::vector<int>{0});
}

TEST_CASE("harden is equivariant under column permutation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 20);
        const PartitionMatrix p = test::random_stochastic(rng, n, k);

        std::vector<int> sigma(static_cast<std::size_t>(k));
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);

        PartitionMatrix permuted;
        permuted.resp.resize(n, k);
        for (int c = 0; c < k; ++c) {
            permuted.resp.col(sigma[static_cast<std::size_t>(c)]) = p.resp.col(c);
        }

        const std::vector<int> base = harden(p);
        const std::vector<int> moved = harden(permuted);
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(moved[static_cast<std::size_t>(i)] ==
                  sigma[static_cast<std::size_t>(base[static_cast<std::size_t>(i)])]);
        }
    }
}
