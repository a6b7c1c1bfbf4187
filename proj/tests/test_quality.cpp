#include "colupi/quality.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

using namespace colupi;
using doctest::Approx;

TEST_CASE("two zero-scatter clusters give a zero index") {
    const DataMatrix data = test::data({{0.0, 0.0}, {2.0, 0.0}});
    const QualityReport report = davies_bouldin(data, {0, 1}, 2);
    CHECK(report.db_index == 0.0);
    CHECK(report.per_cluster_scatter[0] == 0.0);
    CHECK(report.per_cluster_scatter[1] == 0.0);
    CHECK(report.empty_clusters.empty());
}

TEST_CASE("coinciding centroids rank as worst quality") {
    const DataMatrix data = test::data({{1.0, 1.0}, {1.0, 1.0}});
    const QualityReport report = davies_bouldin(data, {0, 1}, 2);
    CHECK_FALSE(report.finite());
}

TEST_CASE("the axis-aligned two-cluster fixture evaluates to 0.25") {
    const DataMatrix data =
        test::data({{0.0, 0.0}, {0.0, 1.0}, {4.0, 0.0}, {4.0, 1.0}});
    const QualityReport report = davies_bouldin(data, {0, 0, 1, 1}, 2);
    CHECK(report.db_index == Approx(0.25).epsilon(1e-12));
    CHECK(report.per_cluster_scatter[0] == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed form for two-point clusters: DB = spread / separation") {
    for (const auto [s, sep] : {std::pair{1.0, 4.0}, std::pair{0.4, 2.0}, std::pair{3.0, 5.0}}) {
        const DataMatrix data =
            test::data({{0.0, 0.0}, {0.0, s}, {sep, 0.0}, {sep, s}});
        const QualityReport report = davies_bouldin(data, {0, 0, 1, 1}, 2);
        CHECK(report.db_index == Approx(s / sep).epsilon(1e-12));
    }
}

TEST_CASE("empty clusters are reported and make the index infinite") {
    const DataMatrix data = test::data({{0.0}, {1.0}, {2.0}});
    const QualityReport report = davies_bouldin(data, {0, 0, 0}, 3);
    CHECK(report.empty_clusters == std::vector<int>{1, 2});
    CHECK_FALSE(report.finite());
}

TEST_CASE("davies_bouldin validates labels") {
    const DataMatrix data = test::data({{0.0}, {1.0}});
    CHECK_THROWS_AS(davies_bouldin(data, {0, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(davies_bouldin(data, {0}, 2), std::invalid_argument);
}

TEST_CASE("quality_better is a strict, degenerate-aware order") {
    QualityReport a, b;
    a.db_index = 0.25;
    b.db_index = 0.30;
    CHECK(quality_better(a, b));
    CHECK_FALSE(quality_better(b, a));

    b.db_index = 0.25;
    CHECK_FALSE(quality_better(a, b));  // strict inequality required

    QualityReport degenerate;
    degenerate.db_index = 0.01;
    degenerate.empty_clusters = {1};
    CHECK(quality_better(a, degenerate));
    CHECK_FALSE(quality_better(degenerate, a));
    CHECK_FALSE(quality_better(degenerate, degenerate));
}

TEST_CASE("index is invariant under translation, scaling and relabeling") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> scale_dist(0.1, 10.0);

    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 3);
        const Eigen::Index n = 3 * k + static_cast<Eigen::Index>(rng() % 40);
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 4);

        DataMatrix data;
        data.values.resize(n, d);
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = static_cast<int>(i) % k;  // no empties
            for (Eigen::Index j = 0; j < d; ++j) {
                data.values(i, j) =
                    noise(rng) + 3.0 * static_cast<double>(labels[static_cast<std::size_t>(i)]);
            }
        }
        const double base = davies_bouldin(data, labels, k).db_index;

        DataMatrix shifted = data;
        for (Eigen::Index j = 0; j < d; ++j) {
            shifted.values.col(j).array() += noise(rng) * 10.0;
        }
        CHECK(davies_bouldin(shifted, labels, k).db_index ==
              Approx(base).epsilon(1e-9));

        DataMatrix scaled = data;
        scaled.values *= scale_dist(rng);
        CHECK(davies_bouldin(scaled, labels, k).db_index ==
              Approx(base).epsilon(1e-9));

        // Relabel clusters by a permutation.
        std::vector<int> sigma(static_cast<std::size_t>(k));
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::vector<int> relabeled(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            relabeled[i] = sigma[static_cast<std::size_t>(labels[i])];
        }
        CHECK(davies_bouldin(data, relabeled, k).db_index ==
              Approx(base).epsilon(1e-12));
    }
}
