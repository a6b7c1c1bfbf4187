#include "colupi/reference.hpp"

#include "colupi/alignment.hpp"
#include "colupi/collab.hpp"
#include "colupi/gmm.hpp"
#include "colupi/quality.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <random>

// The OpenMP kernels must reproduce the plain serial reference. Entropy,
// overlap and the E-step run the identical per-element arithmetic, so those
// agree bitwise; blends and the Davies-Bouldin reduction are allowed a few
// ulps for library-summed rows.

using namespace colupi;
using doctest::Approx;

namespace {

GmmParams random_params(std::mt19937_64& rng, int k, int d) {
    std::uniform_real_distribution<double> mean_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> var_dist(0.2, 3.0);
    GmmParams params;
    params.means.resize(k, d);
    params.variances.resize(k, d);
    params.mixing.resize(k);
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        for (int j = 0; j < d; ++j) {
            params.means(c, j) = mean_dist(rng);
            params.variances(c, j) = var_dist(rng);
        }
        params.mixing[c] = var_dist(rng);
        total += params.mixing[c];
    }
    params.mixing /= total;
    return params;
}

}  // namespace

TEST_CASE("row_entropy matches the serial reference bitwise") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const PartitionMatrix p = test::random_stochastic(rng, 700, k);
        CHECK(test::exact_equal(row_entropy(p), ref::row_entropy(p)));
    }
}

TEST_CASE("collab_update matches the serial reference") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        const int remotes_count = 1 + static_cast<int>(rng() % 3);
        const Eigen::Index n = 600;
        const PartitionMatrix local = test::random_stochastic(rng, n, k);
        std::vector<PartitionMatrix> remotes;
        for (int q = 0; q < remotes_count; ++q) {
            remotes.push_back(test::random_stochastic(rng, n, k));
        }
        const CollabUpdate fast = collab_update(local, remotes);
        const CollabUpdate slow = ref::collab_update(local, remotes);
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(fast.applied.alpha[i] ==
                  Approx(slow.applied.alpha[i]).epsilon(1e-13));
            for (Eigen::Index c = 0; c < k; ++c) {
                CHECK(fast.blended.resp(i, c) ==
                      Approx(slow.blended.resp(i, c)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("overlap_matrix matches the serial reference bitwise") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const PartitionMatrix a = test::random_stochastic(rng, 800, k);
        const PartitionMatrix b = test::random_stochastic(rng, 800, k);
        CHECK(test::exact_equal(overlap_matrix(a, b), ref::overlap_matrix(a, b)));
    }
}

TEST_CASE("gmm responsibilities and log-likelihood match the serial reference") {
    std::mt19937_64 rng(113);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int trial = 0; trial < 8; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        const int d = 1 + static_cast<int>(rng() % 5);
        DataMatrix data;
        data.values.resize(500, d);
        for (Eigen::Index i = 0; i < 500; ++i) {
            for (int j = 0; j < d; ++j) data.values(i, j) = noise(rng);
        }
        const GmmParams params = random_params(rng, k, d);

        const PartitionMatrix fast = responsibilities(data, params);
        const PartitionMatrix slow = ref::responsibilities(data, params);
        CHECK(test::exact_equal(fast.resp, slow.resp));
        CHECK(log_likelihood(data, params) ==
              Approx(ref::log_likelihood(data, params)).epsilon(1e-12));
    }
}

TEST_CASE("davies_bouldin matches the serial reference") {
    std::mt19937_64 rng(127);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 4);
        const Eigen::Index n = 400;
        DataMatrix data;
        data.values.resize(n, 3);
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = static_cast<int>(rng() % k);
            for (int j = 0; j < 3; ++j) {
                data.values(i, j) = noise(rng) + 2.0 * labels[static_cast<std::size_t>(i)];
            }
        }
        const QualityReport fast = davies_bouldin(data, labels, k);
        const QualityReport slow = ref::davies_bouldin(data, labels, k);
        CHECK(fast.db_index == Approx(slow.db_index).epsilon(1e-12));
        CHECK(fast.empty_clusters == slow.empty_clusters);
        for (int c = 0; c < k; ++c) {
            CHECK(fast.per_cluster_scatter[c] ==
                  Approx(slow.per_cluster_scatter[c]).epsilon(1e-12));
        }
    }
}
