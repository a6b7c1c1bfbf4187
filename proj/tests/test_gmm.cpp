#include "colupi/gmm.hpp"

#include "colupi/alignment.hpp"
#include "colupi/data_io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace colupi;
using doctest::Approx;

namespace {

DataMatrix two_blobs(std::uint64_t seed, int per_blob, double separation) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    DataMatrix data;
    data.values.resize(2 * per_blob, 2);
    for (int i = 0; i < per_blob; ++i) {
        data.values(i, 0) = noise(rng);
        data.values(i, 1) = noise(rng);
        data.values(per_blob + i, 0) = separation + noise(rng);
        data.values(per_blob + i, 1) = separation + noise(rng);
    }
    return data;
}

// Monotone within reseed-free segments, relative tolerance 1e-7.
void check_monotone(const FitResult& fit) {
    for (std::size_t t = 1; t < fit.loglik_trace.size(); ++t) {
        const bool reseeded = std::find(fit.reseeded_iterations.begin(),
                                        fit.reseeded_iterations.end(),
                                        static_cast<int>(t)) != fit.reseeded_iterations.end();
        if (reseeded) continue;
        const double prev = fit.loglik_trace[t - 1];
        CHECK(fit.loglik_trace[t] >= prev - 1e-7 * (1.0 + std::abs(prev)));
    }
}

}  // namespace

TEST_CASE("init_responsibilities is deterministic and needs N >= K") {
    const DataMatrix data = two_blobs(3, 20, 8.0);
    const PartitionMatrix a = init_responsibilities(data, 4, 42);
    const PartitionMatrix b = init_responsibilities(data, 4, 42);
    CHECK(test::exact_equal(a.resp, b.resp));
    CHECK_FALSE(validate_partition(a).has_value());

    DataMatrix tiny = test::data({{0.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(init_responsibilities(tiny, 4, 0), std::invalid_argument);
}

TEST_CASE("init_responsibilities with N = K claims distinct clusters") {
    const DataMatrix data =
        test::data({{0.0, 0.0}, {5.0, 0.0}, {0.0, 5.0}, {5.0, 5.0}});
    const PartitionMatrix p = init_responsibilities(data, 4, 7);
    std::vector<int> labels = harden(p);
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("init_responsibilities separates distant blobs perfectly") {
    const DataMatrix data = two_blobs(11, 50, 10.0);
    const std::vector<int> labels = harden(init_responsibilities(data, 2, 5));
    // Same label within each blob, different across (identity up to swap).
    for (int i = 1; i < 50; ++i) {
        CHECK(labels[static_cast<std::size_t>(i)] == labels[0]);
        CHECK(labels[static_cast<std::size_t>(50 + i)] == labels[50]);
    }
    CHECK(labels[0] != labels[50]);
}

TEST_CASE("one M-step from hard responsibilities recovers blob means") {
    const int per_blob = 40;
    const DataMatrix data = two_blobs(17, per_blob, 20.0);
    PartitionMatrix hard;
    hard.resp = Matrix::Zero(2 * per_blob, 2);
    for (int i = 0; i < per_blob; ++i) {
        hard.resp(i, 0) = 1.0;
        hard.resp(per_blob + i, 1) = 1.0;
    }

    RunConfig cfg;
    cfg.clusters = 2;
    cfg.em_max_iters = 1;  // isolate the M-step
    const GmmParams params = fit_from_responsibilities(data, hard, cfg).params;

    for (int j = 0; j < 2; ++j) {
        const double mean0 = data.values.col(j).head(per_blob).mean();
        const double mean1 = data.values.col(j).tail(per_blob).mean();
        CHECK(params.means(0, j) == Approx(mean0).epsilon(1e-9));
        CHECK(params.means(1, j) == Approx(mean1).epsilon(1e-9));
    }
    CHECK(params.mixing.sum() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform responsibilities collapse both means onto the global mean") {
    const DataMatrix data = two_blobs(19, 30, 6.0);
    RunConfig cfg;
    cfg.clusters = 2;
    cfg.em_max_iters = 1;
    const GmmParams params =
        fit_from_responsibilities(data, test::uniform_partition(60, 2), cfg).params;
    for (int j = 0; j < 2; ++j) {
        const double global = data.values.col(j).mean();
        CHECK(params.means(0, j) == Approx(global).epsilon(1e-9));
        CHECK(params.means(1, j) == Approx(global).epsilon(1e-9));
    }
}

TEST_CASE("EM recovers the generating means of a 4-component mixture") {
    // 1000 points per component keeps the sample-mean noise (~0.08 in 6-d)
    // far below the 0.2 recovery bound.
    SyntheticSpec spec;
    spec.n_points = 4000;
    spec.n_gaussians = 4;
    spec.noise_fraction = 0.0;
    spec.dims = 6;
    spec.separation = 8.0;
    spec.seed = 4;
    const MixtureData mix = generate_mixture(spec);

    RunConfig cfg;
    cfg.clusters = 4;
    // EM has local optima; keep the best of a few seeded starts.
    FitResult fit;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        FitResult candidate = fit_from_responsibilities(
            mix.data, init_responsibilities(mix.data, 4, seed), cfg);
        check_monotone(candidate);
        if (candidate.loglik_trace.back() > best_ll) {
            best_ll = candidate.loglik_trace.back();
            fit = std::move(candidate);
        }
    }

    // Match recovered to generating means via max (negated distance) profit.
    Matrix profit(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            profit(a, b) = -(mix.component_means.row(a) - fit.params.means.row(b)).norm();
        }
    }
    const Assignment match = hungarian_max(profit);
    for (int a = 0; a < 4; ++a) {
        const double err =
            (mix.component_means.row(a) - fit.params.means.row(match.perm[a])).norm();
        CHECK(err < 0.2);
    }
}

TEST_CASE("responsibilities match the closed-form 1-d posterior") {
    GmmParams params;
    params.means = test::matrix({{0.0}, {3.0}});
    params.variances = Matrix::Ones(2, 1);
    params.mixing = Vector::Constant(2, 0.5);

    const DataMatrix x = test::data({{1.5}, {0.0}});
    const PartitionMatrix r = responsibilities(x, params);

    CHECK(r.resp(0, 0) == Approx(0.5).epsilon(1e-12));
    CHECK(r.resp(0, 1) == Approx(0.5).epsilon(1e-12));
    // At x = 0: posterior of component 0 is 1 / (1 + exp(-4.5)).
    const double expected = 1.0 / (1.0 + std::exp(-4.5));
    CHECK(r.resp(1, 0) == Approx(expected).epsilon(1e-12));
    CHECK(r.resp(1, 0) == Approx(0.9890130573694068).epsilon(1e-12));
}

TEST_CASE("responsibilities on identical components are exactly uniform") {
    GmmParams params;
    params.means = test::matrix({{1.0, 2.0}, {1.0, 2.0}});
    params.variances = Matrix::Ones(2, 2);
    params.mixing = Vector::Constant(2, 0.5);
    const PartitionMatrix r = responsibilities(two_blobs(23, 10, 4.0), params);
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        CHECK(r.resp(i, 0) == 0.5);
        CHECK(r.resp(i, 1) == 0.5);
    }
}

TEST_CASE("a point at a component mean with distant rivals is claimed outright") {
    GmmParams params;
    params.means = test::matrix({{0.0, 0.0}, {50.0, 50.0}});
    params.variances = Matrix::Ones(2, 2);
    params.mixing = Vector::Constant(2, 0.5);
    const PartitionMatrix r = responsibilities(test::data({{0.0, 0.0}, {1.0, 1.0}}), params);
    CHECK(r.resp(0, 0) > 1.0 - 1e-12);
}

TEST_CASE("EM log-likelihood is monotone across random starts") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        SyntheticSpec spec;
        spec.n_points = 240;
        spec.n_gaussians = 3;
        spec.noise_fraction = 0.1;
        spec.dims = 4;
        spec.separation = 4.0;
        spec.seed = rng();
        const MixtureData mix = generate_mixture(spec);
        const DataMatrix data = standardize(mix.data).data;

        RunConfig cfg;
        cfg.clusters = 4;
        const FitResult fit = fit_from_responsibilities(
            data, init_responsibilities(data, 4, rng()), cfg);
        check_monotone(fit);
        CHECK(fit.loglik_trace.size() >= 1);
        CHECK(static_cast<int>(fit.loglik_trace.size()) <= cfg.em_max_iters);
    }
}

TEST_CASE("fit and responsibilities are deterministic") {
    const DataMatrix data = two_blobs(43, 40, 6.0);
    RunConfig cfg;
    cfg.clusters = 2;
    const PartitionMatrix start = init_responsibilities(data, 2, 9);
    const FitResult a = fit_from_responsibilities(data, start, cfg);
    const FitResult b = fit_from_responsibilities(data, start, cfg);
    CHECK(test::exact_equal(a.params.means, b.params.means));
    CHECK(test::exact_equal(a.params.variances, b.params.variances));
    CHECK(test::exact_equal(a.params.mixing, b.params.mixing));
    CHECK(test::exact_equal(responsibilities(data, a.params).resp,
                            responsibilities(data, b.params).resp));
}

TEST_CASE("responsibilities are invariant under coordinated feature scaling") {
    const DataMatrix data = two_blobs(53, 25, 5.0);
    RunConfig cfg;
    cfg.clusters = 2;
    const GmmParams params =
        fit_from_responsibilities(data, init_responsibilities(data, 2, 3), cfg).params;
    const PartitionMatrix base = responsibilities(data, params);

    const double c = 3.7;
    DataMatrix scaled = data;
    scaled.values *= c;
    GmmParams scaled_params = params;
    scaled_params.means *= c;
    scaled_params.variances *= c * c;
    const PartitionMatrix moved = responsibilities(scaled, scaled_params);

    for (Eigen::Index i = 0; i < base.rows(); ++i) {
        for (Eigen::Index k = 0; k < 2; ++k) {
            CHECK(moved.resp(i, k) == Approx(base.resp(i, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("a dead component is re-seeded and reported") {
    // Start with all mass on component 0; component 1 has ~zero mass.
    const DataMatrix data = two_blobs(59, 20, 6.0);
    PartitionMatrix start;
    start.resp = Matrix::Zero(40, 2);
    start.resp.col(0).setOnes();

    RunConfig cfg;
    cfg.clusters = 2;
    cfg.em_max_iters = 1;
    const FitResult fit = fit_from_responsibilities(data, start, cfg);
    CHECK(fit.reseeded_iterations == std::vector<int>{0});
    CHECK(fit.params.variances.minCoeff() >= cfg.covariance_floor);
    CHECK(fit.params.mixing.minCoeff() > 0.0);
}
