// Timings for the hot kernels: serial reference vs the OpenMP build.
// Run with --benchmark_filter=... to narrow; OMP_NUM_THREADS controls the
// parallel side.

#include "colupi/alignment.hpp"
#include "colupi/collab.hpp"
#include "colupi/gmm.hpp"
#include "colupi/quality.hpp"
#include "colupi/reference.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace colupi;

namespace {

PartitionMatrix random_stochastic(std::mt19937_64& rng, Eigen::Index n, int k) {
    std::uniform_real_distribution<double> unit(1e-12, 1.0);
    PartitionMatrix p;
    p.resp.resize(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            p.resp(i, c) = -std::log(unit(rng));
            sum += p.resp(i, c);
        }
        for (int c = 0; c < k; ++c) p.resp(i, c) /= sum;
    }
    return p;
}

struct Fixture {
    PartitionMatrix local;
    std::vector<PartitionMatrix> remotes;
    DataMatrix data;
    GmmParams params;
    std::vector<int> labels;
    int clusters;
};

Fixture make_fixture(Eigen::Index n, int k, int d) {
    std::mt19937_64 rng(12345);
    Fixture f;
    f.clusters = k;
    f.local = random_stochastic(rng, n, k);
    for (int q = 0; q < 3; ++q) f.remotes.push_back(random_stochastic(rng, n, k));

    std::normal_distribution<double> noise(0.0, 1.0);
    f.data.values.resize(n, d);
    f.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        f.labels[static_cast<std::size_t>(i)] = static_cast<int>(i) % k;
        for (int j = 0; j < d; ++j) {
            f.data.values(i, j) = noise(rng) + 3.0 * (static_cast<int>(i) % k);
        }
    }
    f.params.means.resize(k, d);
    f.params.variances = Matrix::Ones(k, d);
    f.params.mixing = Vector::Constant(k, 1.0 / k);
    for (int c = 0; c < k; ++c) {
        for (int j = 0; j < d; ++j) f.params.means(c, j) = 3.0 * c;
    }
    return f;
}

const Fixture& fixture(benchmark::State& state) {
    static const Fixture small = make_fixture(2000, 5, 6);
    static const Fixture large = make_fixture(20000, 5, 6);
    return state.range(0) == 0 ? small : large;
}

void bm_entropy_serial(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(ref::row_entropy(f.local));
}

void bm_entropy_parallel(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(row_entropy(f.local));
}

void bm_blend_serial(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(ref::collab_update(f.local, f.remotes));
}

void bm_blend_parallel(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(collab_update(f.local, f.remotes));
}

void bm_estep_serial(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(ref::responsibilities(f.data, f.params));
}

void bm_estep_parallel(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(responsibilities(f.data, f.params));
}

void bm_db_serial(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ref::davies_bouldin(f.data, f.labels, f.clusters));
    }
}

void bm_db_parallel(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(davies_bouldin(f.data, f.labels, f.clusters));
    }
}

void bm_overlap_serial(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ref::overlap_matrix(f.local, f.remotes[0]));
    }
}

void bm_overlap_parallel(benchmark::State& state) {
    const Fixture& f = fixture(state);
    for (auto _ : state) benchmark::DoNotOptimize(overlap_matrix(f.local, f.remotes[0]));
}

}  // namespace

BENCHMARK(bm_entropy_serial)->Arg(0)->Arg(1);
BENCHMARK(bm_entropy_parallel)->Arg(0)->Arg(1);
BENCHMARK(bm_blend_serial)->Arg(0)->Arg(1);
BENCHMARK(bm_blend_parallel)->Arg(0)->Arg(1);
BENCHMARK(bm_estep_serial)->Arg(0)->Arg(1);
BENCHMARK(bm_estep_parallel)->Arg(0)->Arg(1);
BENCHMARK(bm_db_serial)->Arg(0)->Arg(1);
BENCHMARK(bm_db_parallel)->Arg(0)->Arg(1);
BENCHMARK(bm_overlap_serial)->Arg(0)->Arg(1);
BENCHMARK(bm_overlap_parallel)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
