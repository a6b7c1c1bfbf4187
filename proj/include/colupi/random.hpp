#pragma once

#include "colupi/types.hpp"

#include <cstdint>
#include <random>

namespace colupi {

/// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-stream seed for (round, site, restart) tuples, so
/// randomized candidates never perturb each other's streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

/// N x K partition with rows drawn from a flat Dirichlet(1,...,1).
PartitionMatrix random_partition(Eigen::Index rows, int clusters, std::uint64_t seed);

}  // namespace colupi
