#pragma once

#include "colupi/types.hpp"

namespace colupi {

struct Assignment {
    std::vector<int> perm;  // bijection on [0, K)
    double score = 0.0;     // total profit achieved
};

/// Soft co-membership mass: M(k,l) = sum_i reference(i,k) * other(i,l).
Matrix overlap_matrix(const PartitionMatrix& reference, const PartitionMatrix& other);

/// Permutation maximizing sum_k profit(k, perm[k]); among ties the
/// lexicographically smallest permutation. Maximization runs the classical
/// minimizing Hungarian method on the negated profits.
Assignment hungarian_max(const Matrix& profit);

/// Reorders the columns of `other` so that column perm[k] moves to
/// position k, where perm maximizes soft overlap with `reference`.
/// Idempotent on already-aligned input.
PartitionMatrix align_to(const PartitionMatrix& reference, const PartitionMatrix& other);

}  // namespace colupi
