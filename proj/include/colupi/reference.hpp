#pragma once

#include "colupi/collab.hpp"
#include "colupi/gmm.hpp"
#include "colupi/quality.hpp"
#include "colupi/types.hpp"

// Plain serial implementations of the data-parallel kernels, kept as the
// ground truth the OpenMP paths are tested and benchmarked against.

namespace colupi::ref {

Vector row_entropy(const PartitionMatrix& p);

CollabUpdate collab_update(const PartitionMatrix& local,
                           const std::vector<PartitionMatrix>& remotes);

Matrix overlap_matrix(const PartitionMatrix& reference, const PartitionMatrix& other);

PartitionMatrix responsibilities(const DataMatrix& data, const GmmParams& params);

double log_likelihood(const DataMatrix& data, const GmmParams& params);

QualityReport davies_bouldin(const DataMatrix& data, const std::vector<int>& labels,
                             int clusters);

}  // namespace colupi::ref
