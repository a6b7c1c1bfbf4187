#pragma once

#include "colupi/types.hpp"

namespace colupi {

/// Normalized Shannon entropy (base 2, divided by log2 K) of every
/// responsibility row. 0 for a one-hot row, 1 for a uniform row.
/// Throws std::invalid_argument when K < 2.
Vector row_entropy(const PartitionMatrix& p);

/// Raw per-observation weights: alpha[i] grows with remote uncertainty and
/// local certainty, betas[q][i] with local uncertainty and remote-q
/// certainty. Not yet normalized. source_ids are filled positionally
/// (0..remotes-1); callers tracking real site ids overwrite them.
CollabWeights collab_weights(const PartitionMatrix& local,
                             const std::vector<PartitionMatrix>& remotes);

struct CollabUpdate {
    PartitionMatrix blended;
    CollabWeights applied;  // row-normalized weights actually used
};

/// Blends the local partition with the (already cluster-aligned) remote
/// partitions, row by row. Rows where every raw weight is below 1e-12 keep
/// the local row unchanged and record applied weights alpha=1, betas=0.
CollabUpdate collab_update(const PartitionMatrix& local,
                           const std::vector<PartitionMatrix>& remotes);

/// Averages the applied weights of all P sites into a P x P matrix:
/// entry (p,p) is site p's mean self-weight, entry (p,q) the mean weight
/// site p gave to site q. Requires each CollabWeights to carry source_ids
/// covering exactly the other P-1 sites.
ConfidenceMatrix confidence_matrix(const std::vector<CollabWeights>& all_weights,
                                   int round = 0);

}  // namespace colupi
