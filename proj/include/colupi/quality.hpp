#pragma once

#include "colupi/types.hpp"

#include <cmath>
#include <limits>

namespace colupi {

struct QualityReport {
    double db_index = std::numeric_limits<double>::infinity();  // lower is better
    Vector per_cluster_scatter;       // length K, 0 for empty clusters
    std::vector<int> empty_clusters;

    bool finite() const { return std::isfinite(db_index); }
};

/// Davies-Bouldin index over the non-empty clusters: centroids are cluster
/// means, scatter is the mean Euclidean distance to the centroid. Fewer
/// than two non-empty clusters (or coinciding centroids) yield an infinite
/// index, which callers treat as worst quality.
QualityReport davies_bouldin(const DataMatrix& data, const std::vector<int>& labels,
                             int clusters);

/// Strict ordering used by the acceptance gate: true iff a is strictly
/// better (lower) than b. Any report without a finite index ranks worst.
bool quality_better(const QualityReport& a, const QualityReport& b);

}  // namespace colupi
