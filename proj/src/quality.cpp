#include "colupi/quality.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace colupi {

QualityReport davies_bouldin(const DataMatrix& data, const std::vector<int>& labels,
                             int clusters) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (static_cast<Eigen::Index>(labels.size()) != n) {
        throw std::invalid_argument("davies_bouldin: label count does not match N");
    }
    if (clusters < 2) {
        throw std::invalid_argument("davies_bouldin: K must be >= 2");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= clusters) {
            throw std::invalid_argument("davies_bouldin: label " + std::to_string(labels[i]) +
                                        " at row " + std::to_string(i) + " outside [0, K)");
        }
    }

    QualityReport report;
    report.per_cluster_scatter = Vector::Zero(clusters);

    Matrix centroids = Matrix::Zero(clusters, d);
    Vector counts = Vector::Zero(clusters);
    Vector scatter = Vector::Zero(clusters);

    // Per-cluster accumulation, points visited in index order inside each
    // cluster so results do not depend on the thread count.
#pragma omp parallel for schedule(static) if (n > 512)
    for (int k = 0; k < clusters; ++k) {
        double count = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[static_cast<std::size_t>(i)] != k) continue;
            centroids.row(k) += data.values.row(i);
            count += 1.0;
        }
        counts[k] = count;
        if (count == 0.0) continue;
        centroids.row(k) /= count;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[static_cast<std::size_t>(i)] != k) continue;
            s += (data.values.row(i) - centroids.row(k)).norm();
        }
        scatter[k] = s / count;
    }

    for (int k = 0; k < clusters; ++k) {
        if (counts[k] == 0.0) {
            report.empty_clusters.push_back(k);
        } else {
            report.per_cluster_scatter[k] = scatter[k];
        }
    }

    const int live = clusters - static_cast<int>(report.empty_clusters.size());
    if (live < 2) {
        report.db_index = std::numeric_limits<double>::infinity();
        return report;
    }

    double total = 0.0;
    for (int k = 0; k < clusters; ++k) {
        if (counts[k] == 0.0) continue;
        double worst = 0.0;
        for (int l = 0; l < clusters; ++l) {
            if (l == k || counts[l] == 0.0) continue;
            const double sep = (centroids.row(k) - centroids.row(l)).norm();
            const double ratio = sep > 0.0 ? (scatter[k] + scatter[l]) / sep
                                           : std::numeric_limits<double>::infinity();
            worst = std::max(worst, ratio);
        }
        total += worst;
    }
    report.db_index = total / static_cast<double>(live);
    return report;
}

bool quality_better(const QualityReport& a, const QualityReport& b) {
    const bool a_worst = !a.finite() || !a.empty_clusters.empty();
    const bool b_worst = !b.finite() || !b.empty_clusters.empty();
    if (a_worst) return false;
    if (b_worst) return true;
    return a.db_index < b.db_index;
}

}  // namespace colupi
