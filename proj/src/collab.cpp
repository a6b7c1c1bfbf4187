#include "colupi/collab.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace colupi {

namespace {

// Raw weights below this count as "no information"; a row where every
// weight is this small keeps its local responsibilities unchanged.
constexpr double kWeightFloor = 1e-12;

double normalized_row_entropy(const Matrix& resp, Eigen::Index i, double log2_k) {
    double h = 0.0;
    for (Eigen::Index k = 0; k < resp.cols(); ++k) {
        const double p = resp(i, k);
        if (p > kProbabilityZero) h -= p * std::log2(p);
    }
    h /= log2_k;
    if (h < 0.0) h = 0.0;
    if (h > 1.0) h = 1.0;
    return h;
}

void require_same_shape(const PartitionMatrix& local,
                        const std::vector<PartitionMatrix>& remotes) {
    if (remotes.empty()) {
        throw std::invalid_argument("collaboration needs at least one remote partition");
    }
    for (std::size_t q = 0; q < remotes.size(); ++q) {
        if (remotes[q].rows() != local.rows() || remotes[q].clusters() != local.clusters()) {
            throw std::invalid_argument(
                "remote partition " + std::to_string(q) + " has shape " +
                std::to_string(remotes[q].rows()) + "x" + std::to_string(remotes[q].clusters()) +
                ", expected " + std::to_string(local.rows()) + "x" +
                std::to_string(local.clusters()));
        }
    }
}

}  // namespace

Vector row_entropy(const PartitionMatrix& p) {
    if (p.clusters() < 2) {
        throw std::invalid_argument("row_entropy requires K >= 2, got " +
                                    std::to_string(p.clusters()));
    }
    const double log2_k = std::log2(static_cast<double>(p.clusters()));
    Vector h(p.rows());
#pragma omp parallel for schedule(static) if (p.rows() > 512)
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        h[i] = normalized_row_entropy(p.resp, i, log2_k);
    }
    return h;
}

CollabWeights collab_weights(const PartitionMatrix& local,
                             const std::vector<PartitionMatrix>& remotes) {
    require_same_shape(local, remotes);

    const Eigen::Index n = local.rows();
    const auto r = remotes.size();
    const Vector local_h = row_entropy(local);
    std::vector<Vector> remote_h(r);
    for (std::size_t q = 0; q < r; ++q) remote_h[q] = row_entropy(remotes[q]);

    CollabWeights w;
    w.alpha.resize(n);
    w.betas.assign(r, Vector(n));
    w.source_ids.resize(r);
    for (std::size_t q = 0; q < r; ++q) w.source_ids[q] = static_cast<int>(q);

#pragma omp parallel for schedule(static) if (n > 512)
    for (Eigen::Index i = 0; i < n; ++i) {
        double mean_remote = 0.0;
        for (std::size_t q = 0; q < r; ++q) mean_remote += remote_h[q][i];
        mean_remote /= static_cast<double>(r);
        w.alpha[i] = mean_remote * (1.0 - local_h[i]);
        for (std::size_t q = 0; q < r; ++q) {
            w.betas[q][i] = local_h[i] * (1.0 - remote_h[q][i]);
        }
    }
    return w;
}

CollabUpdate collab_update(const PartitionMatrix& local,
                           const std::vector<PartitionMatrix>& remotes) {
    CollabWeights raw = collab_weights(local, remotes);

    const Eigen::Index n = local.rows();
    const Eigen::Index k = local.clusters();
    const auto r = remotes.size();

    CollabUpdate out;
    out.blended.resp.resize(n, k);
    out.applied = raw;  // same shape; entries overwritten below

#pragma omp parallel for schedule(static) if (n > 512)
    for (Eigen::Index i = 0; i < n; ++i) {
        double max_weight = raw.alpha[i];
        double total = raw.alpha[i];
        for (std::size_t q = 0; q < r; ++q) {
            max_weight = std::max(max_weight, raw.betas[q][i]);
            total += raw.betas[q][i];
        }

        if (max_weight < kWeightFloor) {
            // No information gradient: keep the local row.
            out.blended.resp.row(i) = local.resp.row(i);
            out.applied.alpha[i] = 1.0;
            for (std::size_t q = 0; q < r; ++q) out.applied.betas[q][i] = 0.0;
            continue;
        }

        for (Eigen::Index c = 0; c < k; ++c) {
            double v = raw.alpha[i] * local.resp(i, c);
            for (std::size_t q = 0; q < r; ++q) {
                v += raw.betas[q][i] * remotes[q].resp(i, c);
            }
            out.blended.resp(i, c) = v;
        }
        const double row_sum = out.blended.resp.row(i).sum();
        out.blended.resp.row(i) /= row_sum;

        out.applied.alpha[i] = raw.alpha[i] / total;
        for (std::size_t q = 0; q < r; ++q) {
            out.applied.betas[q][i] = raw.betas[q][i] / total;
        }
    }
    return out;
}

ConfidenceMatrix confidence_matrix(const std::vector<CollabWeights>& all_weights,
                                   int round) {
    const auto p = all_weights.size();
    if (p < 2) {
        throw std::invalid_argument("confidence matrix needs at least 2 sites");
    }

    ConfidenceMatrix c;
    c.round = round;
    c.weights = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));

    for (std::size_t site = 0; site < p; ++site) {
        const CollabWeights& w = all_weights[site];
        if (w.betas.size() != p - 1 || w.source_ids.size() != p - 1) {
            throw std::invalid_argument("site " + std::to_string(site) + " carries " +
                                        std::to_string(w.betas.size()) +
                                        " beta vectors, expected " + std::to_string(p - 1));
        }
        const Eigen::Index n = w.alpha.size();
        c.weights(static_cast<Eigen::Index>(site), static_cast<Eigen::Index>(site)) =
            w.alpha.sum() / static_cast<double>(n);
        for (std::size_t j = 0; j < w.betas.size(); ++j) {
            const int q = w.source_ids[j];
            if (q < 0 || q >= static_cast<int>(p) || q == static_cast<int>(site) ||
                w.betas[j].size() != n) {
                throw std::invalid_argument("site " + std::to_string(site) +
                                            " has an inconsistent weight for source " +
                                            std::to_string(q));
            }
            c.weights(static_cast<Eigen::Index>(site), q) =
                w.betas[j].sum() / static_cast<double>(n);
        }
    }
    return c;
}

}  // namespace colupi
