#include "colupi/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

// Straight-line loop versions of the hot kernels. No pragmas, no Eigen
// expression shortcuts; these define the expected numbers.

namespace colupi::ref {

Vector row_entropy(const PartitionMatrix& p) {
    if (p.clusters() < 2) throw std::invalid_argument("row_entropy requires K >= 2");
    const double log2k = std::log2(static_cast<double>(p.clusters()));
    Vector h(p.rows());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < p.clusters(); ++k) {
            const double v = p.resp(i, k);
            if (v > kProbabilityZero) s -= v * std::log2(v);
        }
        s /= log2k;
        if (s < 0.0) s = 0.0;
        if (s > 1.0) s = 1.0;
        h[i] = s;
    }
    return h;
}

CollabUpdate collab_update(const PartitionMatrix& local,
                           const std::vector<PartitionMatrix>& remotes) {
    if (remotes.empty()) throw std::invalid_argument("no remotes");
    const Eigen::Index n = local.rows();
    const Eigen::Index k = local.clusters();
    const std::size_t r = remotes.size();

    const Vector local_h = ref::row_entropy(local);
    std::vector<Vector> remote_h;
    remote_h.reserve(r);
    for (const auto& rp : remotes) remote_h.push_back(ref::row_entropy(rp));

    CollabUpdate out;
    out.blended.resp.resize(n, k);
    out.applied.alpha.resize(n);
    out.applied.betas.assign(r, Vector(n));
    out.applied.source_ids.resize(r);
    for (std::size_t q = 0; q < r; ++q) out.applied.source_ids[q] = static_cast<int>(q);

    for (Eigen::Index i = 0; i < n; ++i) {
        double mean_remote = 0.0;
        for (std::size_t q = 0; q < r; ++q) mean_remote += remote_h[q][i];
        mean_remote /= static_cast<double>(r);

        const double alpha = mean_remote * (1.0 - local_h[i]);
        std::vector<double> betas(r);
        double total = alpha;
        double max_w = alpha;
        for (std::size_t q = 0; q < r; ++q) {
            betas[q] = local_h[i] * (1.0 - remote_h[q][i]);
            total += betas[q];
            if (betas[q] > max_w) max_w = betas[q];
        }

        if (max_w < 1e-12) {
            for (Eigen::Index c = 0; c < k; ++c) out.blended.resp(i, c) = local.resp(i, c);
            out.applied.alpha[i] = 1.0;
            for (std::size_t q = 0; q < r; ++q) out.applied.betas[q][i] = 0.0;
            continue;
        }

        double row_sum = 0.0;
        for (Eigen::Index c = 0; c < k; ++c) {
            double v = alpha * local.resp(i, c);
            for (std::size_t q = 0; q < r; ++q) v += betas[q] * remotes[q].resp(i, c);
            out.blended.resp(i, c) = v;
            row_sum += v;
        }
        for (Eigen::Index c = 0; c < k; ++c) out.blended.resp(i, c) /= row_sum;

        out.applied.alpha[i] = alpha / total;
        for (std::size_t q = 0; q < r; ++q) out.applied.betas[q][i] = betas[q] / total;
    }
    return out;
}

Matrix overlap_matrix(const PartitionMatrix& reference, const PartitionMatrix& other) {
    const Eigen::Index n = reference.rows();
    const Eigen::Index k = reference.clusters();
    Matrix m(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += reference.resp(i, a) * other.resp(i, b);
            m(a, b) = s;
        }
    }
    return m;
}

namespace {

void e_step_rows(const DataMatrix& data, const GmmParams& params, Matrix& resp,
                 Vector& row_loglik) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    const Eigen::Index k = params.means.rows();
    constexpr double log_two_pi = 1.8378770664093453;

    std::vector<double> log_const(static_cast<std::size_t>(k));
    for (Eigen::Index c = 0; c < k; ++c) {
        double s = params.mixing[c] > 0.0 ? std::log(params.mixing[c])
                                          : -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < d; ++j) {
            s -= 0.5 * (log_two_pi + std::log(params.variances(c, j)));
        }
        log_const[static_cast<std::size_t>(c)] = s;
    }

    resp.resize(n, k);
    row_loglik.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double max_log = -std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < k; ++c) {
            double lp = log_const[static_cast<std::size_t>(c)];
            for (Eigen::Index j = 0; j < d; ++j) {
                const double diff = data.values(i, j) - params.means(c, j);
                lp -= diff * diff * (0.5 / params.variances(c, j));
            }
            resp(i, c) = lp;
            if (lp > max_log) max_log = lp;
        }
        double sum = 0.0;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double e = std::exp(resp(i, c) - max_log);
            resp(i, c) = e;
            sum += e;
        }
        for (Eigen::Index c = 0; c < k; ++c) resp(i, c) /= sum;
        row_loglik[i] = max_log + std::log(sum);
    }
}

}  // namespace

PartitionMatrix responsibilities(const DataMatrix& data, const GmmParams& params) {
    PartitionMatrix out;
    Vector row_ll;
    e_step_rows(data, params, out.resp, row_ll);
    return out;
}

double log_likelihood(const DataMatrix& data, const GmmParams& params) {
    Matrix r;
    Vector row_ll;
    e_step_rows(data, params, r, row_ll);
    double s = 0.0;
    for (Eigen::Index i = 0; i < row_ll.size(); ++i) s += row_ll[i];
    return s / static_cast<double>(data.rows());
}

QualityReport davies_bouldin(const DataMatrix& data, const std::vector<int>& labels,
                             int clusters) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();

    QualityReport report;
    report.per_cluster_scatter = Vector::Zero(clusters);

    Matrix centroids = Matrix::Zero(clusters, d);
    Vector counts = Vector::Zero(clusters);
    Vector scatter = Vector::Zero(clusters);

    for (int k = 0; k < clusters; ++k) {
        double count = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[static_cast<std::size_t>(i)] != k) continue;
            for (Eigen::Index j = 0; j < d; ++j) centroids(k, j) += data.values(i, j);
            count += 1.0;
        }
        counts[k] = count;
        if (count == 0.0) {
            report.empty_clusters.push_back(k);
            continue;
        }
        for (Eigen::Index j = 0; j < d; ++j) centroids(k, j) /= count;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[static_cast<std::size_t>(i)] != k) continue;
            double d2 = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) {
                const double diff = data.values(i, j) - centroids(k, j);
                d2 += diff * diff;
            }
            s += std::sqrt(d2);
        }
        scatter[k] = s / count;
        report.per_cluster_scatter[k] = scatter[k];
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
            double d2 = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) {
                const double diff = centroids(k, j) - centroids(l, j);
                d2 += diff * diff;
            }
            const double sep = std::sqrt(d2);
            const double ratio = sep > 0.0 ? (scatter[k] + scatter[l]) / sep
                                           : std::numeric_limits<double>::infinity();
            if (ratio > worst) worst = ratio;
        }
        total += worst;
    }
    report.db_index = total / static_cast<double>(live);
    return report;
}

}  // namespace colupi::ref
