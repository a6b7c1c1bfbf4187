#include "colupi/gmm.hpp"

#include "colupi/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace colupi {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)
constexpr double kDeadComponentMass = 1e-8;

void require_fit_inputs(const DataMatrix& data, int clusters) {
    if (auto bad = validate_data(data)) {
        throw std::invalid_argument("invalid data: " + *bad);
    }
    if (clusters < 2) {
        throw std::invalid_argument("K must be >= 2, got " + std::to_string(clusters));
    }
    if (data.rows() < clusters) {
        throw std::invalid_argument("N = " + std::to_string(data.rows()) +
                                    " must be >= K = " + std::to_string(clusters));
    }
}

// E-step: posterior responsibilities and per-row log-likelihood under the
// current parameters, log-space with max-subtraction. Rows are independent.
void e_step(const DataMatrix& data, const GmmParams& params, Matrix& resp,
            Vector& row_loglik) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    const Eigen::Index k = params.means.rows();

    // Per-component additive constant and precision terms.
    Vector log_const(k);
    Matrix half_prec(k, d);
    for (Eigen::Index c = 0; c < k; ++c) {
        double s = params.mixing[c] > 0.0 ? std::log(params.mixing[c])
                                          : -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < d; ++j) {
            s -= 0.5 * (kLogTwoPi + std::log(params.variances(c, j)));
            half_prec(c, j) = 0.5 / params.variances(c, j);
        }
        log_const[c] = s;
    }

    resp.resize(n, k);
    row_loglik.resize(n);
#pragma omp parallel for schedule(static) if (n > 256)
    for (Eigen::Index i = 0; i < n; ++i) {
        double max_log = -std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < k; ++c) {
            double lp = log_const[c];
            for (Eigen::Index j = 0; j < d; ++j) {
                const double diff = data.values(i, j) - params.means(c, j);
                lp -= diff * diff * half_prec(c, j);
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

Vector per_feature_population_variance(const DataMatrix& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    Vector var(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double mean = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) mean += data.values(i, j);
        mean /= static_cast<double>(n);
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double diff = data.values(i, j) - mean;
            s += diff * diff;
        }
        var[j] = s / static_cast<double>(n);
    }
    return var;
}

// Weighted means/variances/mixing from responsibilities. Components whose
// responsibility mass collapsed are re-seeded at the least-claimed points;
// their ids are appended to `reseeded`.
GmmParams m_step(const DataMatrix& data, const Matrix& resp, double covariance_floor,
                 int iteration, std::vector<int>* reseeded_components) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    const Eigen::Index k = resp.cols();

    GmmParams params;
    params.means.resize(k, d);
    params.variances.resize(k, d);
    params.mixing.resize(k);

    Vector mass(k);
    std::vector<Eigen::Index> dead;
    for (Eigen::Index c = 0; c < k; ++c) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += resp(i, c);
        mass[c] = s;
        if (s < kDeadComponentMass) dead.push_back(c);
    }

#pragma omp parallel for schedule(static) if (n > 256)
    for (Eigen::Index c = 0; c < k; ++c) {
        if (mass[c] < kDeadComponentMass) continue;
        for (Eigen::Index j = 0; j < d; ++j) {
            double m = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) m += resp(i, c) * data.values(i, j);
            m /= mass[c];
            double v = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double diff = data.values(i, j) - m;
                v += resp(i, c) * diff * diff;
            }
            v /= mass[c];
            params.means(c, j) = m;
            params.variances(c, j) = std::max(v, covariance_floor);
        }
        params.mixing[c] = mass[c] / static_cast<double>(n);
    }

    if (!dead.empty()) {
        // Re-seed each dead component at the point claimed least confidently
        // by the others, one point per component.
        std::vector<std::pair<double, Eigen::Index>> claim(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            claim[static_cast<std::size_t>(i)] = {resp.row(i).maxCoeff(), i};
        }
        std::partial_sort(claim.begin(), claim.begin() + static_cast<long>(dead.size()),
                          claim.end());
        const Vector global_var = per_feature_population_variance(data);
        for (std::size_t idx = 0; idx < dead.size(); ++idx) {
            const Eigen::Index c = dead[idx];
            const Eigen::Index point = claim[idx].second;
            params.means.row(c) = data.values.row(point);
            for (Eigen::Index j = 0; j < d; ++j) {
                params.variances(c, j) = std::max(global_var[j], covariance_floor);
            }
            params.mixing[c] = 1.0 / static_cast<double>(n);
            if (reseeded_components != nullptr) {
                reseeded_components->push_back(static_cast<int>(c));
            }
            log_info("re-seeded dead component " + std::to_string(c) + " at point " +
                     std::to_string(point) + " (iteration " + std::to_string(iteration) + ")");
        }
    }

    params.mixing /= params.mixing.sum();
    return params;
}

}  // namespace

PartitionMatrix init_responsibilities(const DataMatrix& data, int clusters,
                                      std::uint64_t seed) {
    require_fit_inputs(data, clusters);
    const Eigen::Index n = data.rows();

    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> centers;
    centers.reserve(static_cast<std::size_t>(clusters));
    centers.push_back(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng));

    Vector dist2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist2[i] = (data.values.row(i) - data.values.row(centers[0])).squaredNorm();
    }
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    chosen[static_cast<std::size_t>(centers[0])] = 1;

    while (static_cast<int>(centers.size()) < clusters) {
        const double total = dist2.sum();
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            double cum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += dist2[i];
                if (cum > u) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;
        }
        if (pick < 0 || chosen[static_cast<std::size_t>(pick)]) {
            // All remaining mass sits on duplicates: fall back to the first
            // index not picked yet.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i],
                                (data.values.row(i) - data.values.row(pick)).squaredNorm());
        }
    }

    PartitionMatrix out;
    out.resp.resize(n, clusters);
#pragma omp parallel for schedule(static) if (n > 256)
    for (Eigen::Index i = 0; i < n; ++i) {
        double min_d2 = std::numeric_limits<double>::infinity();
        for (int c = 0; c < clusters; ++c) {
            const double d2 =
                (data.values.row(i) - data.values.row(centers[static_cast<std::size_t>(c)]))
                    .squaredNorm();
            out.resp(i, c) = d2;
            min_d2 = std::min(min_d2, d2);
        }
        double sum = 0.0;
        for (int c = 0; c < clusters; ++c) {
            const double e = std::exp(min_d2 - out.resp(i, c));
            out.resp(i, c) = e;
            sum += e;
        }
        for (int c = 0; c < clusters; ++c) out.resp(i, c) /= sum;
    }
    return out;
}

FitResult fit_from_responsibilities(const DataMatrix& data, const PartitionMatrix& resp,
                                    const RunConfig& cfg) {
    require_fit_inputs(data, cfg.clusters);
    if (auto bad = validate_config(cfg)) {
        throw std::invalid_argument("invalid config: " + *bad);
    }
    if (auto bad = validate_partition(resp)) {
        throw std::invalid_argument("invalid starting responsibilities: " + *bad);
    }
    if (resp.rows() != data.rows() || resp.clusters() != cfg.clusters) {
        throw std::invalid_argument("responsibility shape does not match data and K");
    }

    FitResult result;
    std::vector<int> reseeded_first;
    result.params = m_step(data, resp.resp, cfg.covariance_floor, 0, &reseeded_first);
    result.reseeded_iterations.insert(result.reseeded_iterations.end(),
                                      reseeded_first.size(), 0);

    Matrix r;
    Vector row_ll;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.em_max_iters; ++it) {
        e_step(data, result.params, r, row_ll);
        const double ll = row_ll.sum() / static_cast<double>(data.rows());
        result.loglik_trace.push_back(ll);
        if (it > 1 && ll - prev_ll < cfg.em_tol) break;
        prev_ll = ll;
        if (it == cfg.em_max_iters) break;

        std::vector<int> reseeded;
        result.params = m_step(data, r, cfg.covariance_floor, it, &reseeded);
        result.reseeded_iterations.insert(result.reseeded_iterations.end(),
                                          reseeded.size(), it);
    }
    return result;
}

PartitionMatrix responsibilities(const DataMatrix& data, const GmmParams& params) {
    if (params.means.rows() < 2 || params.means.cols() != data.cols()) {
        throw std::invalid_argument("responsibilities: parameter shape does not match data");
    }
    PartitionMatrix out;
    Vector row_ll;
    e_step(data, params, out.resp, row_ll);
    return out;
}

double log_likelihood(const DataMatrix& data, const GmmParams& params) {
    Matrix r;
    Vector row_ll;
    e_step(data, params, r, row_ll);
    return row_ll.sum() / static_cast<double>(data.rows());
}

FitOutcome GmmLearner::refit(const DataMatrix& data, const PartitionMatrix& start,
                             const RunConfig& cfg) const {
    FitResult fit = fit_from_responsibilities(data, start, cfg);
    FitOutcome outcome;
    outcome.learner = std::make_shared<GmmLearner>(std::move(fit.params));
    outcome.loglik_trace = std::move(fit.loglik_trace);
    outcome.reseeded_iterations = std::move(fit.reseeded_iterations);
    return outcome;
}

PartitionMatrix GmmLearner::responsibilities(const DataMatrix& data) const {
    return colupi::responsibilities(data, params_);
}

}  // namespace colupi
