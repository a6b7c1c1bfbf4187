#pragma once

#include "colupi/types.hpp"

#include <memory>

namespace colupi {

/// Diagonal-covariance Gaussian mixture parameters.
struct GmmParams {
    Matrix means;      // K x d
    Matrix variances;  // K x d, every entry >= covariance_floor
    Vector mixing;     // length K, sums to 1
};

/// k-means++-style seeding of K centers, then responsibilities from a
/// softmax of negative squared distances (unit temperature).
/// Deterministic given the seed. Requires N >= K.
PartitionMatrix init_responsibilities(const DataMatrix& data, int clusters,
                                      std::uint64_t seed);

struct FitResult {
    GmmParams params;
    std::vector<double> loglik_trace;      // mean log-likelihood per EM iteration
    std::vector<int> reseeded_iterations;  // iterations where a dead component
                                           // was re-seeded (resets monotonicity)
};

/// One M-step from the given responsibilities, then EM until the mean
/// log-likelihood improves by less than cfg.em_tol or cfg.em_max_iters is
/// reached. Components whose responsibility mass collapses below 1e-8 are
/// re-seeded at the point with the lowest max-responsibility.
FitResult fit_from_responsibilities(const DataMatrix& data,
                                    const PartitionMatrix& resp,
                                    const RunConfig& cfg);

/// Bayes posterior over components per row, computed in log space with
/// max-subtraction. Rows sum to 1.
PartitionMatrix responsibilities(const DataMatrix& data, const GmmParams& params);

/// Mean per-observation log-likelihood under the mixture.
double log_likelihood(const DataMatrix& data, const GmmParams& params);

class Learner;

struct FitOutcome {
    std::shared_ptr<const Learner> learner;
    std::vector<double> loglik_trace;
    std::vector<int> reseeded_iterations;
};

/// Contract every local clusterer must satisfy: it can resume training from
/// an arbitrary responsibility matrix and report posterior responsibilities
/// for its data. Learners are immutable; refit returns a new instance so
/// rejected proposals roll back by simply keeping the old one.
class Learner {
public:
    virtual ~Learner() = default;
    virtual FitOutcome refit(const DataMatrix& data, const PartitionMatrix& start,
                             const RunConfig& cfg) const = 0;
    virtual PartitionMatrix responsibilities(const DataMatrix& data) const = 0;
};

/// Reference learner: diagonal-covariance Gaussian mixture EM.
class GmmLearner final : public Learner {
public:
    explicit GmmLearner(GmmParams params) : params_(std::move(params)) {}

    FitOutcome refit(const DataMatrix& data, const PartitionMatrix& start,
                     const RunConfig& cfg) const override;
    PartitionMatrix responsibilities(const DataMatrix& data) const override;

    const GmmParams& params() const { return params_; }

private:
    GmmParams params_;
};

}  // namespace colupi
