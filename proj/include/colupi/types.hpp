#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace colupi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Row-sum drift beyond this is a validation failure; partition-producing
// operations renormalize rows before returning so drift never accumulates
// across collaboration rounds.
inline constexpr double kRowSumTolerance = 1e-9;

// Probability entries at or below this are treated as exact zeros inside
// entropy sums (the 0*log0 = 0 convention).
inline constexpr double kProbabilityZero = 1e-15;

/// N x d feature matrix; observations are rows.
struct DataMatrix {
    Matrix values;
    std::vector<std::string> feature_names;  // size d

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Row-stochastic N x K matrix of cluster responsibilities.
struct PartitionMatrix {
    Matrix resp;

    Eigen::Index rows() const { return resp.rows(); }
    Eigen::Index clusters() const { return resp.cols(); }
};

/// Per-observation blending weights for one site: alpha weighs the site's
/// own partition, betas[j] weighs the partition received from
/// source_ids[j]. Raw weights live in [0,1]; the applied weights returned
/// by collab_update are renormalized so alpha[i] + sum_j betas[j][i] == 1.
struct CollabWeights {
    Vector alpha;                    // length N
    std::vector<Vector> betas;       // one length-N vector per remote
    std::vector<int> source_ids;     // site id each beta column refers to
};

/// P x P matrix of round-averaged applied weights. Row p shows where site p
/// sourced its information: diagonal = self-weight, off-diagonal = weight
/// given to each remote site. Rows sum to 1.
struct ConfidenceMatrix {
    Matrix weights;
    int round = 0;
};

enum class Variant { colupi, rcolupi };

struct RunConfig {
    int clusters = 2;
    int max_rounds = 50;
    int em_max_iters = 100;
    double em_tol = 1e-7;            // stop EM when mean log-lik improves less
    std::uint64_t seed = 0;
    Variant variant = Variant::colupi;
    int rcolupi_restarts = 3;        // randomized candidates per site per round
    double covariance_floor = 1e-6;
    bool sequential = false;         // literal site-by-site sweep instead of
                                     // synchronous start-of-round snapshots
};

/// Empty optional when all invariants hold, otherwise a description of the
/// first violated invariant (with its row index where applicable).
std::optional<std::string> validate_data(const DataMatrix& data);
std::optional<std::string> validate_partition(const PartitionMatrix& p);
std::optional<std::string> validate_config(const RunConfig& cfg);

/// Hard labels: argmax of each responsibility row, ties broken toward the
/// smallest cluster index.
std::vector<int> harden(const PartitionMatrix& p);

}  // namespace colupi
