#include "colupi/types.hpp"

#include <cmath>
#include <sstream>

namespace colupi {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::optional<std::string> validate_data(const DataMatrix& data) {
    if (data.rows() < 2) {
        return "N must be >= 2, got " + std::to_string(data.rows());
    }
    if (data.cols() < 1) {
        return "d must be >= 1, got " + std::to_string(data.cols());
    }
    if (!data.feature_names.empty() &&
        static_cast<Eigen::Index>(data.feature_names.size()) != data.cols()) {
        return "feature_names size " + std::to_string(data.feature_names.size()) +
               " does not match d = " + std::to_string(data.cols());
    }
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (!std::isfinite(data.values(i, j))) {
                return "row " + std::to_string(i) + " column " + std::to_string(j) +
                       " is not finite";
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> validate_partition(const PartitionMatrix& p) {
    if (p.clusters() < 2) {
        return "K must be >= 2, got " + std::to_string(p.clusters());
    }
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index k = 0; k < p.clusters(); ++k) {
            const double v = p.resp(i, k);
            if (!(v >= 0.0 && v <= 1.0)) {  // also catches NaN
                return "row " + std::to_string(i) + " entry " + std::to_string(k) +
                       " = " + format_double(v) + " outside [0, 1]";
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            return "row " + std::to_string(i) + " sums to " + format_double(sum);
        }
    }
    return std::nullopt;
}

std::optional<std::string> validate_config(const RunConfig& cfg) {
    if (cfg.clusters < 2) return "clusters must be >= 2";
    if (cfg.max_rounds < 1) return "max_rounds must be >= 1";
    if (cfg.em_max_iters < 1) return "em_max_iters must be >= 1";
    if (!(cfg.em_tol > 0.0)) return "em_tol must be > 0";
    if (cfg.rcolupi_restarts < 0) return "rcolupi_restarts must be >= 0";
    if (!(cfg.covariance_floor > 0.0)) return "covariance_floor must be > 0";
    return std::nullopt;
}

std::vector<int> harden(const PartitionMatrix& p) {
    std::vector<int> labels(static_cast<std::size_t>(p.rows()));
#pragma omp parallel for schedule(static) if (p.rows() > 512)
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        int best = 0;
        double best_value = p.resp(i, 0);
        for (Eigen::Index k = 1; k < p.clusters(); ++k) {
            if (p.resp(i, k) > best_value) {  // strict: ties keep the smaller index
                best_value = p.resp(i, k);
                best = static_cast<int>(k);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

}  // namespace colupi
