#include "colupi/alignment.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace colupi {

namespace {

// Shortest-augmenting-path Hungarian method with row/column potentials,
// O(n^3). Returns the column matched to each row of the cost matrix.
std::vector<int> hungarian_min(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);  // 1-based columns

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (match[j] > 0) col_of_row[match[j] - 1] = j - 1;
    }
    return col_of_row;
}

double permutation_profit(const Matrix& profit, const std::vector<int>& perm) {
    double s = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
        s += profit(static_cast<Eigen::Index>(k), perm[k]);
    }
    return s;
}

}  // namespace

Matrix overlap_matrix(const PartitionMatrix& reference, const PartitionMatrix& other) {
    if (reference.rows() != other.rows() || reference.clusters() != other.clusters()) {
        throw std::invalid_argument("overlap_matrix: partitions must share N and K");
    }
    const Eigen::Index n = reference.rows();
    const Eigen::Index k = reference.clusters();
    Matrix m(k, k);
#pragma omp parallel for schedule(static) if (n > 512)
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                s += reference.resp(i, a) * other.resp(i, b);
            }
            m(a, b) = s;
        }
    }
    return m;
}

Assignment hungarian_max(const Matrix& profit) {
    const int n = static_cast<int>(profit.rows());
    if (n == 0 || profit.cols() != profit.rows()) {
        throw std::invalid_argument("hungarian_max: profit matrix must be square and non-empty");
    }
    if (!profit.allFinite()) {
        throw std::invalid_argument("hungarian_max: profit matrix has non-finite entries");
    }

    const Matrix cost = -profit;
    std::vector<int> perm = hungarian_min(cost);
    const double best = permutation_profit(profit, perm);

    // Lexicographic tie-break: walk the rows in order, and for each try the
    // unused columns smaller than the current choice. A column is adopted if
    // fixing it still allows the remaining rows to reach the optimum.
    const double tol = 1e-9 * (1.0 + std::abs(best));
    std::vector<char> used(n, 0);
    double prefix = 0.0;
    for (int row = 0; row < n; ++row) {
        for (int c = 0; c < perm[row]; ++c) {
            if (used[c]) continue;
            // Optimal completion for rows row+1.. over columns not yet taken.
            std::vector<int> free_cols;
            for (int j = 0; j < n; ++j) {
                if (!used[j] && j != c) free_cols.push_back(j);
            }
            const int m = n - row - 1;
            double completion = 0.0;
            std::vector<int> sub_perm;
            if (m > 0) {
                Matrix sub(m, m);
                for (int a = 0; a < m; ++a) {
                    for (int b = 0; b < m; ++b) {
                        sub(a, b) = cost(row + 1 + a, free_cols[static_cast<std::size_t>(b)]);
                    }
                }
                sub_perm = hungarian_min(sub);
                for (int a = 0; a < m; ++a) {
                    completion += profit(row + 1 + a, free_cols[static_cast<std::size_t>(sub_perm[a])]);
                }
            }
            if (prefix + profit(row, c) + completion >= best - tol) {
                perm[row] = c;
                for (int a = 0; a < m; ++a) {
                    perm[row + 1 + a] = free_cols[static_cast<std::size_t>(sub_perm[a])];
                }
                break;
            }
        }
        used[perm[row]] = 1;
        prefix += profit(row, perm[row]);
    }

    Assignment out;
    out.perm = std::move(perm);
    out.score = permutation_profit(profit, out.perm);
    return out;
}

PartitionMatrix align_to(const PartitionMatrix& reference, const PartitionMatrix& other) {
    if (reference.rows() != other.rows() || reference.clusters() != other.clusters()) {
        throw std::invalid_argument("align_to: partitions must share N and K");
    }
    const Assignment assignment = hungarian_max(overlap_matrix(reference, other));
    PartitionMatrix aligned;
    aligned.resp.resize(other.rows(), other.clusters());
    for (Eigen::Index k = 0; k < other.clusters(); ++k) {
        aligned.resp.col(k) = other.resp.col(assignment.perm[static_cast<std::size_t>(k)]);
    }
    return aligned;
}

}  // namespace colupi
