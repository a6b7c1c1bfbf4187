#include "colupi/eval_stats.hpp"

#include "colupi/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace colupi {

namespace {

// Regularized upper incomplete gamma Q(a, x), series for x < a+1 and
// modified Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularized_gamma_q domain");
    if (x == 0.0) return 1.0;

    const double log_gamma_a = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - log_gamma_a);
        return 1.0 - p;
    }
    // Q(a,x) by continued fraction.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - log_gamma_a) * h;
}

// Critical q constants for the Nemenyi test (two-tailed studentized range
// at infinite degrees of freedom divided by sqrt(2)), M = 2..10.
constexpr double kNemenyiQ05[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                  2.949, 3.031, 3.102, 3.164};
constexpr double kNemenyiQ10[] = {1.645, 2.052, 2.291, 2.459, 2.589,
                                  2.693, 2.780, 2.855, 2.920};

bool is_missing_cell(std::string cell) {
    // trim
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string::npos) return true;
    const auto last = cell.find_last_not_of(" \t\r");
    cell = cell.substr(first, last - first + 1);
    return cell.empty() || cell == "--" || cell == "-" || cell == "NA" ||
           cell == "na" || cell == "nan" || cell == "NaN";
}

}  // namespace

double chi_squared_survival(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared_survival: dof must be >= 1");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

RankTable build_rank_table(std::vector<std::string> methods,
                           std::vector<std::string> datasets, const Matrix& scores) {
    const Eigen::Index m = scores.rows();
    const Eigen::Index d = scores.cols();
    if (static_cast<Eigen::Index>(methods.size()) != m ||
        static_cast<Eigen::Index>(datasets.size()) != d) {
        throw std::invalid_argument("build_rank_table: name counts do not match scores shape");
    }
    if (!scores.allFinite()) {
        throw std::invalid_argument("build_rank_table: scores must be finite (complete blocks)");
    }

    RankTable table;
    table.methods = std::move(methods);
    table.datasets = std::move(datasets);
    table.scores = scores;
    table.ranks.resize(m, d);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < d; ++j) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return scores(a, j) < scores(b, j);
        });
        // Average rank across each tied block.
        Eigen::Index i = 0;
        while (i < m) {
            Eigen::Index e = i;
            while (e + 1 < m && scores(order[static_cast<std::size_t>(e + 1)], j) ==
                                    scores(order[static_cast<std::size_t>(i)], j)) {
                ++e;
            }
            const double rank = 0.5 * static_cast<double>(i + e) + 1.0;
            for (Eigen::Index t = i; t <= e; ++t) {
                table.ranks(order[static_cast<std::size_t>(t)], j) = rank;
            }
            i = e + 1;
        }
    }
    return table;
}

RankTable load_scores_csv(const std::string& path) {
    const auto rows = parse_csv_rows(path);
    if (rows.size() < 2 || rows.front().size() < 2) {
        throw std::runtime_error("scores CSV needs a dataset header row and method rows: " + path);
    }
    const std::size_t columns = rows.front().size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != columns) {
            throw std::runtime_error("scores CSV row " + std::to_string(r) + " has " +
                                     std::to_string(rows[r].size()) + " cells, expected " +
                                     std::to_string(columns));
        }
    }

    std::vector<std::string> all_datasets(rows.front().begin() + 1, rows.front().end());
    std::vector<std::string> methods;
    const std::size_t m = rows.size() - 1;
    Matrix raw(m, all_datasets.size());
    std::vector<char> complete(all_datasets.size(), 1);
    for (std::size_t r = 0; r < m; ++r) {
        methods.push_back(rows[r + 1][0]);
        for (std::size_t c = 0; c < all_datasets.size(); ++c) {
            const std::string& cell = rows[r + 1][c + 1];
            if (is_missing_cell(cell)) {
                complete[c] = 0;
                raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            try {
                raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("scores CSV: cannot parse cell '" + cell +
                                         "' at method row " + std::to_string(r + 1) +
                                         ", dataset column " + std::to_string(c + 1));
            }
        }
    }

    std::vector<std::string> datasets;
    std::vector<Eigen::Index> keep;
    for (std::size_t c = 0; c < all_datasets.size(); ++c) {
        if (complete[c]) {
            datasets.push_back(all_datasets[c]);
            keep.push_back(static_cast<Eigen::Index>(c));
        }
    }
    if (keep.empty()) {
        throw std::runtime_error("scores CSV has no complete dataset column");
    }
    Matrix scores(m, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        scores.col(static_cast<Eigen::Index>(c)) = raw.col(keep[c]);
    }
    return build_rank_table(std::move(methods), std::move(datasets), scores);
}

FriedmanResult friedman_statistic(const RankTable& table) {
    const Eigen::Index m = table.ranks.rows();
    const Eigen::Index d = table.ranks.cols();
    if (m < 3) throw std::invalid_argument("Friedman test needs at least 3 methods");
    if (d < 2) throw std::invalid_argument("Friedman test needs at least 2 datasets");

    const double md = static_cast<double>(m);
    const double dd = static_cast<double>(d);
    double sum_sq = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mean_rank = table.ranks.row(j).sum() / dd;
        sum_sq += mean_rank * mean_rank;
    }
    FriedmanResult out;
    out.chi2 = 12.0 * dd / (md * (md + 1.0)) * (sum_sq - md * (md + 1.0) * (md + 1.0) / 4.0);
    if (out.chi2 < 0.0) out.chi2 = 0.0;  // guard tiny negative drift in the all-tied case
    out.p_value = chi_squared_survival(out.chi2, static_cast<int>(m) - 1);
    return out;
}

double nemenyi_critical_difference(int methods, int datasets, double alpha) {
    if (methods < 2 || methods > 10) {
        throw std::invalid_argument("Nemenyi q table covers 2 <= M <= 10, got M = " +
                                    std::to_string(methods));
    }
    if (datasets < 1) throw std::invalid_argument("Nemenyi needs at least one dataset");
    const double* q_table = nullptr;
    if (std::abs(alpha - 0.05) < 1e-12) {
        q_table = kNemenyiQ05;
    } else if (std::abs(alpha - 0.10) < 1e-12) {
        q_table = kNemenyiQ10;
    } else {
        throw std::invalid_argument("Nemenyi alpha must be 0.05 or 0.10");
    }
    const double q = q_table[methods - 2];
    const double md = static_cast<double>(methods);
    return q * std::sqrt(md * (md + 1.0) / (6.0 * static_cast<double>(datasets)));
}

CriticalDiagram critical_diagram_data(const RankTable& table, double cd) {
    const Eigen::Index m = table.ranks.rows();
    const double dd = static_cast<double>(table.ranks.cols());

    CriticalDiagram diagram;
    diagram.order.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        diagram.order.push_back({table.methods[static_cast<std::size_t>(j)],
                                 table.ranks.row(j).sum() / dd});
    }
    std::stable_sort(diagram.order.begin(), diagram.order.end(),
                     [](const MethodRank& a, const MethodRank& b) {
                         return a.mean_rank < b.mean_rank;
                     });

    // Maximal runs of consecutive methods whose extreme mean ranks are
    // closer than the critical difference.
    int prev_last = -1;
    for (int first = 0; first < static_cast<int>(m); ++first) {
        int last = first;
        while (last + 1 < static_cast<int>(m) &&
               diagram.order[static_cast<std::size_t>(last + 1)].mean_rank -
                       diagram.order[static_cast<std::size_t>(first)].mean_rank <
                   cd) {
            ++last;
        }
        if (last > prev_last) {
            diagram.groups.emplace_back(first, last);
            prev_last = last;
        }
    }
    return diagram;
}

}  // namespace colupi
