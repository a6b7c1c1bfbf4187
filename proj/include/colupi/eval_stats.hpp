#pragma once

#include "colupi/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace colupi {

/// Scores and per-dataset ranks for M methods over D datasets.
/// Lower scores are better; ranks average over ties, so every dataset
/// column of `ranks` sums to M(M+1)/2.
struct RankTable {
    std::vector<std::string> methods;
    std::vector<std::string> datasets;
    Matrix scores;  // M x D
    Matrix ranks;   // M x D
};

RankTable build_rank_table(std::vector<std::string> methods,
                           std::vector<std::string> datasets,
                           const Matrix& scores);

/// Parses a scores CSV (header row of dataset names, first column method
/// names). Datasets with any missing cell ("--", "", "NA", "nan") are
/// excluded entirely; rank tests require complete blocks.
RankTable load_scores_csv(const std::string& path);

struct FriedmanResult {
    double chi2 = 0.0;
    double p_value = 1.0;
};

/// Friedman chi-square over mean ranks, p-value from the chi-square
/// distribution with M-1 degrees of freedom. Requires M >= 3, D >= 2.
FriedmanResult friedman_statistic(const RankTable& table);

/// Nemenyi critical difference q_a(M) * sqrt(M(M+1)/(6D)) from an embedded
/// table of q constants. alpha must be 0.05 or 0.10, 2 <= M <= 10.
double nemenyi_critical_difference(int methods, int datasets, double alpha);

struct MethodRank {
    std::string method;
    double mean_rank = 0.0;
};

struct CriticalDiagram {
    std::vector<MethodRank> order;           // ascending mean rank (best first)
    std::vector<std::pair<int, int>> groups; // maximal [first,last] index runs
                                             // whose extreme ranks differ < cd
};

CriticalDiagram critical_diagram_data(const RankTable& table, double cd);

/// Upper tail P(X >= x) of the chi-square distribution with dof degrees of
/// freedom, via the regularized incomplete gamma function.
double chi_squared_survival(double x, int dof);

}  // namespace colupi
