#pragma once

#include "colupi/orchestrator.hpp"
#include "colupi/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace colupi {

enum class SplitStrategy { contiguous, round_robin, seeded_random };

SplitStrategy parse_split_strategy(const std::string& name);

struct SplitSpec {
    int sites = 2;
    SplitStrategy strategy = SplitStrategy::contiguous;
    std::vector<int> assignment;  // explicit feature -> site map; empty = use strategy
};

struct VerticalSplit {
    std::vector<DataMatrix> slices;
    std::vector<std::vector<int>> feature_indices;  // ascending, per site
};

struct SyntheticSpec {
    int n_points = 0;
    int n_gaussians = 1;
    double noise_fraction = 0.0;  // in [0, 1)
    int dims = 1;
    double separation = 1.0;      // minimum pairwise distance between means
    std::uint64_t seed = 0;
};

struct LoadedCsv {
    DataMatrix data;
    std::optional<std::vector<std::string>> labels;
};

struct MixtureData {
    DataMatrix data;
    std::vector<int> labels;  // component id; noise points get id n_gaussians
    Matrix component_means;   // n_gaussians x dims
};

struct StandardizeResult {
    DataMatrix data;
    std::vector<int> constant_features;  // mapped to zeros, logged
};

/// Raw CSV cells, no numeric conversion. Throws on empty files.
std::vector<std::vector<std::string>> parse_csv_rows(const std::string& path);

/// Numeric feature matrix, optionally extracting one column of labels
/// (by header name, or by index when there is no header). Labels are for
/// external evaluation only and never reach a learner. drop_columns names
/// non-feature columns (ids and the like) to discard.
LoadedCsv load_csv(const std::string& path, bool has_header,
                   const std::optional<std::string>& label_column = {},
                   const std::vector<std::string>& drop_columns = {});

/// Disjoint, jointly exhaustive feature slices, one per site. Requires
/// d >= sites; every site receives at least one feature.
VerticalSplit split_vertical(const DataMatrix& data, const SplitSpec& spec,
                             std::uint64_t seed);

/// Gaussian components with unit variances and means sampled at pairwise
/// distance >= separation, plus a uniform-noise class over the bounding
/// box. Deterministic given the seed.
MixtureData generate_mixture(const SyntheticSpec& spec);

/// Per-feature zero mean, unit variance (population divisor N). Constant
/// features map to zeros and are reported back.
StandardizeResult standardize(const DataMatrix& data);

/// Features (17 significant digits), optional trailing integer label column.
void write_data_csv(const DataMatrix& data, const std::string& path,
                    const std::vector<int>* labels = nullptr);

/// report.json (schema "colupi/1") plus confidence_round_<r>.csv,
/// final_partition_site_<p>.csv and qualities.csv under out_dir.
void write_run_report(const RunReport& report, const std::string& out_dir);

/// Parses a report.json written by write_run_report. final_partitions are
/// not stored in the JSON; they live in the per-site CSVs.
RunReport read_run_report(const std::string& path);

SyntheticSpec load_synthetic_spec(const std::string& path);

/// External indices for reporting against ground-truth labels.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);
double normalized_mutual_information(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace colupi
