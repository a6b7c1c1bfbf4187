#include "colupi/data_io.hpp"

#include "colupi/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace colupi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format17(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const std::string t = trimmed(cell);
    std::size_t consumed = 0;
    double value = 0.0;
    bool ok = !t.empty();
    if (ok) {
        try {
            value = std::stod(t, &consumed);
        } catch (const std::exception&) {
            ok = false;
        }
    }
    if (!ok || consumed != t.size()) {
        throw std::runtime_error("non-numeric cell '" + cell + "' at row " +
                                 std::to_string(row) + ", column " + std::to_string(col));
    }
    return value;
}

std::string variant_name(Variant v) {
    return v == Variant::rcolupi ? "rcolupi" : "colupi";
}

Variant variant_from_name(const std::string& name) {
    if (name == "colupi") return Variant::colupi;
    if (name == "rcolupi") return Variant::rcolupi;
    throw std::runtime_error("unknown variant '" + name + "'");
}

json quality_to_json(double db) {
    // Non-finite indices serialize as null; readers map null back to +inf.
    if (!std::isfinite(db)) return nullptr;
    return db;
}

double quality_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

}  // namespace

SplitStrategy parse_split_strategy(const std::string& name) {
    if (name == "contiguous") return SplitStrategy::contiguous;
    if (name == "round_robin") return SplitStrategy::round_robin;
    if (name == "seeded_random") return SplitStrategy::seeded_random;
    throw std::runtime_error("unknown split strategy '" + name + "'");
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw std::runtime_error("empty CSV file: " + path);
    return rows;
}

LoadedCsv load_csv(const std::string& path, bool has_header,
                   const std::optional<std::string>& label_column,
                   const std::vector<std::string>& drop_columns) {
    const auto rows = parse_csv_rows(path);

    std::vector<std::string> header;
    std::size_t first_data_row = 0;
    if (has_header) {
        header = rows.front();
        first_data_row = 1;
        if (rows.size() < 2) throw std::runtime_error("CSV has a header but no data rows: " + path);
    }
    const std::size_t columns = rows[first_data_row].size();
    if (columns == 0) throw std::runtime_error("CSV has no columns: " + path);
    if (has_header && header.size() != columns) {
        throw std::runtime_error("header has " + std::to_string(header.size()) +
                                 " cells but data rows have " + std::to_string(columns));
    }

    // Columns are referenced by header name, or by index without one.
    const auto resolve = [&](const std::string& name) -> std::size_t {
        if (has_header) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) {
                throw std::runtime_error("column '" + name + "' not in header");
            }
            return static_cast<std::size_t>(it - header.begin());
        }
        try {
            const long idx = std::stol(name);
            if (idx < 0 || static_cast<std::size_t>(idx) >= columns) throw std::exception();
            return static_cast<std::size_t>(idx);
        } catch (const std::exception&) {
            throw std::runtime_error("column '" + name +
                                     "' must be a valid column index when there is no header");
        }
    };

    std::optional<std::size_t> label_idx;
    if (label_column.has_value()) label_idx = resolve(*label_column);
    std::vector<char> skip(columns, 0);
    for (const std::string& name : drop_columns) skip[resolve(name)] = 1;
    if (label_idx && skip[*label_idx]) {
        throw std::runtime_error("label column '" + *label_column + "' is also dropped");
    }

    std::size_t d = 0;
    for (std::size_t c = 0; c < columns; ++c) {
        if (!skip[c] && !(label_idx && c == *label_idx)) ++d;
    }
    if (d == 0) throw std::runtime_error("no feature columns left in " + path);
    const std::size_t n = rows.size() - first_data_row;

    LoadedCsv out;
    out.data.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    if (label_idx) out.labels.emplace();

    for (std::size_t c = 0; c < columns; ++c) {
        if (skip[c] || (label_idx && c == *label_idx)) continue;
        if (has_header) {
            out.data.feature_names.push_back(header[c]);
        } else {
            out.data.feature_names.push_back("f" + std::to_string(out.data.feature_names.size()));
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        const auto& cells = rows[r + first_data_row];
        if (cells.size() != columns) {
            throw std::runtime_error("ragged CSV: row " + std::to_string(r) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(columns));
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < columns; ++c) {
            if (skip[c]) continue;
            if (label_idx && c == *label_idx) {
                out.labels->push_back(trimmed(cells[c]));
                continue;
            }
            out.data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_col)) =
                parse_cell(cells[c], r, c);
            ++out_col;
        }
    }
    return out;
}

VerticalSplit split_vertical(const DataMatrix& data, const SplitSpec& spec,
                             std::uint64_t seed) {
    const Eigen::Index d = data.cols();
    const int p = spec.sites;
    if (p < 1) throw std::invalid_argument("split_vertical: sites must be >= 1");
    if (d < p) {
        throw std::invalid_argument("split_vertical: d = " + std::to_string(d) +
                                    " < sites = " + std::to_string(p));
    }

    std::vector<std::vector<int>> assignment(static_cast<std::size_t>(p));
    if (!spec.assignment.empty()) {
        if (static_cast<Eigen::Index>(spec.assignment.size()) != d) {
            throw std::invalid_argument("explicit assignment must list every feature");
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            const int site = spec.assignment[static_cast<std::size_t>(j)];
            if (site < 0 || site >= p) {
                throw std::invalid_argument("assignment of feature " + std::to_string(j) +
                                            " to site " + std::to_string(site) +
                                            " outside [0, P)");
            }
            assignment[static_cast<std::size_t>(site)].push_back(static_cast<int>(j));
        }
    } else {
        switch (spec.strategy) {
            case SplitStrategy::contiguous: {
                const Eigen::Index base = d / p;
                const Eigen::Index extra = d % p;
                Eigen::Index next = 0;
                for (int s = 0; s < p; ++s) {
                    const Eigen::Index take = base + (s < extra ? 1 : 0);
                    for (Eigen::Index t = 0; t < take; ++t) {
                        assignment[static_cast<std::size_t>(s)].push_back(
                            static_cast<int>(next++));
                    }
                }
                break;
            }
            case SplitStrategy::round_robin:
                for (Eigen::Index j = 0; j < d; ++j) {
                    assignment[static_cast<std::size_t>(j % p)].push_back(static_cast<int>(j));
                }
                break;
            case SplitStrategy::seeded_random: {
                std::vector<int> order(static_cast<std::size_t>(d));
                std::iota(order.begin(), order.end(), 0);
                std::mt19937_64 rng(seed);
                std::shuffle(order.begin(), order.end(), rng);
                // Balanced blocks of the shuffled order; every site gets >= 1.
                const std::size_t base = order.size() / static_cast<std::size_t>(p);
                const std::size_t extra = order.size() % static_cast<std::size_t>(p);
                std::size_t next = 0;
                for (int s = 0; s < p; ++s) {
                    const std::size_t take = base + (static_cast<std::size_t>(s) < extra ? 1 : 0);
                    for (std::size_t t = 0; t < take; ++t) {
                        assignment[static_cast<std::size_t>(s)].push_back(order[next++]);
                    }
                    std::sort(assignment[static_cast<std::size_t>(s)].begin(),
                              assignment[static_cast<std::size_t>(s)].end());
                }
                break;
            }
        }
    }

    for (int s = 0; s < p; ++s) {
        if (assignment[static_cast<std::size_t>(s)].empty()) {
            throw std::invalid_argument("site " + std::to_string(s) + " received no features");
        }
    }

    VerticalSplit split;
    split.feature_indices = assignment;
    split.slices.reserve(static_cast<std::size_t>(p));
    for (int s = 0; s < p; ++s) {
        const auto& idx = assignment[static_cast<std::size_t>(s)];
        DataMatrix slice;
        slice.values.resize(data.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t t = 0; t < idx.size(); ++t) {
            slice.values.col(static_cast<Eigen::Index>(t)) = data.values.col(idx[t]);
            if (!data.feature_names.empty()) {
                slice.feature_names.push_back(data.feature_names[static_cast<std::size_t>(idx[t])]);
            }
        }
        split.slices.push_back(std::move(slice));
    }
    return split;
}

MixtureData generate_mixture(const SyntheticSpec& spec) {
    if (spec.n_points < 1) throw std::invalid_argument("generate_mixture: n_points must be >= 1");
    if (spec.n_gaussians < 1) throw std::invalid_argument("generate_mixture: n_gaussians must be >= 1");
    if (spec.dims < 1) throw std::invalid_argument("generate_mixture: dims must be >= 1");
    if (!(spec.noise_fraction >= 0.0 && spec.noise_fraction < 1.0)) {
        throw std::invalid_argument("generate_mixture: noise_fraction must be in [0, 1)");
    }
    if (!(spec.separation > 0.0)) {
        throw std::invalid_argument("generate_mixture: separation must be > 0");
    }

    const int n_noise = static_cast<int>(std::llround(spec.noise_fraction * spec.n_points));
    const int n_gauss = spec.n_points - n_noise;
    if (n_gauss < spec.n_gaussians) {
        throw std::invalid_argument("generate_mixture: not enough non-noise points for " +
                                    std::to_string(spec.n_gaussians) + " components");
    }

    std::mt19937_64 rng(spec.seed);
    // Means live in a box of +-2.5 separations per axis; requests that cannot
    // park there fail once the retry budget runs out.
    const double box = 2.5 * spec.separation;
    std::uniform_real_distribution<double> mean_dist(-box, box);

    Matrix means(spec.n_gaussians, spec.dims);
    constexpr int kRetryBudget = 20000;
    int attempts = 0;
    for (int k = 0; k < spec.n_gaussians; ++k) {
        while (true) {
            if (++attempts > kRetryBudget) {
                throw std::runtime_error(
                    "generate_mixture: cannot place " + std::to_string(spec.n_gaussians) +
                    " component means at pairwise distance >= " +
                    std::to_string(spec.separation) + " in " + std::to_string(spec.dims) +
                    " dimensions; lower the separation or the component count");
            }
            for (int j = 0; j < spec.dims; ++j) means(k, j) = mean_dist(rng);
            bool ok = true;
            for (int l = 0; l < k; ++l) {
                if ((means.row(k) - means.row(l)).norm() < spec.separation) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
        }
    }

    MixtureData out;
    out.component_means = means;
    out.data.values.resize(spec.n_points, spec.dims);
    out.labels.resize(static_cast<std::size_t>(spec.n_points));
    for (int j = 0; j < spec.dims; ++j) {
        out.data.feature_names.push_back("f" + std::to_string(j));
    }

    std::normal_distribution<double> unit_normal(0.0, 1.0);
    int row = 0;
    for (int k = 0; k < spec.n_gaussians; ++k) {
        const int share = n_gauss / spec.n_gaussians + (k < n_gauss % spec.n_gaussians ? 1 : 0);
        for (int t = 0; t < share; ++t, ++row) {
            for (int j = 0; j < spec.dims; ++j) {
                out.data.values(row, j) = means(k, j) + unit_normal(rng);
            }
            out.labels[static_cast<std::size_t>(row)] = k;
        }
    }

    if (n_noise > 0) {
        // Uniform noise over the bounding box of the Gaussian points.
        Vector lo(spec.dims), hi(spec.dims);
        for (int j = 0; j < spec.dims; ++j) {
            lo[j] = out.data.values.col(j).head(row).minCoeff();
            hi[j] = out.data.values.col(j).head(row).maxCoeff();
        }
        for (int t = 0; t < n_noise; ++t, ++row) {
            for (int j = 0; j < spec.dims; ++j) {
                out.data.values(row, j) =
                    std::uniform_real_distribution<double>(lo[j], hi[j])(rng);
            }
            out.labels[static_cast<std::size_t>(row)] = spec.n_gaussians;
        }
    }
    return out;
}

StandardizeResult standardize(const DataMatrix& data) {
    if (data.rows() < 2) throw std::invalid_argument("standardize needs N >= 2");

    StandardizeResult out;
    out.data.feature_names = data.feature_names;
    out.data.values.resize(data.rows(), data.cols());
    const double n = static_cast<double>(data.rows());
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        const double mean = data.values.col(j).sum() / n;
        double var = 0.0;
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            const double diff = data.values(i, j) - mean;
            var += diff * diff;
        }
        var /= n;  // population divisor
        if (var == 0.0) {
            out.data.values.col(j).setZero();
            out.constant_features.push_back(static_cast<int>(j));
            log_info("standardize: feature " + std::to_string(j) + " is constant, mapped to zeros");
            continue;
        }
        const double inv_std = 1.0 / std::sqrt(var);
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            out.data.values(i, j) = (data.values(i, j) - mean) * inv_std;
        }
    }
    return out;
}

void write_data_csv(const DataMatrix& data, const std::string& path,
                    const std::vector<int>* labels) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write " + path);

    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        if (j > 0) outf << ',';
        outf << (data.feature_names.empty() ? "f" + std::to_string(j)
                                            : data.feature_names[static_cast<std::size_t>(j)]);
    }
    if (labels != nullptr) outf << ",label";
    outf << '\n';

    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (j > 0) outf << ',';
            outf << format17(data.values(i, j));
        }
        if (labels != nullptr) outf << ',' << (*labels)[static_cast<std::size_t>(i)];
        outf << '\n';
    }
}

void write_run_report(const RunReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);

    json j;
    j["schema"] = "colupi/1";
    j["timestamp"] = utc_timestamp();
    j["config"] = {{"clusters", report.config.clusters},
                   {"max_rounds", report.config.max_rounds},
                   {"em_max_iters", report.config.em_max_iters},
                   {"em_tol", report.config.em_tol},
                   {"seed", report.config.seed},
                   {"variant", variant_name(report.config.variant)},
                   {"rcolupi_restarts", report.config.rcolupi_restarts},
                   {"covariance_floor", report.config.covariance_floor},
                   {"sequential", report.config.sequential}};
    j["sites"] = report.sites;

    json locals = json::array();
    for (double q : report.local_step_qualities) locals.push_back(quality_to_json(q));
    j["local_step_qualities"] = locals;

    json rounds = json::array();
    for (const RoundTrace& round : report.rounds) {
        json per_site = json::array();
        for (const SiteRoundTrace& s : round.per_site) {
            per_site.push_back({{"pre_quality", quality_to_json(s.pre_quality)},
                                {"post_quality", quality_to_json(s.post_quality)},
                                {"accepted", s.accepted}});
        }
        json confidence = json::array();
        for (Eigen::Index r = 0; r < round.confidence.weights.rows(); ++r) {
            json rw = json::array();
            for (Eigen::Index c = 0; c < round.confidence.weights.cols(); ++c) {
                rw.push_back(round.confidence.weights(r, c));
            }
            confidence.push_back(std::move(rw));
        }
        rounds.push_back({{"round", round.round},
                          {"per_site", std::move(per_site)},
                          {"confidence", std::move(confidence)}});
    }
    j["rounds"] = std::move(rounds);

    json finals = json::array();
    for (double q : report.final_qualities) finals.push_back(quality_to_json(q));
    j["final_qualities"] = finals;
    j["terminated_reason"] = report.terminated_reason == TerminationReason::no_improvement
                                 ? "no_improvement"
                                 : "max_rounds";

    {
        std::ofstream outf(fs::path(out_dir) / "report.json");
        if (!outf) throw std::runtime_error("cannot write report.json under " + out_dir);
        outf << j.dump(2) << '\n';
    }

    // Per-round confidence matrices, site_<p> headers on both axes.
    for (const RoundTrace& round : report.rounds) {
        const fs::path path =
            fs::path(out_dir) / ("confidence_round_" + std::to_string(round.round) + ".csv");
        std::ofstream outf(path);
        if (!outf) throw std::runtime_error("cannot write " + path.string());
        for (Eigen::Index c = 0; c < round.confidence.weights.cols(); ++c) {
            outf << ",site_" << c;
        }
        outf << '\n';
        for (Eigen::Index r = 0; r < round.confidence.weights.rows(); ++r) {
            outf << "site_" << r;
            for (Eigen::Index c = 0; c < round.confidence.weights.cols(); ++c) {
                outf << ',' << format17(round.confidence.weights(r, c));
            }
            outf << '\n';
        }
    }

    for (std::size_t p = 0; p < report.final_partitions.size(); ++p) {
        const fs::path path =
            fs::path(out_dir) / ("final_partition_site_" + std::to_string(p) + ".csv");
        std::ofstream outf(path);
        if (!outf) throw std::runtime_error("cannot write " + path.string());
        const PartitionMatrix& part = report.final_partitions[p];
        for (Eigen::Index k = 0; k < part.clusters(); ++k) {
            if (k > 0) outf << ',';
            outf << "cluster_" << k;
        }
        outf << '\n';
        for (Eigen::Index i = 0; i < part.rows(); ++i) {
            for (Eigen::Index k = 0; k < part.clusters(); ++k) {
                if (k > 0) outf << ',';
                outf << format17(part.resp(i, k));
            }
            outf << '\n';
        }
    }

    {
        std::ofstream outf(fs::path(out_dir) / "qualities.csv");
        if (!outf) throw std::runtime_error("cannot write qualities.csv under " + out_dir);
        outf << "round";
        for (int p = 0; p < report.sites; ++p) outf << ",site_" << p;
        outf << '\n';
        outf << 0;
        for (double q : report.local_step_qualities) outf << ',' << format17(q);
        outf << '\n';
        for (const RoundTrace& round : report.rounds) {
            outf << round.round;
            for (const SiteRoundTrace& s : round.per_site) {
                outf << ',' << format17(s.accepted ? s.post_quality : s.pre_quality);
            }
            outf << '\n';
        }
    }
}

RunReport read_run_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);  // throws with byte position on corrupt input

    if (j.at("schema").get<std::string>() != "colupi/1") {
        throw std::runtime_error("unsupported report schema: " +
                                 j.at("schema").get<std::string>());
    }

    RunReport report;
    const json& cfg = j.at("config");
    report.config.clusters = cfg.at("clusters").get<int>();
    report.config.max_rounds = cfg.at("max_rounds").get<int>();
    report.config.em_max_iters = cfg.at("em_max_iters").get<int>();
    report.config.em_tol = cfg.at("em_tol").get<double>();
    report.config.seed = cfg.at("seed").get<std::uint64_t>();
    report.config.variant = variant_from_name(cfg.at("variant").get<std::string>());
    report.config.rcolupi_restarts = cfg.at("rcolupi_restarts").get<int>();
    report.config.covariance_floor = cfg.at("covariance_floor").get<double>();
    report.config.sequential = cfg.at("sequential").get<bool>();

    report.sites = j.at("sites").get<int>();
    for (const json& q : j.at("local_step_qualities")) {
        report.local_step_qualities.push_back(quality_from_json(q));
    }
    for (const json& jr : j.at("rounds")) {
        RoundTrace round;
        round.round = jr.at("round").get<int>();
        for (const json& js : jr.at("per_site")) {
            SiteRoundTrace s;
            s.pre_quality = quality_from_json(js.at("pre_quality"));
            s.post_quality = quality_from_json(js.at("post_quality"));
            s.accepted = js.at("accepted").get<bool>();
            round.per_site.push_back(s);
        }
        const json& jc = jr.at("confidence");
        round.confidence.round = round.round;
        round.confidence.weights.resize(static_cast<Eigen::Index>(jc.size()),
                                        static_cast<Eigen::Index>(jc.size()));
        for (std::size_t r = 0; r < jc.size(); ++r) {
            for (std::size_t c = 0; c < jc[r].size(); ++c) {
                round.confidence.weights(static_cast<Eigen::Index>(r),
                                         static_cast<Eigen::Index>(c)) = jc[r][c].get<double>();
            }
        }
        report.rounds.push_back(std::move(round));
    }
    for (const json& q : j.at("final_qualities")) {
        report.final_qualities.push_back(quality_from_json(q));
    }
    report.terminated_reason = j.at("terminated_reason").get<std::string>() == "max_rounds"
                                   ? TerminationReason::max_rounds
                                   : TerminationReason::no_improvement;
    return report;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);

    SyntheticSpec spec;
    spec.n_points = j.at("n_points").get<int>();
    spec.n_gaussians = j.at("n_gaussians").get<int>();
    spec.noise_fraction = j.at("noise_fraction").get<double>();
    spec.dims = j.at("dims").get<int>();
    spec.separation = j.at("separation").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("adjusted_rand_index: label vectors must match and be non-empty");
    }
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> row_sums, col_sums;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cells[{a[i], b[i]}] += 1.0;
        row_sums[a[i]] += 1.0;
        col_sums[b[i]] += 1.0;
    }
    const auto choose2 = [](double x) { return 0.5 * x * (x - 1.0); };

    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [key, count] : cells) sum_cells += choose2(count);
    for (const auto& [key, count] : row_sums) sum_rows += choose2(count);
    for (const auto& [key, count] : col_sums) sum_cols += choose2(count);

    const double total = choose2(static_cast<double>(a.size()));
    const double expected = sum_rows * sum_cols / total;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_cells - expected) / (max_index - expected);
}

double normalized_mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("normalized_mutual_information: label vectors must match");
    }
    const double n = static_cast<double>(a.size());
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> row_sums, col_sums;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cells[{a[i], b[i]}] += 1.0;
        row_sums[a[i]] += 1.0;
        col_sums[b[i]] += 1.0;
    }
    double hu = 0.0, hv = 0.0, mi = 0.0;
    for (const auto& [key, count] : row_sums) hu -= (count / n) * log2_safe(count / n);
    for (const auto& [key, count] : col_sums) hv -= (count / n) * log2_safe(count / n);
    for (const auto& [key, count] : cells) {
        const double pij = count / n;
        const double pi = row_sums[key.first] / n;
        const double pj = col_sums[key.second] / n;
        mi += pij * log2_safe(pij / (pi * pj));
    }
    if (hu == 0.0 && hv == 0.0) return 1.0;
    if (hu == 0.0 || hv == 0.0) return 0.0;
    return mi / std::sqrt(hu * hv);
}

}  // namespace colupi
