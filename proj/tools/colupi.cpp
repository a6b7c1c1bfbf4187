#include "colupi/data_io.hpp"
#include "colupi/eval_stats.hpp"
#include "colupi/log.hpp"
#include "colupi/orchestrator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for semantically invalid invocations; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> encode_labels(const std::vector<std::string>& raw) {
    std::map<std::string, int> codes;
    std::vector<int> out;
    out.reserve(raw.size());
    for (const std::string& s : raw) {
        const auto [it, inserted] = codes.emplace(s, static_cast<int>(codes.size()));
        out.push_back(it->second);
    }
    return out;
}

struct RunOptions {
    std::string data_path;
    std::string synthetic_path;
    std::string out_dir;
    std::string variant = "colupi";
    std::string split = "contiguous";
    std::string label_column;
    std::vector<std::string> drop_columns;
    int sites = 0;
    int clusters = 0;
    int max_rounds = 50;
    int restarts = 3;
    int em_max_iters = 100;
    int threads = 0;
    double em_tol = 1e-7;
    std::uint64_t seed = 0;
    bool sequential = false;
    bool no_standardize = false;
    bool no_header = false;
};

int cmd_run(const RunOptions& opt) {
    if (opt.data_path.empty() == opt.synthetic_path.empty()) {
        throw UsageError("exactly one of --data or --synthetic is required");
    }
    if (opt.sites < 2) throw UsageError("collaboration needs at least 2 sites (P >= 2)");
    if (opt.clusters < 2) throw UsageError("--clusters must be >= 2");
    if (opt.out_dir.empty()) throw UsageError("--out is required");

    colupi::DataMatrix full;
    std::optional<std::vector<int>> truth;
    if (!opt.synthetic_path.empty()) {
        const colupi::SyntheticSpec spec = colupi::load_synthetic_spec(opt.synthetic_path);
        colupi::MixtureData mix = colupi::generate_mixture(spec);
        full = std::move(mix.data);
        truth = std::move(mix.labels);
    } else {
        std::optional<std::string> label_col;
        if (!opt.label_column.empty()) label_col = opt.label_column;
        colupi::LoadedCsv loaded =
            colupi::load_csv(opt.data_path, !opt.no_header, label_col, opt.drop_columns);
        full = std::move(loaded.data);
        if (loaded.labels) truth = encode_labels(*loaded.labels);
    }

    if (opt.clusters > full.rows()) {
        throw UsageError("--clusters = " + std::to_string(opt.clusters) +
                         " exceeds the number of observations N = " +
                         std::to_string(full.rows()));
    }
    if (opt.sites > full.cols()) {
        throw UsageError("--sites = " + std::to_string(opt.sites) +
                         " exceeds the number of features d = " + std::to_string(full.cols()));
    }

    colupi::SplitSpec split_spec;
    split_spec.sites = opt.sites;
    split_spec.strategy = colupi::parse_split_strategy(opt.split);
    colupi::VerticalSplit split = colupi::split_vertical(full, split_spec, opt.seed);

    std::vector<colupi::DataMatrix> slices;
    slices.reserve(split.slices.size());
    for (auto& slice : split.slices) {
        if (opt.no_standardize) {
            slices.push_back(std::move(slice));
        } else {
            slices.push_back(colupi::standardize(slice).data);
        }
    }

    colupi::RunConfig cfg;
    cfg.clusters = opt.clusters;
    cfg.max_rounds = opt.max_rounds;
    cfg.em_max_iters = opt.em_max_iters;
    cfg.em_tol = opt.em_tol;
    cfg.seed = opt.seed;
    cfg.variant = opt.variant == "rcolupi" ? colupi::Variant::rcolupi : colupi::Variant::colupi;
    cfg.rcolupi_restarts = opt.restarts;
    cfg.sequential = opt.sequential;

    if (opt.threads > 0) omp_set_num_threads(opt.threads);

    const colupi::RunReport report = colupi::run(slices, cfg);
    colupi::write_run_report(report, opt.out_dir);

    std::printf("%-6s %-6s %-12s %-12s %s\n", "round", "site", "pre", "post", "decision");
    for (const colupi::RoundTrace& round : report.rounds) {
        for (std::size_t p = 0; p < round.per_site.size(); ++p) {
            const colupi::SiteRoundTrace& s = round.per_site[p];
            std::printf("%-6d %-6zu %-12.6f %-12.6f %s\n", round.round, p, s.pre_quality,
                        s.post_quality, s.accepted ? "accept" : "reject");
        }
    }
    std::printf("terminated: %s after %zu round(s)\n",
                report.terminated_reason == colupi::TerminationReason::no_improvement
                    ? "no_improvement"
                    : "max_rounds",
                report.rounds.size());
    for (int p = 0; p < report.sites; ++p) {
        std::printf("site %d quality: local %.6f final %.6f\n", p,
                    report.local_step_qualities[static_cast<std::size_t>(p)],
                    report.final_qualities[static_cast<std::size_t>(p)]);
    }
    if (truth) {
        for (std::size_t p = 0; p < report.final_partitions.size(); ++p) {
            const std::vector<int> hard = colupi::harden(report.final_partitions[p]);
            std::printf("site %zu vs labels: ari %.4f nmi %.4f\n", p,
                        colupi::adjusted_rand_index(hard, *truth),
                        colupi::normalized_mutual_information(hard, *truth));
        }
    }
    std::printf("artifacts written to %s\n", opt.out_dir.c_str());
    return 0;
}

int cmd_generate(const std::string& spec_path, const std::string& out_path) {
    const colupi::SyntheticSpec spec = colupi::load_synthetic_spec(spec_path);
    const colupi::MixtureData mix = colupi::generate_mixture(spec);
    colupi::write_data_csv(mix.data, out_path, &mix.labels);
    std::printf("wrote %lld points x %lld features (+label) to %s\n",
                static_cast<long long>(mix.data.rows()),
                static_cast<long long>(mix.data.cols()), out_path.c_str());
    return 0;
}

int cmd_split(const std::string& data_path, bool no_header, int sites,
              const std::string& strategy, std::uint64_t seed, const std::string& out_dir) {
    if (sites < 1) throw UsageError("--sites must be >= 1");
    const colupi::LoadedCsv loaded = colupi::load_csv(data_path, !no_header);

    colupi::SplitSpec spec;
    spec.sites = sites;
    spec.strategy = colupi::parse_split_strategy(strategy);
    const colupi::VerticalSplit split = colupi::split_vertical(loaded.data, spec, seed);

    fs::create_directories(out_dir);
    for (std::size_t p = 0; p < split.slices.size(); ++p) {
        const fs::path path = fs::path(out_dir) / ("site_" + std::to_string(p) + ".csv");
        colupi::write_data_csv(split.slices[p], path.string());
        std::printf("site %zu:", p);
        for (int f : split.feature_indices[p]) std::printf(" %d", f);
        std::printf("  -> %s\n", path.string().c_str());
    }
    return 0;
}

int cmd_eval_ranks(const std::string& scores_path, double alpha, const std::string& out_path) {
    const colupi::RankTable table = colupi::load_scores_csv(scores_path);
    const colupi::FriedmanResult friedman = colupi::friedman_statistic(table);
    const double cd = colupi::nemenyi_critical_difference(
        static_cast<int>(table.methods.size()), static_cast<int>(table.datasets.size()), alpha);
    const colupi::CriticalDiagram diagram = colupi::critical_diagram_data(table, cd);

    json j;
    j["datasets_used"] = table.datasets;
    j["alpha"] = alpha;
    j["friedman_chi2"] = friedman.chi2;
    j["p_value"] = friedman.p_value;
    j["critical_difference"] = cd;
    json methods = json::array();
    for (const colupi::MethodRank& m : diagram.order) {
        methods.push_back({{"name", m.method}, {"mean_rank", m.mean_rank}});
    }
    j["methods"] = std::move(methods);
    json groups = json::array();
    for (const auto& [first, last] : diagram.groups) {
        groups.push_back({first, last});
    }
    j["groups"] = std::move(groups);

    const std::string text = j.dump(2);
    if (out_path.empty()) {
        std::printf("%s\n", text.c_str());
    } else {
        std::ofstream outf(out_path);
        if (!outf) throw std::runtime_error("cannot write " + out_path);
        outf << text << '\n';
    }
    return 0;
}

int cmd_inspect(const std::string& report_dir) {
    const fs::path path = fs::path(report_dir) / "report.json";
    const colupi::RunReport report = colupi::read_run_report(path.string());

    std::printf("schema colupi/1  sites %d  seed %llu  variant %s\n", report.sites,
                static_cast<unsigned long long>(report.config.seed),
                report.config.variant == colupi::Variant::rcolupi ? "rcolupi" : "colupi");
    std::printf("local step qualities:");
    for (double q : report.local_step_qualities) std::printf(" %.4f", q);
    std::printf("\n\n");

    for (const colupi::RoundTrace& round : report.rounds) {
        std::printf("round %d confidence:\n", round.round);
        std::printf("%10s", "");
        for (Eigen::Index c = 0; c < round.confidence.weights.cols(); ++c) {
            std::printf("  site_%-4lld", static_cast<long long>(c));
        }
        std::printf("\n");
        for (Eigen::Index r = 0; r < round.confidence.weights.rows(); ++r) {
            std::printf("  site_%-4lld", static_cast<long long>(r));
            for (Eigen::Index c = 0; c < round.confidence.weights.cols(); ++c) {
                std::printf("  %9.4f", round.confidence.weights(r, c));
            }
            std::printf("\n");
        }
        std::printf("\n");
    }

    std::printf("acceptance timeline:\n");
    for (int p = 0; p < report.sites; ++p) {
        std::printf("  site_%d:", p);
        for (const colupi::RoundTrace& round : report.rounds) {
            std::printf(" %d:%c", round.round,
                        round.per_site[static_cast<std::size_t>(p)].accepted ? '+' : '-');
        }
        std::printf("\n");
    }
    std::printf("final qualities:");
    for (double q : report.final_qualities) std::printf(" %.4f", q);
    std::printf("\nterminated: %s\n",
                report.terminated_reason == colupi::TerminationReason::no_improvement
                    ? "no_improvement"
                    : "max_rounds");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-weighted collaborative clustering over vertically split data"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "local step + collaboration rounds");
    run->add_option("--data", run_opt.data_path, "feature CSV");
    run->add_option("--synthetic", run_opt.synthetic_path, "synthetic spec JSON");
    run->add_option("--sites", run_opt.sites, "number of sites P")->required();
    run->add_option("--clusters", run_opt.clusters, "number of clusters K")->required();
    run->add_option("--variant", run_opt.variant, "colupi|rcolupi")
        ->check(CLI::IsMember({"colupi", "rcolupi"}));
    run->add_option("--seed", run_opt.seed, "master seed");
    run->add_option("--max-rounds", run_opt.max_rounds, "collaboration round cap");
    run->add_option("--split", run_opt.split, "contiguous|round_robin|seeded_random")
        ->check(CLI::IsMember({"contiguous", "round_robin", "seeded_random"}));
    run->add_option("--out", run_opt.out_dir, "output directory")->required();
    run->add_option("--label-column", run_opt.label_column,
                    "CSV column with ground-truth labels (reporting only)");
    run->add_option("--drop-columns", run_opt.drop_columns,
                    "non-feature CSV columns to discard (e.g. ids)")
        ->delimiter(',');
    run->add_option("--restarts", run_opt.restarts, "randomized candidates per round (rcolupi)");
    run->add_option("--em-max-iters", run_opt.em_max_iters, "EM iteration cap");
    run->add_option("--em-tol", run_opt.em_tol, "EM mean log-likelihood tolerance");
    run->add_option("--threads", run_opt.threads, "cap worker threads (0 = default)");
    run->add_flag("--sequential", run_opt.sequential, "literal in-order sweep");
    run->add_flag("--no-standardize", run_opt.no_standardize, "skip per-site standardization");
    run->add_flag("--no-header", run_opt.no_header, "data CSV has no header row");

    std::string gen_spec, gen_out;
    CLI::App* generate = app.add_subcommand("generate", "synthetic mixture to CSV");
    generate->add_option("--spec", gen_spec, "synthetic spec JSON")->required();
    generate->add_option("--out", gen_out, "output CSV")->required();

    std::string split_data, split_strategy = "contiguous", split_out;
    std::uint64_t split_seed = 0;
    int split_sites = 2;
    bool split_no_header = false;
    CLI::App* split = app.add_subcommand("split", "vertical feature split to per-site CSVs");
    split->add_option("--data", split_data, "feature CSV")->required();
    split->add_option("--sites", split_sites, "number of sites")->required();
    split->add_option("--strategy", split_strategy, "contiguous|round_robin|seeded_random")
        ->check(CLI::IsMember({"contiguous", "round_robin", "seeded_random"}));
    split->add_option("--seed", split_seed, "seed for seeded_random");
    split->add_option("--out", split_out, "output directory")->required();
    split->add_flag("--no-header", split_no_header, "data CSV has no header row");

    std::string scores_path, ranks_out;
    double alpha = 0.05;
    CLI::App* eval = app.add_subcommand("eval-ranks", "Friedman/Nemenyi over a scores CSV");
    eval->add_option("--scores", scores_path, "methods x datasets scores CSV")->required();
    eval->add_option("--alpha", alpha, "significance level (0.05 or 0.10)");
    eval->add_option("--out", ranks_out, "write JSON here instead of stdout");

    std::string report_dir;
    CLI::App* inspect = app.add_subcommand("inspect", "pretty-print a run report");
    inspect->add_option("--report", report_dir, "run output directory")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_opt);
        if (generate->parsed()) return cmd_generate(gen_spec, gen_out);
        if (split->parsed()) {
            return cmd_split(split_data, split_no_header, split_sites, split_strategy,
                             split_seed, split_out);
        }
        if (eval->parsed()) return cmd_eval_ranks(scores_path, alpha, ranks_out);
        if (inspect->parsed()) return cmd_inspect(report_dir);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
