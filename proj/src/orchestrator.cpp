#include "colupi/orchestrator.hpp"

#include "colupi/alignment.hpp"
#include "colupi/collab.hpp"
#include "colupi/log.hpp"
#include "colupi/random.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace colupi {

namespace {

QualityReport site_quality(const DataMatrix& data, const PartitionMatrix& partition,
                           int clusters) {
    return davies_bouldin(data, harden(partition), clusters);
}

struct Proposal {
    PartitionMatrix partition;
    std::shared_ptr<const Learner> learner;
    QualityReport quality;
    CollabWeights weights;  // applied weights of the blend that produced it
};

// Blend -> refit -> score for one candidate pre-blend partition.
Proposal evaluate_candidate(const SiteState& site, const PartitionMatrix& pre_blend,
                            const std::vector<PartitionMatrix>& aligned_remotes,
                            const std::vector<int>& remote_ids, const RunConfig& cfg) {
    CollabUpdate update = collab_update(pre_blend, aligned_remotes);
    update.applied.source_ids = remote_ids;

    FitOutcome fit = site.learner->refit(site.data, update.blended, cfg);
    Proposal proposal;
    proposal.learner = fit.learner;
    proposal.partition = fit.learner->responsibilities(site.data);
    proposal.quality = site_quality(site.data, proposal.partition, cfg.clusters);
    proposal.weights = std::move(update.applied);
    return proposal;
}

int restarts_for(const RunConfig& cfg) {
    return cfg.variant == Variant::rcolupi ? cfg.rcolupi_restarts : 0;
}

RunReport run_rounds(std::vector<SiteState> sites, const RunConfig& cfg) {
    RunReport report;
    report.config = cfg;
    report.sites = static_cast<int>(sites.size());
    for (const SiteState& s : sites) {
        report.local_step_qualities.push_back(s.quality.db_index);
    }

    report.terminated_reason = TerminationReason::max_rounds;
    for (int round = 1; round <= cfg.max_rounds; ++round) {
        RoundTrace trace = collaboration_round(sites, cfg, round);
        bool any_accepted = false;
        for (const SiteRoundTrace& s : trace.per_site) any_accepted |= s.accepted;
        report.rounds.push_back(std::move(trace));
        if (!any_accepted) {
            report.terminated_reason = TerminationReason::no_improvement;
            break;
        }
    }

    for (SiteState& s : sites) {
        report.final_qualities.push_back(s.quality.db_index);
        report.final_partitions.push_back(std::move(s.partition));
    }
    return report;
}

}  // namespace

std::vector<SiteState> local_step(const std::vector<DataMatrix>& slices,
                                  const RunConfig& cfg) {
    if (auto bad = validate_config(cfg)) {
        throw std::invalid_argument("invalid config: " + *bad);
    }
    if (slices.size() < 2) {
        throw std::invalid_argument("collaboration needs at least 2 sites, got " +
                                    std::to_string(slices.size()));
    }
    const Eigen::Index n = slices.front().rows();
    for (std::size_t p = 0; p < slices.size(); ++p) {
        if (slices[p].rows() != n) {
            throw std::invalid_argument("site " + std::to_string(p) + " has " +
                                        std::to_string(slices[p].rows()) +
                                        " rows, expected " + std::to_string(n));
        }
    }

    std::vector<SiteState> sites;
    sites.reserve(slices.size());
    for (std::size_t p = 0; p < slices.size(); ++p) {
        SiteState site;
        site.site_id = static_cast<int>(p);
        site.data = slices[p];

        const PartitionMatrix start =
            init_responsibilities(site.data, cfg.clusters, cfg.seed + p);
        FitResult fit = fit_from_responsibilities(site.data, start, cfg);
        site.learner = std::make_shared<GmmLearner>(std::move(fit.params));
        site.partition = site.learner->responsibilities(site.data);
        site.quality = site_quality(site.data, site.partition, cfg.clusters);
        log_debug("site " + std::to_string(p) + " local step: db = " +
                  std::to_string(site.quality.db_index));
        sites.push_back(std::move(site));
    }
    return sites;
}

RoundTrace collaboration_round(std::vector<SiteState>& sites, const RunConfig& cfg,
                               int round) {
    const std::size_t p_count = sites.size();
    if (p_count < 2) throw std::invalid_argument("collaboration_round needs >= 2 sites");

    // Synchronous semantics: every site reads the partitions all sites held
    // when the round started. The sequential mode instead mimics an in-order
    // sweep where later sites already see earlier accepted updates.
    std::vector<PartitionMatrix> snapshot;
    if (!cfg.sequential) {
        snapshot.reserve(p_count);
        for (const SiteState& s : sites) snapshot.push_back(s.partition);
    }

    RoundTrace trace;
    trace.round = round;
    trace.per_site.resize(p_count);
    std::vector<CollabWeights> round_weights(p_count);

    const int restarts = restarts_for(cfg);

    for (std::size_t p = 0; p < p_count; ++p) {
        SiteState& site = sites[p];

        std::vector<PartitionMatrix> aligned;
        std::vector<int> remote_ids;
        aligned.reserve(p_count - 1);
        remote_ids.reserve(p_count - 1);
        for (std::size_t q = 0; q < p_count; ++q) {
            if (q == p) continue;
            const PartitionMatrix& remote = cfg.sequential ? sites[q].partition : snapshot[q];
            aligned.push_back(align_to(site.partition, remote));
            remote_ids.push_back(static_cast<int>(q));
        }

        Proposal best = evaluate_candidate(site, site.partition, aligned, remote_ids, cfg);
        for (int r = 0; r < restarts; ++r) {
            const std::uint64_t candidate_seed =
                mix_seed(cfg.seed, static_cast<std::uint64_t>(round),
                         static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(r));
            const PartitionMatrix randomized =
                random_partition(site.data.rows(), cfg.clusters, candidate_seed);
            Proposal candidate = evaluate_candidate(site, randomized, aligned, remote_ids, cfg);
            if (quality_better(candidate.quality, best.quality)) {
                best = std::move(candidate);
            }
        }

        SiteRoundTrace& st = trace.per_site[p];
        st.pre_quality = site.quality.db_index;
        st.post_quality = best.quality.db_index;
        st.accepted = quality_better(best.quality, site.quality);

        round_weights[p] = std::move(best.weights);

        if (st.accepted) {
            site.partition = std::move(best.partition);
            site.learner = std::move(best.learner);
            site.quality = std::move(best.quality);
        }
        // Rejected proposals are dropped; the site keeps its exact prior state.
        site.accepted_rounds.push_back(st.accepted);
    }

    trace.confidence = confidence_matrix(round_weights, round);
    return trace;
}

RunReport run_colupi(std::vector<SiteState> sites, const RunConfig& cfg) {
    RunConfig local = cfg;
    local.variant = Variant::colupi;
    return run_rounds(std::move(sites), local);
}

RunReport run_rcolupi(std::vector<SiteState> sites, const RunConfig& cfg) {
    RunConfig local = cfg;
    local.variant = Variant::rcolupi;
    return run_rounds(std::move(sites), local);
}

RunReport run(const std::vector<DataMatrix>& slices, const RunConfig& cfg) {
    std::vector<SiteState> sites = local_step(slices, cfg);
    return run_rounds(std::move(sites), cfg);
}

}  // namespace colupi
