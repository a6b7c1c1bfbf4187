#pragma once

#include "colupi/gmm.hpp"
#include "colupi/quality.hpp"
#include "colupi/types.hpp"

#include <memory>

namespace colupi {

/// Everything one site owns: its private feature slice, its current
/// partition and fitted learner, and its acceptance history. Only the
/// PartitionMatrix ever crosses a site boundary.
struct SiteState {
    int site_id = 0;
    DataMatrix data;
    PartitionMatrix partition;
    std::shared_ptr<const Learner> learner;
    QualityReport quality;
    std::vector<bool> accepted_rounds;
};

struct SiteRoundTrace {
    double pre_quality = 0.0;
    double post_quality = 0.0;  // quality of the best proposal, kept or not
    bool accepted = false;
};

struct RoundTrace {
    int round = 0;
    std::vector<SiteRoundTrace> per_site;
    ConfidenceMatrix confidence;
};

enum class TerminationReason { no_improvement, max_rounds };

struct RunReport {
    RunConfig config;
    int sites = 0;
    std::vector<double> local_step_qualities;
    std::vector<RoundTrace> rounds;
    std::vector<PartitionMatrix> final_partitions;
    std::vector<double> final_qualities;
    TerminationReason terminated_reason = TerminationReason::no_improvement;
};

/// Independent local training on every slice: seeded init (seed + site_id),
/// EM fit, posterior partition, quality. Requires P >= 2 slices sharing N.
std::vector<SiteState> local_step(const std::vector<DataMatrix>& slices,
                                  const RunConfig& cfg);

/// One collaboration round. Every site aligns the start-of-round remote
/// partitions to its own, blends, refits, and keeps the result only if its
/// quality index strictly improves; otherwise the site rolls back to its
/// exact pre-round state. cfg.sequential switches to a literal in-order
/// sweep where later sites see earlier sites' accepted updates.
RoundTrace collaboration_round(std::vector<SiteState>& sites, const RunConfig& cfg,
                               int round);

/// Rounds until one passes with zero acceptances or max_rounds is hit.
RunReport run_colupi(std::vector<SiteState> sites, const RunConfig& cfg);

/// Same loop, but each site additionally evaluates cfg.rcolupi_restarts
/// candidates whose pre-blend responsibilities are re-drawn from a flat
/// Dirichlet before blending and refitting; the best strictly-improving
/// candidate wins. With zero restarts this is exactly run_colupi.
RunReport run_rcolupi(std::vector<SiteState> sites, const RunConfig& cfg);

/// local_step followed by the configured variant's collaboration loop.
RunReport run(const std::vector<DataMatrix>& slices, const RunConfig& cfg);

}  // namespace colupi
