#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ppdsim/campaign.hpp"
#include "ppdsim/scenario.hpp"

namespace ppdsim {

// ---------------------------------------------------------------------------
// Strategy descriptions (immutable values, shareable across replicates)
// ---------------------------------------------------------------------------

enum class CampaignVariant : std::uint8_t {
    none,   // no SMSs at all
    naive,  // uniform over rounds and over all eligible individuals
    greedy, // per-round share split by each group's share of disease deaths so far
    mc,     // Monte-Carlo-optimised allocation tensor (status or socio partition)
};

struct CampaignStrategy {
    CampaignVariant variant = CampaignVariant::none;
    AllocationTensor tensor; // mc variants only

    static CampaignStrategy none() { return {}; }
    static CampaignStrategy naive() { return {CampaignVariant::naive, {}}; }
    static CampaignStrategy greedy() { return {CampaignVariant::greedy, {}}; }
    static CampaignStrategy mc(AllocationTensor t) {
        return {CampaignVariant::mc, std::move(t)};
    }

    std::string name() const;
};

// ---------------------------------------------------------------------------
// Per-run executors
// ---------------------------------------------------------------------------

/// What a campaign is allowed to observe when planning a round. Individual
/// compliance (mu) and susceptibility (rho) are deliberately absent: campaigns
/// only see group membership, eligibility head counts and mortality tallies.
struct CampaignObservation {
    int round = 0; // absolute round index
    int t0 = 0;
    int tf = 0;
    double budget = 0.0;
    double spent = 0.0;
    double sms_cost = 1.0;
    const std::vector<std::int64_t>* eligible_per_cell = nullptr;
    const std::vector<std::int64_t>* disease_deaths_per_group = nullptr;
};

/// Mutable per-run planner; one instance per simulation run. Carries
/// fractional and surplus quota between rounds.
class CampaignExecutor {
  public:
    virtual ~CampaignExecutor() = default;
    virtual PartitionKind partition() const = 0;
    /// Fills per-cell SMS counts for this round.
    virtual void plan_round(const CampaignObservation& obs,
                            std::vector<std::int64_t>& quota_out) = 0;
    /// Reports how much of the plan was deliverable; undelivered quota rolls
    /// forward per the variant's surplus rule.
    virtual void note_sent(int cell, std::int64_t requested, std::int64_t sent) = 0;
    /// Planned units permanently dropped since the last call (block ends).
    virtual std::int64_t take_forfeited() { return 0; }
    /// Drops any still-pending surplus at the end of the horizon.
    virtual void finish() {}
};

std::unique_ptr<CampaignExecutor> make_executor(const CampaignStrategy& strategy,
                                                const ScenarioConfig& scenario);

/// Largest-remainder apportionment of `total` units by non-negative weights;
/// all-zero weights split uniformly. Deterministic (ties to lower index).
std::vector<std::int64_t> proportional_split(const std::vector<double>& weights,
                                             std::int64_t total);

/// Executes one campaign round: plan, dispatch per cell, surplus bookkeeping.
void campaign_round(PopulationState& pop, CampaignExecutor& exec,
                    const CampaignConfig& config, int t0, int tf, BudgetLedger& ledger,
                    Rng& rng, std::vector<Event>* log);

} // namespace ppdsim
