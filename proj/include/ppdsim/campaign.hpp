#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppdsim/population.hpp"

namespace ppdsim {

// ---------------------------------------------------------------------------
// Allocation tensors
// ---------------------------------------------------------------------------

/// Which partition of the eligible population an allocation addresses.
/// `all` treats everyone as one pool, `status_classes` splits by clinical
/// status (H, R1..R4), `groups` splits by socio-demographic group.
enum class PartitionKind : std::uint8_t { all, status_classes, groups };

const char* to_string(PartitionKind p);

int partition_cell_count(PartitionKind p, const GroupGrid& grid);

/// Budget-fraction allocation over (time block x cell). Entries are
/// non-negative and sum to at most 1; each entry is the fraction of the total
/// budget spent in that cell over that block, spread evenly across the
/// block's rounds.
struct AllocationTensor {
    PartitionKind partition = PartitionKind::groups;
    int block_length = 28; // rounds per temporal cell
    int num_blocks = 0;
    int num_cells = 0;
    std::vector<double> values; // row-major [block][cell]

    static AllocationTensor zeros(PartitionKind p, int block_length, int horizon,
                                  int num_cells);

    double& at(int block, int cell) {
        return values[static_cast<std::size_t>(block * num_cells + cell)];
    }
    double at(int block, int cell) const {
        return values[static_cast<std::size_t>(block * num_cells + cell)];
    }
    double sum() const;
    int block_of_round(int round_offset) const { return round_offset / block_length; }

    void validate() const;
};

/// The 4-D campaign tensor of the socio-demographic campaign: one temporal
/// dimension plus (age bucket, gender, SES). A thin labelled view over an
/// AllocationTensor with `groups` partition.
struct CampaignTensor {
    GroupGrid grid;
    AllocationTensor alloc;

    double at(int block, int age_bucket, Gender g, int ses) const {
        return alloc.at(block, grid.index_of(GroupKey{age_bucket, g, ses}));
    }
    double& at(int block, int age_bucket, Gender g, int ses) {
        return alloc.at(block, grid.index_of(GroupKey{age_bucket, g, ses}));
    }
};

/// CSV round-trip: header `block,age_bucket,gender,ses,fraction` for group
/// tensors, `block,cell,fraction` for status/all tensors.
void save_tensor_csv(const AllocationTensor& t, const GroupGrid& grid,
                     const std::string& path);
AllocationTensor load_tensor_csv(const std::string& path, const GroupGrid& grid,
                                 int horizon);

// ---------------------------------------------------------------------------
// Budget ledger
// ---------------------------------------------------------------------------

/// Tracks campaign spending. `spent <= budget` is a hard invariant; breaching
/// it throws.
struct BudgetLedger {
    double budget = 0.0;   // effective (scaled) budget
    double sms_cost = 1.0; // dollars per SMS
    std::int64_t total_sms = 0;
    std::int64_t forfeited = 0; // planned units dropped at block ends
    std::vector<std::int64_t> sms_per_group;          // totals by group
    std::vector<std::vector<std::uint32_t>> per_round; // optional [round][group] detail
    bool track_detail = false;
    int horizon = 0;
    int t0 = 0;

    void init(double budget_, double sms_cost_, int num_groups, int t0_, int horizon_,
              bool detail);
    void record_send(int group, int round, std::int64_t n);
    double spent() const { return static_cast<double>(total_sms) * sms_cost; }
    /// Whole SMSs still affordable.
    std::int64_t remaining_units() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Applies one SMS: increments the receive count n and raises compliance by
/// rho * (c1 + c2 * (log10 n - log10 (n-1))), clamped into [0,1]. The
/// log-difference term is defined as 0 for the first SMS, so the first
/// increment is rho * c1.
void apply_sms(Individual& ind, const CampaignConfig& config);

/// Realized cost of a ledger.
double campaign_cost(const BudgetLedger& ledger);

/// Planned cost of a tensor against an effective budget: per cell, whole SMSs
/// only (fraction * budget floored to units), summed.
double campaign_cost(const AllocationTensor& t, const CampaignConfig& config,
                     double effective_budget);

/// Sends up to `count` SMSs to distinct eligible members of `cell` (at most
/// one per member per round), selected uniformly at random. Returns the
/// number actually sent (the cell's eligible membership may be smaller).
std::int64_t dispatch_cell(PopulationState& pop, PartitionKind partition, int cell,
                           std::int64_t count, const CampaignConfig& config,
                           BudgetLedger& ledger, Rng& rng, std::vector<Event>* log);

/// Eligible member count of one cell.
std::int64_t cell_eligible(const PopulationState& pop, PartitionKind partition, int cell);

} // namespace ppdsim
