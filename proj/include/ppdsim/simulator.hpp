#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppdsim/strategy.hpp"

namespace ppdsim {

struct RunOptions {
    std::optional<std::uint64_t> seed;   // overrides the scenario seed
    bool collect_events = false;         // full per-individual event log
    bool track_ledger_detail = false;    // per-(round, group) SMS counts
    bool census_audit = false;           // recount census every round
};

/// Census snapshot and flow counts for one round.
struct RoundRecord {
    std::int64_t alive_start = 0; // alive when the round began
    CompartmentCensus census;     // state at round end
    std::int32_t births = 0;
    std::int32_t disease_deaths = 0;
    std::int32_t natural_deaths = 0;
    std::int64_t sms_sent = 0; // this round
};

struct SimulationResult {
    std::uint64_t seed = 0;
    int t0 = 0;
    int tf = 0;
    std::vector<RoundRecord> rounds;     // per round, length tf - t0
    std::vector<double> mortality;       // per-round mortality series, same length
    double mr = 0.0;                     // objective: mean of the series
    BudgetLedger ledger;
    std::vector<Event> events;           // when collect_events
    std::vector<std::int64_t> final_disease_deaths_per_group;
    std::vector<std::int64_t> initial_group_sizes;
};

/// Runs one scenario under one campaign strategy. Each round executes, in
/// order: policy compliance draws, the clinical kernel over a seeded random
/// permutation, campaign dispatch, then natural growth. Deterministic bit-
/// for-bit for a fixed (scenario, strategy, seed).
SimulationResult run(const ScenarioConfig& scenario, const CampaignStrategy& strategy,
                     const RunOptions& options = {});

/// The optimisation objective: the average of the per-round mortality series
/// (new disease deaths over alive population at round start; natural deaths
/// are excluded).
double mortality_rate(const SimulationResult& result);

/// Recomputes the per-round mortality series from raw counts under `mode`.
std::vector<double> mortality_series(const std::vector<std::int64_t>& alive_start,
                                     const std::vector<std::int32_t>& disease_deaths,
                                     MortalityMode mode);

void save_rounds_csv(const SimulationResult& r, const std::string& path);
void save_summary_json(const SimulationResult& r, const ScenarioConfig& sc,
                       const std::string& strategy_name, const std::string& path);
void save_events_csv(const std::vector<Event>& events, const std::string& path);

} // namespace ppdsim
