#pragma once

#include <cstdint>
#include <string>

#include "ppdsim/params.hpp"

namespace ppdsim {

/// How the per-round mortality series is defined.
enum class MortalityMode : std::uint8_t {
    per_round,  // new disease deaths / alive at round start (default)
    cumulative, // disease deaths so far / initial alive
};

struct SimOptions {
    MortalityMode mr_mode = MortalityMode::per_round;
    bool checkup_clock_uniform_init = true; // stagger first check-ups over [0, delta)
    double gamma_noise_sd_years = 2.0;      // spread of the remaining-lifetime draw
    bool census_audit = false;              // recount the census every round (tests)
};

/// Everything needed to run one scenario. Counts in `init` and the campaign
/// budget are both multiplied by `scale`, so dynamics are invariant under
/// joint population/budget scaling.
struct ScenarioConfig {
    int schema_version = 1;
    std::string name = "scenario";
    int t0 = 0;
    int tf = 365;
    double growth_rate = 0.0; // per-round natural growth rate r
    double scale = 1.0;
    std::uint64_t seed = 1;

    GroupGrid grid;
    PolicySpec policy;
    CampaignConfig campaign;
    ClinicalParameterTable clinical;
    InitSpec init;
    LifeExpectancyTable life_expectancy;
    SimOptions options;

    int horizon() const { return tf - t0; }
    double effective_budget() const { return campaign.budget * scale; }

    void validate() const;
};

/// Parses a scenario JSON document (see README for the schema). Group-keyed
/// tables are written as a `defaults` object plus ordered `overrides`, each
/// holding a `match` selector over age_bucket / gender / ses.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario_json(const std::string& text, const std::string& origin);

std::string scenario_to_json(const ScenarioConfig& sc);

} // namespace ppdsim
