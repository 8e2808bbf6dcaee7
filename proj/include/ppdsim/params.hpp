#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ppdsim/types.hpp"

namespace ppdsim {

// ---------------------------------------------------------------------------
// Clinical parameters
// ---------------------------------------------------------------------------

/// Per-group clinical dynamics. Durations are rounds, probabilities are
/// per-round unless stated otherwise.
struct GroupClinicalParams {
    std::array<int, 4> phase_duration = {90, 75, 60, 45}; // latent dwell: 1->2, 2->3, 3->4, 4->death
    double onset_prob = 0.0;                              // first-time onset per round
    std::array<double, 4> recurrence_prob = {};           // per recovered-from phase
    std::array<int, 4> treat_duration = {28, 42, 56, 70}; // by phase at diagnosis
    std::array<double, 4> recover_prob = {1, 1, 1, 1};    // by phase at diagnosis
    std::array<double, 4> symptom_prob = {0.0, 0.01, 1.0, 1.0}; // by latent phase
    double life_expectancy_years = 80.0;
};

/// Clinical parameters for every group in a grid.
class ClinicalParameterTable {
  public:
    ClinicalParameterTable() = default;
    ClinicalParameterTable(GroupGrid grid, std::vector<GroupClinicalParams> rows);

    /// Uniform-parameter convenience table.
    static ClinicalParameterTable uniform(const GroupGrid& grid,
                                          const GroupClinicalParams& p);

    const GroupGrid& grid() const { return grid_; }
    const GroupClinicalParams& at(int group_index) const { return rows_[static_cast<std::size_t>(group_index)]; }
    const GroupClinicalParams& at(const GroupKey& k) const { return at(grid_.index_of(k)); }
    GroupClinicalParams& at_mut(int group_index) { return rows_[static_cast<std::size_t>(group_index)]; }
    std::size_t size() const { return rows_.size(); }

    /// Range/consistency checks; `enforce_symptom_rule` additionally pins
    /// symptom_prob[phase 1] = 0 and symptom_prob[phase 3,4] = 1.
    void validate(bool enforce_symptom_rule = true) const;

  private:
    GroupGrid grid_;
    std::vector<GroupClinicalParams> rows_;
};

// ---------------------------------------------------------------------------
// Check-up policy
// ---------------------------------------------------------------------------

/// Recommended check-up cadence. Recommendations cannot be enforced; whether
/// an individual actually shows up is a compliance draw.
struct PolicySpec {
    int pre_diagnosis_min_age = 45;            // years
    int pre_diagnosis_interval = 365;          // delta_i, rounds
    std::array<int, 4> post_diagnosis_interval = {365, 365, 182, 182}; // delta_r by recovered phase

    void validate() const;
};

// ---------------------------------------------------------------------------
// Campaign economics
// ---------------------------------------------------------------------------

struct CampaignConfig {
    double c1 = 0.0;      // SMS effectiveness, base term
    double c2 = 0.0;      // SMS effectiveness, log-difference term
    double sms_cost = 0.049; // dollars per SMS
    double budget = 0.0;     // dollars over [t0, tf), before scenario scaling

    void validate() const;
};

// ---------------------------------------------------------------------------
// Life expectancy
// ---------------------------------------------------------------------------

/// Years of life expectancy by (gender, SES decile); used to draw remaining
/// lifetimes at population build.
struct LifeExpectancyTable {
    std::array<std::vector<double>, 2> years; // [male, female], each num_ses long

    double at(Gender g, int ses) const {
        return years[static_cast<int>(g)][static_cast<std::size_t>(ses - 1)];
    }
    void validate(const GroupGrid& grid) const;
};

// ---------------------------------------------------------------------------
// Initial population
// ---------------------------------------------------------------------------

/// Per-group construction recipe.
struct GroupInitParams {
    std::int64_t count = 0;
    double mu_mean = 0.0;
    double mu_sd = 0.0;
    double rho_mean = 0.0;
    double rho_sd = 0.0;
    std::array<double, kNumStatuses> status_dist = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    std::array<double, 4> latent_fraction = {}; // share of H/R members with undiagnosed phase-p disease
};

class InitSpec {
  public:
    InitSpec() = default;
    InitSpec(GroupGrid grid, std::vector<GroupInitParams> rows);

    static InitSpec uniform(const GroupGrid& grid, const GroupInitParams& p);

    const GroupGrid& grid() const { return grid_; }
    const GroupInitParams& at(int group_index) const { return rows_[static_cast<std::size_t>(group_index)]; }
    const GroupInitParams& at(const GroupKey& k) const { return at(grid_.index_of(k)); }
    GroupInitParams& at_mut(int group_index) { return rows_[static_cast<std::size_t>(group_index)]; }
    std::size_t size() const { return rows_.size(); }
    std::int64_t total_count() const;

    void validate() const;

  private:
    GroupGrid grid_;
    std::vector<GroupInitParams> rows_;
};

} // namespace ppdsim
