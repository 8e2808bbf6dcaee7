#pragma once

#include <cstdint>
#include <vector>

#include "ppdsim/params.hpp"
#include "ppdsim/rng.hpp"
#include "ppdsim/scenario.hpp"
#include "ppdsim/types.hpp"

namespace ppdsim {

// SMS-eligibility classes: reminders are meaningful to healthy individuals at
// or above the policy's pre-diagnosis age and to all recovered individuals.
// Eligible members are kept in per-(group, class) lists maintained
// incrementally so campaign dispatch can sample recipients in O(recipients).
inline constexpr int kNumEligClasses = 5; // H, R1, R2, R3, R4

/// Class index for an eligible status, -1 for S/D.
inline int elig_class_of(ClinicalStatus a) {
    if (a == ClinicalStatus::H)
        return 0;
    if (is_recovered(a))
        return phase_of(a); // R1..R4 -> 1..4
    return -1;
}

/// Maps (age, gender, ses) onto the grid.
inline GroupKey group_of(const GroupGrid& grid, const Individual& ind) {
    return GroupKey{grid.bucket_of_age(ind.age_years), ind.gender,
                    static_cast<int>(ind.ses)};
}

/// Mutable population of one replicate. Single-writer; replicates run in
/// parallel on separate instances.
class PopulationState {
  public:
    GroupGrid grid;
    std::vector<Individual> individuals;
    std::uint32_t round = 0;
    std::uint64_t rng_seed = 0;
    CompartmentCensus census;

    std::vector<std::int64_t> alive_per_group;
    std::vector<std::int64_t> disease_deaths_per_group;
    std::vector<std::int64_t> initial_group_sizes;
    std::int64_t ever_created = 0;
    int min_eligible_age = 0; // policy pre-diagnosis age, fixed at build

    // -- eligibility lists ---------------------------------------------------

    const std::vector<std::uint32_t>& elig_list(int group, int cls) const {
        return elig_[static_cast<std::size_t>(group * kNumEligClasses + cls)];
    }
    std::int64_t eligible_in_group(int group) const;
    std::int64_t eligible_in_class(int cls) const;
    std::int64_t eligible_total() const;

    /// Inserts `id` into its eligibility list if its current state qualifies.
    void elig_insert(std::uint32_t id);
    /// Removes `id` from its eligibility list if present.
    void elig_remove(std::uint32_t id);
    /// Rebuilds every list from scratch (after aging re-bucketing).
    void rebuild_elig();

    // -- transitions ----------------------------------------------------------

    /// Applies a status change, keeping census, per-group tallies and
    /// eligibility lists consistent. Transitions out of D are rejected.
    void set_status(std::uint32_t id, ClinicalStatus next,
                    DeathContext death = DeathContext::none);

    /// Appends a newborn (already initialised, alpha must be H), wiring all
    /// bookkeeping.
    void add_newborn(Individual ind);

    /// Full recount of the census; throws SimError on mismatch with the
    /// incremental one. Used by tests and the audit option.
    void audit_census() const;

  private:
    friend PopulationState build_population(const InitSpec&, const ClinicalParameterTable&,
                                            const PolicySpec&, const SimOptions&, double,
                                            std::uint64_t);
    std::vector<std::vector<std::uint32_t>> elig_;
};

/// Creates the initial population: counts per group scaled by `scale`,
/// statuses/mu/rho/gamma drawn per the init spec. Deterministic for a fixed
/// seed.
PopulationState build_population(const InitSpec& init, const ClinicalParameterTable& params,
                                 const PolicySpec& policy, const SimOptions& options,
                                 double scale, std::uint64_t seed);

inline PopulationState build_population(const ScenarioConfig& sc) {
    return build_population(sc.init, sc.clinical, sc.policy, sc.options, sc.scale, sc.seed);
}
inline PopulationState build_population(const ScenarioConfig& sc, std::uint64_t seed) {
    return build_population(sc.init, sc.clinical, sc.policy, sc.options, sc.scale, seed);
}

} // namespace ppdsim
