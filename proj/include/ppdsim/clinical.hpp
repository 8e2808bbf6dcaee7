#pragma once

#include <vector>

#include "ppdsim/population.hpp"
#include "ppdsim/types.hpp"

namespace ppdsim {

/// Result of a performed check-up. The test is perfect: it finds latent
/// disease at its current phase or confirms there is none.
struct CheckupOutcome {
    enum class Kind : std::uint8_t { no_disease, diagnosed };
    Kind kind = Kind::no_disease;
    int phase = 0; // diagnosis phase when kind == diagnosed
    CheckupTrigger trigger = CheckupTrigger::policy;
};

/// Policy check-ups only ever return phase-1/2 findings; later phases are
/// always symptomatic and take the symptomatic route the same round. A latent
/// phase >= 3 reached by a policy check-up (same-round race) is re-routed as
/// symptom-triggered.
inline bool detectable_by_policy(const LatentDisease& latent) {
    return latent.phase <= 2;
}

/// Performs a check-up on an alive H/R individual: resets the check-up clock
/// and, if latent disease exists, diagnoses it and starts treatment
/// immediately. Appends the corresponding event if `log` is non-null.
CheckupOutcome perform_checkup(PopulationState& pop, std::uint32_t id,
                               const GroupClinicalParams& gp, CheckupTrigger trigger,
                               std::vector<Event>* log);

/// One clinical round for one individual, in order: natural-death clock,
/// latent onset, latent progression (possibly death from untreated phase-4
/// dwell), symptom draw, check-up (policy-recommended and complied, or
/// symptom-forced), treatment countdown. Newly created latents and treatment
/// courses do not tick the round they appear.
void step_individual(PopulationState& pop, std::uint32_t id,
                     const GroupClinicalParams& gp, bool checkup_today,
                     std::vector<Event>* log);

} // namespace ppdsim
