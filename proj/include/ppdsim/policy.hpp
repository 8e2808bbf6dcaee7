#pragma once

#include "ppdsim/params.hpp"
#include "ppdsim/rng.hpp"
#include "ppdsim/types.hpp"

namespace ppdsim {

/// Whether the check-up policy recommends a check-up to `ind` this round.
/// Recommendations only go to healthy individuals at or above the policy age
/// and to recovered individuals; they are advisory and carry no state change.
inline bool recommendation_due(const Individual& ind, const PolicySpec& spec,
                               std::uint32_t rounds_since_last_checkup) {
    if (ind.alpha == ClinicalStatus::H)
        return static_cast<int>(ind.age_years) >= spec.pre_diagnosis_min_age &&
               rounds_since_last_checkup >=
                   static_cast<std::uint32_t>(spec.pre_diagnosis_interval);
    if (is_recovered(ind.alpha))
        return rounds_since_last_checkup >=
               static_cast<std::uint32_t>(
                   spec.post_diagnosis_interval[static_cast<std::size_t>(phase_of(ind.alpha) - 1)]);
    return false;
}

/// Bernoulli(mu) draw from the individual's dedicated compliance stream.
inline bool complies(Individual& ind) {
    return rng_double(ind.comp_rng) < ind.mu;
}

} // namespace ppdsim
