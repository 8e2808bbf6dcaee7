#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppdsim/common.hpp"

namespace ppdsim {

// ---------------------------------------------------------------------------
// Clinical status
// ---------------------------------------------------------------------------

/// The ten clinical-oncological statuses. D is absorbing.
enum class ClinicalStatus : std::uint8_t {
    H = 0,
    S1 = 1,
    S2 = 2,
    S3 = 3,
    S4 = 4,
    R1 = 5,
    R2 = 6,
    R3 = 7,
    R4 = 8,
    D = 9,
};

inline constexpr int kNumStatuses = 10;

inline bool is_sick(ClinicalStatus a) {
    return a >= ClinicalStatus::S1 && a <= ClinicalStatus::S4;
}
inline bool is_recovered(ClinicalStatus a) {
    return a >= ClinicalStatus::R1 && a <= ClinicalStatus::R4;
}
inline bool is_alive(ClinicalStatus a) { return a != ClinicalStatus::D; }

/// Phase 1..4 for S/R statuses.
inline int phase_of(ClinicalStatus a) {
    if (is_sick(a))
        return static_cast<int>(a) - static_cast<int>(ClinicalStatus::S1) + 1;
    if (is_recovered(a))
        return static_cast<int>(a) - static_cast<int>(ClinicalStatus::R1) + 1;
    return 0;
}

inline ClinicalStatus sick_status(int phase) {
    return static_cast<ClinicalStatus>(static_cast<int>(ClinicalStatus::S1) + phase - 1);
}
inline ClinicalStatus recovered_status(int phase) {
    return static_cast<ClinicalStatus>(static_cast<int>(ClinicalStatus::R1) + phase - 1);
}

const char* to_string(ClinicalStatus a);
ClinicalStatus status_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Socio-demographic grid
// ---------------------------------------------------------------------------

enum class Gender : std::uint8_t { male = 0, female = 1 };

const char* to_string(Gender g);
Gender gender_from_string(const std::string& s);

/// One cell of the age-bucket x gender x SES-decile grid.
struct GroupKey {
    int age_bucket = 0;
    Gender gender = Gender::male;
    int ses = 1; // 1-based decile

    bool operator==(const GroupKey&) const = default;
};

std::string to_string(const GroupKey& k);

/// The grid layout. The default instantiation is 7 age buckets x 2 genders x
/// 10 SES deciles = 140 groups; collapsed grids (single bucket / gender /
/// decile) are allowed so group structure can be switched off in experiments.
struct GroupGrid {
    std::vector<int> age_edges = {0, 15, 30, 45, 55, 65, 75}; // lower edges, first must be 0
    std::vector<Gender> genders = {Gender::male, Gender::female};
    int num_ses = 10;

    int num_age_buckets() const { return static_cast<int>(age_edges.size()); }
    int num_genders() const { return static_cast<int>(genders.size()); }
    int size() const { return num_age_buckets() * num_genders() * num_ses; }

    /// Ages past the last edge clamp into the oldest bucket.
    int bucket_of_age(int age_years) const;

    int gender_index(Gender g) const;

    int index_of(const GroupKey& k) const {
        return (k.age_bucket * num_genders() + gender_index(k.gender)) * num_ses +
               (k.ses - 1);
    }
    GroupKey key_of(int index) const;

    void validate() const;

    bool operator==(const GroupGrid&) const = default;
};

// ---------------------------------------------------------------------------
// Disease bookkeeping
// ---------------------------------------------------------------------------

/// Undiagnosed cancer attached to an H or R individual, progressing through
/// phases 1..4 until a check-up or symptoms discover it.
struct LatentDisease {
    int phase = 1;          // 1..4, never decreases
    int rounds_in_phase = 0;
    bool is_recurrence = false;
    std::optional<int> origin_phase = {}; // recovered-from phase, recurrences only
};

/// Treatment in progress; present exactly while status is S1..S4.
struct TreatmentCourse {
    int phase_at_diagnosis = 1;
    int rounds_remaining = 0;
    bool will_recover = false; // drawn at diagnosis
};

// ---------------------------------------------------------------------------
// Individual
// ---------------------------------------------------------------------------

/// One member of the population. Packed flat for cache friendliness; latent
/// disease and treatment are exposed through optional-valued accessors.
struct Individual {
    double mu = 0.0;  // natural compliance probability, kept in [0,1]
    double rho = 0.0; // susceptibility to compliance-increasing strategies, >= 0
    std::uint64_t clin_rng = 0; // clinical stream (onset/symptom/recovery draws)
    std::uint64_t comp_rng = 0; // compliance stream
    std::uint32_t gamma = 0;    // remaining rounds until natural death
    std::uint32_t tau = 0;      // rounds since last status change
    std::uint32_t sms_count = 0;
    std::uint32_t rounds_since_checkup = 0;
    std::int32_t elig_pos = -1; // position in the SMS-eligibility list, -1 if absent
    std::uint16_t age_years = 0;
    std::uint16_t group = 0; // cached grid index
    ClinicalStatus alpha = ClinicalStatus::H;
    Gender gender = Gender::male;
    std::uint8_t ses = 1;
    bool pending_checkup = false; // set by the policy pass, consumed by the clinical pass

    // latent disease (phase 0 = none)
    std::uint8_t latent_phase = 0;
    std::uint8_t latent_recurrence = 0;
    std::uint8_t latent_origin = 0; // 0 = none
    std::uint32_t latent_rounds = 0;

    // treatment (phase 0 = none)
    std::uint8_t treat_phase = 0;
    std::uint8_t treat_will_recover = 0;
    std::uint16_t treat_rounds_remaining = 0;

    bool has_latent() const { return latent_phase != 0; }
    std::optional<LatentDisease> latent() const {
        if (!has_latent())
            return std::nullopt;
        LatentDisease l;
        l.phase = latent_phase;
        l.rounds_in_phase = static_cast<int>(latent_rounds);
        l.is_recurrence = latent_recurrence != 0;
        if (latent_origin != 0)
            l.origin_phase = latent_origin;
        return l;
    }
    void set_latent(const LatentDisease& l) {
        latent_phase = static_cast<std::uint8_t>(l.phase);
        latent_rounds = static_cast<std::uint32_t>(l.rounds_in_phase);
        latent_recurrence = l.is_recurrence ? 1 : 0;
        latent_origin = static_cast<std::uint8_t>(l.origin_phase.value_or(0));
    }
    void clear_latent() {
        latent_phase = 0;
        latent_rounds = 0;
        latent_recurrence = 0;
        latent_origin = 0;
    }

    bool has_treatment() const { return treat_phase != 0; }
    std::optional<TreatmentCourse> treatment() const {
        if (!has_treatment())
            return std::nullopt;
        return TreatmentCourse{treat_phase, treat_rounds_remaining, treat_will_recover != 0};
    }
    void set_treatment(const TreatmentCourse& t) {
        treat_phase = static_cast<std::uint8_t>(t.phase_at_diagnosis);
        treat_rounds_remaining = static_cast<std::uint16_t>(t.rounds_remaining);
        treat_will_recover = t.will_recover ? 1 : 0;
    }
    void clear_treatment() {
        treat_phase = 0;
        treat_rounds_remaining = 0;
        treat_will_recover = 0;
    }

    bool alive() const { return is_alive(alpha); }
    GroupKey key() const { return GroupKey{0, gender, ses}; } // age bucket filled by grid
};

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

/// Per-status head count plus death tallies. The sum over all statuses equals
/// the number of individuals ever created (D included), every round.
struct CompartmentCensus {
    std::array<std::int64_t, kNumStatuses> count = {};
    std::int64_t alive = 0;
    std::int64_t cumulative_disease_deaths = 0;
    std::int64_t cumulative_natural_deaths = 0;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : count)
            t += c;
        return t;
    }
    std::int64_t operator[](ClinicalStatus a) const {
        return count[static_cast<int>(a)];
    }
};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

enum class EventKind : std::uint8_t {
    onset,
    progression,
    checkup,   // performed, no disease found
    diagnosis, // performed, disease found; treatment starts immediately
    recovery,
    disease_death,
    natural_death,
    sms,
};

enum class CheckupTrigger : std::uint8_t { none = 0, policy, symptom };

/// Disease deaths happen either at the end of a failed treatment course or
/// from untreated latent phase-4 dwell exceedance.
enum class DeathContext : std::uint8_t { none = 0, treatment, latent };

struct Event {
    std::uint32_t round = 0;
    std::uint32_t individual = 0;
    EventKind kind = EventKind::onset;
    std::uint8_t phase = 0;
    CheckupTrigger trigger = CheckupTrigger::none;
    DeathContext death_context = DeathContext::none;
};

const char* to_string(EventKind k);

} // namespace ppdsim
