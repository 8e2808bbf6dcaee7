#include "ppdsim/params.hpp"

#include <cmath>

namespace ppdsim {

namespace {

void check_prob(double p, const char* what, const GroupKey& k) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(std::string(what) + " out of [0,1] for group " + to_string(k));
}

} // namespace

ClinicalParameterTable::ClinicalParameterTable(GroupGrid grid,
                                               std::vector<GroupClinicalParams> rows)
    : grid_(std::move(grid)), rows_(std::move(rows)) {
    if (rows_.size() != static_cast<std::size_t>(grid_.size()))
        throw ConfigError("clinical parameter table does not cover the grid");
}

ClinicalParameterTable ClinicalParameterTable::uniform(const GroupGrid& grid,
                                                       const GroupClinicalParams& p) {
    return ClinicalParameterTable(grid,
                                  std::vector<GroupClinicalParams>(grid.size(), p));
}

void ClinicalParameterTable::validate(bool enforce_symptom_rule) const {
    grid_.validate();
    for (int g = 0; g < grid_.size(); ++g) {
        const auto& p = rows_[static_cast<std::size_t>(g)];
        GroupKey k = grid_.key_of(g);
        for (int j = 0; j < 4; ++j) {
            if (p.phase_duration[j] < 1)
                throw ConfigError("phase duration < 1 for group " + to_string(k));
            if (p.treat_duration[j] < 1)
                throw ConfigError("treatment duration < 1 for group " + to_string(k));
            check_prob(p.recurrence_prob[j], "recurrence probability", k);
            check_prob(p.recover_prob[j], "recovery probability", k);
            check_prob(p.symptom_prob[j], "symptom probability", k);
        }
        check_prob(p.onset_prob, "onset probability", k);
        if (!(p.life_expectancy_years > 0.0))
            throw ConfigError("life expectancy must be positive for group " + to_string(k));
        if (enforce_symptom_rule) {
            if (p.symptom_prob[0] != 0.0)
                throw ConfigError("symptom probability of phase 1 must be 0 for group " +
                                  to_string(k));
            if (p.symptom_prob[2] != 1.0 || p.symptom_prob[3] != 1.0)
                throw ConfigError("phases 3 and 4 must be always symptomatic for group " +
                                  to_string(k));
        }
    }
}

void PolicySpec::validate() const {
    if (pre_diagnosis_min_age < 0)
        throw ConfigError("policy: minimum age must be non-negative");
    if (pre_diagnosis_interval < 1)
        throw ConfigError("policy: pre-diagnosis interval must be >= 1");
    for (int d : post_diagnosis_interval)
        if (d < 1)
            throw ConfigError("policy: post-diagnosis intervals must be >= 1");
}

void CampaignConfig::validate() const {
    if (!(sms_cost > 0.0))
        throw ConfigError("campaign: SMS cost must be positive");
    if (budget < 0.0)
        throw ConfigError("campaign: budget must be non-negative");
    if (!std::isfinite(c1) || !std::isfinite(c2))
        throw ConfigError("campaign: effectiveness coefficients must be finite");
}

void LifeExpectancyTable::validate(const GroupGrid& grid) const {
    for (Gender g : grid.genders) {
        const auto& row = years[static_cast<int>(g)];
        if (row.size() != static_cast<std::size_t>(grid.num_ses))
            throw ConfigError(std::string("life expectancy table for ") + to_string(g) +
                              " does not cover all SES levels");
        for (double y : row)
            if (!(y > 0.0))
                throw ConfigError("life expectancy values must be positive");
    }
}

InitSpec::InitSpec(GroupGrid grid, std::vector<GroupInitParams> rows)
    : grid_(std::move(grid)), rows_(std::move(rows)) {
    if (rows_.size() != static_cast<std::size_t>(grid_.size()))
        throw ConfigError("initial population spec does not cover the grid");
}

InitSpec InitSpec::uniform(const GroupGrid& grid, const GroupInitParams& p) {
    return InitSpec(grid, std::vector<GroupInitParams>(grid.size(), p));
}

std::int64_t InitSpec::total_count() const {
    std::int64_t t = 0;
    for (const auto& r : rows_)
        t += r.count;
    return t;
}

void InitSpec::validate() const {
    grid_.validate();
    for (int g = 0; g < grid_.size(); ++g) {
        const auto& p = rows_[static_cast<std::size_t>(g)];
        GroupKey k = grid_.key_of(g);
        if (p.count < 0)
            throw ConfigError("negative population count for group " + to_string(k));
        if (!(p.mu_mean >= 0.0 && p.mu_mean <= 1.0))
            throw ConfigError("mu distribution has mass outside [0,1] for group " +
                              to_string(k));
        if (p.mu_sd < 0.0 || p.rho_sd < 0.0)
            throw ConfigError("negative spread for group " + to_string(k));
        if (p.rho_mean < 0.0)
            throw ConfigError("rho mean must be non-negative for group " + to_string(k));
        double mass = 0.0;
        for (double f : p.status_dist) {
            check_prob(f, "status fraction", k);
            mass += f;
        }
        if (std::abs(mass - 1.0) > 1e-9)
            throw ConfigError("status distribution must sum to 1 for group " + to_string(k));
        double lat = 0.0;
        for (double f : p.latent_fraction) {
            check_prob(f, "latent fraction", k);
            lat += f;
        }
        if (lat > 1.0 + 1e-12)
            throw ConfigError("latent fractions exceed 1 for group " + to_string(k));
    }
}

} // namespace ppdsim
