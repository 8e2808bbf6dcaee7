#include "ppdsim/types.hpp"

#include <algorithm>

namespace ppdsim {

const char* to_string(ClinicalStatus a) {
    switch (a) {
    case ClinicalStatus::H: return "H";
    case ClinicalStatus::S1: return "S1";
    case ClinicalStatus::S2: return "S2";
    case ClinicalStatus::S3: return "S3";
    case ClinicalStatus::S4: return "S4";
    case ClinicalStatus::R1: return "R1";
    case ClinicalStatus::R2: return "R2";
    case ClinicalStatus::R3: return "R3";
    case ClinicalStatus::R4: return "R4";
    case ClinicalStatus::D: return "D";
    }
    return "?";
}

ClinicalStatus status_from_string(const std::string& s) {
    for (int i = 0; i < kNumStatuses; ++i) {
        auto a = static_cast<ClinicalStatus>(i);
        if (s == to_string(a))
            return a;
    }
    throw ConfigError("unknown clinical status: '" + s + "'");
}

const char* to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

Gender gender_from_string(const std::string& s) {
    if (s == "male")
        return Gender::male;
    if (s == "female")
        return Gender::female;
    throw ConfigError("unknown gender: '" + s + "'");
}

std::string to_string(const GroupKey& k) {
    return "(age_bucket=" + std::to_string(k.age_bucket) + ", gender=" +
           to_string(k.gender) + ", ses=" + std::to_string(k.ses) + ")";
}

int GroupGrid::bucket_of_age(int age_years) const {
    int b = 0;
    for (std::size_t i = 1; i < age_edges.size(); ++i) {
        if (age_years >= age_edges[i])
            b = static_cast<int>(i);
        else
            break;
    }
    return b;
}

int GroupGrid::gender_index(Gender g) const {
    for (std::size_t i = 0; i < genders.size(); ++i)
        if (genders[i] == g)
            return static_cast<int>(i);
    throw ConfigError(std::string("gender '") + to_string(g) +
                      "' is not part of the group grid");
}

GroupKey GroupGrid::key_of(int index) const {
    GroupKey k;
    k.ses = index % num_ses + 1;
    index /= num_ses;
    k.gender = genders[static_cast<std::size_t>(index % num_genders())];
    k.age_bucket = index / num_genders();
    return k;
}

void GroupGrid::validate() const {
    if (age_edges.empty() || age_edges.front() != 0)
        throw ConfigError("grid: age_edges must start at 0");
    if (!std::is_sorted(age_edges.begin(), age_edges.end()) ||
        std::adjacent_find(age_edges.begin(), age_edges.end()) != age_edges.end())
        throw ConfigError("grid: age_edges must be strictly increasing");
    if (genders.empty() || genders.size() > 2)
        throw ConfigError("grid: genders must list one or two distinct genders");
    if (genders.size() == 2 && genders[0] == genders[1])
        throw ConfigError("grid: duplicate gender entry");
    if (num_ses < 1 || num_ses > 10)
        throw ConfigError("grid: num_ses must be in [1,10]");
}

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::onset: return "onset";
    case EventKind::progression: return "progression";
    case EventKind::checkup: return "checkup";
    case EventKind::diagnosis: return "diagnosis";
    case EventKind::recovery: return "recovery";
    case EventKind::disease_death: return "disease_death";
    case EventKind::natural_death: return "natural_death";
    case EventKind::sms: return "sms";
    }
    return "?";
}

} // namespace ppdsim
