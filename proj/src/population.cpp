#include "ppdsim/population.hpp"

#include <cmath>
#include <limits>

namespace ppdsim {

namespace {

bool qualifies(const Individual& ind, int min_age) {
    if (!ind.alive())
        return false;
    if (ind.alpha == ClinicalStatus::H)
        return static_cast<int>(ind.age_years) >= min_age;
    return is_recovered(ind.alpha);
}

} // namespace

std::int64_t PopulationState::eligible_in_group(int group) const {
    std::int64_t n = 0;
    for (int c = 0; c < kNumEligClasses; ++c)
        n += static_cast<std::int64_t>(elig_list(group, c).size());
    return n;
}

std::int64_t PopulationState::eligible_in_class(int cls) const {
    std::int64_t n = 0;
    for (int g = 0; g < grid.size(); ++g)
        n += static_cast<std::int64_t>(elig_list(g, cls).size());
    return n;
}

std::int64_t PopulationState::eligible_total() const {
    std::int64_t n = 0;
    for (const auto& l : elig_)
        n += static_cast<std::int64_t>(l.size());
    return n;
}

void PopulationState::elig_insert(std::uint32_t id) {
    Individual& ind = individuals[id];
    if (ind.elig_pos >= 0 || !qualifies(ind, min_eligible_age))
        return;
    int cls = elig_class_of(ind.alpha);
    auto& list = elig_[static_cast<std::size_t>(ind.group * kNumEligClasses + cls)];
    ind.elig_pos = static_cast<std::int32_t>(list.size());
    list.push_back(id);
}

void PopulationState::elig_remove(std::uint32_t id) {
    Individual& ind = individuals[id];
    if (ind.elig_pos < 0)
        return;
    int cls = elig_class_of(ind.alpha);
    auto& list = elig_[static_cast<std::size_t>(ind.group * kNumEligClasses + cls)];
    std::uint32_t moved = list.back();
    list[static_cast<std::size_t>(ind.elig_pos)] = moved;
    individuals[moved].elig_pos = ind.elig_pos;
    list.pop_back();
    ind.elig_pos = -1;
}

void PopulationState::rebuild_elig() {
    for (auto& l : elig_)
        l.clear();
    for (auto& ind : individuals)
        ind.elig_pos = -1;
    for (std::uint32_t id = 0; id < individuals.size(); ++id)
        elig_insert(id);
}

void PopulationState::set_status(std::uint32_t id, ClinicalStatus next,
                                 DeathContext death) {
    Individual& ind = individuals[id];
    ClinicalStatus prev = ind.alpha;
    if (prev == ClinicalStatus::D)
        throw SimError("transition out of the dead status attempted");
    if (prev == next)
        return;
    elig_remove(id);
    census.count[static_cast<int>(prev)]--;
    census.count[static_cast<int>(next)]++;
    ind.alpha = next;
    ind.tau = 0;
    if (next == ClinicalStatus::D) {
        census.alive--;
        alive_per_group[ind.group]--;
        if (death == DeathContext::none)
            census.cumulative_natural_deaths++;
        else {
            census.cumulative_disease_deaths++;
            disease_deaths_per_group[ind.group]++;
        }
        ind.clear_latent();
        ind.clear_treatment();
    } else {
        elig_insert(id);
    }
}

void PopulationState::add_newborn(Individual ind) {
    if (ind.alpha != ClinicalStatus::H)
        throw SimError("newborns must be healthy");
    ind.elig_pos = -1;
    std::uint32_t id = static_cast<std::uint32_t>(individuals.size());
    individuals.push_back(ind);
    census.count[static_cast<int>(ClinicalStatus::H)]++;
    census.alive++;
    alive_per_group[ind.group]++;
    ever_created++;
    elig_insert(id);
}

void PopulationState::audit_census() const {
    CompartmentCensus fresh;
    for (const auto& ind : individuals) {
        fresh.count[static_cast<int>(ind.alpha)]++;
        if (ind.alive())
            fresh.alive++;
    }
    if (fresh.count != census.count || fresh.alive != census.alive)
        throw SimError("census audit mismatch at round " + std::to_string(round));
    if (fresh.total() != ever_created)
        throw SimError("conservation breach: census total != individuals ever created");
}

PopulationState build_population(const InitSpec& init, const ClinicalParameterTable& params,
                                 const PolicySpec& policy, const SimOptions& options,
                                 double scale, std::uint64_t seed) {
    init.validate();
    if (!(init.grid() == params.grid()))
        throw ConfigError("init spec and clinical parameters use different grids");
    if (scale <= 0.0)
        throw ConfigError("population scale must be positive");

    const GroupGrid& grid = init.grid();
    PopulationState pop;
    pop.grid = grid;
    pop.rng_seed = seed;
    pop.min_eligible_age = policy.pre_diagnosis_min_age;
    pop.alive_per_group.assign(static_cast<std::size_t>(grid.size()), 0);
    pop.disease_deaths_per_group.assign(static_cast<std::size_t>(grid.size()), 0);
    pop.initial_group_sizes.assign(static_cast<std::size_t>(grid.size()), 0);
    pop.elig_.assign(static_cast<std::size_t>(grid.size() * kNumEligClasses), {});

    std::int64_t total = 0;
    for (int g = 0; g < grid.size(); ++g)
        total += static_cast<std::int64_t>(std::llround(
            static_cast<double>(init.at(g).count) * scale));
    pop.individuals.reserve(static_cast<std::size_t>(total));

    const int top_bucket_width = 15; // years covered by the open-ended oldest bucket

    std::uint32_t id = 0;
    for (int g = 0; g < grid.size(); ++g) {
        const GroupInitParams& gi = init.at(g);
        const GroupClinicalParams& gp = params.at(g);
        GroupKey key = grid.key_of(g);
        auto count = static_cast<std::int64_t>(
            std::llround(static_cast<double>(gi.count) * scale));

        int age_lo = grid.age_edges[static_cast<std::size_t>(key.age_bucket)];
        int age_hi = key.age_bucket + 1 < grid.num_age_buckets()
                         ? grid.age_edges[static_cast<std::size_t>(key.age_bucket + 1)]
                         : age_lo + top_bucket_width;

        for (std::int64_t c = 0; c < count; ++c, ++id) {
            Rng build(seed, RngTag::build, id);
            Individual ind;
            ind.gender = key.gender;
            ind.ses = static_cast<std::uint8_t>(key.ses);
            ind.group = static_cast<std::uint16_t>(g);
            ind.age_years = static_cast<std::uint16_t>(
                age_lo + static_cast<int>(build.uniform_int(
                             static_cast<std::uint64_t>(age_hi - age_lo))));

            ind.mu = build.truncated_normal(gi.mu_mean, gi.mu_sd, 0.0, 1.0);
            ind.rho = build.truncated_normal(gi.rho_mean, gi.rho_sd, 0.0,
                                             std::numeric_limits<double>::infinity());

            // status draw (rounding remainder falls to the last nonzero bin)
            double u = build.next_double();
            int status_idx = 0;
            double acc = 0.0;
            bool assigned = false;
            for (int s = 0; s < kNumStatuses; ++s) {
                if (gi.status_dist[s] <= 0.0)
                    continue;
                status_idx = s;
                acc += gi.status_dist[s];
                if (u < acc) {
                    assigned = true;
                    break;
                }
            }
            (void)assigned;
            ind.alpha = static_cast<ClinicalStatus>(status_idx);

            // remaining lifetime: (life expectancy - age) in rounds plus noise
            double le = gp.life_expectancy_years;
            double rem = (le - ind.age_years) * 365.0 +
                         build.next_normal() * options.gamma_noise_sd_years * 365.0;
            ind.gamma = static_cast<std::uint32_t>(
                std::max<std::int64_t>(1, std::llround(rem)));

            // check-up clock
            if (ind.alpha == ClinicalStatus::H) {
                ind.rounds_since_checkup =
                    options.checkup_clock_uniform_init
                        ? static_cast<std::uint32_t>(build.uniform_int(
                              static_cast<std::uint64_t>(policy.pre_diagnosis_interval)))
                        : 0;
            } else if (is_recovered(ind.alpha)) {
                int dr = policy.post_diagnosis_interval[static_cast<std::size_t>(
                    phase_of(ind.alpha) - 1)];
                ind.rounds_since_checkup =
                    options.checkup_clock_uniform_init
                        ? static_cast<std::uint32_t>(
                              build.uniform_int(static_cast<std::uint64_t>(dr)))
                        : 0;
            }

            // undiagnosed disease seeding (H/R only)
            if (ind.alpha == ClinicalStatus::H || is_recovered(ind.alpha)) {
                double lu = build.next_double();
                double lacc = 0.0;
                for (int p = 1; p <= 4; ++p) {
                    lacc += gi.latent_fraction[static_cast<std::size_t>(p - 1)];
                    if (lu < lacc) {
                        LatentDisease l;
                        l.phase = p;
                        l.rounds_in_phase = static_cast<int>(build.uniform_int(
                            static_cast<std::uint64_t>(gp.phase_duration[static_cast<std::size_t>(p - 1)])));
                        l.is_recurrence = is_recovered(ind.alpha);
                        if (l.is_recurrence)
                            l.origin_phase = phase_of(ind.alpha);
                        ind.set_latent(l);
                        break;
                    }
                }
            }

            // mid-course treatment for initially sick individuals
            if (is_sick(ind.alpha)) {
                int p = phase_of(ind.alpha);
                TreatmentCourse t;
                t.phase_at_diagnosis = p;
                t.rounds_remaining = 1 + static_cast<int>(build.uniform_int(
                    static_cast<std::uint64_t>(gp.treat_duration[static_cast<std::size_t>(p - 1)])));
                t.will_recover =
                    build.bernoulli(gp.recover_prob[static_cast<std::size_t>(p - 1)]);
                ind.set_treatment(t);
            }

            ind.clin_rng = mix_seed(seed, static_cast<std::uint64_t>(RngTag::clinical), id);
            ind.comp_rng = mix_seed(seed, static_cast<std::uint64_t>(RngTag::compliance), id);

            pop.census.count[status_idx]++;
            if (ind.alive()) {
                pop.census.alive++;
                pop.alive_per_group[static_cast<std::size_t>(g)]++;
            }
            pop.initial_group_sizes[static_cast<std::size_t>(g)]++;
            pop.individuals.push_back(ind);
        }
    }
    pop.ever_created = static_cast<std::int64_t>(pop.individuals.size());
    pop.rebuild_elig();
    return pop;
}

} // namespace ppdsim
