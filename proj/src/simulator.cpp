#include "ppdsim/simulator.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ppdsim/clinical.hpp"
#include "ppdsim/csv.hpp"
#include "ppdsim/policy.hpp"

namespace ppdsim {

std::vector<double> mortality_series(const std::vector<std::int64_t>& alive_start,
                                     const std::vector<std::int32_t>& disease_deaths,
                                     MortalityMode mode) {
    std::vector<double> mr(alive_start.size(), 0.0);
    if (mode == MortalityMode::per_round) {
        for (std::size_t t = 0; t < mr.size(); ++t)
            mr[t] = alive_start[t] > 0 ? static_cast<double>(disease_deaths[t]) /
                                             static_cast<double>(alive_start[t])
                                       : 0.0;
    } else {
        double initial = mr.empty() ? 0.0 : static_cast<double>(alive_start[0]);
        std::int64_t cum = 0;
        for (std::size_t t = 0; t < mr.size(); ++t) {
            cum += disease_deaths[t];
            mr[t] = initial > 0 ? static_cast<double>(cum) / initial : 0.0;
        }
    }
    return mr;
}

double mortality_rate(const SimulationResult& result) {
    if (result.mortality.empty())
        return 0.0;
    double s = 0.0;
    for (double v : result.mortality)
        s += v;
    return s / static_cast<double>(result.mortality.size());
}

SimulationResult run(const ScenarioConfig& scenario, const CampaignStrategy& strategy,
                     const RunOptions& options) {
    scenario.validate();
    std::uint64_t seed = options.seed.value_or(scenario.seed);

    PopulationState pop = build_population(scenario, seed);
    auto exec = make_executor(strategy, scenario);

    SimulationResult result;
    result.seed = seed;
    result.t0 = scenario.t0;
    result.tf = scenario.tf;
    result.initial_group_sizes = pop.initial_group_sizes;
    int horizon = scenario.horizon();
    result.rounds.reserve(static_cast<std::size_t>(horizon));
    result.ledger.init(scenario.effective_budget(), scenario.campaign.sms_cost,
                       pop.grid.size(), scenario.t0, horizon,
                       options.track_ledger_detail);

    std::vector<Event>* log = options.collect_events ? &result.events : nullptr;
    bool audit = options.census_audit || scenario.options.census_audit;

    Rng shuffle_rng(seed, RngTag::shuffle);
    Rng campaign_rng(seed, RngTag::campaign);
    Rng births_rng(seed, RngTag::births);

    // Iteration order for the clinical pass; newborns join next round.
    std::vector<std::uint32_t> order(pop.individuals.size());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;

    std::vector<std::int64_t> alive_start_series;
    std::vector<std::int32_t> disease_death_series;
    alive_start_series.reserve(static_cast<std::size_t>(horizon));
    disease_death_series.reserve(static_cast<std::size_t>(horizon));

    for (int t = scenario.t0; t < scenario.tf; ++t) {
        pop.round = static_cast<std::uint32_t>(t);
        std::int64_t alive_start = pop.census.alive;
        std::int64_t disease_deaths_before = pop.census.cumulative_disease_deaths;
        std::int64_t natural_deaths_before = pop.census.cumulative_natural_deaths;
        std::int64_t sms_before = result.ledger.total_sms;

        // Ages tick on year boundaries; group membership may change.
        if (t > scenario.t0 && (t - scenario.t0) % 365 == 0) {
            for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
                Individual& ind = pop.individuals[i];
                if (!ind.alive())
                    continue;
                ind.age_years++;
                int g = pop.grid.index_of(group_of(pop.grid, ind));
                if (g != ind.group) {
                    pop.alive_per_group[ind.group]--;
                    pop.alive_per_group[static_cast<std::size_t>(g)]++;
                    ind.group = static_cast<std::uint16_t>(g);
                }
            }
            pop.rebuild_elig();
        }

        // 1. policy: recommendations and compliance draws
        for (auto& ind : pop.individuals) {
            if (!ind.alive() || is_sick(ind.alpha))
                continue;
            ind.rounds_since_checkup++;
            if (recommendation_due(ind, scenario.policy, ind.rounds_since_checkup))
                ind.pending_checkup = complies(ind);
        }

        // 2. clinical kernel, in a seeded random permutation
        shuffle(order, shuffle_rng);
        for (std::uint32_t id : order) {
            Individual& ind = pop.individuals[id];
            if (!ind.alive())
                continue;
            bool checkup_today = ind.pending_checkup;
            ind.pending_checkup = false;
            step_individual(pop, id, scenario.clinical.at(ind.group), checkup_today, log);
        }

        // 3. campaign dispatch
        campaign_round(pop, *exec, scenario.campaign, scenario.t0, scenario.tf,
                       result.ledger, campaign_rng, log);

        // 4. natural growth; newborns keep the alive (gender, ses) co-distribution
        std::int32_t births = 0;
        if (scenario.growth_rate > 0.0 && pop.census.alive > 0) {
            double expected = scenario.growth_rate * static_cast<double>(pop.census.alive);
            births = static_cast<std::int32_t>(std::floor(expected));
            if (births_rng.bernoulli(expected - std::floor(expected)))
                births++;
            if (births > 0) {
                // cumulative alive counts over (gender, ses) cells
                int gs_cells = pop.grid.num_genders() * pop.grid.num_ses;
                std::vector<std::int64_t> cum(static_cast<std::size_t>(gs_cells), 0);
                std::int64_t running = 0;
                for (int g = 0; g < pop.grid.size(); ++g) {
                    GroupKey k = pop.grid.key_of(g);
                    int cell = pop.grid.gender_index(k.gender) * pop.grid.num_ses +
                               (k.ses - 1);
                    cum[static_cast<std::size_t>(cell)] += pop.alive_per_group[g];
                }
                for (auto& c : cum) {
                    running += c;
                    c = running;
                }
                for (std::int32_t b = 0; b < births; ++b) {
                    std::int64_t u = static_cast<std::int64_t>(
                        births_rng.uniform_int(static_cast<std::uint64_t>(running)));
                    int cell = 0;
                    while (cum[static_cast<std::size_t>(cell)] <= u)
                        cell++;
                    Gender gen =
                        pop.grid.genders[static_cast<std::size_t>(cell / pop.grid.num_ses)];
                    int ses = cell % pop.grid.num_ses + 1;
                    GroupKey key{pop.grid.bucket_of_age(0), gen, ses};
                    int g = pop.grid.index_of(key);
                    const GroupInitParams& gi = scenario.init.at(g);
                    const GroupClinicalParams& gp = scenario.clinical.at(g);

                    std::uint32_t id = static_cast<std::uint32_t>(pop.individuals.size());
                    Rng build(seed, RngTag::build, id);
                    Individual nb;
                    nb.gender = gen;
                    nb.ses = static_cast<std::uint8_t>(ses);
                    nb.group = static_cast<std::uint16_t>(g);
                    nb.age_years = 0;
                    nb.mu = build.truncated_normal(gi.mu_mean, gi.mu_sd, 0.0, 1.0);
                    nb.rho = build.truncated_normal(
                        gi.rho_mean, gi.rho_sd, 0.0,
                        std::numeric_limits<double>::infinity());
                    double rem = gp.life_expectancy_years * 365.0 +
                                 build.next_normal() *
                                     scenario.options.gamma_noise_sd_years * 365.0;
                    nb.gamma = static_cast<std::uint32_t>(
                        std::max<std::int64_t>(1, std::llround(rem)));
                    nb.clin_rng =
                        mix_seed(seed, static_cast<std::uint64_t>(RngTag::clinical), id);
                    nb.comp_rng =
                        mix_seed(seed, static_cast<std::uint64_t>(RngTag::compliance), id);
                    pop.add_newborn(nb);
                    order.push_back(id);
                }
            }
        }

        if (audit)
            pop.audit_census();

        RoundRecord rec;
        rec.alive_start = alive_start;
        rec.census = pop.census;
        rec.births = births;
        rec.disease_deaths = static_cast<std::int32_t>(
            pop.census.cumulative_disease_deaths - disease_deaths_before);
        rec.natural_deaths = static_cast<std::int32_t>(
            pop.census.cumulative_natural_deaths - natural_deaths_before);
        rec.sms_sent = result.ledger.total_sms - sms_before;
        result.rounds.push_back(rec);
        alive_start_series.push_back(alive_start);
        disease_death_series.push_back(rec.disease_deaths);
    }

    exec->finish();
    result.ledger.forfeited += exec->take_forfeited();

    result.mortality = mortality_series(alive_start_series, disease_death_series,
                                        scenario.options.mr_mode);
    result.mr = mortality_rate(result);
    result.final_disease_deaths_per_group = pop.disease_deaths_per_group;
    return result;
}

void save_rounds_csv(const SimulationResult& r, const std::string& path) {
    CsvWriter w(path);
    w.row("round", "alive_start", "H", "S1", "S2", "S3", "S4", "R1", "R2", "R3", "R4",
          "D", "births", "disease_deaths", "natural_deaths", "mr", "sms_total",
          "spent");
    std::int64_t sms_cum = 0;
    for (std::size_t i = 0; i < r.rounds.size(); ++i) {
        const RoundRecord& rec = r.rounds[i];
        sms_cum += rec.sms_sent;
        const auto& c = rec.census.count;
        w.row(r.t0 + static_cast<int>(i), rec.alive_start, c[0], c[1], c[2], c[3], c[4],
              c[5], c[6], c[7], c[8], c[9], rec.births, rec.disease_deaths,
              rec.natural_deaths, r.mortality[i], sms_cum,
              static_cast<double>(sms_cum) * r.ledger.sms_cost);
    }
}

void save_summary_json(const SimulationResult& r, const ScenarioConfig& sc,
                       const std::string& strategy_name, const std::string& path) {
    nlohmann::json j;
    j["scenario"] = sc.name;
    j["strategy"] = strategy_name;
    j["seed"] = r.seed;
    j["t0"] = r.t0;
    j["tf"] = r.tf;
    j["mr"] = r.mr;
    std::int64_t dd = 0, nd = 0, births = 0;
    for (const auto& rec : r.rounds) {
        dd += rec.disease_deaths;
        nd += rec.natural_deaths;
        births += rec.births;
    }
    j["disease_deaths"] = dd;
    j["natural_deaths"] = nd;
    j["births"] = births;
    j["sms_sent"] = r.ledger.total_sms;
    j["spent"] = r.ledger.spent();
    j["budget"] = r.ledger.budget;
    j["forfeited_units"] = r.ledger.forfeited;
    std::ofstream out(path);
    if (!out)
        throw SimError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

void save_events_csv(const std::vector<Event>& events, const std::string& path) {
    CsvWriter w(path);
    w.row("round", "individual", "event", "phase");
    for (const Event& e : events)
        w.row(e.round, e.individual, to_string(e.kind), static_cast<int>(e.phase));
}

} // namespace ppdsim
