#include "ppdsim/scenario.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace ppdsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ConfigError(origin + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& origin) {
    auto it = j.find(key);
    if (it == j.end())
        fail(origin, std::string("missing required key '") + key + "'");
    return *it;
}

template <typename T, std::size_t N>
std::array<T, N> parse_array(const json& j, const char* key, const std::string& origin) {
    if (!j.is_array() || j.size() != N)
        fail(origin, std::string("'") + key + "' must be an array of " +
                         std::to_string(N) + " values");
    std::array<T, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = j[i].get<T>();
    return out;
}

/// Group selector used by table overrides. Absent fields match anything.
struct Selector {
    std::optional<int> age_bucket, age_bucket_min, age_bucket_max;
    std::optional<Gender> gender;
    std::optional<int> ses, ses_min, ses_max;

    bool matches(const GroupKey& k) const {
        if (age_bucket && k.age_bucket != *age_bucket) return false;
        if (age_bucket_min && k.age_bucket < *age_bucket_min) return false;
        if (age_bucket_max && k.age_bucket > *age_bucket_max) return false;
        if (gender && k.gender != *gender) return false;
        if (ses && k.ses != *ses) return false;
        if (ses_min && k.ses < *ses_min) return false;
        if (ses_max && k.ses > *ses_max) return false;
        return true;
    }
};

Selector parse_selector(const json& j, const std::string& origin) {
    Selector s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "age_bucket") s.age_bucket = it->get<int>();
        else if (key == "age_bucket_min") s.age_bucket_min = it->get<int>();
        else if (key == "age_bucket_max") s.age_bucket_max = it->get<int>();
        else if (key == "gender") s.gender = gender_from_string(it->get<std::string>());
        else if (key == "ses") s.ses = it->get<int>();
        else if (key == "ses_min") s.ses_min = it->get<int>();
        else if (key == "ses_max") s.ses_max = it->get<int>();
        else fail(origin, "unknown selector key '" + key + "'");
    }
    return s;
}

/// Resolves a defaults+overrides table into one row per group. `apply` copies
/// the recognised fields of an entry onto a row; it is called first with the
/// defaults entry, then with every matching override in file order. When no
/// `defaults` section exists, every group must be reached by at least one
/// override or the table is reported as missing that group.
template <typename Row>
std::vector<Row> resolve_table(const json& j, const GroupGrid& grid,
                               const std::string& origin, const char* table_name,
                               const std::function<void(const json&, Row&)>& apply) {
    Row base{};
    bool have_defaults = false;
    if (auto it = j.find("defaults"); it != j.end()) {
        apply(*it, base);
        have_defaults = true;
    }
    std::vector<Row> rows(static_cast<std::size_t>(grid.size()), base);
    std::vector<char> covered(static_cast<std::size_t>(grid.size()),
                              have_defaults ? 1 : 0);
    if (auto it = j.find("overrides"); it != j.end()) {
        if (!it->is_array())
            fail(origin, "'overrides' must be an array");
        for (const auto& entry : *it) {
            Selector sel;
            if (auto m = entry.find("match"); m != entry.end())
                sel = parse_selector(*m, origin);
            for (int g = 0; g < grid.size(); ++g)
                if (sel.matches(grid.key_of(g))) {
                    apply(entry, rows[static_cast<std::size_t>(g)]);
                    covered[static_cast<std::size_t>(g)] = 1;
                }
        }
    }
    for (int g = 0; g < grid.size(); ++g)
        if (!covered[static_cast<std::size_t>(g)])
            fail(origin, std::string(table_name) + ": no parameters for group " +
                             to_string(grid.key_of(g)));
    return rows;
}

void apply_clinical_entry(const json& e, GroupClinicalParams& p, const std::string& origin) {
    for (auto it = e.begin(); it != e.end(); ++it) {
        const std::string& key = it.key();
        if (key == "match") continue;
        else if (key == "phase_duration") p.phase_duration = parse_array<int, 4>(*it, key.c_str(), origin);
        else if (key == "onset_prob") p.onset_prob = it->get<double>();
        else if (key == "recurrence_prob") p.recurrence_prob = parse_array<double, 4>(*it, key.c_str(), origin);
        else if (key == "treat_duration") p.treat_duration = parse_array<int, 4>(*it, key.c_str(), origin);
        else if (key == "recover_prob") p.recover_prob = parse_array<double, 4>(*it, key.c_str(), origin);
        else if (key == "symptom_prob") p.symptom_prob = parse_array<double, 4>(*it, key.c_str(), origin);
        else fail(origin, "unknown clinical field '" + key + "'");
    }
}

void apply_init_entry(const json& e, GroupInitParams& p, const std::string& origin) {
    for (auto it = e.begin(); it != e.end(); ++it) {
        const std::string& key = it.key();
        if (key == "match") continue;
        else if (key == "count") p.count = it->get<std::int64_t>();
        else if (key == "mu_mean") p.mu_mean = it->get<double>();
        else if (key == "mu_sd") p.mu_sd = it->get<double>();
        else if (key == "rho_mean") p.rho_mean = it->get<double>();
        else if (key == "rho_sd") p.rho_sd = it->get<double>();
        else if (key == "latent_fraction") p.latent_fraction = parse_array<double, 4>(*it, key.c_str(), origin);
        else if (key == "status_dist") {
            p.status_dist = {};
            for (auto st = it->begin(); st != it->end(); ++st)
                p.status_dist[static_cast<int>(status_from_string(st.key()))] =
                    st->get<double>();
        } else {
            fail(origin, "unknown init field '" + key + "'");
        }
    }
}

GroupGrid parse_grid(const json& j, const std::string& origin) {
    GroupGrid grid;
    if (auto it = j.find("age_edges"); it != j.end())
        grid.age_edges = it->get<std::vector<int>>();
    if (auto it = j.find("genders"); it != j.end()) {
        grid.genders.clear();
        for (const auto& g : *it)
            grid.genders.push_back(gender_from_string(g.get<std::string>()));
    }
    if (auto it = j.find("num_ses"); it != j.end())
        grid.num_ses = it->get<int>();
    grid.validate();
    (void)origin;
    return grid;
}

} // namespace

void ScenarioConfig::validate() const {
    if (t0 >= tf)
        throw ConfigError("scenario: t0 must be < tf");
    if (scale <= 0.0)
        throw ConfigError("scenario: scale must be positive");
    if (growth_rate < 0.0)
        throw ConfigError("scenario: negative growth rate not supported");
    grid.validate();
    policy.validate();
    campaign.validate();
    clinical.validate();
    init.validate();
    life_expectancy.validate(grid);
    if (!(clinical.grid() == grid) || !(init.grid() == grid))
        throw ConfigError("scenario: group tables built against a different grid");
    if (options.gamma_noise_sd_years < 0.0)
        throw ConfigError("scenario: gamma noise spread must be non-negative");
}

ScenarioConfig parse_scenario_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }

    ScenarioConfig sc;
    try {
        if (auto it = j.find("schema_version"); it != j.end())
            sc.schema_version = it->get<int>();
        if (sc.schema_version != 1)
            fail(origin, "unsupported schema_version");
        if (auto it = j.find("name"); it != j.end())
            sc.name = it->get<std::string>();
        sc.t0 = require(j, "t0", origin).get<int>();
        sc.tf = require(j, "tf", origin).get<int>();
        if (auto it = j.find("growth_rate_per_round"); it != j.end())
            sc.growth_rate = it->get<double>();
        if (auto it = j.find("scale"); it != j.end())
            sc.scale = it->get<double>();
        if (auto it = j.find("seed"); it != j.end())
            sc.seed = it->get<std::uint64_t>();

        sc.grid = parse_grid(require(j, "grid", origin), origin);

        const json& pol = require(j, "policy", origin);
        sc.policy.pre_diagnosis_min_age = require(pol, "pre_diagnosis_min_age", origin).get<int>();
        sc.policy.pre_diagnosis_interval = require(pol, "delta_i", origin).get<int>();
        sc.policy.post_diagnosis_interval =
            parse_array<int, 4>(require(pol, "delta_r", origin), "delta_r", origin);

        const json& cam = require(j, "campaign", origin);
        sc.campaign.c1 = require(cam, "c1", origin).get<double>();
        sc.campaign.c2 = require(cam, "c2", origin).get<double>();
        sc.campaign.sms_cost = require(cam, "sms_cost", origin).get<double>();
        sc.campaign.budget = require(cam, "budget", origin).get<double>();

        const json& le = require(j, "life_expectancy", origin);
        for (Gender g : sc.grid.genders)
            sc.life_expectancy.years[static_cast<int>(g)] =
                require(le, to_string(g), origin).get<std::vector<double>>();

        sc.clinical = ClinicalParameterTable(
            sc.grid,
            resolve_table<GroupClinicalParams>(
                require(j, "clinical", origin), sc.grid, origin, "clinical parameter table",
                [&](const json& e, GroupClinicalParams& p) { apply_clinical_entry(e, p, origin); }));

        // Life expectancy is carried on the clinical rows for cheap lookup.
        for (int g = 0; g < sc.grid.size(); ++g)
            sc.clinical.at_mut(g).life_expectancy_years =
                sc.life_expectancy.at(sc.grid.key_of(g).gender, sc.grid.key_of(g).ses);

        sc.init = InitSpec(
            sc.grid,
            resolve_table<GroupInitParams>(
                require(j, "init", origin), sc.grid, origin, "initial population table",
                [&](const json& e, GroupInitParams& p) { apply_init_entry(e, p, origin); }));

        if (auto it = j.find("options"); it != j.end()) {
            const json& o = *it;
            if (auto m = o.find("mr_mode"); m != o.end()) {
                std::string mode = m->get<std::string>();
                if (mode == "per_round") sc.options.mr_mode = MortalityMode::per_round;
                else if (mode == "cumulative") sc.options.mr_mode = MortalityMode::cumulative;
                else fail(origin, "unknown mr_mode '" + mode + "'");
            }
            if (auto m = o.find("checkup_clock_uniform_init"); m != o.end())
                sc.options.checkup_clock_uniform_init = m->get<bool>();
            if (auto m = o.find("gamma_noise_sd_years"); m != o.end())
                sc.options.gamma_noise_sd_years = m->get<double>();
            if (auto m = o.find("census_audit"); m != o.end())
                sc.options.census_audit = m->get<bool>();
        }
    } catch (const json::exception& e) {
        fail(origin, std::string("malformed value: ") + e.what());
    }

    sc.validate();
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str(), path);
}

std::string scenario_to_json(const ScenarioConfig& sc) {
    json j;
    j["schema_version"] = sc.schema_version;
    j["name"] = sc.name;
    j["t0"] = sc.t0;
    j["tf"] = sc.tf;
    j["growth_rate_per_round"] = sc.growth_rate;
    j["scale"] = sc.scale;
    j["seed"] = sc.seed;

    json grid;
    grid["age_edges"] = sc.grid.age_edges;
    json genders = json::array();
    for (Gender g : sc.grid.genders)
        genders.push_back(to_string(g));
    grid["genders"] = genders;
    grid["num_ses"] = sc.grid.num_ses;
    j["grid"] = grid;

    json pol;
    pol["pre_diagnosis_min_age"] = sc.policy.pre_diagnosis_min_age;
    pol["delta_i"] = sc.policy.pre_diagnosis_interval;
    pol["delta_r"] = sc.policy.post_diagnosis_interval;
    j["policy"] = pol;

    json cam;
    cam["c1"] = sc.campaign.c1;
    cam["c2"] = sc.campaign.c2;
    cam["sms_cost"] = sc.campaign.sms_cost;
    cam["budget"] = sc.campaign.budget;
    j["campaign"] = cam;

    json le;
    for (Gender g : sc.grid.genders)
        le[to_string(g)] = sc.life_expectancy.years[static_cast<int>(g)];
    j["life_expectancy"] = le;

    // Group tables are emitted fully expanded, one override per group, so a
    // saved scenario round-trips regardless of how it was originally written.
    json clin;
    clin["overrides"] = json::array();
    for (int g = 0; g < sc.grid.size(); ++g) {
        GroupKey k = sc.grid.key_of(g);
        const auto& p = sc.clinical.at(g);
        json e;
        e["match"] = {{"age_bucket", k.age_bucket}, {"gender", to_string(k.gender)}, {"ses", k.ses}};
        e["phase_duration"] = p.phase_duration;
        e["onset_prob"] = p.onset_prob;
        e["recurrence_prob"] = p.recurrence_prob;
        e["treat_duration"] = p.treat_duration;
        e["recover_prob"] = p.recover_prob;
        e["symptom_prob"] = p.symptom_prob;
        clin["overrides"].push_back(e);
    }
    j["clinical"] = clin;

    json init;
    init["overrides"] = json::array();
    for (int g = 0; g < sc.grid.size(); ++g) {
        GroupKey k = sc.grid.key_of(g);
        const auto& p = sc.init.at(g);
        json e;
        e["match"] = {{"age_bucket", k.age_bucket}, {"gender", to_string(k.gender)}, {"ses", k.ses}};
        e["count"] = p.count;
        e["mu_mean"] = p.mu_mean;
        e["mu_sd"] = p.mu_sd;
        e["rho_mean"] = p.rho_mean;
        e["rho_sd"] = p.rho_sd;
        json sd;
        for (int s = 0; s < kNumStatuses; ++s)
            if (p.status_dist[s] != 0.0)
                sd[to_string(static_cast<ClinicalStatus>(s))] = p.status_dist[s];
        e["status_dist"] = sd;
        e["latent_fraction"] = p.latent_fraction;
        init["overrides"].push_back(e);
    }
    j["init"] = init;

    json opt;
    opt["mr_mode"] = sc.options.mr_mode == MortalityMode::per_round ? "per_round" : "cumulative";
    opt["checkup_clock_uniform_init"] = sc.options.checkup_clock_uniform_init;
    opt["gamma_noise_sd_years"] = sc.options.gamma_noise_sd_years;
    opt["census_audit"] = sc.options.census_audit;
    j["options"] = opt;

    return j.dump(2);
}

} // namespace ppdsim
