// Command-line front end: scenario validation, simulation runs, Monte Carlo
// campaign optimisation, campaign comparison, heatmap export, calibration and
// data ingestion. Every command writes a manifest.json into its output
// directory; exit codes are 0 (success), 1 (runtime failure), 2 (bad
// configuration).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppdsim/calibration.hpp"
#include "ppdsim/csv.hpp"
#include "ppdsim/ingestion.hpp"
#include "ppdsim/manifest.hpp"
#include "ppdsim/optimizer.hpp"
#include "ppdsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace ppdsim;

namespace {

struct Common {
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double scale = 0.0;
    bool scale_set = false;
};

ScenarioConfig load_with_overrides(const Common& c) {
    ScenarioConfig sc = load_scenario(c.scenario_path);
    if (c.seed_set)
        sc.seed = c.seed;
    if (c.scale_set)
        sc.scale = c.scale;
    sc.validate();
    return sc;
}

void add_common(CLI::App* cmd, Common& c, bool needs_out = true) {
    cmd->add_option("--scenario", c.scenario_path, "Scenario JSON file")->required();
    if (needs_out)
        cmd->add_option("--out", c.out_dir, "Output directory")->required();
    cmd->add_option("--seed", c.seed, "Override the scenario seed")
        ->each([&c](const std::string&) { c.seed_set = true; });
    cmd->add_option("--scale", c.scale, "Override the population/budget scale")
        ->each([&c](const std::string&) { c.scale_set = true; });
}

RunManifest start_manifest(const std::string& command, const Common& c, int argc,
                           char** argv) {
    RunManifest m;
    m.command = command;
    for (int i = 0; i < argc; ++i)
        m.argv.push_back(argv[i]);
    m.scenario_path = c.scenario_path;
    m.out_dir = c.out_dir;
    m.version = kToolVersion;
    m.created_utc = utc_timestamp_now();
    if (!c.out_dir.empty())
        fs::create_directories(c.out_dir);
    return m;
}

CampaignStrategy parse_strategy(const std::string& spec, const ScenarioConfig& sc) {
    if (spec == "none")
        return CampaignStrategy::none();
    if (spec == "naive")
        return CampaignStrategy::naive();
    if (spec == "greedy")
        return CampaignStrategy::greedy();
    if (spec.rfind("mc=", 0) == 0) {
        std::string path = spec.substr(3);
        return CampaignStrategy::mc(load_tensor_csv(path, sc.grid, sc.horizon()));
    }
    throw ConfigError("unknown campaign '" + spec +
                      "' (expected none, naive, greedy or mc=<tensor.csv>)");
}

void progress_samples(int done, int total) {
    std::cerr << "  evaluated " << done << "/" << total << " samples\n";
}

void progress_iters(int iter, double mae) {
    if (iter % 10 == 0)
        std::cerr << "  iter " << iter << " loss " << mae << "\n";
}

int cmd_validate(const Common& c) {
    ScenarioConfig sc = load_with_overrides(c);
    std::int64_t pop = 0;
    for (int g = 0; g < sc.grid.size(); ++g)
        pop += static_cast<std::int64_t>(
            std::llround(static_cast<double>(sc.init.at(g).count) * sc.scale));
    std::cout << "scenario '" << sc.name << "' valid: " << sc.grid.size()
              << " groups, ~" << pop << " individuals, horizon " << sc.horizon()
              << " rounds, effective budget " << sc.effective_budget() << "\n";
    return 0;
}

int cmd_simulate(const Common& c, const std::string& campaign, bool events,
                 RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    CampaignStrategy strat = parse_strategy(campaign, sc);
    RunOptions opt;
    opt.collect_events = events;
    opt.track_ledger_detail = true;
    SimulationResult res = run(sc, strat, opt);
    manifest.seeds = {res.seed};

    save_rounds_csv(res, c.out_dir + "/rounds.csv");
    save_summary_json(res, sc, strat.name(), c.out_dir + "/summary.json");
    if (events)
        save_events_csv(res.events, c.out_dir + "/events.csv");
    std::cout << "mr " << res.mr << " spent " << res.ledger.spent() << " sms "
              << res.ledger.total_sms << "\n";
    return 0;
}

int cmd_optimize(const Common& c, const std::string& dimensions, int samples,
                 int replicates, int block_len, int status_classes,
                 const std::string& sampler, RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    MCSearchConfig search;
    search.num_samples = samples;
    search.replicates_per_evaluation = replicates;
    search.time_block_length = block_len;
    search.seed = sc.seed;
    search.status_class_count = status_classes;
    if (sampler == "dirichlet")
        search.sampler = TensorSampler::dirichlet_uniform;
    else if (sampler == "normalize")
        search.sampler = TensorSampler::independent_then_normalize;
    else
        throw ConfigError("unknown sampler '" + sampler + "'");

    SearchDimensions dims;
    if (dimensions == "socio")
        dims = SearchDimensions::socio_demographic;
    else if (dimensions == "status-only")
        dims = SearchDimensions::status_only;
    else
        throw ConfigError("unknown dimensions '" + dimensions +
                          "' (expected socio or status-only)");

    manifest.seeds = {search.seed};
    SearchResult res = mc_optimize(sc, search, dims, progress_samples);
    save_tensor_csv(res.best.tensor, sc.grid, c.out_dir + "/best_tensor.csv");
    save_trace_csv(res.trace, c.out_dir + "/search_trace.csv");

    nlohmann::json j;
    j["best_mr"] = res.best_mr;
    j["best_sample"] = res.best_sample;
    j["samples"] = samples;
    j["dimensions"] = dimensions;
    std::ofstream out(c.out_dir + "/search_summary.json");
    out << j.dump(2) << "\n";
    std::cout << "best evaluated mr " << res.best_mr << " (sample " << res.best_sample
              << ")\n";
    return 0;
}

int cmd_compare(const Common& c, const std::vector<std::string>& strategy_specs, int n,
                RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    std::vector<CampaignStrategy> strategies;
    for (const auto& s : strategy_specs)
        strategies.push_back(parse_strategy(s, sc));
    manifest.seeds.clear();
    for (int r = 0; r < n; ++r)
        manifest.seeds.push_back(mix_seed(sc.seed, 0xC0ED, static_cast<std::uint64_t>(r)));

    CompareReport report = compare_campaigns(sc, strategies, n, sc.seed);
    save_compare_csv(report, c.out_dir + "/compare.csv");
    save_compare_json(report, c.out_dir + "/compare.json");
    for (const auto& o : report.outcomes)
        std::cout << o.name << ": mean mr " << o.mr.mean << " sd " << o.mr.sd << "\n";
    std::cout << "best: " << report.outcomes[static_cast<std::size_t>(report.best_index)].name
              << " (anova p " << report.anova.p << ")\n";
    return 0;
}

int cmd_heatmap(const Common& c, const std::string& tensor_path, RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    AllocationTensor t = load_tensor_csv(tensor_path, sc.grid, sc.horizon());
    if (t.partition != PartitionKind::groups)
        throw ConfigError("heatmap needs a socio-demographic tensor");
    manifest.seeds = {};

    double years = static_cast<double>(sc.horizon()) / 365.0;
    double unit_budget = sc.effective_budget() / sc.campaign.sms_cost;

    for (Gender g : sc.grid.genders) {
        CsvWriter w(c.out_dir + "/heatmap_" + to_string(g) + ".csv");
        std::string header = "age_bucket";
        for (int s = 1; s <= sc.grid.num_ses; ++s)
            header += ",ses_" + std::to_string(s);
        w.row(header);
        for (int b = 0; b < sc.grid.num_age_buckets(); ++b) {
            std::string line = std::to_string(b);
            for (int s = 1; s <= sc.grid.num_ses; ++s) {
                int gi = sc.grid.index_of(GroupKey{b, g, s});
                double frac = 0.0;
                for (int blk = 0; blk < t.num_blocks; ++blk)
                    frac += t.at(blk, gi);
                double members = static_cast<double>(std::llround(
                    static_cast<double>(sc.init.at(gi).count) * sc.scale));
                double per_member =
                    members > 0.0 ? frac * unit_budget / members / years : 0.0;
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.6f", per_member);
                line += std::string(",") + buf;
            }
            w.row(line);
        }
    }
    std::cout << "wrote heatmaps for " << sc.grid.num_genders() << " genders\n";
    return 0;
}

int cmd_calibrate(const Common& c, const std::string& historical_path, int iters,
                  double h, double eta, int replicates, const std::string& campaign,
                  double loss_target, RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    std::vector<double> hist = load_series_csv(historical_path);

    FitConfig cfg;
    cfg.stencil_h = h;
    cfg.learning_rate = eta;
    cfg.max_iters = iters;
    cfg.replicates = replicates;
    cfg.loss_target = loss_target;
    cfg.seed = sc.seed;
    cfg.campaign = parse_strategy(campaign, sc);
    manifest.seeds = {cfg.seed};

    ParameterVector start = make_mu_rho_parameters(sc);
    FitResult res = fit(sc, hist, start, cfg, progress_iters);

    save_fit_trace_csv(res.trace, c.out_dir + "/fit_trace.csv");
    save_parameters_json(res.params, sc.grid, c.out_dir + "/fitted_params.json");
    ScenarioConfig patched = apply_parameters(sc, res.params);
    std::ofstream out(c.out_dir + "/scenario_fitted.json");
    out << scenario_to_json(patched) << "\n";

    const FitTracePoint& last = res.trace.back();
    std::cout << "final loss " << last.mae;
    if (last.r2)
        std::cout << " r2 " << *last.r2;
    std::cout << (res.diverged ? " (diverged)" : "") << "\n";
    return res.diverged ? 1 : 0;
}

int cmd_ingest(const Common& c, const std::string& growth_path,
               const std::string& life_avg_path, const std::string& gender_gap_path,
               const std::string& ses_gaps_path, const std::string& sms_path,
               RunManifest& manifest) {
    ScenarioConfig sc = load_with_overrides(c);
    manifest.seeds = {};
    nlohmann::json report;

    if (!growth_path.empty()) {
        AnnualSeries growth = load_annual_csv(growth_path);
        ForecastResult f = exp_smooth_forecast(growth, 2, 25);
        // annual rate -> per-round rate
        double annual = f.forecast;
        double per_round = std::pow(1.0 + annual, 1.0 / 365.0) - 1.0;
        sc.growth_rate = per_round > 0.0 ? per_round : 0.0;
        report["growth"] = {{"annual_forecast", annual},
                            {"per_round", sc.growth_rate},
                            {"window", f.window}};
    }

    if (!life_avg_path.empty()) {
        if (gender_gap_path.empty() || ses_gaps_path.empty())
            throw ConfigError("life-expectancy ingestion needs --gender-gap and --ses-gaps");
        AnnualSeries avg = load_annual_csv(life_avg_path);
        AnnualSeries gap = load_annual_csv(gender_gap_path);
        auto rows = read_csv(ses_gaps_path);
        std::vector<double> ses_gaps;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == 0 && !rows[i].empty() && rows[i][0] == "ses")
                continue;
            ses_gaps.push_back(std::stod(rows[i].back()));
        }
        if (static_cast<int>(ses_gaps.size()) != sc.grid.num_ses)
            throw ConfigError("ses gaps file must list one gap per SES level");
        DisaggregationResult d = disaggregate_life_expectancy(avg, gap, ses_gaps);
        // The scenario takes the latest year's values.
        std::size_t last = avg.size() - 1;
        for (Gender g : sc.grid.genders) {
            auto& row = sc.life_expectancy.years[static_cast<int>(g)];
            row.resize(static_cast<std::size_t>(sc.grid.num_ses));
            for (int s = 0; s < sc.grid.num_ses; ++s)
                row[static_cast<std::size_t>(s)] =
                    d.series[static_cast<int>(g)][static_cast<std::size_t>(s)][last];
        }
        for (int g = 0; g < sc.grid.size(); ++g)
            sc.clinical.at_mut(g).life_expectancy_years =
                sc.life_expectancy.at(sc.grid.key_of(g).gender, sc.grid.key_of(g).ses);
        double max_res = 0.0;
        for (double r : d.residual_norm)
            max_res = std::max(max_res, r);
        report["life_expectancy"] = {{"years", avg.size()},
                                     {"max_constraint_residual", max_res}};
    }

    if (!sms_path.empty()) {
        auto rows = read_csv(sms_path);
        std::vector<SmsEffectPoint> pts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == 0 && !rows[i].empty() && rows[i][0] == "n")
                continue;
            if (rows[i].size() < 2)
                throw ConfigError("sms effect CSV needs (n, uptake) rows");
            pts.push_back({std::stoi(rows[i][0]), std::stod(rows[i][1])});
        }
        auto [c1, c2] = fit_sms_coefficients(pts);
        sc.campaign.c1 = c1;
        sc.campaign.c2 = c2;
        report["sms"] = {{"c1", c1}, {"c2", c2}, {"points", pts.size()}};
    }

    std::ofstream out(c.out_dir + "/scenario_ingested.json");
    out << scenario_to_json(sc) << "\n";
    std::ofstream rep(c.out_dir + "/ingest_report.json");
    rep << report.dump(2) << "\n";
    std::cout << "wrote " << c.out_dir << "/scenario_ingested.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based simulator and optimiser for check-up reminder campaigns"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common c;

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    add_common(validate, c, false);

    auto* simulate = app.add_subcommand("simulate", "Run one simulation");
    std::string campaign = "none";
    bool events = false;
    add_common(simulate, c);
    simulate->add_option("--campaign", campaign, "none | naive | greedy | mc=<tensor.csv>");
    simulate->add_flag("--events", events, "Write the full event log");

    auto* optimize = app.add_subcommand("optimize", "Monte Carlo campaign search");
    std::string dimensions = "socio";
    int samples = 10000, opt_replicates = 5, block_len = 28, status_classes = 5;
    std::string sampler = "dirichlet";
    add_common(optimize, c);
    optimize->add_option("--dimensions", dimensions, "socio | status-only");
    optimize->add_option("--samples", samples, "Number of sampled tensors");
    optimize->add_option("--replicates", opt_replicates, "Replicates per evaluation");
    optimize->add_option("--block-len", block_len, "Rounds per time block");
    optimize->add_option("--status-classes", status_classes,
                         "Status classes for status-only search (1 or 5)");
    optimize->add_option("--sampler", sampler, "dirichlet | normalize");

    auto* compare = app.add_subcommand("compare", "Compare campaign strategies");
    std::vector<std::string> strategy_specs;
    int n_replicates = 100;
    add_common(compare, c);
    compare->add_option("--strategies", strategy_specs,
                        "Strategies (none naive greedy mc=<file>)")
        ->required()
        ->delimiter(',');
    compare->add_option("--n", n_replicates, "Replicates per strategy");

    auto* heatmap = app.add_subcommand("heatmap", "Per-group yearly SMS rates of a tensor");
    std::string tensor_path;
    add_common(heatmap, c);
    heatmap->add_option("--tensor", tensor_path, "Campaign tensor CSV")->required();

    auto* calibrate = app.add_subcommand("calibrate", "Fit group parameters to a mortality series");
    std::string historical_path, fit_campaign = "naive";
    int iters = 300, fit_replicates = 3;
    double h = 0.02, eta = 0.5, loss_target = 0.0;
    add_common(calibrate, c);
    calibrate->add_option("--historical", historical_path, "Historical series CSV")->required();
    calibrate->add_option("--iters", iters, "Gradient-descent iterations");
    calibrate->add_option("--stencil-h", h, "Stencil step size");
    calibrate->add_option("--eta", eta, "Learning rate");
    calibrate->add_option("--replicates", fit_replicates, "Runs per loss evaluation");
    calibrate->add_option("--campaign", fit_campaign, "Campaign active while fitting");
    calibrate->add_option("--loss-target", loss_target, "Stop when the loss reaches this");

    auto* ingest = app.add_subcommand("ingest", "Build scenario inputs from data files");
    std::string growth_path, life_avg_path, gender_gap_path, ses_gaps_path, sms_path;
    add_common(ingest, c);
    ingest->add_option("--growth", growth_path, "Annual growth-rate CSV (year,value)");
    ingest->add_option("--life-avg", life_avg_path, "Average life expectancy CSV");
    ingest->add_option("--gender-gap", gender_gap_path, "Female-male gap CSV");
    ingest->add_option("--ses-gaps", ses_gaps_path, "Per-decile offsets CSV");
    ingest->add_option("--sms", sms_path, "SMS uptake CSV (n,uptake)");

    CLI11_PARSE(app, argc, argv);

    auto started = std::chrono::steady_clock::now();
    try {
        int rc = 0;
        RunManifest manifest;
        bool wants_manifest = !c.out_dir.empty();
        if (validate->parsed()) {
            rc = cmd_validate(c);
            wants_manifest = false;
        } else if (simulate->parsed()) {
            manifest = start_manifest("simulate", c, argc, argv);
            rc = cmd_simulate(c, campaign, events, manifest);
        } else if (optimize->parsed()) {
            manifest = start_manifest("optimize", c, argc, argv);
            rc = cmd_optimize(c, dimensions, samples, opt_replicates, block_len,
                              status_classes, sampler, manifest);
        } else if (compare->parsed()) {
            manifest = start_manifest("compare", c, argc, argv);
            rc = cmd_compare(c, strategy_specs, n_replicates, manifest);
        } else if (heatmap->parsed()) {
            manifest = start_manifest("heatmap", c, argc, argv);
            rc = cmd_heatmap(c, tensor_path, manifest);
        } else if (calibrate->parsed()) {
            manifest = start_manifest("calibrate", c, argc, argv);
            rc = cmd_calibrate(c, historical_path, iters, h, eta, fit_replicates,
                               fit_campaign, loss_target, manifest);
        } else if (ingest->parsed()) {
            manifest = start_manifest("ingest", c, argc, argv);
            rc = cmd_ingest(c, growth_path, life_avg_path, gender_gap_path,
                            ses_gaps_path, sms_path, manifest);
        }
        if (wants_manifest) {
            manifest.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            manifest.write(c.out_dir + "/manifest.json");
        }
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
