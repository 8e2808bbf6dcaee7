#include "ppdsim/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ppdsim/csv.hpp"
#include "ppdsim/parallel.hpp"

namespace ppdsim {

void MCSearchConfig::validate() const {
    if (num_samples < 1)
        throw ConfigError("search: num_samples must be >= 1");
    if (replicates_per_evaluation < 1)
        throw ConfigError("search: replicates_per_evaluation must be >= 1");
    if (time_block_length < 1)
        throw ConfigError("search: time_block_length must be >= 1");
    if (status_class_count != 1 && status_class_count != 5)
        throw ConfigError("search: status_class_count must be 1 or 5");
}

AllocationTensor sample_tensor(PartitionKind partition, int num_cells, int block_length,
                               int horizon, TensorSampler sampler, Rng& rng) {
    AllocationTensor t =
        AllocationTensor::zeros(partition, block_length, horizon, num_cells);
    double sum = 0.0;
    for (double& v : t.values) {
        double u = rng.next_double();
        if (sampler == TensorSampler::dirichlet_uniform) {
            if (u <= 0.0)
                u = 0x1.0p-53;
            v = -std::log(u);
        } else {
            v = u;
        }
        sum += v;
    }
    if (sum <= 0.0) {
        // all-zero draw (vanishing probability): fall back to uniform
        for (double& v : t.values)
            v = 1.0;
        sum = static_cast<double>(t.values.size());
    }
    for (double& v : t.values)
        v /= sum;
    return t;
}

namespace {

/// Mean MR of `strategy` over the evaluation replicates.
double evaluate_strategy(const ScenarioConfig& scenario, const CampaignStrategy& strategy,
                         const MCSearchConfig& search, int candidate_index) {
    double sum = 0.0;
    for (int r = 0; r < search.replicates_per_evaluation; ++r) {
        std::uint64_t seed =
            search.common_random_numbers
                ? mix_seed(search.seed, 0xEF41u, static_cast<std::uint64_t>(r))
                : mix_seed(search.seed, 0xEF42u,
                           static_cast<std::uint64_t>(candidate_index) *
                                   static_cast<std::uint64_t>(search.replicates_per_evaluation) +
                               static_cast<std::uint64_t>(r));
        RunOptions opt;
        opt.seed = seed;
        sum += run(scenario, strategy, opt).mr;
    }
    return sum / static_cast<double>(search.replicates_per_evaluation);
}

} // namespace

SearchResult mc_optimize(const ScenarioConfig& scenario, const MCSearchConfig& search,
                         SearchDimensions dimensions,
                         void (*progress)(int done, int total)) {
    search.validate();
    scenario.validate();

    PartitionKind partition;
    int cells;
    if (dimensions == SearchDimensions::socio_demographic) {
        partition = PartitionKind::groups;
        cells = scenario.grid.size();
    } else if (search.status_class_count == 1) {
        partition = PartitionKind::all;
        cells = 1;
    } else {
        partition = PartitionKind::status_classes;
        cells = kNumEligClasses;
    }

    int n = search.num_samples;
    std::vector<double> mrs(static_cast<std::size_t>(n), 0.0);
    std::atomic<int> done{0};

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        // Per-candidate sampler stream: deterministic regardless of scheduling.
        Rng sampler_rng(mix_seed(search.seed, static_cast<std::uint64_t>(RngTag::sampler),
                                 static_cast<std::uint64_t>(i)));
        AllocationTensor t = sample_tensor(partition, cells, search.time_block_length,
                                           scenario.horizon(), search.sampler, sampler_rng);
        mrs[i] = evaluate_strategy(scenario, CampaignStrategy::mc(std::move(t)), search,
                                   static_cast<int>(i));
        int d = done.fetch_add(1) + 1;
        if (progress && d % 100 == 0)
            progress(d, n);
    });

    SearchResult result;
    result.trace.reserve(static_cast<std::size_t>(n));
    double best = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (int i = 0; i < n; ++i) {
        if (mrs[static_cast<std::size_t>(i)] < best) {
            best = mrs[static_cast<std::size_t>(i)];
            best_idx = i;
        }
        result.trace.push_back({i, mrs[static_cast<std::size_t>(i)], best});
    }

    // Re-draw the winning tensor from its sampler stream.
    Rng sampler_rng(mix_seed(search.seed, static_cast<std::uint64_t>(RngTag::sampler),
                             static_cast<std::uint64_t>(best_idx)));
    result.best = CampaignStrategy::mc(
        sample_tensor(partition, cells, search.time_block_length, scenario.horizon(),
                      search.sampler, sampler_rng));
    result.best_mr = best;
    result.best_sample = best_idx;
    return result;
}

int evaluate_argmin(const ScenarioConfig& scenario, const MCSearchConfig& search,
                    const std::vector<AllocationTensor>& candidates,
                    std::vector<double>* out_mrs) {
    std::vector<double> mrs(candidates.size(), 0.0);
    parallel_for(candidates.size(), [&](std::size_t i) {
        mrs[i] = evaluate_strategy(scenario, CampaignStrategy::mc(candidates[i]), search,
                                   static_cast<int>(i));
    });
    int best = 0;
    for (std::size_t i = 1; i < mrs.size(); ++i)
        if (mrs[i] < mrs[static_cast<std::size_t>(best)])
            best = static_cast<int>(i);
    if (out_mrs)
        *out_mrs = std::move(mrs);
    return best;
}

CompareReport compare_campaigns(const ScenarioConfig& scenario,
                                const std::vector<CampaignStrategy>& strategies,
                                int n_replicates, std::uint64_t seed_base) {
    if (strategies.size() < 2)
        throw ConfigError("compare: need at least two strategies");
    if (n_replicates < 2)
        throw ConfigError("compare: need at least two replicates");

    std::size_t k = strategies.size();
    std::vector<std::vector<double>> mr(k, std::vector<double>(static_cast<std::size_t>(n_replicates)));
    std::vector<std::vector<double>> spent(k, std::vector<double>(static_cast<std::size_t>(n_replicates)));

    // Replicate seeds are shared across strategies pairwise (common random
    // numbers); jobs are flattened over (strategy, replicate).
    parallel_for(k * static_cast<std::size_t>(n_replicates), [&](std::size_t j) {
        std::size_t s = j / static_cast<std::size_t>(n_replicates);
        std::size_t r = j % static_cast<std::size_t>(n_replicates);
        RunOptions opt;
        opt.seed = mix_seed(seed_base, 0xC0ED, static_cast<std::uint64_t>(r));
        SimulationResult res = run(scenario, strategies[s], opt);
        mr[s][r] = res.mr;
        spent[s][r] = res.ledger.spent();
    });

    CompareReport report;
    report.outcomes.resize(k);
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < k; ++s) {
        StrategyOutcome& o = report.outcomes[s];
        o.name = strategies[s].name();
        o.samples = mr[s];
        o.mr = summarize(o.samples);
        double sp = 0.0;
        for (double v : spent[s])
            sp += v;
        o.mean_spent = sp / static_cast<double>(n_replicates);
        if (o.mr.mean < best_mean) {
            best_mean = o.mr.mean;
            report.best_index = static_cast<int>(s);
        }
    }

    report.anova = one_way_anova(mr);
    report.exact_tie = report.anova.degenerate;
    const auto& best = mr[static_cast<std::size_t>(report.best_index)];
    for (std::size_t s = 0; s < k; ++s) {
        if (static_cast<int>(s) == report.best_index)
            continue;
        PairwiseTest pt;
        pt.other = strategies[s].name();
        pt.test = t_test_less(best, mr[s]);
        report.pairwise.push_back(pt);
    }
    return report;
}

void save_compare_csv(const CompareReport& report, const std::string& path) {
    CsvWriter w(path);
    w.row("strategy", "mean_mr", "sd_mr", "n", "mean_spent", "is_best");
    for (std::size_t s = 0; s < report.outcomes.size(); ++s) {
        const auto& o = report.outcomes[s];
        w.row(o.name, o.mr.mean, o.mr.sd, o.mr.n, o.mean_spent,
              static_cast<int>(s) == report.best_index ? 1 : 0);
    }
}

void save_compare_json(const CompareReport& report, const std::string& path) {
    nlohmann::json j;
    j["best"] = report.outcomes[static_cast<std::size_t>(report.best_index)].name;
    j["exact_tie"] = report.exact_tie;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : report.outcomes) {
        nlohmann::json e;
        e["strategy"] = o.name;
        e["mean_mr"] = o.mr.mean;
        e["sd_mr"] = o.mr.sd;
        e["n"] = o.mr.n;
        e["mean_spent"] = o.mean_spent;
        outs.push_back(e);
    }
    j["strategies"] = outs;
    nlohmann::json an;
    an["f"] = report.anova.f;
    an["p"] = report.anova.p;
    an["df_between"] = report.anova.df_between;
    an["df_within"] = report.anova.df_within;
    an["degenerate"] = report.anova.degenerate;
    j["anova"] = an;
    nlohmann::json pw = nlohmann::json::array();
    for (const auto& p : report.pairwise) {
        nlohmann::json e;
        e["other"] = p.other;
        e["t"] = p.test.t;
        e["p_one_sided"] = p.test.p_one_sided;
        e["df"] = p.test.df;
        e["degenerate"] = p.test.degenerate;
        pw.push_back(e);
    }
    j["best_vs_others"] = pw;
    std::ofstream out(path);
    if (!out)
        throw SimError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

void save_trace_csv(const std::vector<SearchTracePoint>& trace, const std::string& path) {
    CsvWriter w(path);
    w.row("sample", "mr", "best_mr");
    for (const auto& p : trace)
        w.row(p.sample, p.mr, p.best_mr);
}

} // namespace ppdsim
