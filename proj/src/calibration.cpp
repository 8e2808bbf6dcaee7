#include "ppdsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "ppdsim/csv.hpp"
#include "ppdsim/parallel.hpp"

namespace ppdsim {

void ParameterVector::clamp() {
    for (std::size_t i = 0; i < specs.size(); ++i)
        values[i] = std::clamp(values[i], specs[i].lo, specs[i].hi);
}

ParameterVector make_mu_rho_parameters(const ScenarioConfig& sc, double rho_hi) {
    ParameterVector pv;
    for (int g = 0; g < sc.grid.size(); ++g) {
        GroupKey k = sc.grid.key_of(g);
        std::string suffix = "[b" + std::to_string(k.age_bucket) + "," +
                             to_string(k.gender) + ",s" + std::to_string(k.ses) + "]";
        pv.specs.push_back({"mu_mean" + suffix, ParamKind::mu_mean, g, 0.0, 1.0});
        pv.values.push_back(sc.init.at(g).mu_mean);
        pv.specs.push_back({"rho_mean" + suffix, ParamKind::rho_mean, g, 0.0, rho_hi});
        pv.values.push_back(sc.init.at(g).rho_mean);
    }
    return pv;
}

ScenarioConfig apply_parameters(const ScenarioConfig& sc, const ParameterVector& pv) {
    ScenarioConfig out = sc;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const ParamSpec& s = pv.specs[i];
        GroupInitParams& row = out.init.at_mut(s.group);
        if (s.kind == ParamKind::mu_mean)
            row.mu_mean = pv.values[i];
        else
            row.rho_mean = pv.values[i];
    }
    return out;
}

void FitConfig::validate() const {
    if (!(stencil_h > 0.0))
        throw ConfigError("fit: stencil step h must be positive");
    if (!(learning_rate > 0.0))
        throw ConfigError("fit: learning rate must be positive");
    if (max_iters < 1)
        throw ConfigError("fit: max_iters must be >= 1");
    if (replicates < 1)
        throw ConfigError("fit: replicates must be >= 1");
}

double loss(const ParameterVector& pv, const ScenarioConfig& sc,
            const std::vector<double>& historical, const FitConfig& config,
            int iteration, std::vector<double>* out_series) {
    if (historical.size() != static_cast<std::size_t>(sc.horizon()))
        throw ConfigError("historical series length (" +
                          std::to_string(historical.size()) +
                          ") does not match the scenario horizon (" +
                          std::to_string(sc.horizon()) + ")");
    ScenarioConfig patched = apply_parameters(sc, pv);

    std::vector<double> mean(historical.size(), 0.0);
    for (int r = 0; r < config.replicates; ++r) {
        std::uint64_t tag = config.fresh_seeds
                                ? static_cast<std::uint64_t>(iteration) * 1000003ULL +
                                      static_cast<std::uint64_t>(r)
                                : static_cast<std::uint64_t>(r);
        RunOptions opt;
        opt.seed = mix_seed(config.seed, 0xF17, tag);
        SimulationResult res = run(patched, config.campaign, opt);
        for (std::size_t t = 0; t < mean.size(); ++t)
            mean[t] += res.mortality[t];
    }
    for (double& v : mean)
        v /= static_cast<double>(config.replicates);

    double d = 0.0;
    for (std::size_t t = 0; t < mean.size(); ++t)
        d += std::abs(mean[t] - historical[t]);
    if (out_series)
        *out_series = std::move(mean);
    return d;
}

std::vector<double> stencil_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     const ParameterVector& at, double h) {
    std::size_t n = at.size();
    std::vector<double> grad(n, 0.0);

    // Stencil points, flattened for the worker pool: (coord j, offset k) with
    // k in {-2, -1, +1, +2}; h shrinks near bounds so every point stays
    // feasible, and a coordinate pinned at its bound gets a zero gradient.
    std::vector<double> hs(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double lo_gap = at.values[j] - at.specs[j].lo;
        double hi_gap = at.specs[j].hi - at.values[j];
        hs[j] = std::min({h, lo_gap / 2.0, hi_gap / 2.0});
    }

    static constexpr int offsets[4] = {-2, -1, 1, 2};
    std::vector<double> fx(n * 4, 0.0);
    parallel_for(n * 4, [&](std::size_t idx) {
        std::size_t j = idx / 4;
        int k = offsets[idx % 4];
        if (hs[j] < 1e-12)
            return;
        std::vector<double> x = at.values;
        x[j] += static_cast<double>(k) * hs[j];
        double v = f(x);
        if (!std::isfinite(v))
            throw SimError("non-finite loss at stencil point of parameter " +
                           at.specs[j].name);
        fx[idx] = v;
    });

    for (std::size_t j = 0; j < n; ++j) {
        if (hs[j] < 1e-12) {
            grad[j] = 0.0;
            continue;
        }
        double fm2 = fx[j * 4 + 0];
        double fm1 = fx[j * 4 + 1];
        double fp1 = fx[j * 4 + 2];
        double fp2 = fx[j * 4 + 3];
        grad[j] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hs[j]);
    }
    return grad;
}

FitResult fit(const ScenarioConfig& sc, const std::vector<double>& historical,
              ParameterVector start, const FitConfig& config,
              void (*progress)(int iter, double mae)) {
    config.validate();
    start.clamp();

    FitResult result;
    result.params = std::move(start);

    double initial_loss = -1.0;
    int bad_streak = 0;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        std::vector<double> series;
        double d = loss(result.params, sc, historical, config, iter, &series);
        if (initial_loss < 0.0)
            initial_loss = d;

        FitTracePoint tp;
        tp.iter = iter;
        tp.mae = d;
        tp.r2 = r_squared(series, historical);
        result.trace.push_back(tp);
        if (progress)
            progress(iter, d);

        if (d <= config.loss_target) {
            result.reached_target = true;
            break;
        }
        if (initial_loss > 0.0 && d > 10.0 * initial_loss) {
            if (++bad_streak >= 5) {
                result.diverged = true;
                break;
            }
        } else {
            bad_streak = 0;
        }
        if (iter + 1 == config.max_iters)
            break;

        auto f = [&](const std::vector<double>& x) {
            ParameterVector pv = result.params;
            pv.values = x;
            return loss(pv, sc, historical, config, iter);
        };
        std::vector<double> grad = stencil_gradient(f, result.params, config.stencil_h);
        for (std::size_t j = 0; j < result.params.size(); ++j)
            result.params.values[j] -= config.learning_rate * grad[j];
        result.params.clamp();
    }
    return result;
}

std::optional<double> r_squared(const std::vector<double>& simulated,
                                const std::vector<double>& historical) {
    if (simulated.size() != historical.size())
        throw ConfigError("r_squared: series lengths differ");
    if (historical.size() < 2)
        throw ConfigError("r_squared: need at least two points");
    double mean = 0.0;
    for (double v : historical)
        mean += v;
    mean /= static_cast<double>(historical.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < historical.size(); ++i) {
        ss_tot += (historical[i] - mean) * (historical[i] - mean);
        ss_res += (historical[i] - simulated[i]) * (historical[i] - simulated[i]);
    }
    if (ss_tot <= 0.0)
        return std::nullopt;
    return 1.0 - ss_res / ss_tot;
}

std::vector<double> load_series_csv(const std::string& path) {
    auto rows = read_csv(path);
    std::vector<double> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && !rows[i].empty() && rows[i][0] == "round")
            continue; // header
        if (rows[i].size() < 2)
            throw ConfigError("series CSV row needs (round, value): " + path);
        out.push_back(std::stod(rows[i][1]));
    }
    return out;
}

void save_fit_trace_csv(const std::vector<FitTracePoint>& trace, const std::string& path) {
    CsvWriter w(path);
    w.row("iter", "mae", "r2");
    for (const auto& p : trace)
        w.row(p.iter, p.mae, p.r2 ? std::to_string(*p.r2) : "nan");
}

void save_parameters_json(const ParameterVector& pv, const GroupGrid& grid,
                          const std::string& path) {
    nlohmann::json overrides = nlohmann::json::array();
    for (int g = 0; g < grid.size(); ++g) {
        GroupKey k = grid.key_of(g);
        nlohmann::json e;
        e["match"] = {{"age_bucket", k.age_bucket},
                      {"gender", to_string(k.gender)},
                      {"ses", k.ses}};
        for (std::size_t i = 0; i < pv.size(); ++i) {
            if (pv.specs[i].group != g)
                continue;
            e[pv.specs[i].kind == ParamKind::mu_mean ? "mu_mean" : "rho_mean"] =
                pv.values[i];
        }
        overrides.push_back(e);
    }
    nlohmann::json j;
    j["init_patch"] = {{"overrides", overrides}};
    std::ofstream out(path);
    if (!out)
        throw SimError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace ppdsim
