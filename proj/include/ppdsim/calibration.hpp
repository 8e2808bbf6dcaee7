#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ppdsim/simulator.hpp"

namespace ppdsim {

// ---------------------------------------------------------------------------
// Parameter vectors
// ---------------------------------------------------------------------------

enum class ParamKind : std::uint8_t { mu_mean, rho_mean };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::mu_mean;
    int group = 0;
    double lo = 0.0;
    double hi = 1.0;
};

/// Named, bounded parameters with current values. Values are projected back
/// into bounds after every gradient step.
struct ParameterVector {
    std::vector<ParamSpec> specs;
    std::vector<double> values;

    std::size_t size() const { return specs.size(); }
    void clamp();
};

/// The default calibration target: per-group mean compliance and mean
/// susceptibility, initialised from the scenario's init spec.
ParameterVector make_mu_rho_parameters(const ScenarioConfig& sc, double rho_hi = 2.0);

/// Scenario with the parameter values patched into its init spec.
ScenarioConfig apply_parameters(const ScenarioConfig& sc, const ParameterVector& pv);

// ---------------------------------------------------------------------------
// Loss and fit
// ---------------------------------------------------------------------------

struct FitConfig {
    double stencil_h = 0.02;
    double learning_rate = 0.5;
    int max_iters = 300;
    double loss_target = 0.0;
    int replicates = 3;          // simulations averaged per loss evaluation
    std::uint64_t seed = 1;      // loss-evaluation seed base
    bool fresh_seeds = false;    // re-seed the loss every iteration (noisy surface)
    CampaignStrategy campaign = CampaignStrategy::naive(); // campaign active while fitting

    void validate() const;
};

/// Sum over rounds of |simulated mortality - historical mortality| where the
/// simulated series is the mean over `config.replicates` fixed-seed runs.
/// `iteration` only matters in fresh-seed mode.
double loss(const ParameterVector& pv, const ScenarioConfig& sc,
            const std::vector<double>& historical, const FitConfig& config,
            int iteration = 0, std::vector<double>* out_series = nullptr);

/// Five-point central-difference gradient
///   (f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)) / (12 h)
/// per coordinate, with h shrunk near bounds. Stencil evaluations run on the
/// worker pool. Throws SimError if f returns a non-finite value.
std::vector<double> stencil_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     const ParameterVector& at, double h);

struct FitTracePoint {
    int iter = 0;
    double mae = 0.0;
    std::optional<double> r2;
};

struct FitResult {
    ParameterVector params;
    std::vector<FitTracePoint> trace;
    bool diverged = false;
    bool reached_target = false;
};

/// Projected gradient descent on the loss: P <- clamp(P - eta * grad).
/// Aborts (diverged flag) when the loss exceeds 10x its initial value for
/// five consecutive iterations.
FitResult fit(const ScenarioConfig& sc, const std::vector<double>& historical,
              ParameterVector start, const FitConfig& config,
              void (*progress)(int iter, double mae) = nullptr);

/// Coefficient of determination of `simulated` against `historical`;
/// nullopt when the historical series has zero variance.
std::optional<double> r_squared(const std::vector<double>& simulated,
                                const std::vector<double>& historical);

std::vector<double> load_series_csv(const std::string& path); // (round, value) rows
void save_fit_trace_csv(const std::vector<FitTracePoint>& trace, const std::string& path);
void save_parameters_json(const ParameterVector& pv, const GroupGrid& grid,
                          const std::string& path);

} // namespace ppdsim
