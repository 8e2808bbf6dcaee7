#pragma once

#include <string>
#include <vector>

#include "ppdsim/common.hpp"
#include "ppdsim/types.hpp"

namespace ppdsim {

/// Contiguous annual series (strictly increasing years, no gaps).
struct AnnualSeries {
    std::vector<int> years;
    std::vector<double> values;

    std::size_t size() const { return years.size(); }
    void validate() const;
};

AnnualSeries load_annual_csv(const std::string& path); // (year, value) rows
void save_annual_csv(const AnnualSeries& s, const std::string& path);

// ---------------------------------------------------------------------------
// Growth-rate forecasting
// ---------------------------------------------------------------------------

struct ForecastResult {
    double forecast = 0.0; // one step past the series end
    int window = 0;        // MAE-minimising window
    std::vector<double> window_mae; // MAE per window in [lo, hi], for inspection
};

/// Simple exponential smoothing with the smoothing constant tied to the
/// window length as alpha = 2 / (w + 1). The window is chosen by exhaustive
/// grid search over [window_lo, window_hi], minimising one-step-ahead MAE on
/// the common validation tail (ties go to the smallest window).
ForecastResult exp_smooth_forecast(const AnnualSeries& series, int window_lo,
                                   int window_hi);

// ---------------------------------------------------------------------------
// Life-expectancy disaggregation
// ---------------------------------------------------------------------------

struct DisaggregationResult {
    // [gender][ses-1] -> series over the input years
    std::vector<std::vector<std::vector<double>>> series; // [2][ses][year]
    std::vector<double> residual_norm; // per year, ||Ax - b|| of the 12 constraints
    int num_ses = 10;
};

/// Splits an average life-expectancy series into one series per (gender, SES
/// decile): per year, the minimum-norm least-squares solution of the 12
/// constraints (overall mean, female-male gap, one mean-offset per decile).
/// Inconsistent constraints are solved in the least-squares sense and
/// reported through residual_norm.
DisaggregationResult disaggregate_life_expectancy(const AnnualSeries& avg,
                                                  const AnnualSeries& gender_gap,
                                                  const std::vector<double>& ses_gaps);

// ---------------------------------------------------------------------------
// SMS effectiveness coefficients
// ---------------------------------------------------------------------------

struct SmsEffectPoint {
    int n = 1;          // how many SMSs received so far
    double uptake = 0.0; // observed compliance delta per unit susceptibility
};

/// Least-squares fit of uptake = c1 + c2 * (log10 n - log10 (n-1)) over the
/// provided points; the n = 1 log-difference is taken as 0 (intercept only).
/// Throws on a rank-deficient design (no variation in the regressor).
std::pair<double, double> fit_sms_coefficients(const std::vector<SmsEffectPoint>& data);

} // namespace ppdsim
