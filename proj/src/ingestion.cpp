#include "ppdsim/ingestion.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ppdsim/csv.hpp"

namespace ppdsim {

void AnnualSeries::validate() const {
    if (years.size() != values.size())
        throw ConfigError("annual series: year/value count mismatch");
    for (std::size_t i = 1; i < years.size(); ++i)
        if (years[i] != years[i - 1] + 1)
            throw ConfigError("annual series: years must be contiguous (gap at " +
                              std::to_string(years[i]) + ")");
}

AnnualSeries load_annual_csv(const std::string& path) {
    auto rows = read_csv(path);
    AnnualSeries s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && !rows[i].empty() && rows[i][0] == "year")
            continue;
        if (rows[i].size() < 2)
            throw ConfigError("annual CSV row needs (year, value): " + path);
        s.years.push_back(std::stoi(rows[i][0]));
        s.values.push_back(std::stod(rows[i][1]));
    }
    s.validate();
    return s;
}

void save_annual_csv(const AnnualSeries& s, const std::string& path) {
    CsvWriter w(path);
    w.row("year", "value");
    for (std::size_t i = 0; i < s.size(); ++i)
        w.row(s.years[i], s.values[i]);
}

namespace {

/// One-step-ahead MAE of single exponential smoothing with alpha = 2/(w+1),
/// evaluated on predictions for indices [eval_from, n).
double smoothing_mae(const std::vector<double>& y, int window, std::size_t eval_from) {
    double alpha = 2.0 / (static_cast<double>(window) + 1.0);
    double level = y[0];
    double abs_err = 0.0;
    std::size_t n_eval = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        // `level` holds the smoothed value through t-1, i.e. the forecast for t.
        if (t >= eval_from) {
            abs_err += std::abs(level - y[t]);
            ++n_eval;
        }
        level = alpha * y[t] + (1.0 - alpha) * level;
    }
    return n_eval > 0 ? abs_err / static_cast<double>(n_eval) : 0.0;
}

} // namespace

ForecastResult exp_smooth_forecast(const AnnualSeries& series, int window_lo,
                                   int window_hi) {
    series.validate();
    if (window_lo < 1 || window_hi < window_lo)
        throw ConfigError("forecast: invalid window range");
    if (series.size() <= static_cast<std::size_t>(window_hi))
        throw ConfigError("forecast: series too short for the window range");

    const auto& y = series.values;
    // Common validation tail so every window is scored on the same points.
    std::size_t eval_from = static_cast<std::size_t>(window_hi);

    ForecastResult out;
    double best = std::numeric_limits<double>::infinity();
    for (int w = window_lo; w <= window_hi; ++w) {
        double mae = smoothing_mae(y, w, eval_from);
        out.window_mae.push_back(mae);
        if (mae < best) {
            best = mae;
            out.window = w;
        }
    }

    double alpha = 2.0 / (static_cast<double>(out.window) + 1.0);
    double level = y[0];
    for (std::size_t t = 1; t < y.size(); ++t)
        level = alpha * y[t] + (1.0 - alpha) * level;
    out.forecast = level;
    return out;
}

DisaggregationResult disaggregate_life_expectancy(const AnnualSeries& avg,
                                                  const AnnualSeries& gender_gap,
                                                  const std::vector<double>& ses_gaps) {
    avg.validate();
    gender_gap.validate();
    if (avg.size() != gender_gap.size() || (avg.size() > 0 && avg.years != gender_gap.years))
        throw ConfigError("disaggregation: average and gender-gap series must share years");
    int num_ses = static_cast<int>(ses_gaps.size());
    if (num_ses < 1)
        throw ConfigError("disaggregation: need at least one SES gap");

    // Unknowns x = (male_1..male_S, female_1..female_S).
    // Constraints per year: mean(x) = avg; mean(female) - mean(male) = gap;
    // per decile k: (male_k + female_k)/2 = avg + ses_gaps[k].
    int n = 2 * num_ses;
    int m = 2 + num_ses;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
    for (int i = 0; i < n; ++i)
        A(0, i) = 1.0 / static_cast<double>(n);
    for (int k = 0; k < num_ses; ++k) {
        A(1, k) = -1.0 / static_cast<double>(num_ses);          // male
        A(1, num_ses + k) = 1.0 / static_cast<double>(num_ses); // female
        A(2 + k, k) = 0.5;
        A(2 + k, num_ses + k) = 0.5;
    }
    auto solver = A.completeOrthogonalDecomposition();

    DisaggregationResult out;
    out.num_ses = num_ses;
    out.series.assign(2, std::vector<std::vector<double>>(
                             static_cast<std::size_t>(num_ses),
                             std::vector<double>(avg.size(), 0.0)));
    out.residual_norm.assign(avg.size(), 0.0);

    for (std::size_t y = 0; y < avg.size(); ++y) {
        Eigen::VectorXd b(m);
        b(0) = avg.values[y];
        b(1) = gender_gap.values[y];
        for (int k = 0; k < num_ses; ++k)
            b(2 + k) = avg.values[y] + ses_gaps[static_cast<std::size_t>(k)];
        Eigen::VectorXd x = solver.solve(b);
        out.residual_norm[y] = (A * x - b).norm();
        for (int k = 0; k < num_ses; ++k) {
            out.series[0][static_cast<std::size_t>(k)][y] = x(k);
            out.series[1][static_cast<std::size_t>(k)][y] = x(num_ses + k);
        }
    }
    return out;
}

std::pair<double, double> fit_sms_coefficients(const std::vector<SmsEffectPoint>& data) {
    if (data.size() < 2)
        throw ConfigError("sms fit: need at least two data points");
    Eigen::MatrixXd X(data.size(), 2);
    Eigen::VectorXd y(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].n < 1)
            throw ConfigError("sms fit: n must be >= 1");
        double z = data[i].n == 1
                       ? 0.0
                       : std::log10(static_cast<double>(data[i].n) /
                                    static_cast<double>(data[i].n - 1));
        X(static_cast<Eigen::Index>(i), 0) = 1.0;
        X(static_cast<Eigen::Index>(i), 1) = z;
        y(static_cast<Eigen::Index>(i)) = data[i].uptake;
    }
    // Rank check: the regressor must vary.
    double zmin = X.col(1).minCoeff(), zmax = X.col(1).maxCoeff();
    if (std::abs(zmax - zmin) < 1e-12)
        throw ConfigError("sms fit: design is rank-deficient (all n identical)");
    Eigen::Vector2d c = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    return {c(0), c(1)};
}

} // namespace ppdsim
