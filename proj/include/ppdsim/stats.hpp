#pragma once

#include <span>
#include <vector>

namespace ppdsim {

struct SampleStats {
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation (n-1)
    std::size_t n = 0;
    double se() const;
};

SampleStats summarize(std::span<const double> xs);

/// One-way ANOVA over k groups. `degenerate` is set when every observation is
/// identical (zero within- and between-variance), in which case F and p are
/// meaningless and reported as an exact tie.
struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    int df_between = 0;
    int df_within = 0;
    bool degenerate = false;
};

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// Two-sample pooled-variance t test, one-sided with H1: mean(a) < mean(b).
/// p is P(T_df <= t) under H0. `degenerate` flags zero pooled variance; an
/// exact tie additionally has t == 0.
struct TTestResult {
    double t = 0.0;
    double p_one_sided = 1.0;
    int df = 0;
    bool degenerate = false;
};

TTestResult t_test_less(std::span<const double> a, std::span<const double> b);

} // namespace ppdsim
