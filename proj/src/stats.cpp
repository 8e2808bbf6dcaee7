#include "ppdsim/stats.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace ppdsim {

double SampleStats::se() const {
    return n > 0 ? sd / std::sqrt(static_cast<double>(n)) : 0.0;
}

SampleStats summarize(std::span<const double> xs) {
    SampleStats s;
    s.n = xs.size();
    if (s.n == 0)
        return s;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs)
            ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    AnovaResult r;
    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        total_n += g.size();
        for (double x : g)
            grand_sum += x;
    }
    int k = static_cast<int>(groups.size());
    if (k < 2 || total_n < static_cast<std::size_t>(k) + 1)
        return r;
    double grand_mean = grand_sum / static_cast<double>(total_n);

    for (const auto& g : groups) {
        if (g.empty())
            continue;
        double gm = 0.0;
        for (double x : g)
            gm += x;
        gm /= static_cast<double>(g.size());
        r.ss_between += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
        for (double x : g)
            r.ss_within += (x - gm) * (x - gm);
    }
    r.df_between = k - 1;
    r.df_within = static_cast<int>(total_n) - k;
    if (r.ss_within <= 0.0) {
        // zero within-group variance: either an exact tie or infinite F
        r.degenerate = r.ss_between <= 0.0;
        r.f = r.degenerate ? 0.0 : std::numeric_limits<double>::infinity();
        r.p = r.degenerate ? 1.0 : 0.0;
        return r;
    }
    r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    boost::math::fisher_f dist(r.df_between, r.df_within);
    r.p = boost::math::cdf(boost::math::complement(dist, r.f));
    return r;
}

TTestResult t_test_less(std::span<const double> a, std::span<const double> b) {
    TTestResult r;
    SampleStats sa = summarize(a);
    SampleStats sb = summarize(b);
    if (sa.n < 2 || sb.n < 2)
        return r;
    r.df = static_cast<int>(sa.n + sb.n) - 2;
    double pooled = ((static_cast<double>(sa.n) - 1.0) * sa.sd * sa.sd +
                     (static_cast<double>(sb.n) - 1.0) * sb.sd * sb.sd) /
                    static_cast<double>(r.df);
    double se = std::sqrt(pooled * (1.0 / static_cast<double>(sa.n) +
                                    1.0 / static_cast<double>(sb.n)));
    if (se <= 0.0) {
        r.degenerate = true;
        r.t = 0.0;
        r.p_one_sided = sa.mean == sb.mean ? 1.0 : (sa.mean < sb.mean ? 0.0 : 1.0);
        return r;
    }
    r.t = (sa.mean - sb.mean) / se;
    boost::math::students_t dist(r.df);
    r.p_one_sided = boost::math::cdf(dist, r.t);
    return r;
}

} // namespace ppdsim
