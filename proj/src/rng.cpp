#include "ppdsim/rng.hpp"

#include <cmath>

namespace ppdsim {

double Rng::next_normal() {
    // Box-Muller, cosine branch only.
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

double Rng::truncated_normal(double mean, double sd, double lo, double hi) {
    if (sd <= 0.0)
        return mean < lo ? lo : (mean > hi ? hi : mean);
    for (int i = 0; i < 64; ++i) {
        double x = mean + sd * next_normal();
        if (x >= lo && x <= hi)
            return x;
    }
    return mean < lo ? lo : (mean > hi ? hi : mean);
}

} // namespace ppdsim
