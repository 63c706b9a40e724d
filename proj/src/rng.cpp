#include "bohm/rng.hpp"

#include <cmath>
#include <numbers>

namespace bohm {

std::pair<double, double> Rng::normal_pair() {
    // 1 - uniform() lies in (0, 1], so the log is finite.
    const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(phase), radius * std::sin(phase)};
}

} // namespace bohm
