#include "bohm/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bohm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) noexcept { return x > 0.0 ? std::log(x) : kNegInf; }

} // namespace

SettingPair::SettingPair(double theta_a, double theta_b)
    : theta_a_(theta_a), theta_b_(theta_b) {
    const double half = 0.5 * (theta_a - theta_b);
    c_ = std::cos(half);
    s_ = std::sin(half);
    log_c2_ = safe_log(c_ * c_);
    log_s2_ = safe_log(s_ * s_);
}

double exponent_scale(double t, const DerivedCoefficients& coeff) noexcept {
    const double kt = coeff.k * t;
    return coeff.beta * t * t / (1.0 + kt * kt);
}

std::pair<double, double> stable_ratios(double u, double v, double log_s2, double log_c2) {
    if (std::isnan(u) || std::isnan(v)) {
        throw std::domain_error("stable_ratio: NaN exponent argument");
    }
    // Each weighted exponential is exp(log_weight +/- arg). Factor out the
    // largest one so the dominant term is exactly 1 and nothing overflows.
    const double au = std::abs(u);
    const double av = std::abs(v);
    const double top = std::max(log_s2 + au, log_c2 + av);
    if (top == kNegInf) {
        throw std::domain_error("stable_ratio: both weights vanish");
    }
    // s2 e^{|u|} (1 - e^{-2|u|}) keeps full relative precision for small |u|.
    const bool u_dominates = log_s2 + au >= log_c2 + av;
    const double scale_u = u_dominates ? 1.0 : std::exp(log_s2 + au - top);
    const double scale_v = u_dominates ? std::exp(log_c2 + av - top) : 1.0;
    const double decay_u = std::expm1(-2.0 * au);
    const double decay_v = std::expm1(-2.0 * av);

    const double den = scale_u * (2.0 + decay_u) + scale_v * (2.0 + decay_v);
    const double sinh_u = std::copysign(scale_u * -decay_u, u);
    const double sinh_v = std::copysign(scale_v * -decay_v, v);
    const double left = std::clamp((sinh_u + sinh_v) / den, -1.0, 1.0);
    const double right = std::clamp((sinh_u - sinh_v) / den, -1.0, 1.0);
    return {left, right};
}

double stable_ratio(double u, double v, double s2, double c2, Side side) {
    if (std::isnan(s2) || std::isnan(c2)) {
        throw std::domain_error("stable_ratio: NaN weight");
    }
    const auto [left, right] = stable_ratios(u, v, safe_log(s2), safe_log(c2));
    return side == Side::Left ? left : right;
}

double stable_ratio(double u, double v, const SettingPair& settings, Side side) {
    const auto [left, right] = stable_ratios(u, v, settings.log_s2(), settings.log_c2());
    return side == Side::Left ? left : right;
}

std::pair<double, double> velocity_pair(const TrajectoryState& state, const SettingPair& settings,
                                        const DerivedCoefficients& coeff) {
    const double t = state.t;
    const double kt2 = coeff.k * coeff.k * t * t;
    const double spread = 1.0 / (1.0 + kt2);
    const double drift = coeff.k * coeff.k * t * spread;
    const double kick = coeff.alpha * t * (2.0 - kt2 * spread);

    const double w = coeff.beta * t * t * spread;
    const double u = 0.5 * w * (state.z_l + state.z_r);
    const double v = 0.5 * w * (state.z_l - state.z_r);
    const auto [ratio_l, ratio_r] = stable_ratios(u, v, settings.log_s2(), settings.log_c2());

    return {drift * state.z_l + ratio_l * kick, drift * state.z_r + ratio_r * kick};
}

} // namespace bohm
