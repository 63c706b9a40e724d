#include "bohm/integrate.hpp"

#include <cmath>

namespace bohm {

std::size_t IntegrationConfig::steps() const {
    validate();
    return static_cast<std::size_t>(std::llround(transit_time / dt));
}

void IntegrationConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ValidationError("dt", "must be finite and positive");
    }
    if (!std::isfinite(transit_time) || transit_time < dt) {
        throw ValidationError("transit_time", "must be at least dt");
    }
    if (transit_time / dt < 10.0) {
        throw ValidationError("dt", "transit must span at least 10 steps");
    }
}

std::pair<double, double> sample_initial(Rng& rng, double packet_width) {
    const auto [g1, g2] = rng.normal_pair();
    return {packet_width * g1, packet_width * g2};
}

PairTrajectory integrate_view(std::pair<double, double> init, const SettingPair& settings,
                              const DerivedCoefficients& coeff, const IntegrationConfig& cfg) {
    const std::size_t n = cfg.steps();
    const double h = cfg.transit_time / static_cast<double>(n);

    PairTrajectory out;
    TrajectoryState st{init.first, init.second, 0.0};
    const bool recording = cfg.record_every > 0;
    if (recording) {
        out.samples.reserve(n / cfg.record_every + 2);
        out.sample_steps.reserve(n / cfg.record_every + 2);
        out.samples.push_back(st);
        out.sample_steps.push_back(0);
    }

    std::size_t i = 0;
    auto rhs = [&](double zl, double zr, double t) {
        if (!std::isfinite(zl) || !std::isfinite(zr)) {
            throw IntegrationDiverged(i);
        }
        return velocity_pair(TrajectoryState{zl, zr, t}, settings, coeff);
    };

    for (; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        const auto [k1l, k1r] = rhs(st.z_l, st.z_r, t);
        const auto [k2l, k2r] = rhs(st.z_l + 0.5 * h * k1l, st.z_r + 0.5 * h * k1r, t + 0.5 * h);
        const auto [k3l, k3r] = rhs(st.z_l + 0.5 * h * k2l, st.z_r + 0.5 * h * k2r, t + 0.5 * h);
        const auto [k4l, k4r] = rhs(st.z_l + h * k3l, st.z_r + h * k3r, t + h);
        st.z_l += h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
        st.z_r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        st.t = (i + 1 == n) ? cfg.transit_time : h * static_cast<double>(i + 1);
        if (!std::isfinite(st.z_l) || !std::isfinite(st.z_r)) {
            throw IntegrationDiverged(i);
        }
        if (recording && ((i + 1) % cfg.record_every == 0 || i + 1 == n)) {
            out.samples.push_back(st);
            out.sample_steps.push_back(i + 1);
        }
    }

    out.final_state = st;
    out.outcome_l = outcome_of(st.z_l);
    out.outcome_r = outcome_of(st.z_r);
    return out;
}

PairViews integrate_pair(std::pair<double, double> init, const SettingPair& settings_l,
                         const SettingPair& settings_r, const DerivedCoefficients& coeff,
                         const IntegrationConfig& cfg) {
    PairViews views;
    views.alice = integrate_view(init, settings_l, coeff, cfg);
    if (settings_l == settings_r) {
        views.bob = views.alice;
        views.shared = true;
    } else {
        views.bob = integrate_view(init, settings_r, coeff, cfg);
    }
    return views;
}

} // namespace bohm
