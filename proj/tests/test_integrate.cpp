#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <vector>

#include "bohm/integrate.hpp"

using namespace bohm;

namespace {

const RawPhysicalInputs kRaw{};
const DerivedCoefficients kAg = derive_coefficients(kRaw);

IntegrationConfig cfg_with(double dt, double transit) {
    IntegrationConfig c;
    c.dt = dt;
    c.transit_time = transit;
    return c;
}

} // namespace

TEST_CASE("initial sampling matches the packet width") {
    Rng rng(12345);
    const int n = 100000;
    const double width = 1e-3;
    double sum_l = 0, sum_r = 0, sq_l = 0, sq_r = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
        const auto [zl, zr] = sample_initial(rng, width);
        sum_l += zl;
        sum_r += zr;
        sq_l += zl * zl;
        sq_r += zr * zr;
        cross += zl * zr;
    }
    const double mean_l = sum_l / n, mean_r = sum_r / n;
    CHECK(std::abs(mean_l) < 4.0 * width / std::sqrt(n));
    CHECK(std::abs(mean_r) < 4.0 * width / std::sqrt(n));
    const double sd_l = std::sqrt(sq_l / n - mean_l * mean_l);
    const double sd_r = std::sqrt(sq_r / n - mean_r * mean_r);
    CHECK(sd_l == doctest::Approx(width).epsilon(0.02));
    CHECK(sd_r == doctest::Approx(width).epsilon(0.02));
    const double corr = (cross / n - mean_l * mean_r) / (sd_l * sd_r);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(n));
}

TEST_CASE("sampling is deterministic per seed and stream") {
    Rng a(7, Stream::InitialPositions, 42);
    Rng b(7, Stream::InitialPositions, 42);
    Rng c(7, Stream::InitialPositions, 43);
    for (int i = 0; i < 100; ++i) {
        const auto x = sample_initial(a, 1e-3);
        const auto y = sample_initial(b, 1e-3);
        CHECK(x == y);
    }
    CHECK(sample_initial(a, 1e-3) != sample_initial(c, 1e-3));
    // mt19937_64 is specified bit for bit: the 10000th output of the default
    // seed is fixed by the standard.
    std::mt19937_64 ref;
    ref.discard(9999);
    CHECK(ref() == 9981545732273789042ULL);
}

TEST_CASE("field-free trajectories follow z0 sqrt(1 + k^2 t^2)") {
    RawPhysicalInputs raw;
    raw.field_gradient = 0.0;
    const auto coeff = derive_coefficients(raw);
    const auto tr = integrate_view({1.3e-3, -7e-4}, SettingPair(0.0, 0.5), coeff, cfg_with(1e-6, 3e-3));
    const double T = 3e-3;
    const double growth = std::sqrt(1.0 + coeff.k * coeff.k * T * T);
    CHECK(std::abs(tr.final_state.z_l / (1.3e-3 * growth) - 1.0) <= 1e-8);
    CHECK(std::abs(tr.final_state.z_r / (-7e-4 * growth) - 1.0) <= 1e-8);
    CHECK(tr.final_state.t == T);
}

TEST_CASE("RK4 converges at fourth order on a deflecting pair") {
    // Richardson ratio |z(h) - z(h/2)| / |z(h/2) - z(h/4)| -> 16 once the step
    // resolves the sign switch of the spin term; T/60 is still pre-asymptotic.
    const std::pair<double, double> init{4e-4, -2.5e-4};
    const SettingPair sp(0.0, std::numbers::pi / 3);
    const double T = kAg.transit_time;
    std::vector<double> finals;
    for (double dt : {T / 300, T / 600, T / 1200}) {
        finals.push_back(integrate_view(init, sp, kAg, cfg_with(dt, T)).final_state.z_l);
    }
    const double ratio = std::abs(finals[0] - finals[1]) / std::abs(finals[1] - finals[2]);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("aligned magnets: every pair is anticorrelated") {
    const auto ic = cfg_with(1e-6, kAg.transit_time);
    int anticorrelated = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng(99, Stream::InitialPositions, i);
        const auto init = sample_initial(rng, kRaw.packet_width);
        const SettingPair sp(0.4, 0.4);
        const auto views = integrate_pair(init, sp, sp, kAg, ic);
        CHECK(views.shared);
        anticorrelated += views.outcome_l() == -views.outcome_r();
    }
    CHECK(anticorrelated == 1000);
}

TEST_CASE("deflection dominates the packet width at the exit") {
    const auto ic = cfg_with(1e-6, kAg.transit_time);
    std::vector<double> exits;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng(5, Stream::InitialPositions, i);
        const auto init = sample_initial(rng, kRaw.packet_width);
        exits.push_back(std::abs(integrate_view(init, SettingPair(0.0, 1.0), kAg, ic).final_state.z_l));
    }
    std::nth_element(exits.begin(), exits.begin() + 100, exits.end());
    CHECK(exits[100] > 10.0 * kRaw.packet_width);
}

TEST_CASE("exchanging initial positions and settings exchanges outcomes") {
    const auto ic = cfg_with(1e-6, kAg.transit_time);
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng rng(8, Stream::InitialPositions, i);
        const auto [zl, zr] = sample_initial(rng, kRaw.packet_width);
        const auto a = integrate_view({zl, zr}, SettingPair(0.0, 0.9), kAg, ic);
        const auto b = integrate_view({zr, zl}, SettingPair(0.9, 0.0), kAg, ic);
        CHECK(a.outcome_l == b.outcome_r);
        CHECK(a.outcome_r == b.outcome_l);
    }
}

TEST_CASE("distinct information sets run two integrations") {
    const auto ic = cfg_with(1e-6, kAg.transit_time);
    const auto views = integrate_pair({3e-4, 1e-4}, SettingPair(0.0, 0.0), SettingPair(0.0, 2.0), kAg, ic);
    CHECK_FALSE(views.shared);
    const auto alice = integrate_view({3e-4, 1e-4}, SettingPair(0.0, 0.0), kAg, ic);
    const auto bob = integrate_view({3e-4, 1e-4}, SettingPair(0.0, 2.0), kAg, ic);
    CHECK(views.alice.final_state.z_l == alice.final_state.z_l);
    CHECK(views.bob.final_state.z_r == bob.final_state.z_r);
    CHECK(views.outcome_l() == alice.outcome_l);
    CHECK(views.outcome_r() == bob.outcome_r);
}

TEST_CASE("recording and configuration checks") {
    auto ic = cfg_with(1e-4, 3e-3);
    ic.record_every = 7;
    const auto tr = integrate_view({1e-4, -1e-4}, SettingPair(0.0, 1.0), kAg, ic);
    REQUIRE(tr.samples.size() >= 2);
    CHECK(tr.samples.front().t == 0.0);
    CHECK(tr.samples.back().t == 3e-3);
    CHECK(tr.sample_steps.back() == 30);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    }

    CHECK_THROWS_AS(cfg_with(0.0, 3e-3).validate(), ValidationError);
    CHECK_THROWS_AS(cfg_with(1e-3, 3e-3).validate(), ValidationError); // only 3 steps
    CHECK_THROWS_AS(cfg_with(1e-3, 1e-4).validate(), ValidationError);
}

TEST_CASE("outcome tie-break") {
    CHECK(outcome_of(0.0) == +1);
    CHECK(outcome_of(-0.0) == +1);
    CHECK(outcome_of(-1e-300) == -1);
}

TEST_CASE("divergence is reported with the step index") {
    DerivedCoefficients bad = kAg;
    bad.alpha = std::numeric_limits<double>::infinity();
    try {
        integrate_view({1e-4, 2e-4}, SettingPair(0.0, 1.0), bad, cfg_with(1e-4, 3e-3));
        FAIL("expected divergence");
    } catch (const IntegrationDiverged& e) {
        CHECK(e.step() == 0);
    }
}
