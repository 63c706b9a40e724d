#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bohm/physconst.hpp"
#include "bohm/rng.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

/// Thrown when the state leaves the finite range mid-integration.
class IntegrationDiverged : public std::runtime_error {
public:
    explicit IntegrationDiverged(std::size_t step)
        : std::runtime_error("integration diverged at step " + std::to_string(step)), step_(step) {}
    IntegrationDiverged(std::size_t step, std::size_t pair_id)
        : std::runtime_error("integration diverged at step " + std::to_string(step) + " of pair " +
                             std::to_string(pair_id)),
          step_(step), pair_id_(pair_id) {}

    std::size_t step() const noexcept { return step_; }
    std::optional<std::size_t> pair_id() const noexcept { return pair_id_; }

private:
    std::size_t step_;
    std::optional<std::size_t> pair_id_;
};

struct IntegrationConfig {
    double dt = 1e-6;            // s, nominal RK4 step
    double transit_time = 3e-3;  // s, magnet entry to exit
    std::size_t record_every = 0; // 0 keeps only the end points

    /// Number of equal steps covering [0, transit_time]; the actual step is
    /// transit_time / steps().
    std::size_t steps() const;
    void validate() const;
};

using Outcome = int; // +1 or -1

/// Deflection sign at the magnet exit. Exact zero counts as +1.
constexpr Outcome outcome_of(double z) noexcept { return z >= 0.0 ? +1 : -1; }

/// One observer's integration of both particles.
struct PairTrajectory {
    // Recorded only when record_every > 0; t = 0 and t = T are then always
    // present. sample_steps holds the RK4 step index of each sample.
    std::vector<TrajectoryState> samples;
    std::vector<std::size_t> sample_steps;
    TrajectoryState final_state;
    Outcome outcome_l = +1;
    Outcome outcome_r = +1;
};

/// Alice's view (settings_l) and Bob's view (settings_r) of one pair. When
/// both observers hold the same information the views are one integration.
struct PairViews {
    PairTrajectory alice;
    PairTrajectory bob;
    bool shared = false;

    Outcome outcome_l() const noexcept { return alice.outcome_l; }
    Outcome outcome_r() const noexcept { return bob.outcome_r; }
};

/// Quantum-equilibrium draw at magnet entry: independent N(0, width^2).
std::pair<double, double> sample_initial(Rng& rng, double packet_width);

/// Classical RK4 on dz/dt = velocity_pair from t = 0 to the magnet exit.
PairTrajectory integrate_view(std::pair<double, double> init, const SettingPair& settings,
                              const DerivedCoefficients& coeff, const IntegrationConfig& cfg);

PairViews integrate_pair(std::pair<double, double> init, const SettingPair& settings_l,
                         const SettingPair& settings_r, const DerivedCoefficients& coeff,
                         const IntegrationConfig& cfg);

} // namespace bohm
