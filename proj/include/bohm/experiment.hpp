#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bohm/errors.hpp"
#include "bohm/infomodel.hpp"
#include "bohm/integrate.hpp"
#include "bohm/physconst.hpp"

namespace bohm {

enum class Efficiency { Efficient, Inefficient };
enum class Normalization { Singles, Coincidences };
enum class SwitchPolicy { PerPairRandom, Static, ExplicitList };

/// How one side picks its magnet orientation from its two-angle menu.
struct SidePolicy {
    SwitchPolicy policy = SwitchPolicy::PerPairRandom;
    std::size_t static_index = 0;          // Static: menu index used throughout
    std::vector<std::size_t> explicit_list; // ExplicitList: per-pair indices, cycled

    bool operator==(const SidePolicy&) const = default;
};

/// Source-to-magnet geometry and launch timing. Pair i leaves the source at
/// i * launch_interval and enters its magnets source_distance / beam_speed
/// later. The default signal speed is deliberately far below c, so that each
/// side only learns the partner's previous setting by the time the current
/// pair enters the magnet.
struct Geometry {
    double separation = 100.0;     // cm, magnet-to-magnet distance
    double source_distance = 30.0; // cm, source to magnet entrance
    double launch_interval = 1e-2; // s
    double signal_speed = 1.25e4;  // cm/s

    bool operator==(const Geometry&) const = default;
};

struct ExperimentConfig {
    std::size_t n_pairs = 4000;
    std::array<double, 2> angles_a{0.0, std::numbers::pi / 2};
    std::array<double, 2> angles_b{std::numbers::pi / 4, 3 * std::numbers::pi / 4};
    InformationMode mode = InformationMode::Nonlocal;
    Efficiency efficiency = Efficiency::Efficient;
    Normalization normalization = Normalization::Singles;
    double kick_threshold = 1e-3;
    std::uint64_t master_seed = 20070101;
    SidePolicy policy_a;
    SidePolicy policy_b;
    Geometry geometry;
    RawPhysicalInputs physics;
    double dt = 1e-6;
    std::size_t record_every = 0;
    unsigned workers = 1;

    void validate() const;
    double flight_time() const { return geometry.source_distance / physics.beam_speed; }
    IntegrationConfig integration() const;
};

/// Ratio of time spent inside the counter-propagating switching transient,
/// L/(c+v), to time spent inside the magnet, L/v.
double kick_ratio(double v_beam, double light_speed);

/// Whether a particle reaches its detector. Only Inefficient mode loses
/// particles, and only when its own magnet switched during the flight.
bool detector_loss_survives(Efficiency efficiency, bool own_switched, double v_beam,
                            double light_speed, double kick_threshold);

/// Everything about a pair that is fixed before trajectories are computed.
struct PairPlan {
    std::size_t pair_id = 0;
    std::size_t index_a = 0; // menu index chosen by Alice
    std::size_t index_b = 0;
    SettingPair seen_by_a; // (own, partner) as used in Alice's integration
    SettingPair seen_by_b;
    bool switched_a = false;
    bool switched_b = false;
    bool survived_a = true;
    bool survived_b = true;
    std::pair<double, double> initial{0.0, 0.0}; // cm
};

struct PairRecord {
    PairPlan plan;
    Outcome outcome_a = +1;
    Outcome outcome_b = +1;

    bool coincidence() const noexcept { return plan.survived_a && plan.survived_b; }
};

/// Timelines produced by the two switching policies for a given config.
SettingTimelines build_timelines(const ExperimentConfig& cfg);

/// Settings, loss flags and initial positions for every pair. Cheap: no
/// trajectories are integrated.
std::vector<PairPlan> plan_pairs(const ExperimentConfig& cfg);

/// Event tallies for one setting cell (Alice index, Bob index).
struct CellTally {
    std::size_t launched = 0;
    std::size_t singles_a = 0;
    std::size_t singles_b = 0;
    std::size_t coincidences = 0;
    long long product_sum = 0; // sum of outcome_a * outcome_b over coincidences
};

struct Correlator {
    double e = 0.0;
    double n = 0.0; // normalising count
};

/// Cell order used everywhere: (a,b), (a,b'), (a',b), (a',b').
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 4> kCells{
    {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
inline constexpr std::array<const char*, 4> kCellNames{"ab", "ab'", "a'b", "a'b'"};

/// Throws EstimationError if the cell has no usable events.
Correlator correlator(const CellTally& cell, Normalization normalization, const char* name);

struct ChshResult {
    double s = 0.0;
    double sigma = 0.0;
};

/// S = E_ab - E_ab' + E_a'b + E_a'b' with binomial error propagation.
ChshResult chsh(const std::array<Correlator, 4>& correlators);

struct BellEstimate {
    std::array<Correlator, 4> correlators;
    double s = 0.0;
    double s_abs = 0.0;
    double sigma = 0.0;
};

/// Launch-normalised detection rates of one run.
struct RateTally {
    std::size_t launched = 0;
    std::size_t singles_a = 0;
    std::size_t singles_b = 0;
    std::size_t coincidences = 0;
};

RateTally tally_rates(const std::vector<PairPlan>& plans);

struct CountRates {
    double q1 = 0.0, q1p = 0.0; // singles per launched pair, averaged over sides
    double q1_a = 0.0, q1p_a = 0.0;
    double q1_b = 0.0, q1p_b = 0.0;
    double c2 = 0.0, c2p = 0.0;

    double singles_ratio() const { return q1p / q1; }
    double singles_ratio_a() const { return q1p_a / q1_a; }
    double singles_ratio_b() const { return q1p_b / q1_b; }
    double coincidence_ratio() const { return c2p / c2; }
};

/// Quiescent baseline: the same experiment with neither magnet ever switching.
RateTally quiescent_baseline(const ExperimentConfig& cfg);

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<PairRecord> records;
    std::array<CellTally, 4> cells;
    std::optional<BellEstimate> bell; // absent when a setting cell is empty
    RateTally switching;
    std::optional<RateTally> baseline;
    double runtime_s = 0.0;
};

CountRates count_rates(const RateTally& switching, const RateTally& quiescent);
/// Throws EstimationError when the report carries no quiescent baseline.
CountRates count_rates(const ExperimentReport& report);

/// Pair i's trajectories only depend on (seed, i), so the result is the same
/// for any worker count.
ExperimentReport run_epr(const ExperimentConfig& cfg);

/// Aggregates records into per-cell tallies.
std::array<CellTally, 4> tally_cells(const std::vector<PairRecord>& records);

/// Correlators and S; throws EstimationError naming an empty cell.
BellEstimate estimate_bell(const std::array<CellTally, 4>& cells, Normalization normalization);

} // namespace bohm
