#include "bohm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bohm {

void ExperimentConfig::validate() const {
    bohm::validate(physics);
    if (n_pairs < 4) {
        throw ValidationError("n_pairs", "must be at least 4");
    }
    for (double a : angles_a) {
        if (!std::isfinite(a)) throw ValidationError("angle_a", "must be finite");
    }
    for (double b : angles_b) {
        if (!std::isfinite(b)) throw ValidationError("angle_b", "must be finite");
    }
    if (angles_a[0] == angles_a[1]) {
        throw ValidationError("angle_a_prime", "must differ from angle_a");
    }
    if (angles_b[0] == angles_b[1]) {
        throw ValidationError("angle_b_prime", "must differ from angle_b");
    }
    if (!std::isfinite(kick_threshold) || kick_threshold < 0.0) {
        throw ValidationError("kick_threshold", "must be finite and non-negative");
    }
    auto check_policy = [](const SidePolicy& p, const char* name) {
        if (p.policy == SwitchPolicy::Static && p.static_index > 1) {
            throw ValidationError(name, "static index must be 0 or 1");
        }
        if (p.policy == SwitchPolicy::ExplicitList) {
            if (p.explicit_list.empty()) {
                throw ValidationError(name, "explicit_list policy needs a non-empty list");
            }
            for (auto idx : p.explicit_list) {
                if (idx > 1) throw ValidationError(name, "explicit indices must be 0 or 1");
            }
        }
    };
    check_policy(policy_a, "switch_policy_a");
    check_policy(policy_b, "switch_policy_b");

    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) throw ValidationError(name, "must be finite and positive");
    };
    positive(geometry.separation, "separation");
    positive(geometry.source_distance, "source_distance");
    positive(geometry.launch_interval, "launch_interval");
    positive(geometry.signal_speed, "signal_speed");
    if (flight_time() + physics.magnet_length / physics.beam_speed >= geometry.launch_interval) {
        throw ValidationError("launch_interval",
                              "must exceed source flight plus magnet transit so settings stay "
                              "frozen while a pair is in flight");
    }
    if (workers == 0) {
        throw ValidationError("workers", "must be at least 1");
    }
    integration().validate();
}

IntegrationConfig ExperimentConfig::integration() const {
    IntegrationConfig ic;
    ic.dt = dt;
    ic.transit_time = physics.magnet_length / physics.beam_speed;
    ic.record_every = record_every;
    return ic;
}

double kick_ratio(double v_beam, double light_speed) {
    if (!(v_beam > 0.0) || !(light_speed > 0.0) || v_beam > light_speed) {
        throw ValidationError("beam_speed", "kick ratio needs 0 < v <= c");
    }
    return v_beam / (v_beam + light_speed);
}

bool detector_loss_survives(Efficiency efficiency, bool own_switched, double v_beam,
                            double light_speed, double kick_threshold) {
    if (efficiency == Efficiency::Efficient || !own_switched) {
        return true;
    }
    return kick_ratio(v_beam, light_speed) < kick_threshold;
}

namespace {

std::size_t menu_index(const SidePolicy& policy, std::uint64_t seed, Stream stream,
                       std::size_t slot) {
    switch (policy.policy) {
    case SwitchPolicy::Static:
        return policy.static_index;
    case SwitchPolicy::ExplicitList:
        // Slot 0 is the setting before the first launch and repeats pair 0's.
        return policy.explicit_list[(slot == 0 ? 0 : slot - 1) % policy.explicit_list.size()];
    case SwitchPolicy::PerPairRandom:
        break;
    }
    Rng rng(seed, stream, slot);
    return static_cast<std::size_t>(rng.below(2));
}

// Slot 0 holds the setting in force before the first launch; slot i+1 is
// the setting chosen as pair i is launched.
std::vector<std::size_t> menu_indices(const SidePolicy& policy, std::uint64_t seed, Stream stream,
                                      std::size_t n_pairs) {
    std::vector<std::size_t> out(n_pairs + 1);
    for (std::size_t slot = 0; slot <= n_pairs; ++slot) {
        out[slot] = menu_index(policy, seed, stream, slot);
    }
    return out;
}

SideTimeline make_timeline(const SidePolicy& policy, const std::vector<std::size_t>& indices,
                           const std::array<double, 2>& menu, double launch_interval) {
    std::vector<SwitchEntry> entries;
    entries.push_back({-launch_interval, menu[indices[0]]});
    if (policy.policy != SwitchPolicy::Static) {
        entries.reserve(indices.size());
        for (std::size_t i = 1; i < indices.size(); ++i) {
            entries.push_back({launch_interval * static_cast<double>(i - 1), menu[indices[i]]});
        }
    }
    return SideTimeline(std::move(entries));
}

} // namespace

SettingTimelines build_timelines(const ExperimentConfig& cfg) {
    const auto idx_a = menu_indices(cfg.policy_a, cfg.master_seed, Stream::SettingsA, cfg.n_pairs);
    const auto idx_b = menu_indices(cfg.policy_b, cfg.master_seed, Stream::SettingsB, cfg.n_pairs);
    SettingTimelines tl;
    tl.alice = make_timeline(cfg.policy_a, idx_a, cfg.angles_a, cfg.geometry.launch_interval);
    tl.bob = make_timeline(cfg.policy_b, idx_b, cfg.angles_b, cfg.geometry.launch_interval);
    tl.separation = cfg.geometry.separation;
    tl.signal_speed = cfg.geometry.signal_speed;
    return tl;
}

std::vector<PairPlan> plan_pairs(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto idx_a = menu_indices(cfg.policy_a, cfg.master_seed, Stream::SettingsA, cfg.n_pairs);
    const auto idx_b = menu_indices(cfg.policy_b, cfg.master_seed, Stream::SettingsB, cfg.n_pairs);
    const SettingTimelines timelines = build_timelines(cfg);
    const double flight = cfg.flight_time();

    std::vector<PairPlan> plans(cfg.n_pairs);
    for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
        PairPlan& p = plans[i];
        p.pair_id = i;
        p.index_a = idx_a[i + 1];
        p.index_b = idx_b[i + 1];

        const double launch = cfg.geometry.launch_interval * static_cast<double>(i);
        const double entry = launch + flight;
        // Settings are frozen for the whole magnet transit, so they are read
        // once, at magnet entry.
        p.seen_by_a = effective_settings(Side::Left, entry, timelines, cfg.mode);
        p.seen_by_b = effective_settings(Side::Right, entry, timelines, cfg.mode);

        p.switched_a = timelines.alice.switched_within(launch, entry);
        p.switched_b = timelines.bob.switched_within(launch, entry);
        p.survived_a = detector_loss_survives(cfg.efficiency, p.switched_a, cfg.physics.beam_speed,
                                              cfg.physics.light_speed, cfg.kick_threshold);
        p.survived_b = detector_loss_survives(cfg.efficiency, p.switched_b, cfg.physics.beam_speed,
                                              cfg.physics.light_speed, cfg.kick_threshold);

        Rng rng(cfg.master_seed, Stream::InitialPositions, i);
        p.initial = sample_initial(rng, cfg.physics.packet_width);
    }
    return plans;
}

RateTally tally_rates(const std::vector<PairPlan>& plans) {
    RateTally t;
    t.launched = plans.size();
    for (const auto& p : plans) {
        t.singles_a += p.survived_a;
        t.singles_b += p.survived_b;
        t.coincidences += (p.survived_a && p.survived_b);
    }
    return t;
}

RateTally quiescent_baseline(const ExperimentConfig& cfg) {
    ExperimentConfig quiet = cfg;
    quiet.policy_a = SidePolicy{SwitchPolicy::Static, 0, {}};
    quiet.policy_b = SidePolicy{SwitchPolicy::Static, 0, {}};
    return tally_rates(plan_pairs(quiet));
}

CountRates count_rates(const RateTally& switching, const RateTally& quiescent) {
    if (switching.launched == 0 || quiescent.launched == 0) {
        throw EstimationError("count rates need launched pairs in both runs");
    }
    if (quiescent.singles_a == 0 || quiescent.singles_b == 0 || quiescent.coincidences == 0) {
        throw EstimationError("quiescent baseline registered no events");
    }
    const auto rate = [](std::size_t count, std::size_t launched) {
        return static_cast<double>(count) / static_cast<double>(launched);
    };
    CountRates r;
    r.q1_a = rate(quiescent.singles_a, quiescent.launched);
    r.q1_b = rate(quiescent.singles_b, quiescent.launched);
    r.q1p_a = rate(switching.singles_a, switching.launched);
    r.q1p_b = rate(switching.singles_b, switching.launched);
    r.q1 = 0.5 * (r.q1_a + r.q1_b);
    r.q1p = 0.5 * (r.q1p_a + r.q1p_b);
    r.c2 = rate(quiescent.coincidences, quiescent.launched);
    r.c2p = rate(switching.coincidences, switching.launched);
    return r;
}

CountRates count_rates(const ExperimentReport& report) {
    if (!report.baseline) {
        throw EstimationError("count rates need a quiescent baseline run");
    }
    return count_rates(report.switching, *report.baseline);
}

Correlator correlator(const CellTally& cell, Normalization normalization, const char* name) {
    Correlator c;
    if (normalization == Normalization::Coincidences) {
        c.n = static_cast<double>(cell.coincidences);
    } else {
        // Geometric mean of the two singles counts.
        c.n = std::sqrt(static_cast<double>(cell.singles_a) * static_cast<double>(cell.singles_b));
    }
    if (cell.coincidences == 0 || c.n == 0.0) {
        throw EstimationError(std::string("no events for setting pair ") + name);
    }
    c.e = static_cast<double>(cell.product_sum) / c.n;
    return c;
}

ChshResult chsh(const std::array<Correlator, 4>& e) {
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(e[i].n > 0.0)) {
            throw EstimationError(std::string("no events for setting pair ") + kCellNames[i]);
        }
    }
    ChshResult r;
    r.s = e[0].e - e[1].e + e[2].e + e[3].e;
    double var = 0.0;
    for (const auto& c : e) {
        var += (1.0 - c.e * c.e) / c.n;
    }
    r.sigma = std::sqrt(std::max(var, 0.0));
    return r;
}

std::array<CellTally, 4> tally_cells(const std::vector<PairRecord>& records) {
    std::array<CellTally, 4> cells{};
    for (const auto& rec : records) {
        CellTally& c = cells[rec.plan.index_a * 2 + rec.plan.index_b];
        ++c.launched;
        c.singles_a += rec.plan.survived_a;
        c.singles_b += rec.plan.survived_b;
        if (rec.coincidence()) {
            ++c.coincidences;
            c.product_sum += rec.outcome_a * rec.outcome_b;
        }
    }
    return cells;
}

BellEstimate estimate_bell(const std::array<CellTally, 4>& cells, Normalization normalization) {
    BellEstimate b;
    for (std::size_t i = 0; i < 4; ++i) {
        b.correlators[i] = correlator(cells[i], normalization, kCellNames[i]);
    }
    const auto r = chsh(b.correlators);
    b.s = r.s;
    b.s_abs = std::abs(r.s);
    b.sigma = r.sigma;
    return b;
}

ExperimentReport run_epr(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = cfg;

    auto plans = plan_pairs(cfg);
    const DerivedCoefficients coeff = derive_coefficients(cfg.physics);
    const IntegrationConfig ic = cfg.integration();

    report.records.resize(plans.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_pair = plans.size();
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < plans.size(); i = next.fetch_add(1)) {
            PairRecord& rec = report.records[i];
            rec.plan = plans[i];
            try {
                const PairViews views =
                    integrate_pair(plans[i].initial, plans[i].seen_by_a, plans[i].seen_by_b, coeff, ic);
                rec.outcome_a = views.outcome_l();
                rec.outcome_b = views.outcome_r();
            } catch (const IntegrationDiverged& e) {
                std::lock_guard lock(error_mutex);
                if (i < error_pair) {
                    error_pair = i;
                    error = std::make_exception_ptr(IntegrationDiverged(e.step(), i));
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_pair) {
                    error_pair = i;
                    error = std::current_exception();
                }
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(plans.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    report.cells = tally_cells(report.records);
    try {
        report.bell = estimate_bell(report.cells, cfg.normalization);
    } catch (const EstimationError&) {
        report.bell.reset();
    }
    report.switching = tally_rates(plans);
    report.baseline = quiescent_baseline(cfg);
    report.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace bohm
