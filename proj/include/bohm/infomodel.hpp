#pragma once

#include <vector>

#include "bohm/errors.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

/// Whether an observer sees the partner's magnet as it is now (Nonlocal) or
/// as it was one light-signal delay ago (Local).
enum class InformationMode { Local, Nonlocal };

struct SwitchEntry {
    double time;  // s
    double angle; // rad
};

/// Piecewise-constant history of one magnet's orientation.
class SideTimeline {
public:
    SideTimeline() = default;
    /// Entries must have strictly increasing times, the first at or before 0.
    explicit SideTimeline(std::vector<SwitchEntry> entries);

    /// Orientation in force at time t. Throws ValidationError if t precedes
    /// the first entry.
    double angle_at(double t) const;

    /// True if the orientation actually changes at some entry time in
    /// [from, to].
    bool switched_within(double from, double to) const;

    const std::vector<SwitchEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<SwitchEntry> entries_;
};

struct SettingTimelines {
    SideTimeline alice;
    SideTimeline bob;
    double separation = 100.0;     // cm, distance between the two magnets
    double signal_speed = 2.998e10; // cm/s

    double retardation() const noexcept { return separation / signal_speed; }
};

/// Settings one observer feeds to the guidance law at time t_eval: her own
/// instantaneous angle, and the partner's either instantaneous (Nonlocal) or
/// retarded by separation / signal_speed (Local).
SettingPair effective_settings(Side side, double t_eval, const SettingTimelines& timelines,
                               InformationMode mode);

} // namespace bohm
