#include "bohm/infomodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bohm {

SideTimeline::SideTimeline(std::vector<SwitchEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ValidationError("timeline", "needs at least one entry");
    }
    if (entries_.front().time > 0.0) {
        throw ValidationError("timeline", "first entry must be at or before t = 0");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!std::isfinite(entries_[i].time) || !std::isfinite(entries_[i].angle)) {
            throw ValidationError("timeline", "non-finite entry at index " + std::to_string(i));
        }
        if (i > 0 && !(entries_[i].time > entries_[i - 1].time)) {
            throw ValidationError("timeline", "switch times must be strictly increasing (index " +
                                                  std::to_string(i) + ")");
        }
    }
}

double SideTimeline::angle_at(double t) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                               [](double value, const SwitchEntry& e) { return value < e.time; });
    if (it == entries_.begin()) {
        throw ValidationError("timeline", "lookup at t = " + std::to_string(t) +
                                              " precedes the first recorded setting");
    }
    return std::prev(it)->angle;
}

bool SideTimeline::switched_within(double from, double to) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), from,
                               [](const SwitchEntry& e, double value) { return e.time < value; });
    for (; it != entries_.end() && it->time <= to; ++it) {
        if (it != entries_.begin() && std::prev(it)->angle != it->angle) {
            return true;
        }
    }
    return false;
}

SettingPair effective_settings(Side side, double t_eval, const SettingTimelines& timelines,
                               InformationMode mode) {
    const double partner_time =
        mode == InformationMode::Nonlocal ? t_eval : t_eval - timelines.retardation();
    if (side == Side::Left) {
        return {timelines.alice.angle_at(t_eval), timelines.bob.angle_at(partner_time)};
    }
    return {timelines.alice.angle_at(partner_time), timelines.bob.angle_at(t_eval)};
}

} // namespace bohm
