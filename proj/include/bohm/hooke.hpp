#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "bohm/errors.hpp"

namespace bohm::hooke {

/// Two masses on a spring, with an optional signal delay tau along the
/// spring.
struct HookeParams {
    double m1 = 1.0;       // g
    double m2 = 1.0;       // g
    double k_spring = 1.0; // dyn/cm
    double tau = 0.0;      // s
    double x10 = 1.0, x20 = -1.0; // cm
    double v10 = 0.0, v20 = 0.0;  // cm/s

    void validate() const;
    double total_mass() const noexcept { return m1 + m2; }
    /// Angular frequency of the relative coordinate, sqrt(k (m1+m2)/(m1 m2)).
    double omega() const noexcept;
};

/// Delay derived from the initial separation: tau = |x10 - x20| / sound_speed.
double delay_from_separation(const HookeParams& p, double sound_speed);

enum class SpringMode {
    Instantaneous, // m1 x1'' = -k (x1 - x2)
    Retarded,      // partner position taken at t - tau
    Expanded,      // first order in tau: extra -tau k (partner velocity)
};

struct SpringSample {
    double t = 0.0;
    double x1 = 0.0, x2 = 0.0;
    double v1 = 0.0, v2 = 0.0;
};

/// Positions (x1, x2) for t in [-tau, 0].
using SpringHistory = std::function<std::pair<double, double>(double)>;

/// Fixed-step RK4 from 0 to duration. Every step is recorded. In Retarded
/// mode with tau > 0 the step must resolve the delay (dt <= tau/4); delayed
/// positions come from a ring buffer of past steps with linear
/// interpolation, falling back to `history` (default: constant initial
/// positions) before t = 0.
std::vector<SpringSample> simulate_spring(const HookeParams& params, SpringMode mode,
                                          double duration, double dt, SpringHistory history = {});

/// Instantaneous dynamics written as each mass bound to the centre of mass:
/// m1 x1'' = -k (M/m2) (x1 - X_cm(t)), with X_cm moving uniformly. For equal
/// masses the factor M/m2 is 2.
std::vector<SpringSample> simulate_spring_com(const HookeParams& params, double duration, double dt);

double energy(const HookeParams& p, const SpringSample& s) noexcept;
double momentum(const HookeParams& p, const SpringSample& s) noexcept;

/// CSV with header `t,x1,x2`.
void write_csv(std::ostream& os, const std::vector<SpringSample>& samples);

} // namespace bohm::hooke
