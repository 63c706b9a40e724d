#pragma once

#include <utility>

#include "bohm/physconst.hpp"

namespace bohm {

/// Magnet orientations of the two arms, measured in the lab frame.
///
/// Only the half-angle difference enters the guidance law, through
/// c = cos((theta_a - theta_b)/2) and s = sin((theta_a - theta_b)/2). The
/// logarithms of c^2 and s^2 are cached because the ratio evaluation works
/// in the log domain.
class SettingPair {
public:
    SettingPair() : SettingPair(0.0, 0.0) {}
    SettingPair(double theta_a, double theta_b);

    double theta_a() const noexcept { return theta_a_; }
    double theta_b() const noexcept { return theta_b_; }
    double c() const noexcept { return c_; }
    double s() const noexcept { return s_; }
    double c2() const noexcept { return c_ * c_; }
    double s2() const noexcept { return s_ * s_; }
    double log_c2() const noexcept { return log_c2_; }
    double log_s2() const noexcept { return log_s2_; }

    bool operator==(const SettingPair& other) const noexcept {
        return theta_a_ == other.theta_a_ && theta_b_ == other.theta_b_;
    }

private:
    double theta_a_;
    double theta_b_;
    double c_;
    double s_;
    double log_c2_;
    double log_s2_;
};

/// Positions of the two particles (each in its own magnet frame) at time t
/// after magnet entry.
struct TrajectoryState {
    double z_l = 0.0; // cm
    double z_r = 0.0; // cm
    double t = 0.0;   // s
};

enum class Side { Left, Right };

/// w(t) = beta t^2 / (1 + k^2 t^2), the scale multiplying the centre-of-mass
/// and relative coordinates inside the exponentials.
double exponent_scale(double t, const DerivedCoefficients& coeff) noexcept;

/// Quotient of the four-exponential sums in sinh/cosh form:
///   L: (s2 sinh u + c2 sinh v) / (s2 cosh u + c2 cosh v)
///   R: (s2 sinh u - c2 sinh v) / (s2 cosh u + c2 cosh v)
/// with u = w (z_l + z_r)/2 and v = w (z_l - z_r)/2. Evaluated with the
/// largest weighted exponent factored out, so |u|, |v| far beyond the
/// double exp range are fine. Throws std::domain_error on NaN input.
double stable_ratio(double u, double v, const SettingPair& settings, Side side);

/// Same as above for callers holding raw weights instead of a SettingPair.
double stable_ratio(double u, double v, double s2, double c2, Side side);

/// Both ratios at once; they share every exponential.
std::pair<double, double> stable_ratios(double u, double v, double log_s2, double log_c2);

/// Guidance velocities (cm/s) of both particles under one information set.
std::pair<double, double> velocity_pair(const TrajectoryState& state, const SettingPair& settings,
                                        const DerivedCoefficients& coeff);

} // namespace bohm
