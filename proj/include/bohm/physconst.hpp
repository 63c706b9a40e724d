#pragma once

#include "bohm/errors.hpp"

namespace bohm {

// CGS-Gaussian throughout.
inline constexpr double kHbar = 1.054571817e-27;          // erg s
inline constexpr double kBohrMagneton = 9.2740100783e-21; // erg/G
inline constexpr double kAtomicMassUnit = 1.66053906660e-24; // g

/// Experiment physics for one Stern-Gerlach arm. Defaults describe silver
/// atoms in a 30 cm magnet with a 1e4 G/cm gradient.
struct RawPhysicalInputs {
    double magnetic_moment = kBohrMagneton;      // erg/G
    double mass = 108.0 * kAtomicMassUnit;       // g
    double packet_width = 1e-3;                  // cm, initial Gaussian width
    double field_gradient = 1e4;                 // G/cm
    double magnet_length = 30.0;                 // cm
    double beam_speed = 1e4;                     // cm/s
    double light_speed = 2.998e10;               // cm/s

    bool operator==(const RawPhysicalInputs&) const = default;
};

/// Guidance coefficients of the two-particle velocity law.
struct DerivedCoefficients {
    double alpha = 0.0;        // cm/s^2, transverse acceleration scale
    double beta = 0.0;         // 1/(cm s^2)
    double k = 0.0;            // 1/s, packet spreading rate
    double transit_time = 0.0; // s, magnet_length / beam_speed
};

/// Throws ValidationError naming the first offending field. A zero field
/// gradient is accepted (field-free limit); every other input must be
/// strictly positive and the beam subluminal.
void validate(const RawPhysicalInputs& raw);

DerivedCoefficients derive_coefficients(const RawPhysicalInputs& raw);

} // namespace bohm
