#include "bohm/physconst.hpp"

#include <cmath>

namespace bohm {

namespace {

void require_positive(const char* name, double value) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ValidationError(name, "must be finite and strictly positive, got " + std::to_string(value));
    }
}

} // namespace

void validate(const RawPhysicalInputs& raw) {
    require_positive("magnetic_moment", raw.magnetic_moment);
    require_positive("mass", raw.mass);
    require_positive("packet_width", raw.packet_width);
    if (!std::isfinite(raw.field_gradient) || raw.field_gradient < 0.0) {
        throw ValidationError("field_gradient", "must be finite and non-negative");
    }
    require_positive("magnet_length", raw.magnet_length);
    require_positive("beam_speed", raw.beam_speed);
    require_positive("light_speed", raw.light_speed);
    if (raw.beam_speed >= raw.light_speed) {
        throw ValidationError("beam_speed", "must be below light_speed");
    }
}

DerivedCoefficients derive_coefficients(const RawPhysicalInputs& raw) {
    validate(raw);
    DerivedCoefficients out;
    const double width2 = raw.packet_width * raw.packet_width;
    out.alpha = raw.field_gradient * raw.magnetic_moment / (2.0 * raw.mass);
    out.beta = 2.0 * out.alpha / width2;
    out.k = kHbar / (2.0 * raw.mass * width2);
    out.transit_time = raw.magnet_length / raw.beam_speed;
    return out;
}

} // namespace bohm
