#include "bohm/hooke.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>

namespace bohm::hooke {

void HookeParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) throw ValidationError(name, "must be finite and positive");
    };
    positive(m1, "m1");
    positive(m2, "m2");
    positive(k_spring, "k_spring");
    if (!std::isfinite(tau) || tau < 0.0) {
        throw ValidationError("tau", "must be finite and non-negative");
    }
    for (double v : {x10, x20, v10, v20}) {
        if (!std::isfinite(v)) throw ValidationError("initial_conditions", "must be finite");
    }
}

double HookeParams::omega() const noexcept { return std::sqrt(k_spring * (m1 + m2) / (m1 * m2)); }

double delay_from_separation(const HookeParams& p, double sound_speed) {
    if (!std::isfinite(sound_speed) || sound_speed <= 0.0) {
        throw ValidationError("sound_speed", "must be finite and positive");
    }
    return std::abs(p.x10 - p.x20) / sound_speed;
}

namespace {

using State = std::array<double, 4>; // x1, x2, v1, v2

State axpy(const State& y, double h, const State& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

// Past positions on the uniform step grid t_j = j h, j >= 0.
class DelayLine {
public:
    DelayLine(double h, double tau, SpringHistory history)
        : h_(h), history_(std::move(history)),
          buffer_(static_cast<std::size_t>(std::ceil(tau / h)) + 3) {}

    void push(std::size_t step, double x1, double x2) {
        buffer_[step % buffer_.size()] = {x1, x2};
        newest_ = step;
    }

    std::pair<double, double> at(double t) const {
        if (t <= 0.0) {
            return history_(t);
        }
        const double pos = t / h_;
        auto j = static_cast<std::size_t>(std::floor(pos));
        if (newest_ == 0) {
            return buffer_[0];
        }
        if (j >= newest_) {
            j = newest_ - 1;
        }
        const double frac = pos - static_cast<double>(j);
        const auto& a = buffer_[j % buffer_.size()];
        const auto& b = buffer_[(j + 1) % buffer_.size()];
        return {a.first + frac * (b.first - a.first), a.second + frac * (b.second - a.second)};
    }

private:
    double h_;
    SpringHistory history_;
    std::vector<std::pair<double, double>> buffer_;
    std::size_t newest_ = 0;
};

template <class Rhs>
std::vector<SpringSample> rk4(const HookeParams& p, double duration, double dt, Rhs&& rhs,
                              DelayLine* line = nullptr) {
    if (!std::isfinite(duration) || duration <= 0.0) {
        throw ValidationError("duration", "must be finite and positive");
    }
    if (!std::isfinite(dt) || dt <= 0.0 || dt > duration) {
        throw ValidationError("dt", "must be positive and no larger than the duration");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration / dt));
    const double h = duration / static_cast<double>(n);

    State y{p.x10, p.x20, p.v10, p.v20};
    std::vector<SpringSample> out;
    out.reserve(n + 1);
    out.push_back({0.0, y[0], y[1], y[2], y[3]});
    if (line) line->push(0, y[0], y[1]);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        const State k1 = rhs(t, y);
        const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const State k4 = rhs(t + h, axpy(y, h, k3));
        for (std::size_t c = 0; c < 4; ++c) {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        out.push_back({h * static_cast<double>(i + 1), y[0], y[1], y[2], y[3]});
        if (line) line->push(i + 1, y[0], y[1]);
    }
    return out;
}

} // namespace

std::vector<SpringSample> simulate_spring(const HookeParams& p, SpringMode mode, double duration,
                                          double dt, SpringHistory history) {
    p.validate();
    const double k = p.k_spring;

    switch (mode) {
    case SpringMode::Instantaneous:
        return rk4(p, duration, dt, [&](double, const State& y) {
            const double f = -k * (y[0] - y[1]);
            return State{y[2], y[3], f / p.m1, -f / p.m2};
        });
    case SpringMode::Expanded:
        return rk4(p, duration, dt, [&](double, const State& y) {
            const double f = -k * (y[0] - y[1]);
            return State{y[2], y[3], (f - p.tau * k * y[3]) / p.m1, (-f - p.tau * k * y[2]) / p.m2};
        });
    case SpringMode::Retarded:
        break;
    }

    if (p.tau == 0.0) {
        // No delay: identical arithmetic to the instantaneous law.
        return simulate_spring(p, SpringMode::Instantaneous, duration, dt);
    }
    if (dt > p.tau / 4.0) {
        throw ValidationError("dt", "must be at most tau/4 to resolve the delay (tau = " +
                                        std::to_string(p.tau) + ")");
    }
    if (!history) {
        history = [x1 = p.x10, x2 = p.x20](double) { return std::pair{x1, x2}; };
    }
    const auto n = static_cast<std::size_t>(std::llround(duration / dt));
    const double h = duration / static_cast<double>(std::max<std::size_t>(n, 1));
    DelayLine line(h, p.tau, std::move(history));
    return rk4(
        p, duration, dt,
        [&](double t, const State& y) {
            const auto [x1_old, x2_old] = line.at(t - p.tau);
            return State{y[2], y[3], -k * (y[0] - x2_old) / p.m1, k * (x1_old - y[1]) / p.m2};
        },
        &line);
}

std::vector<SpringSample> simulate_spring_com(const HookeParams& p, double duration, double dt) {
    p.validate();
    const double mass = p.total_mass();
    const double x_cm0 = (p.m1 * p.x10 + p.m2 * p.x20) / mass;
    const double v_cm = (p.m1 * p.v10 + p.m2 * p.v20) / mass;
    const double k1 = p.k_spring * mass / p.m2;
    const double k2 = p.k_spring * mass / p.m1;
    return rk4(p, duration, dt, [&](double t, const State& y) {
        const double x_cm = x_cm0 + v_cm * t;
        return State{y[2], y[3], -k1 * (y[0] - x_cm) / p.m1, -k2 * (y[1] - x_cm) / p.m2};
    });
}

double energy(const HookeParams& p, const SpringSample& s) noexcept {
    const double stretch = s.x1 - s.x2;
    return 0.5 * p.m1 * s.v1 * s.v1 + 0.5 * p.m2 * s.v2 * s.v2 + 0.5 * p.k_spring * stretch * stretch;
}

double momentum(const HookeParams& p, const SpringSample& s) noexcept {
    return p.m1 * s.v1 + p.m2 * s.v2;
}

void write_csv(std::ostream& os, const std::vector<SpringSample>& samples) {
    os << "t,x1,x2\n";
    const auto old_precision = os.precision(17);
    for (const auto& s : samples) {
        os << s.t << ',' << s.x1 << ',' << s.x2 << '\n';
    }
    os.precision(old_precision);
}

} // namespace bohm::hooke
