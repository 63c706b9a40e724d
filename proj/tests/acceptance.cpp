// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bohm/cli/report.hpp"
#include "bohm/experiment.hpp"
#include "bohm/hooke.hpp"
#include "bohm/velocity.hpp"

using namespace bohm;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.1fs)%s\n", out.pass ? "PASS" : "FAIL", id, title, secs,
                out.detail.str().c_str());
    std::fflush(stdout);
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

bool within_rel(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

void derived_coefficients(Outcome& o) {
    const auto c = derive_coefficients(RawPhysicalInputs{});
    o.detail << " alpha=" << c.alpha << " beta=" << c.beta << " k=" << c.k;
    o.require(within_rel(c.alpha, 2.58e5, 0.01), "alpha");
    o.require(within_rel(c.beta, 5.17e11, 0.01), "beta");
    o.require(within_rel(c.k, 2.94, 0.01), "k");
}

void table1(Outcome& o) {
    ExperimentConfig base;
    base.workers = worker_count();
    const auto table = cli::run_table1(base, 25);
    const double expected_s[] = {-1.31946, -2.76893, -2.77554, -2.76893};
    const double expected_std[] = {0.03652, 0.07086, 0.03652, 0.07086};
    for (std::size_t r = 0; r < 4; ++r) {
        const auto& row = table.rows[r];
        o.detail << " row" << r + 1 << ":S=" << row.s << ",mean=" << row.mean_s << ",std=" << row.std_s;
        o.require(std::abs(row.s - expected_s[r]) <= 0.15, "row " + std::to_string(r + 1) + " S");
        o.require(row.std_s >= expected_std[r] / 2 && row.std_s <= expected_std[r] * 2,
                  "row " + std::to_string(r + 1) + " std");
    }
    o.require(table.rows[1].replicate_s == table.rows[3].replicate_s, "rows 2 and 4 identical");
}

void nonlocal_correlation(Outcome& o) {
    for (int q = 0; q < 4; ++q) {
        const double dtheta = q * std::numbers::pi / 4;
        ExperimentConfig cfg;
        cfg.n_pairs = 4000;
        cfg.angles_a = {0.0, 1.0};
        cfg.angles_b = {dtheta, dtheta + 1.0};
        if (q == 0) cfg.angles_a[1] = 2.0;
        cfg.policy_a = SidePolicy{SwitchPolicy::Static, 0, {}};
        cfg.policy_b = SidePolicy{SwitchPolicy::Static, 0, {}};
        cfg.workers = worker_count();
        const auto report = run_epr(cfg);
        const auto e = correlator(report.cells[0], cfg.normalization, "ab");
        const double want = -std::cos(dtheta);
        const double sigma = std::sqrt(std::max(1.0 - want * want, 0.0) / e.n);
        o.detail << " E(" << q << "pi/4)=" << e.e;
        if (q == 0) {
            o.require(e.e == -1.0, "exact anticorrelation");
        } else {
            o.require(std::abs(e.e - want) <= 4.0 * sigma, "E within 4 sigma at " + std::to_string(q) + "pi/4");
        }
    }
}

void kick_ratios(Outcome& o) {
    const double c = RawPhysicalInputs{}.light_speed;
    const double slow = kick_ratio(1e4, c), fast = kick_ratio(1e7, c), light = kick_ratio(c, c);
    o.detail << " 1e4:" << slow << " 1e7:" << fast << " c:" << light;
    o.require(within_rel(slow, 3.34e-7, 0.005), "v=1e4");
    o.require(within_rel(fast, 3.3e-4, 0.02), "v=1e7");
    o.require(light == 0.5, "v=c");
}

void count_rate_ratios(Outcome& o) {
    ExperimentConfig cfg;
    cfg.n_pairs = 10000;
    cfg.efficiency = Efficiency::Inefficient;
    cfg.kick_threshold = 0.0;
    cfg.workers = worker_count();
    const auto rates = count_rates(run_epr(cfg));
    o.detail << " Q1'/Q1=" << rates.singles_ratio() << " C2'/C2=" << rates.coincidence_ratio();
    o.require(rates.singles_ratio() >= 0.47 && rates.singles_ratio() <= 0.53, "singles ratio");
    o.require(rates.coincidence_ratio() >= 0.22 && rates.coincidence_ratio() <= 0.28, "coincidence ratio");
}

void field_free_accuracy(Outcome& o) {
    RawPhysicalInputs raw;
    raw.field_gradient = 0.0;
    const auto coeff = derive_coefficients(raw);
    const std::pair<double, double> init{1.7e-3, -6e-4};
    auto rel_error = [&](double dt, double transit) {
        IntegrationConfig ic;
        ic.dt = dt;
        ic.transit_time = transit;
        const auto tr = integrate_view(init, SettingPair(0.0, 1.0), coeff, ic);
        const double growth = std::sqrt(1.0 + coeff.k * coeff.k * transit * transit);
        return std::abs(tr.final_state.z_l / (init.first * growth) - 1.0);
    };
    const double fine = rel_error(1e-6, coeff.transit_time);
    o.detail << " err(dt=1e-6)=" << fine;
    o.require(fine <= 1e-8, "relative error at dt=1e-6");

    // At the silver transit time the error is already at round-off, so the
    // convergence order is measured on a long (k T ~ 3) flight with coarse steps.
    const double T = 1.0;
    const double coarse = rel_error(T / 40, T), half = rel_error(T / 80, T);
    o.detail << " halving ratio=" << coarse / half;
    o.require(coarse / half >= 8.0, "halving dt");
}

void velocity_properties(Outcome& o) {
    const auto coeff = derive_coefficients(RawPhysicalInputs{});
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> pos(-1e-2, 1e-2);
    std::uniform_real_distribution<double> time(0.0, coeff.transit_time);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> arg(-1e6, 1e6);
    auto close = [](double a, double b, double tol) {
        return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
    };
    double aligned_worst = 0.0;
    int parity = 0, exchange = 0, periodic = 0, finite = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double zl = pos(gen), zr = pos(gen), t = time(gen), ta = angle(gen), tb = angle(gen);
        const double kt2 = coeff.k * coeff.k * t * t;

        const auto [al, ar] = velocity_pair({zl, zr, t}, SettingPair(ta, ta), coeff);
        const double w = coeff.beta * t * t / (1.0 + kt2);
        const double want = coeff.k * coeff.k * t / (1.0 + kt2) * (zl - zr) +
                            2.0 * coeff.alpha * t * (2.0 - kt2 / (1.0 + kt2)) * std::tanh(w * (zl - zr) / 2.0);
        const double got = al - ar;
        const double scale = std::max(std::abs(got), std::abs(want));
        if (scale > 0.0) aligned_worst = std::max(aligned_worst, std::abs(got - want) / scale);

        const SettingPair sp(ta, tb);
        const auto [vl, vr] = velocity_pair({zl, zr, t}, sp, coeff);
        const auto [pl, pr] = velocity_pair({-zl, -zr, t}, sp, coeff);
        parity += close(pl, -vl, 1e-12) && close(pr, -vr, 1e-12);
        const auto [xl, xr] = velocity_pair({zr, zl, t}, SettingPair(tb, ta), coeff);
        exchange += close(xl, vr, 1e-12) && close(xr, vl, 1e-12);
        const auto [ql, qr] = velocity_pair({zl, zr, t}, SettingPair(ta + 2.0 * std::numbers::pi, tb), coeff);
        const auto [nl, nr] = velocity_pair({zl, zr, t}, SettingPair(tb, ta), coeff);
        periodic += close(ql, vl, 1e-9) && close(qr, vr, 1e-9) && close(nl, vl, 1e-12) && close(nr, vr, 1e-12);

        const double u = arg(gen), v = arg(gen);
        const double r_l = stable_ratio(u, v, sp, Side::Left);
        const double r_r = stable_ratio(u, v, sp, Side::Right);
        const double wt = exponent_scale(coeff.transit_time, coeff);
        const auto [bl, br] = velocity_pair({(u + v) / wt, (u - v) / wt, coeff.transit_time}, sp, coeff);
        finite += std::isfinite(r_l) && std::isfinite(r_r) && std::abs(r_l) <= 1.0 && std::abs(r_r) <= 1.0 &&
                  std::isfinite(bl) && std::isfinite(br);
    }
    o.detail << " aligned_max_rel=" << aligned_worst << " parity=" << parity << "/" << n
             << " exchange=" << exchange << "/" << n << " periodic=" << periodic << "/" << n
             << " finite=" << finite << "/" << n;
    o.require(aligned_worst <= 1e-12, "aligned reduction");
    o.require(parity == n, "parity");
    o.require(exchange == n, "exchange");
    o.require(periodic == n, "angle periodicity");
    o.require(finite == n, "no overflow");
}

void hooke_checks(Outcome& o) {
    using namespace bohm::hooke;
    HookeParams p;
    const double T = 2.0 * std::numbers::pi / p.omega();
    const auto run = simulate_spring(p, SpringMode::Instantaneous, 10.0 * T, T / 1000.0);
    const double e0 = energy(p, run.front());
    double drift = 0.0;
    for (const auto& s : run) drift = std::max(drift, std::abs(energy(p, s) - e0) / e0);
    o.detail << " energy_drift=" << drift;
    o.require(drift < 1e-6, "energy drift");

    auto deviation = [](const std::vector<SpringSample>& a, const std::vector<SpringSample>& b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
            worst = std::max({worst, std::abs(a[i].x1 - b[i].x1), std::abs(a[i].x2 - b[i].x2)});
        }
        return worst;
    };
    const double tau_small = 0.01 * T;
    const double dt = tau_small / 40.0;
    std::vector<double> dev;
    for (double tau : {2.0 * tau_small, tau_small}) {
        p.tau = tau;
        dev.push_back(deviation(simulate_spring(p, SpringMode::Retarded, T, dt),
                                simulate_spring(p, SpringMode::Expanded, T, dt)));
    }
    const double ratio = dev[0] / dev[1];
    o.detail << " tau_scaling=" << ratio;
    o.require(ratio >= 3.0 && ratio <= 5.0, "O(tau^2) deviation");

    HookeParams q;
    q.m1 = 1.5;
    q.m2 = 0.7;
    q.v10 = 0.3;
    const double com = deviation(simulate_spring(q, SpringMode::Instantaneous, 15.0, 1e-3),
                                 simulate_spring_com(q, 15.0, 1e-3));
    o.detail << " com_deviation=" << com;
    o.require(com < 1e-9, "centre-of-mass form");
}

void worker_determinism(Outcome& o) {
    ExperimentConfig cfg;
    cfg.n_pairs = 400;
    cfg.mode = InformationMode::Local;
    auto strip = [](nlohmann::json j) {
        j.erase("runtime_s");
        return j.dump();
    };
    cfg.workers = 1;
    const auto one = strip(cli::report_json(run_epr(cfg)));
    bool same = true;
    for (unsigned w : {2u, 3u, 8u}) {
        cfg.workers = w;
        same &= strip(cli::report_json(run_epr(cfg))) == one;
    }
    o.require(same, "reports differ across worker counts");
}

} // namespace

int main() {
    criterion(1, "derived coefficients for silver within 1%", derived_coefficients);
    criterion(4, "kick ratio regimes", kick_ratios);
    criterion(6, "field-free trajectories and RK4 convergence", field_free_accuracy);
    criterion(7, "velocity law properties over random states", velocity_properties);
    criterion(8, "spring model: energy, delay scaling, centre-of-mass form", hooke_checks);
    criterion(9, "identical reports for any worker count", worker_determinism);
    criterion(3, "nonlocal correlation follows -cos(dtheta)", nonlocal_correlation);
    criterion(5, "switching losses halve singles and quarter coincidences", count_rate_ratios);
    criterion(2, "Table 1: S per row, identical rows 2 and 4, replicate spread", table1);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
