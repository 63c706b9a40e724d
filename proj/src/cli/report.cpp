#include "bohm/cli/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bohm/cli/config.hpp"

namespace bohm::cli {

using nlohmann::json;

json config_json(const ExperimentConfig& cfg) {
    json out = json::object();
    for (const auto& [key, value] : config_entries(cfg)) {
        const auto dot = key.find('.');
        out[key.substr(0, dot)][key.substr(dot + 1)] = value;
    }
    return out;
}

json report_json(const ExperimentReport& report) {
    json out;
    out["config_echo"] = config_json(report.config);
    out["seed"] = report.config.master_seed;

    json per_setting = json::object();
    for (std::size_t i = 0; i < kCells.size(); ++i) {
        const CellTally& cell = report.cells[i];
        json entry;
        entry["launched"] = cell.launched;
        entry["coincidences"] = cell.coincidences;
        entry["singles_A"] = cell.singles_a;
        entry["singles_B"] = cell.singles_b;
        if (report.bell) {
            entry["E"] = report.bell->correlators[i].e;
            entry["N"] = report.bell->correlators[i].n;
        } else {
            entry["E"] = nullptr;
            entry["N"] = nullptr;
        }
        per_setting[kCellNames[i]] = entry;
    }
    out["per_setting"] = per_setting;

    if (report.bell) {
        out["S_signed"] = report.bell->s;
        out["S_abs"] = report.bell->s_abs;
        out["sigma_S"] = report.bell->sigma;
    } else {
        out["S_signed"] = nullptr;
        out["S_abs"] = nullptr;
        out["sigma_S"] = nullptr;
    }

    if (report.baseline) {
        const CountRates r = count_rates(report);
        out["Q1"] = r.q1;
        out["Q1p"] = r.q1p;
        out["C2"] = r.c2;
        out["C2p"] = r.c2p;
    } else {
        out["Q1"] = out["Q1p"] = out["C2"] = out["C2p"] = nullptr;
    }
    out["runtime_s"] = report.runtime_s;
    return out;
}

namespace {

std::string fmt(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

} // namespace

void write_event_log(std::ostream& os, const std::vector<PairRecord>& records) {
    os << "pair_id,setting_A,setting_B,effective_B_seen_by_A,effective_A_seen_by_B,"
          "outcome_A,outcome_B,survived_A,survived_B\n";
    for (const auto& r : records) {
        const auto& p = r.plan;
        os << p.pair_id << ',' << fmt(p.seen_by_a.theta_a()) << ',' << fmt(p.seen_by_b.theta_b()) << ','
           << fmt(p.seen_by_a.theta_b()) << ',' << fmt(p.seen_by_b.theta_a()) << ',' << r.outcome_a << ','
           << r.outcome_b << ',' << (p.survived_a ? 1 : 0) << ',' << (p.survived_b ? 1 : 0) << '\n';
    }
}

void write_trajectory_dump(std::ostream& os, const ExperimentConfig& cfg, std::size_t n_pairs) {
    ExperimentConfig run = cfg;
    if (run.record_every == 0) run.record_every = 1;
    const auto plans = plan_pairs(run);
    const auto coeff = derive_coefficients(run.physics);
    const auto ic = run.integration();

    os << "pair_id,view,step,t,z_L,z_R\n";
    const std::size_t count = std::min(n_pairs, plans.size());
    for (std::size_t i = 0; i < count; ++i) {
        const auto& p = plans[i];
        const PairViews views = integrate_pair(p.initial, p.seen_by_a, p.seen_by_b, coeff, ic);
        auto emit = [&](const char* view, const PairTrajectory& tr) {
            for (std::size_t j = 0; j < tr.samples.size(); ++j) {
                const auto& s = tr.samples[j];
                os << p.pair_id << ',' << view << ',' << tr.sample_steps[j] << ',' << fmt(s.t) << ','
                   << fmt(s.z_l) << ',' << fmt(s.z_r) << '\n';
            }
        };
        emit("A", views.alice);
        emit("B", views.bob);
    }
}

json RunManifest::to_json() const {
    return json{{"config_hash", config_hash}, {"seed", master_seed},   {"version", version},
                {"started_at", started_at},   {"finished_at", finished_at}, {"outputs", outputs},
                {"overrides", overrides}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

std::uint64_t replicate_seed(std::uint64_t base, std::size_t r) {
    return r == 0 ? base : derive_seed(base, Stream::Replicate, r);
}

Table1 run_table1(const ExperimentConfig& base, std::size_t replicates) {
    if (replicates == 0) {
        throw ValidationError("replicates", "must be at least 1");
    }
    struct RowSpec {
        InformationMode mode;
        Normalization normalization;
        Efficiency efficiency;
    };
    constexpr std::array<RowSpec, 4> specs{{
        {InformationMode::Local, Normalization::Singles, Efficiency::Efficient},
        {InformationMode::Local, Normalization::Coincidences, Efficiency::Inefficient},
        {InformationMode::Nonlocal, Normalization::Singles, Efficiency::Efficient},
        {InformationMode::Nonlocal, Normalization::Coincidences, Efficiency::Inefficient},
    }};

    Table1 table;
    table.seed = base.master_seed;
    table.n_pairs = base.n_pairs;
    table.replicates = replicates;

    for (std::size_t row = 0; row < specs.size(); ++row) {
        Table1Row& out = table.rows[row];
        out.locality = specs[row].mode == InformationMode::Local ? "Loc" : "NonL";
        out.normalization = to_string(specs[row].normalization);
        out.efficiency = specs[row].efficiency == Efficiency::Efficient ? "Efficient" : "Inefficient";

        for (std::size_t r = 0; r < replicates; ++r) {
            ExperimentConfig cfg = base;
            cfg.mode = specs[row].mode;
            cfg.normalization = specs[row].normalization;
            cfg.efficiency = specs[row].efficiency;
            if (cfg.efficiency == Efficiency::Inefficient) {
                cfg.kick_threshold = 0.0;
            }
            cfg.master_seed = replicate_seed(base.master_seed, r);
            const ExperimentReport rep = run_epr(cfg);
            if (!rep.bell) {
                throw EstimationError("table1 row " + std::to_string(row + 1) + ": a setting cell is empty");
            }
            if (r == 0) {
                out.s = rep.bell->s;
                out.sigma = rep.bell->sigma;
                out.coincidences = rep.switching.coincidences;
            }
            out.replicate_s.push_back(rep.bell->s);
        }
        const double n = static_cast<double>(out.replicate_s.size());
        out.mean_s = std::accumulate(out.replicate_s.begin(), out.replicate_s.end(), 0.0) / n;
        if (out.replicate_s.size() > 1) {
            double ss = 0.0;
            for (double s : out.replicate_s) ss += (s - out.mean_s) * (s - out.mean_s);
            out.std_s = std::sqrt(ss / (n - 1.0));
        }
    }
    return table;
}

json table1_json(const Table1& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"locality", row.locality},
                        {"normalization", row.normalization},
                        {"efficiency", row.efficiency},
                        {"S", row.s},
                        {"sigma_S", row.sigma},
                        {"coincidences", row.coincidences},
                        {"replicate_S", row.replicate_s},
                        {"mean_S", row.mean_s},
                        {"std_S", row.std_s}});
    }
    return json{{"seed", table.seed}, {"n_pairs", table.n_pairs}, {"replicates", table.replicates},
                {"rows", rows}};
}

std::string format_table1(const Table1& table) {
    std::ostringstream os;
    std::array<char, 160> line{};
    std::snprintf(line.data(), line.size(), "%-9s %-13s %-12s %10s %10s", "Locality", "Normalization",
                  "Efficiency", "S_Bell", "std.dev.");
    os << line.data();
    if (table.replicates > 1) {
        std::snprintf(line.data(), line.size(), " %10s %10s", "mean(S)", "std(S)");
        os << line.data();
    }
    os << '\n';
    for (const auto& row : table.rows) {
        std::snprintf(line.data(), line.size(), "%-9s %-13s %-12s %10.5f %10.5f", row.locality.c_str(),
                      row.normalization.c_str(), row.efficiency.c_str(), row.s, row.sigma);
        os << line.data();
        if (table.replicates > 1) {
            std::snprintf(line.data(), line.size(), " %10.5f %10.5f", row.mean_s, row.std_s);
            os << line.data();
        }
        os << '\n';
    }
    return os.str();
}

} // namespace bohm::cli
