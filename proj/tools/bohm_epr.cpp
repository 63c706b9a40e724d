// bohm-epr: command-line front end for the singlet Stern-Gerlach simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bohm/cli/config.hpp"
#include "bohm/cli/report.hpp"
#include "bohm/hooke.hpp"

namespace fs = std::filesystem;
using namespace bohm;
using namespace bohm::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pairs;
    std::optional<std::string> mode;
    std::optional<std::string> efficiency;
    std::optional<std::string> normalization;
    unsigned workers = 1;
    std::string out_dir = "out";
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "Master seed (falls back to BOHM_EPR_SEED)");
    app->add_option("--pairs", o.pairs, "Number of pairs");
    app->add_option("--mode", o.mode, "local|nonlocal");
    app->add_option("--efficiency", o.efficiency, "efficient|inefficient");
    app->add_option("--normalization", o.normalization, "singles|coincidences");
    app->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out", o.out_dir, "Output directory");
}

ExperimentConfig resolve(const CommonOptions& o, RunManifest& manifest) {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    auto override = [&](const char* key, const std::string& value) {
        apply_setting(cfg, key, value);
        manifest.overrides.push_back(std::string(key) + "=" + value);
    };
    if (o.seed) {
        override("experiment.seed", std::to_string(*o.seed));
    } else if (const char* env = std::getenv("BOHM_EPR_SEED"); env && *env) {
        override("experiment.seed", env);
    }
    if (o.pairs) override("experiment.n_pairs", std::to_string(*o.pairs));
    if (o.mode) override("experiment.mode", *o.mode);
    if (o.efficiency) override("experiment.efficiency", *o.efficiency);
    if (o.normalization) override("experiment.normalization", *o.normalization);
    cfg.workers = o.workers;
    cfg.validate();
    manifest.config_hash = config_hash(cfg);
    manifest.master_seed = cfg.master_seed;
    return cfg;
}

class OutputDir {
public:
    OutputDir(const std::string& dir, RunManifest& manifest) : dir_(dir), manifest_(manifest) {
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        const fs::path path = dir_ / name;
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        manifest_.outputs.push_back(path.string());
        return os;
    }

    void write_manifest() {
        manifest_.finished_at = utc_timestamp();
        const fs::path path = dir_ / "manifest.json";
        manifest_.outputs.push_back(path.string());
        std::ofstream os(path);
        os << manifest_.to_json().dump(2) << '\n';
    }

private:
    fs::path dir_;
    RunManifest& manifest_;
};

int cmd_run_epr(const CommonOptions& o) {
    RunManifest manifest;
    manifest.started_at = utc_timestamp();
    const ExperimentConfig cfg = resolve(o, manifest);
    const ExperimentReport report = run_epr(cfg);

    OutputDir out(o.out_dir, manifest);
    const auto js = report_json(report);
    out.open("report.json") << js.dump(2) << '\n';
    {
        auto os = out.open("events.csv");
        write_event_log(os, report.records);
    }
    out.open("config.ini") << emit_config(cfg);
    out.write_manifest();

    if (report.bell) {
        std::cout << "S = " << report.bell->s << " +/- " << report.bell->sigma << "  (|S| = " << report.bell->s_abs
                  << ")\n";
    } else {
        std::cout << "S undefined: at least one setting pair has no events\n";
    }
    const auto rates = count_rates(report);
    std::cout << "Q1'/Q1 = " << rates.singles_ratio() << ", C2'/C2 = " << rates.coincidence_ratio() << '\n';
    std::cout << "runtime " << report.runtime_s << " s, outputs in " << o.out_dir << '\n';
    return 0;
}

int cmd_table1(const CommonOptions& o, std::size_t replicates) {
    RunManifest manifest;
    manifest.started_at = utc_timestamp();
    const ExperimentConfig cfg = resolve(o, manifest);
    const Table1 table = run_table1(cfg, replicates);

    OutputDir out(o.out_dir, manifest);
    out.open("table1.json") << table1_json(table).dump(2) << '\n';
    const std::string text = format_table1(table);
    out.open("table1.txt") << text;
    out.write_manifest();
    std::cout << text;
    return 0;
}

int cmd_kick_ratio(std::optional<double> speed, std::optional<double> light_speed) {
    const RawPhysicalInputs defaults;
    const double v = speed.value_or(defaults.beam_speed);
    const double c = light_speed.value_or(defaults.light_speed);
    std::cout << kick_ratio(v, c) << '\n';
    return 0;
}

int cmd_dump(const CommonOptions& o, std::size_t dump_pairs, std::size_t record_every) {
    RunManifest manifest;
    manifest.started_at = utc_timestamp();
    ExperimentConfig cfg = resolve(o, manifest);
    cfg.record_every = record_every;
    manifest.overrides.push_back("integration.record_every=" + std::to_string(record_every));
    manifest.config_hash = config_hash(cfg);

    OutputDir out(o.out_dir, manifest);
    {
        auto os = out.open("trajectories.csv");
        write_trajectory_dump(os, cfg, dump_pairs);
    }
    out.write_manifest();
    std::cout << "wrote " << dump_pairs << " pairs to " << (fs::path(o.out_dir) / "trajectories.csv").string()
              << '\n';
    return 0;
}

struct HookeOptions {
    hooke::HookeParams params;
    std::optional<double> sound_speed;
    double periods = 1.0;
    double steps_per_period = 2000.0;
    std::string out_dir = "out";
};

int cmd_hooke(HookeOptions& h) {
    RunManifest manifest;
    manifest.started_at = utc_timestamp();
    std::string tau_basis = "given";
    if (h.sound_speed) {
        h.params.tau = hooke::delay_from_separation(h.params, *h.sound_speed);
        tau_basis = "initial separation / sound_speed";
    }
    h.params.validate();
    const double period = 2.0 * std::numbers::pi / h.params.omega();
    const double duration = h.periods * period;
    const double dt = period / h.steps_per_period;

    OutputDir out(h.out_dir, manifest);
    const std::pair<const char*, hooke::SpringMode> modes[] = {
        {"instantaneous", hooke::SpringMode::Instantaneous},
        {"retarded", hooke::SpringMode::Retarded},
        {"expanded", hooke::SpringMode::Expanded},
    };
    for (const auto& [name, mode] : modes) {
        const auto samples = hooke::simulate_spring(h.params, mode, duration, dt);
        auto os = out.open(std::string("hooke_") + name + ".csv");
        hooke::write_csv(os, samples);
    }
    nlohmann::json meta{{"m1", h.params.m1},   {"m2", h.params.m2},     {"k_spring", h.params.k_spring},
                        {"tau", h.params.tau}, {"tau_basis", tau_basis}, {"duration", duration},
                        {"dt", dt},            {"omega", h.params.omega()}};
    out.open("hooke_meta.json") << meta.dump(2) << '\n';
    out.write_manifest();
    std::cout << "tau = " << h.params.tau << " s (" << tau_basis << "), outputs in " << h.out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-particle de Broglie-Bohm trajectories for a singlet Stern-Gerlach EPR experiment"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run-epr", "Run one EPR experiment and write report.json and events.csv");
    add_common(run, run_opts);

    CommonOptions table_opts;
    std::size_t replicates = 1;
    auto* table = app.add_subcommand("table1", "Run the four locality/efficiency configurations");
    add_common(table, table_opts);
    table->add_option("--replicates", replicates, "Independent replicates per row")->check(CLI::PositiveNumber);

    std::optional<double> kick_speed;
    std::optional<double> kick_light;
    auto* kick = app.add_subcommand("kick-ratio", "Print v/(v+c) for a beam speed");
    kick->add_option("--speed", kick_speed, "Beam speed in cm/s");
    kick->add_option("--light-speed", kick_light, "Speed of light in cm/s");

    HookeOptions hooke_opts;
    auto* hk = app.add_subcommand("hooke-demo", "Write instantaneous/retarded/expanded spring trajectories");
    hk->add_option("--m1", hooke_opts.params.m1);
    hk->add_option("--m2", hooke_opts.params.m2);
    hk->add_option("--k", hooke_opts.params.k_spring, "Spring constant");
    hk->add_option("--tau", hooke_opts.params.tau, "Delay in seconds");
    hk->add_option("--sound-speed", hooke_opts.sound_speed, "Derive tau from the initial separation");
    hk->add_option("--x1", hooke_opts.params.x10);
    hk->add_option("--x2", hooke_opts.params.x20);
    hk->add_option("--v1", hooke_opts.params.v10);
    hk->add_option("--v2", hooke_opts.params.v20);
    hk->add_option("--periods", hooke_opts.periods, "Duration in oscillation periods");
    hk->add_option("--steps-per-period", hooke_opts.steps_per_period);
    hk->add_option("--out", hooke_opts.out_dir, "Output directory");

    CommonOptions dump_opts;
    std::size_t dump_pairs = 8;
    std::size_t record_every = 10;
    auto* dump = app.add_subcommand("dump-trajectories", "Write per-step trajectories of the first pairs");
    add_common(dump, dump_opts);
    dump->add_option("--dump-pairs", dump_pairs, "Pairs to dump");
    dump->add_option("--record-every", record_every, "Record every N steps")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run_epr(run_opts);
        if (*table) return cmd_table1(table_opts, replicates);
        if (*kick) return cmd_kick_ratio(kick_speed, kick_light);
        if (*hk) return cmd_hooke(hooke_opts);
        if (*dump) return cmd_dump(dump_opts, dump_pairs, record_every);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IntegrationDiverged& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const EstimationError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
