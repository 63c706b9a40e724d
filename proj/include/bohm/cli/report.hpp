#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohm/experiment.hpp"

namespace bohm::cli {

inline constexpr const char* kVersion = "0.1.0";

/// JSON report of one run. Everything except runtime_s is a function of the
/// configuration and seed.
nlohmann::json report_json(const ExperimentReport& report);

/// Sectioned object mirroring the config file.
nlohmann::json config_json(const ExperimentConfig& cfg);

/// CSV header:
/// pair_id,setting_A,setting_B,effective_B_seen_by_A,effective_A_seen_by_B,
/// outcome_A,outcome_B,survived_A,survived_B
void write_event_log(std::ostream& os, const std::vector<PairRecord>& records);

/// CSV header: pair_id,view,step,t,z_L,z_R. Integrates the first `n_pairs`
/// pairs of the configured experiment, recording every `record_every` steps
/// of each observer's view (view A and view B; identical when shared).
void write_trajectory_dump(std::ostream& os, const ExperimentConfig& cfg, std::size_t n_pairs);

/// Bookkeeping for the files one CLI invocation wrote.
struct RunManifest {
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::string version = kVersion;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;
    std::vector<std::string> overrides; // "key=value" from flags, in order

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

/// One configuration row of the Table 1 experiment.
struct Table1Row {
    std::string locality;
    std::string normalization;
    std::string efficiency;
    double s = 0.0;     // first replicate
    double sigma = 0.0; // binomial estimate of the first replicate
    std::vector<double> replicate_s;
    double mean_s = 0.0;
    double std_s = 0.0; // sample std across replicates, 0 for one replicate
    std::size_t coincidences = 0;
};

struct Table1 {
    std::array<Table1Row, 4> rows;
    std::uint64_t seed = 0;
    std::size_t n_pairs = 0;
    std::size_t replicates = 1;
};

/// Runs the four locality / normalisation / efficiency configurations with
/// shared physics. Every row of a replicate uses the same seed, so rows that
/// keep only unswitched pairs see identical events. Inefficient rows force
/// the switching kick on (kick_threshold = 0) regardless of beam speed.
Table1 run_table1(const ExperimentConfig& base, std::size_t replicates = 1);

/// Seed of replicate r: the base seed for r = 0, derived otherwise.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t r);

nlohmann::json table1_json(const Table1& table);
std::string format_table1(const Table1& table);

} // namespace bohm::cli
