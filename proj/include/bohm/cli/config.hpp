#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bohm/experiment.hpp"

namespace bohm::cli {

/// Experiment configuration text: flat `key = value` lines grouped under
/// `[physics]`, `[integration]` and `[experiment]`. `#` starts a comment.
/// Missing keys keep their defaults; unknown keys, malformed values and
/// constraint violations raise ValidationError naming the key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets one key given as `section.key` (or a bare key, resolved against all
/// sections). Used for command-line overrides. Does not validate the whole
/// config.
void apply_setting(ExperimentConfig& cfg, std::string_view dotted_key, std::string_view value);

/// Canonical text form; parse_config(emit_config(c)) == c for any valid c.
std::string emit_config(const ExperimentConfig& cfg);

/// Sorted (section.key, value) pairs of the resolved config.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

/// FNV-1a over the canonical entries, hex encoded. Independent of key order
/// in the source file.
std::string config_hash(const ExperimentConfig& cfg);

/// Parses an angle: a plain number, or `[k*]pi[/n]` such as `3*pi/4`.
double parse_angle(std::string_view text);

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b);

std::string to_string(InformationMode m);
std::string to_string(Efficiency e);
std::string to_string(Normalization n);
std::string to_string(SwitchPolicy p);

InformationMode parse_mode(std::string_view s);
Efficiency parse_efficiency(std::string_view s);
Normalization parse_normalization(std::string_view s);

} // namespace bohm::cli
