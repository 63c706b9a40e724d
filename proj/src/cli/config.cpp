#include "bohm/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace bohm::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    auto [end, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v)) {
        throw ValidationError(std::string(key), "expected a finite number, got '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
        throw ValidationError(std::string(key),
                              "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::size_t> parse_index_list(std::string_view key, std::string_view text) {
    std::vector<std::size_t> out;
    text = trim(text);
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        const auto v = parse_u64(key, item);
        if (v > 1) {
            throw ValidationError(std::string(key), "menu indices must be 0 or 1");
        }
        out.push_back(static_cast<std::size_t>(v));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return out;
}

std::string format_index_list(const std::vector<std::size_t>& list) {
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(list[i]);
    }
    return out;
}

SwitchPolicy parse_policy(std::string_view key, std::string_view s) {
    s = trim(s);
    if (s == "per_pair_random") return SwitchPolicy::PerPairRandom;
    if (s == "static") return SwitchPolicy::Static;
    if (s == "explicit_list") return SwitchPolicy::ExplicitList;
    throw ValidationError(std::string(key), "expected per_pair_random|static|explicit_list, got '" +
                                                std::string(s) + "'");
}

struct KeySpec {
    const char* section;
    const char* name;
    std::function<void(ExperimentConfig&, std::string_view key, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get; // empty: parse-only alias
};

#define BOHM_DOUBLE_KEY(section, name, member)                                                  \
    KeySpec {                                                                                   \
        section, name,                                                                          \
            [](ExperimentConfig& c, std::string_view k, std::string_view v) { c.member = parse_double(k, v); }, \
            [](const ExperimentConfig& c) { return format_double(c.member); }                   \
    }

#define BOHM_ANGLE_KEY(name, member)                                                            \
    KeySpec {                                                                                   \
        "experiment", name,                                                                     \
            [](ExperimentConfig& c, std::string_view k, std::string_view v) {                   \
                try {                                                                           \
                    c.member = parse_angle(v);                                                  \
                } catch (const ValidationError& e) {                                            \
                    throw ValidationError(std::string(k), e.what());                            \
                }                                                                               \
            },                                                                                  \
            [](const ExperimentConfig& c) { return format_double(c.member); }                   \
    }

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = {
        BOHM_DOUBLE_KEY("physics", "magnetic_moment", physics.magnetic_moment),
        BOHM_DOUBLE_KEY("physics", "mass", physics.mass),
        BOHM_DOUBLE_KEY("physics", "packet_width", physics.packet_width),
        BOHM_DOUBLE_KEY("physics", "field_gradient", physics.field_gradient),
        BOHM_DOUBLE_KEY("physics", "magnet_length", physics.magnet_length),
        BOHM_DOUBLE_KEY("physics", "beam_speed", physics.beam_speed),
        BOHM_DOUBLE_KEY("physics", "light_speed", physics.light_speed),

        BOHM_DOUBLE_KEY("integration", "dt", dt),
        {"integration", "record_every",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.record_every = static_cast<std::size_t>(parse_u64(k, v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.record_every); }},

        {"experiment", "n_pairs",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.n_pairs = static_cast<std::size_t>(parse_u64(k, v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.n_pairs); }},
        BOHM_ANGLE_KEY("angle_a", angles_a[0]),
        BOHM_ANGLE_KEY("angle_a_prime", angles_a[1]),
        BOHM_ANGLE_KEY("angle_b", angles_b[0]),
        BOHM_ANGLE_KEY("angle_b_prime", angles_b[1]),
        {"experiment", "mode",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             try {
                 c.mode = parse_mode(v);
             } catch (const ValidationError& e) {
                 throw ValidationError(std::string(k), e.what());
             }
         },
         [](const ExperimentConfig& c) { return to_string(c.mode); }},
        {"experiment", "efficiency",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             try {
                 c.efficiency = parse_efficiency(v);
             } catch (const ValidationError& e) {
                 throw ValidationError(std::string(k), e.what());
             }
         },
         [](const ExperimentConfig& c) { return to_string(c.efficiency); }},
        {"experiment", "normalization",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             try {
                 c.normalization = parse_normalization(v);
             } catch (const ValidationError& e) {
                 throw ValidationError(std::string(k), e.what());
             }
         },
         [](const ExperimentConfig& c) { return to_string(c.normalization); }},
        BOHM_DOUBLE_KEY("experiment", "kick_threshold", kick_threshold),
        {"experiment", "seed",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) { c.master_seed = parse_u64(k, v); },
         [](const ExperimentConfig& c) { return std::to_string(c.master_seed); }},
        {"experiment", "switch_policy",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.policy_a.policy = c.policy_b.policy = parse_policy(k, v);
         },
         nullptr},
        {"experiment", "switch_policy_a",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) { c.policy_a.policy = parse_policy(k, v); },
         [](const ExperimentConfig& c) { return to_string(c.policy_a.policy); }},
        {"experiment", "switch_policy_b",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) { c.policy_b.policy = parse_policy(k, v); },
         [](const ExperimentConfig& c) { return to_string(c.policy_b.policy); }},
        {"experiment", "static_index_a",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.policy_a.static_index = static_cast<std::size_t>(parse_u64(k, v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.policy_a.static_index); }},
        {"experiment", "static_index_b",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.policy_b.static_index = static_cast<std::size_t>(parse_u64(k, v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.policy_b.static_index); }},
        {"experiment", "explicit_list_a",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.policy_a.explicit_list = parse_index_list(k, v);
         },
         [](const ExperimentConfig& c) { return format_index_list(c.policy_a.explicit_list); }},
        {"experiment", "explicit_list_b",
         [](ExperimentConfig& c, std::string_view k, std::string_view v) {
             c.policy_b.explicit_list = parse_index_list(k, v);
         },
         [](const ExperimentConfig& c) { return format_index_list(c.policy_b.explicit_list); }},
        BOHM_DOUBLE_KEY("experiment", "separation", geometry.separation),
        BOHM_DOUBLE_KEY("experiment", "source_distance", geometry.source_distance),
        BOHM_DOUBLE_KEY("experiment", "launch_interval", geometry.launch_interval),
        BOHM_DOUBLE_KEY("experiment", "signal_speed", geometry.signal_speed),
    };
    return table;
}

#undef BOHM_DOUBLE_KEY
#undef BOHM_ANGLE_KEY

const KeySpec* find_key(std::string_view section, std::string_view name) {
    for (const auto& spec : key_table()) {
        if (spec.section == section && spec.name == name) return &spec;
    }
    return nullptr;
}

} // namespace

std::string to_string(InformationMode m) { return m == InformationMode::Local ? "local" : "nonlocal"; }
std::string to_string(Efficiency e) { return e == Efficiency::Efficient ? "efficient" : "inefficient"; }
std::string to_string(Normalization n) { return n == Normalization::Singles ? "singles" : "coincidences"; }
std::string to_string(SwitchPolicy p) {
    switch (p) {
    case SwitchPolicy::PerPairRandom: return "per_pair_random";
    case SwitchPolicy::Static: return "static";
    case SwitchPolicy::ExplicitList: return "explicit_list";
    }
    return "per_pair_random";
}

InformationMode parse_mode(std::string_view s) {
    s = trim(s);
    if (s == "local") return InformationMode::Local;
    if (s == "nonlocal") return InformationMode::Nonlocal;
    throw ValidationError("mode", "expected local|nonlocal, got '" + std::string(s) + "'");
}

Efficiency parse_efficiency(std::string_view s) {
    s = trim(s);
    if (s == "efficient") return Efficiency::Efficient;
    if (s == "inefficient") return Efficiency::Inefficient;
    throw ValidationError("efficiency", "expected efficient|inefficient, got '" + std::string(s) + "'");
}

Normalization parse_normalization(std::string_view s) {
    s = trim(s);
    if (s == "singles") return Normalization::Singles;
    if (s == "coincidences") return Normalization::Coincidences;
    throw ValidationError("normalization",
                          "expected singles|coincidences, got '" + std::string(s) + "'");
}

double parse_angle(std::string_view text) {
    text = trim(text);
    const auto pi_at = text.find("pi");
    if (pi_at == std::string_view::npos) {
        return parse_double("angle", text);
    }
    double factor = 1.0;
    auto head = trim(text.substr(0, pi_at));
    if (!head.empty()) {
        if (head == "-") {
            factor = -1.0;
        } else {
            if (head.back() != '*') throw ValidationError("angle", "expected [k*]pi[/n]");
            factor = parse_double("angle", head.substr(0, head.size() - 1));
        }
    }
    auto tail = trim(text.substr(pi_at + 2));
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') throw ValidationError("angle", "expected [k*]pi[/n]");
        divisor = parse_double("angle", tail.substr(1));
        if (divisor == 0.0) throw ValidationError("angle", "division by zero");
    }
    return factor * std::numbers::pi / divisor;
}

void apply_setting(ExperimentConfig& cfg, std::string_view dotted_key, std::string_view value) {
    const auto dot = dotted_key.find('.');
    if (dot != std::string_view::npos) {
        const auto* spec = find_key(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
        if (!spec) throw ValidationError(std::string(dotted_key), "unknown key");
        spec->set(cfg, dotted_key, value);
        return;
    }
    for (const auto& spec : key_table()) {
        if (spec.name == dotted_key) {
            spec.set(cfg, dotted_key, value);
            return;
        }
    }
    throw ValidationError(std::string(dotted_key), "unknown key");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError("line " + std::to_string(line_no), "malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "physics" && section != "integration" && section != "experiment") {
                throw ValidationError("[" + section + "]",
                                      "unknown section (expected physics, integration or experiment)");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("line " + std::to_string(line_no), "expected `key = value`");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ValidationError(std::string(key), "key appears before any [section] header");
        }
        const auto* spec = find_key(section, key);
        if (!spec) {
            throw ValidationError(section + "." + std::string(key), "unknown key");
        }
        spec->set(cfg, section + "." + std::string(key), value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("--config", "cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& spec : key_table()) {
        if (!spec.get) continue;
        out.emplace_back(std::string(spec.section) + "." + spec.name, spec.get(cfg));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const char* section : {"physics", "integration", "experiment"}) {
        out += "[";
        out += section;
        out += "]\n";
        for (const auto& spec : key_table()) {
            if (!spec.get || std::string_view(spec.section) != section) continue;
            out += spec.name;
            out += " = ";
            out += spec.get(cfg);
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : config_entries(cfg)) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf.data());
}

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b) {
    return config_entries(a) == config_entries(b);
}

} // namespace bohm::cli
