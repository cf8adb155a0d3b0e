#pragma once

#include "coassist/agent.hpp"
#include "coassist/constraint.hpp"
#include "coassist/game.hpp"
#include "coassist/human.hpp"
#include "coassist/joint_q.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coassist {

struct GridConfig {
    std::size_t state_points = 101;
    double robot_min = 0.0;
    double robot_max = 1.0;
    std::size_t robot_points = 21;
    double human_min = 0.0;
    double human_max = 1.0;
    std::size_t human_points = 21;
};

enum class RefreshPolicy : std::uint8_t { per_step, per_episode };

struct EvalConfig {
    // Points per joint-action coordinate on the evaluation grid.
    std::size_t grid_points = 10001;
    // Accuracy is reported every `every` episodes and after the last one; 0 = last only.
    std::size_t every = 50;
    // Reference state for trust-region evaluation; empty = midpoint of the state bounds.
    std::vector<double> state;
};

struct ExperimentConfig {
    EnvParams env;
    GridConfig grid;
    // Temperature of the joint continuation policy in the dynamic program.
    double q_beta = 0.05;
    std::vector<HumanProfile> profiles{HumanProfile{}};
    std::string profile = "default";
    LabelerConfig labeler;
    LearnerConfig learner;
    RefreshPolicy refresh = RefreshPolicy::per_step;
    AgentConfig agent;
    // C_R; empty = grid.robot_max in every dimension.
    std::vector<double> robot_upper;
    std::size_t episodes = 1;
    std::uint64_t seed = 0;
    bool adaptive = true;
    EvalConfig eval;

    const HumanProfile& active_profile() const;
    const HumanProfile& find_profile(const std::string& name) const;
    std::vector<double> robot_upper_bound() const;
    std::vector<double> eval_state() const;
    QGrids make_grids() const;

    void validate() const;
};

// Raw `key = value` entries in file order.
struct ConfigEntries {
    std::map<std::string, std::string> values;
    std::map<std::string, std::size_t> lines;

    void set(const std::string& key, const std::string& value) { values[key] = value; }
};

ConfigEntries read_config_entries(std::string_view text);
ConfigEntries read_config_file(const std::filesystem::path& path);

// Unknown keys and malformed values raise ConfigError naming the key.
ExperimentConfig build_config(const ConfigEntries& entries);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical key/value listing of every setting (checkpoint echo).
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);

} // namespace coassist
