#pragma once

#include "coassist/constraint.hpp"
#include "coassist/joint_q.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace coassist {

enum class Conditioning : std::uint8_t {
    // Treat the previous step's human action as the current one (zero at t = 0).
    previous_human,
    // Average over the Boltzmann human model's response to each robot action.
    marginalize,
};

enum class Fallback : std::uint8_t {
    // Drop the mask and flag the step.
    unconstrained,
    // One-hot on the robot action closest to the region, flagged.
    greedy_safe,
};

struct AgentConfig {
    double beta_r = 0.05;
    Conditioning conditioning = Conditioning::previous_human;
    Fallback fallback = Fallback::unconstrained;
    // Temperature of the robot's model of the human (marginalize only).
    double human_model_beta = 0.05;
    // A robot action is feasible under marginalize when the modelled human
    // response lands inside the region with at least this probability.
    double min_inside_prob = 0.5;

    void validate() const;
};

struct RobotDist {
    BoltzmannDist dist;
    // Feasible set was empty and cfg.fallback was applied.
    bool fallback = false;
    std::vector<bool> feasible;
};

// Boltzmann over robot actions at beta_r restricted to those whose joint action
// with the human lies in `tr`.
RobotDist robot_dist(const QTable& q, const State& s, std::span<const double> human_ref,
                     const TrustRegion& tr, const AgentConfig& cfg);

std::vector<double> robot_act(const QTable& q, const BoltzmannDist& dist, SeedStream& rng);

} // namespace coassist
