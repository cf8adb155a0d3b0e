#pragma once

#include "coassist/grid.hpp"
#include "coassist/rng.hpp"

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace coassist {

// Parameters of the co-transportation game: a point mass pushed jointly by
// the robot and the human against static friction.
struct EnvParams {
    double dt = 0.1;
    std::vector<double> goal{1.0};
    // Joint force magnitude absorbed before the object moves.
    double friction = 0.0;
    // kappa in R = -|x - goal|_1 - kappa (|a_R|^2 + |a_H|^2)
    double effort_weight = 0.1;
    double gamma = 0.95;
    int horizon = 20;
    std::size_t dims = 1;
    std::vector<double> state_min{0.0};
    std::vector<double> state_max{1.0};
    // Cap on thrust magnitude per dimension after friction. Unbounded by default.
    double max_thrust = std::numeric_limits<double>::infinity();

    // Throws ConfigError naming the first violated invariant. The solver
    // accepts gamma = 0 (no continuation); experiments require gamma > 0.
    void validate(bool allow_zero_discount = false) const;
};

struct State {
    std::vector<double> position;
    int t = 0;

    bool operator==(const State&) const = default;
};

struct JointAction {
    std::vector<double> robot;
    std::vector<double> human;

    bool operator==(const JointAction&) const = default;
};

// 6-D force/torque the human exerts on the shared object (N, N*m).
struct Wrench {
    std::array<double, 3> force{};
    std::array<double, 3> torque{};

    double force_norm() const;
    double torque_norm() const;
    bool is_zero() const;
    bool operator==(const Wrench&) const = default;
};

struct TrajectoryStep {
    State state;
    // Robot action and the share the step requested from the human.
    JointAction action;
    // Human force actually applied to the object (zero when disengaged).
    std::vector<double> human_applied;
    double reward = 0.0;
    Wrench wrench;
    // Robot fell back to its unconstrained policy because the trust region was empty.
    bool fallback = false;

    bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;

    double total_reward() const;
    double discounted_return(double gamma) const;
    bool operator==(const Trajectory&) const = default;
};

State initial_state(const EnvParams& params, SeedStream& rng);

double reward(const EnvParams& params, const State& s, const JointAction& a);

// Deterministic transition; throws HorizonExceeded at s.t == horizon.
std::pair<State, double> step(const EnvParams& params, const State& s, const JointAction& a);

struct RobotDecision {
    std::vector<double> action;
    bool fallback = false;
};

struct HumanResponse {
    std::vector<double> requested;
    std::vector<double> applied;
    Wrench wrench;
};

// Robot sees the state and the human action it conditions on (previous step's
// requested share, zero at t = 0).
using RobotPolicy =
    std::function<RobotDecision(const State&, std::span<const double> human_ref, SeedStream&)>;
using HumanModel =
    std::function<HumanResponse(const State&, std::span<const double> robot, SeedStream&)>;
using LearnerHook = std::function<void(const State&, const JointAction&, const Wrench&)>;

struct RolloutGrids {
    const ActionGrid& robot;
    const ActionGrid& human;
};

// Runs one episode from `start` (or a sample of p0) until t = horizon. Actions
// off their grid raise InvalidAction. `learner` may be empty.
Trajectory rollout(const EnvParams& params, const RolloutGrids& grids, const RobotPolicy& robot,
                   const HumanModel& human, const LearnerHook& learner, SeedStream& rng);
Trajectory rollout_from(const EnvParams& params, const RolloutGrids& grids, const State& start,
                        const RobotPolicy& robot, const HumanModel& human,
                        const LearnerHook& learner, SeedStream& rng);

} // namespace coassist
