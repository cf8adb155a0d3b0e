#include "coassist/game.hpp"

#include "coassist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coassist {

namespace {

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double squared_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return acc;
}

void require_dims(const EnvParams& params, const std::vector<double>& v, const char* what) {
    if (v.size() != params.dims) {
        throw ConfigError(std::string(what) + " has " + std::to_string(v.size()) +
                          " components, expected " + std::to_string(params.dims));
    }
}

} // namespace

void EnvParams::validate(bool allow_zero_discount) const {
    if (dims < 1 || dims > 2) {
        throw ConfigError("must be 1 or 2", "env.dims");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("must be > 0", "env.dt");
    }
    if (!((allow_zero_discount ? gamma >= 0.0 : gamma > 0.0) && gamma <= 1.0)) {
        throw ConfigError("must lie in (0, 1]", "env.gamma");
    }
    if (horizon < 1) {
        throw ConfigError("must be >= 1", "env.horizon");
    }
    if (!(friction >= 0.0) || !std::isfinite(friction)) {
        throw ConfigError("must be >= 0", "env.friction");
    }
    if (!(effort_weight >= 0.0) || !std::isfinite(effort_weight)) {
        throw ConfigError("must be >= 0", "env.effort_weight");
    }
    if (!(max_thrust > 0.0)) {
        throw ConfigError("must be > 0", "env.max_thrust");
    }
    if (goal.size() != dims) {
        throw ConfigError("needs one value per dimension", "env.goal");
    }
    if (state_min.size() != dims) {
        throw ConfigError("needs one value per dimension", "env.state_min");
    }
    if (state_max.size() != dims) {
        throw ConfigError("needs one value per dimension", "env.state_max");
    }
    for (std::size_t i = 0; i < dims; ++i) {
        if (!(state_min[i] <= state_max[i])) {
            throw ConfigError("state_min exceeds state_max", "env.state_max");
        }
        if (!(goal[i] >= state_min[i] && goal[i] <= state_max[i])) {
            throw ConfigError("goal lies outside the state bounds", "env.goal");
        }
    }
}

double Wrench::force_norm() const { return norm3(force); }

double Wrench::torque_norm() const { return norm3(torque); }

bool Wrench::is_zero() const {
    return std::all_of(force.begin(), force.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(torque.begin(), torque.end(), [](double v) { return v == 0.0; });
}

double Trajectory::total_reward() const {
    double acc = 0.0;
    for (const auto& s : steps) {
        acc += s.reward;
    }
    return acc;
}

double Trajectory::discounted_return(double gamma) const {
    double acc = 0.0;
    double discount = 1.0;
    for (const auto& s : steps) {
        acc += discount * s.reward;
        discount *= gamma;
    }
    return acc;
}

State initial_state(const EnvParams& params, SeedStream& rng) {
    State s;
    s.position.resize(params.dims);
    for (std::size_t i = 0; i < params.dims; ++i) {
        const double lo = params.state_min[i];
        const double mid = lo + 0.5 * (params.state_max[i] - lo);
        s.position[i] = lo == mid ? lo : rng.uniform(lo, mid);
    }
    s.t = 0;
    return s;
}

double reward(const EnvParams& params, const State& s, const JointAction& a) {
    double distance = 0.0;
    for (std::size_t i = 0; i < s.position.size(); ++i) {
        distance += std::abs(s.position[i] - params.goal[i]);
    }
    return -distance - params.effort_weight * (squared_norm(a.robot) + squared_norm(a.human));
}

std::pair<State, double> step(const EnvParams& params, const State& s, const JointAction& a) {
    if (s.t >= params.horizon) {
        throw HorizonExceeded("step at t = " + std::to_string(s.t) + " with horizon " +
                              std::to_string(params.horizon));
    }
    require_dims(params, s.position, "state");
    require_dims(params, a.robot, "robot action");
    require_dims(params, a.human, "human action");

    State next;
    next.position.resize(params.dims);
    for (std::size_t i = 0; i < params.dims; ++i) {
        const double u = a.robot[i] + a.human[i];
        const double magnitude = std::min(params.max_thrust, std::max(0.0, std::abs(u) - params.friction));
        const double thrust = u < 0.0 ? -magnitude : magnitude;
        next.position[i] =
            std::clamp(s.position[i] + params.dt * thrust, params.state_min[i], params.state_max[i]);
    }
    next.t = s.t + 1;
    return {std::move(next), reward(params, s, a)};
}

Trajectory rollout(const EnvParams& params, const RolloutGrids& grids, const RobotPolicy& robot,
                   const HumanModel& human, const LearnerHook& learner, SeedStream& rng) {
    const State start = initial_state(params, rng);
    return rollout_from(params, grids, start, robot, human, learner, rng);
}

Trajectory rollout_from(const EnvParams& params, const RolloutGrids& grids, const State& start,
                        const RobotPolicy& robot, const HumanModel& human,
                        const LearnerHook& learner, SeedStream& rng) {
    Trajectory traj;
    traj.steps.reserve(static_cast<std::size_t>(params.horizon - start.t));
    State s = start;
    std::vector<double> human_ref(params.dims, 0.0);
    while (s.t < params.horizon) {
        RobotDecision decision = robot(s, human_ref, rng);
        if (!grids.robot.index_of(decision.action)) {
            throw InvalidAction("robot action off its grid at t = " + std::to_string(s.t));
        }
        HumanResponse response = human(s, decision.action, rng);
        if (!grids.human.index_of(response.requested)) {
            throw InvalidAction("human action off its grid at t = " + std::to_string(s.t));
        }

        TrajectoryStep rec;
        rec.state = s;
        rec.action = JointAction{std::move(decision.action), response.requested};
        rec.human_applied = std::move(response.applied);
        rec.wrench = response.wrench;
        rec.fallback = decision.fallback;

        auto [next, r] = step(params, s, JointAction{rec.action.robot, rec.human_applied});
        rec.reward = r;
        if (learner) {
            learner(rec.state, rec.action, rec.wrench);
        }
        human_ref = rec.action.human;
        traj.steps.push_back(std::move(rec));
        s = std::move(next);
    }
    return traj;
}

} // namespace coassist
