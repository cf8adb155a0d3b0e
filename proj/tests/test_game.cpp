#include "coassist/errors.hpp"
#include "coassist/game.hpp"

#include "doctest.h"

#include <cmath>

using namespace coassist;

namespace {

EnvParams unit_env() {
    EnvParams p;
    p.friction = 0.0;
    p.effort_weight = 0.1;
    p.horizon = 20;
    return p;
}

RobotPolicy constant_robot(double v) {
    return [v](const State&, std::span<const double>, SeedStream&) {
        return RobotDecision{{v}, false};
    };
}

HumanModel constant_human(double v) {
    return [v](const State&, std::span<const double>, SeedStream&) {
        return HumanResponse{{v}, {v}, Wrench{}};
    };
}

} // namespace

TEST_CASE("initial_state with degenerate bounds is the point itself") {
    EnvParams p = unit_env();
    p.state_min = {0.0};
    p.state_max = {0.0};
    p.goal = {0.0};
    SeedStream rng(1);
    auto s = initial_state(p, rng);
    CHECK(s.position == std::vector<double>{0.0});
    CHECK(s.t == 0);
}

TEST_CASE("initial_state samples uniformly from the lower half of the bounds") {
    EnvParams p = unit_env();
    SeedStream rng(7);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        auto s = initial_state(p, rng);
        REQUIRE(s.position[0] >= 0.0);
        REQUIRE(s.position[0] <= 0.5);
        sum += s.position[0];
    }
    CHECK(std::abs(sum / n - 0.25) <= 0.01);
}

TEST_CASE("initial_state is deterministic in the seed stream") {
    EnvParams p = unit_env();
    SeedStream a(99), b(99);
    CHECK(initial_state(p, a) == initial_state(p, b));
}

TEST_CASE("step examples") {
    EnvParams p = unit_env();
    SUBCASE("linear update") {
        auto [next, r] = step(p, State{{0.5}, 0}, JointAction{{0.3}, {0.2}});
        CHECK(next.position[0] == doctest::Approx(0.55).epsilon(1e-14));
        CHECK(next.t == 1);
        CHECK(r == reward(p, State{{0.5}, 0}, JointAction{{0.3}, {0.2}}));
    }
    SUBCASE("below static friction") {
        p.friction = 0.6;
        auto [next, r] = step(p, State{{0.4}, 3}, JointAction{{0.25}, {0.25}});
        CHECK(next.position[0] == 0.4);
    }
    SUBCASE("clamped at the upper bound") {
        auto [next, r] = step(p, State{{0.98}, 0}, JointAction{{1.0}, {1.0}});
        CHECK(next.position[0] == 1.0);
    }
    SUBCASE("thrust cap") {
        p.max_thrust = 0.5;
        auto [next, r] = step(p, State{{0.0}, 0}, JointAction{{1.0}, {1.0}});
        CHECK(next.position[0] == doctest::Approx(0.05).epsilon(1e-14));
    }
}

TEST_CASE("stepping at the horizon is an error") {
    EnvParams p = unit_env();
    p.horizon = 2;
    CHECK_THROWS_AS(step(p, State{{0.5}, 2}, JointAction{{0.0}, {0.0}}), HorizonExceeded);
}

TEST_CASE("reward examples") {
    EnvParams p = unit_env();
    CHECK(reward(p, State{{0.5}, 0}, JointAction{{0.0}, {0.0}}) == -0.5);
    CHECK(reward(p, State{{1.0}, 0}, JointAction{{0.0}, {0.0}}) == 0.0);
    CHECK(reward(p, State{{1.0}, 0}, JointAction{{1.0}, {1.0}}) == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("rollout with constant-zero policies keeps the position") {
    EnvParams p = unit_env();
    p.horizon = 3;
    auto robot_grid = uniform_grid(0.0, 1.0, 11, 1);
    auto human_grid = uniform_grid(0.0, 1.0, 11, 1);
    SeedStream rng(5);
    int hook_calls = 0;
    LearnerHook hook = [&](const State&, const JointAction&, const Wrench&) { ++hook_calls; };
    auto traj = rollout(p, {robot_grid, human_grid}, constant_robot(0.0), constant_human(0.0), hook, rng);
    REQUIRE(traj.steps.size() == 3);
    CHECK(hook_calls == 3);
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        CHECK(traj.steps[i].state.t == static_cast<int>(i));
        CHECK(traj.steps[i].state.position == traj.steps[0].state.position);
    }
}

TEST_CASE("discounted return of a zero-action rollout") {
    EnvParams p = unit_env();
    p.horizon = 2;
    p.gamma = 0.9;
    p.effort_weight = 0.0;
    auto grid = uniform_grid(0.0, 1.0, 11, 1);
    SeedStream rng(0);
    auto traj = rollout_from(p, {grid, grid}, State{{0.5}, 0}, constant_robot(0.0), constant_human(0.0), {}, rng);
    CHECK(traj.discounted_return(0.9) == doctest::Approx(-0.95).epsilon(1e-14));
}

TEST_CASE("rollout is reproducible from the seed") {
    EnvParams p = unit_env();
    auto grid = uniform_grid(0.0, 1.0, 11, 1);
    RobotPolicy robot = [&](const State&, std::span<const double>, SeedStream& rng) {
        return RobotDecision{grid.point(static_cast<std::size_t>(rng.next_u64() % 11)), false};
    };
    SeedStream a(11), b(11);
    auto ta = rollout(p, {grid, grid}, robot, constant_human(0.2), {}, a);
    auto tb = rollout(p, {grid, grid}, robot, constant_human(0.2), {}, b);
    CHECK(ta == tb);
}

TEST_CASE("off-grid actions are rejected") {
    EnvParams p = unit_env();
    auto grid = uniform_grid(0.0, 1.0, 11, 1);
    SeedStream rng(0);
    CHECK_THROWS_AS(rollout(p, {grid, grid}, constant_robot(0.33), constant_human(0.0), {}, rng), InvalidAction);
    CHECK_THROWS_AS(rollout(p, {grid, grid}, constant_robot(0.3), constant_human(2.0), {}, rng), InvalidAction);
}

TEST_CASE("invalid parameters name the field") {
    EnvParams p = unit_env();
    p.gamma = 0.0;
    try {
        p.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "env.gamma");
    }
    CHECK_NOTHROW(p.validate(true));
    p = unit_env();
    p.goal = {2.0};
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("property: reward is non-positive and zero only at the goal with zero actions") {
    EnvParams p = unit_env();
    SeedStream rng(21);
    for (int i = 0; i < 10000; ++i) {
        State s{{rng.uniform()}, 0};
        JointAction a{{rng.uniform(-1.0, 1.0)}, {rng.uniform(-1.0, 1.0)}};
        const double r = reward(p, s, a);
        REQUIRE(std::isfinite(r));
        REQUIRE(r < 0.0);
    }
    CHECK(reward(p, State{{1.0}, 0}, JointAction{{0.0}, {0.0}}) == 0.0);
}

TEST_CASE("property: positions are monotone without friction and stay within bounds") {
    EnvParams p = unit_env();
    SeedStream rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        State s{{rng.uniform()}, 0};
        for (int t = 0; t < p.horizon; ++t) {
            JointAction a{{rng.uniform()}, {rng.uniform()}};
            auto [next, r] = step(p, s, a);
            REQUIRE(next.position[0] >= s.position[0]);
            REQUIRE(next.position[0] <= 1.0);
            s = next;
        }
    }
    for (int i = 0; i < 2000; ++i) {
        State s{{rng.uniform()}, 0};
        JointAction a{{rng.uniform(-20.0, 20.0)}, {rng.uniform(-20.0, 20.0)}};
        auto [next, r] = step(p, s, a);
        REQUIRE(next.position[0] >= 0.0);
        REQUIRE(next.position[0] <= 1.0);
    }
}
