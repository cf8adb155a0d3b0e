#include "coassist/config.hpp"
#include "coassist/errors.hpp"

#include "test_support.hpp"

#include "doctest.h"

using namespace coassist;

namespace {

std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("shipped configuration parses") {
    const auto cfg = load_config(testing::config_dir() / "cotransport.cfg");
    CHECK(cfg.env.horizon == 20);
    CHECK(cfg.episodes == 300);
    CHECK(cfg.active_profile().capability == std::vector<double>{0.4});
    CHECK(cfg.labeler.delta == 0.05);
    CHECK(cfg.agent.conditioning == Conditioning::marginalize);
    CHECK(cfg.agent.fallback == Fallback::greedy_safe);
    CHECK(cfg.adaptive);
}

TEST_CASE("values, comments and blank lines") {
    const auto cfg = parse_config(R"(
# comment line
env.dt = 0.2   # trailing comment
env.horizon=7
human.capability = 0.3
learner.features = quadratic
learner.refresh = episode
learner.balance_classes = yes
agent.conditioning = previous-human-action
agent.fallback = unconstrained
experiment.seed = 18446744073709551615
experiment.adaptive = false
)");
    CHECK(cfg.env.dt == 0.2);
    CHECK(cfg.env.horizon == 7);
    CHECK(cfg.active_profile().capability[0] == 0.3);
    CHECK(cfg.learner.features == FeatureMap::quadratic);
    CHECK(cfg.refresh == RefreshPolicy::per_episode);
    CHECK(cfg.learner.balance_classes);
    CHECK(cfg.agent.conditioning == Conditioning::previous_human);
    CHECK(cfg.agent.fallback == Fallback::unconstrained);
    CHECK(cfg.seed == 18446744073709551615ULL);
    CHECK_FALSE(cfg.adaptive);
}

TEST_CASE("unknown keys are errors naming the key") {
    CHECK(field_of("env.dtt = 0.1\n") == "env.dtt");
    CHECK(field_of("colour = blue\n") == "colour");
}

TEST_CASE("malformed values name the key") {
    CHECK(field_of("env.dt = fast\n") == "env.dt");
    CHECK(field_of("env.horizon = 2.5\n") == "env.horizon");
    CHECK(field_of("learner.features = cubic\n") == "learner.features");
    CHECK(field_of("experiment.seed = -1\n") == "experiment.seed");
    CHECK(field_of("experiment.adaptive = maybe\n") == "experiment.adaptive");
}

TEST_CASE("invalid values name the key") {
    CHECK(field_of("env.gamma = 0\n") == "env.gamma");
    CHECK(field_of("env.gamma = 1.5\n") == "env.gamma");
    CHECK(field_of("labeler.delta = 0\n") == "labeler.delta");
    CHECK(field_of("experiment.episodes = 0\n") == "experiment.episodes");
    CHECK(field_of("human.beta_h = -1\n") == "human.beta_h");
    CHECK(field_of("agent.beta_r = 0\n") == "agent.beta_r");
    CHECK(field_of("learner.lr = 0\n") == "learner.lr");
    CHECK(field_of("experiment.profile = nobody\n") == "experiment.profile");
}

TEST_CASE("duplicate keys and lines without '=' are errors") {
    CHECK(field_of("env.dt = 0.1\nenv.dt = 0.2\n") == "env.dt");
    CHECK_THROWS_AS(parse_config("env.dt 0.1\n"), ConfigError);
}

TEST_CASE("named profiles inherit from the default profile") {
    const auto cfg = parse_config(R"(
human.beta_h = 0.03
human.capability = 0.4
human.weak.capability = 0.2
experiment.profile = weak
)");
    CHECK(cfg.active_profile().name == "weak");
    CHECK(cfg.active_profile().capability[0] == 0.2);
    CHECK(cfg.active_profile().beta_h == 0.03);
    CHECK(cfg.find_profile("default").capability[0] == 0.4);
}

TEST_CASE("config echo round-trips through the parser") {
    const auto cfg = parse_config(R"(
env.friction = 0.2
human.capability = 0.4
human.weak.capability = 0.25
agent.robot_upper = 0.8
eval.state = 0.3
)");
    const auto echo = config_echo(cfg);
    ConfigEntries entries;
    for (const auto& [k, v] : echo) {
        entries.set(k, v);
    }
    CHECK(config_echo(build_config(entries)) == echo);
    CHECK(echo.at("agent.robot_upper") == "0.8");
    CHECK(echo.at("human.weak.capability") == "0.25");
}

TEST_CASE("derived settings") {
    auto cfg = parse_config("grid.robot_max = 0.8\n");
    CHECK(cfg.robot_upper_bound() == std::vector<double>{0.8});
    CHECK(cfg.eval_state() == std::vector<double>{0.5});
    const auto g = cfg.make_grids();
    CHECK(g.robot.size() == cfg.grid.robot_points);
    CHECK(g.states.size() == cfg.grid.state_points);
}

TEST_CASE("missing config file is an I/O error") {
    CHECK_THROWS_AS(load_config(testing::config_dir() / "does_not_exist.cfg"), IoError);
}
