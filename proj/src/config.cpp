#include "coassist/config.hpp"

#include "coassist/csv.hpp"
#include "coassist/errors.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace coassist {

namespace {

double to_double(const std::string& key, const std::string& text) {
    auto v = parse_double(text);
    if (!v || std::isnan(*v)) {
        throw ConfigError("expected a number, got '" + text + "'", key);
    }
    return *v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split_fields(text)) {
        out.push_back(to_double(key, part));
    }
    return out;
}

long long to_int(const std::string& key, const std::string& text) {
    auto v = parse_int(text);
    if (!v) {
        throw ConfigError("expected an integer, got '" + text + "'", key);
    }
    return *v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
    const long long v = to_int(key, text);
    if (v < 0) {
        throw ConfigError("must be non-negative", key);
    }
    return static_cast<std::size_t>(v);
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    const auto body = trim(text);
    std::uint64_t v = 0;
    std::istringstream in{std::string(body)};
    if (body.empty() || body.front() == '-' || !(in >> v) || !in.eof()) {
        throw ConfigError("expected an unsigned 64-bit integer, got '" + text + "'", key);
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + text + "'", key);
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + format_double(v[i]);
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;
using ProfileSetter = std::function<void(HumanProfile&, const std::string& key, const std::string& value)>;

const std::map<std::string, ProfileSetter>& profile_setters() {
    static const std::map<std::string, ProfileSetter> table{
        {"capability", [](HumanProfile& p, auto& k, auto& v) { p.capability = to_doubles(k, v); }},
        {"comfort_fraction", [](HumanProfile& p, auto& k, auto& v) { p.comfort_fraction = to_double(k, v); }},
        {"beta_h", [](HumanProfile& p, auto& k, auto& v) { p.beta_h = to_double(k, v); }},
        {"corrective_gain", [](HumanProfile& p, auto& k, auto& v) { p.corrective_gain = to_double(k, v); }},
        {"fatigue_rate", [](HumanProfile& p, auto& k, auto& v) { p.fatigue_rate = to_double(k, v); }},
        {"wrench_scale", [](HumanProfile& p, auto& k, auto& v) { p.wrench_scale = to_double(k, v); }},
    };
    return table;
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"env.dt", [](ExperimentConfig& c, auto& k, auto& v) { c.env.dt = to_double(k, v); }},
        {"env.goal", [](ExperimentConfig& c, auto& k, auto& v) { c.env.goal = to_doubles(k, v); }},
        {"env.friction", [](ExperimentConfig& c, auto& k, auto& v) { c.env.friction = to_double(k, v); }},
        {"env.effort_weight", [](ExperimentConfig& c, auto& k, auto& v) { c.env.effort_weight = to_double(k, v); }},
        {"env.gamma", [](ExperimentConfig& c, auto& k, auto& v) { c.env.gamma = to_double(k, v); }},
        {"env.horizon",
         [](ExperimentConfig& c, auto& k, auto& v) {
             const long long h = to_int(k, v);
             if (h < 1 || h > std::numeric_limits<int>::max()) {
                 throw ConfigError("must be >= 1", k);
             }
             c.env.horizon = static_cast<int>(h);
         }},
        {"env.dims", [](ExperimentConfig& c, auto& k, auto& v) { c.env.dims = to_count(k, v); }},
        {"env.state_min", [](ExperimentConfig& c, auto& k, auto& v) { c.env.state_min = to_doubles(k, v); }},
        {"env.state_max", [](ExperimentConfig& c, auto& k, auto& v) { c.env.state_max = to_doubles(k, v); }},
        {"env.max_thrust", [](ExperimentConfig& c, auto& k, auto& v) { c.env.max_thrust = to_double(k, v); }},
        {"grid.state_points", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.state_points = to_count(k, v); }},
        {"grid.robot_min", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.robot_min = to_double(k, v); }},
        {"grid.robot_max", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.robot_max = to_double(k, v); }},
        {"grid.robot_points", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.robot_points = to_count(k, v); }},
        {"grid.human_min", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.human_min = to_double(k, v); }},
        {"grid.human_max", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.human_max = to_double(k, v); }},
        {"grid.human_points", [](ExperimentConfig& c, auto& k, auto& v) { c.grid.human_points = to_count(k, v); }},
        {"q.beta", [](ExperimentConfig& c, auto& k, auto& v) { c.q_beta = to_double(k, v); }},
        {"experiment.profile", [](ExperimentConfig& c, auto&, auto& v) { c.profile = v; }},
        {"experiment.episodes", [](ExperimentConfig& c, auto& k, auto& v) { c.episodes = to_count(k, v); }},
        {"experiment.seed", [](ExperimentConfig& c, auto& k, auto& v) { c.seed = to_u64(k, v); }},
        {"experiment.adaptive", [](ExperimentConfig& c, auto& k, auto& v) { c.adaptive = to_bool(k, v); }},
        {"labeler.delta", [](ExperimentConfig& c, auto& k, auto& v) { c.labeler.delta = to_double(k, v); }},
        {"labeler.torque_weight",
         [](ExperimentConfig& c, auto& k, auto& v) { c.labeler.torque_weight = to_double(k, v); }},
        {"learner.lr", [](ExperimentConfig& c, auto& k, auto& v) { c.learner.learn_rate = to_double(k, v); }},
        {"learner.clamp_eps", [](ExperimentConfig& c, auto& k, auto& v) { c.learner.clamp_eps = to_double(k, v); }},
        {"learner.balance_classes",
         [](ExperimentConfig& c, auto& k, auto& v) { c.learner.balance_classes = to_bool(k, v); }},
        {"learner.features",
         [](ExperimentConfig& c, auto& k, auto& v) {
             if (v == "linear") {
                 c.learner.features = FeatureMap::linear;
             } else if (v == "quadratic") {
                 c.learner.features = FeatureMap::quadratic;
             } else {
                 throw ConfigError("expected linear or quadratic, got '" + v + "'", k);
             }
         }},
        {"learner.refresh",
         [](ExperimentConfig& c, auto& k, auto& v) {
             if (v == "step") {
                 c.refresh = RefreshPolicy::per_step;
             } else if (v == "episode") {
                 c.refresh = RefreshPolicy::per_episode;
             } else {
                 throw ConfigError("expected step or episode, got '" + v + "'", k);
             }
         }},
        {"agent.beta_r", [](ExperimentConfig& c, auto& k, auto& v) { c.agent.beta_r = to_double(k, v); }},
        {"agent.conditioning",
         [](ExperimentConfig& c, auto& k, auto& v) {
             if (v == "previous-human-action") {
                 c.agent.conditioning = Conditioning::previous_human;
             } else if (v == "marginalize") {
                 c.agent.conditioning = Conditioning::marginalize;
             } else {
                 throw ConfigError("expected previous-human-action or marginalize, got '" + v + "'", k);
             }
         }},
        {"agent.fallback",
         [](ExperimentConfig& c, auto& k, auto& v) {
             if (v == "unconstrained") {
                 c.agent.fallback = Fallback::unconstrained;
             } else if (v == "greedy-safe") {
                 c.agent.fallback = Fallback::greedy_safe;
             } else {
                 throw ConfigError("expected unconstrained or greedy-safe, got '" + v + "'", k);
             }
         }},
        {"agent.human_model_beta",
         [](ExperimentConfig& c, auto& k, auto& v) { c.agent.human_model_beta = to_double(k, v); }},
        {"agent.min_inside_prob",
         [](ExperimentConfig& c, auto& k, auto& v) { c.agent.min_inside_prob = to_double(k, v); }},
        {"agent.robot_upper", [](ExperimentConfig& c, auto& k, auto& v) { c.robot_upper = to_doubles(k, v); }},
        {"eval.grid_points", [](ExperimentConfig& c, auto& k, auto& v) { c.eval.grid_points = to_count(k, v); }},
        {"eval.every", [](ExperimentConfig& c, auto& k, auto& v) { c.eval.every = to_count(k, v); }},
        {"eval.state", [](ExperimentConfig& c, auto& k, auto& v) { c.eval.state = to_doubles(k, v); }},
    };
    return table;
}

} // namespace

const HumanProfile& ExperimentConfig::find_profile(const std::string& name) const {
    for (const auto& p : profiles) {
        if (p.name == name) {
            return p;
        }
    }
    throw ConfigError("no human profile named '" + name + "'", "experiment.profile");
}

const HumanProfile& ExperimentConfig::active_profile() const { return find_profile(profile); }

std::vector<double> ExperimentConfig::robot_upper_bound() const {
    return robot_upper.empty() ? std::vector<double>(env.dims, grid.robot_max) : robot_upper;
}

std::vector<double> ExperimentConfig::eval_state() const {
    if (!eval.state.empty()) {
        return eval.state;
    }
    std::vector<double> mid(env.dims);
    for (std::size_t i = 0; i < env.dims; ++i) {
        mid[i] = 0.5 * (env.state_min[i] + env.state_max[i]);
    }
    return mid;
}

QGrids ExperimentConfig::make_grids() const {
    std::vector<Axis> state_axes;
    for (std::size_t i = 0; i < env.dims; ++i) {
        state_axes.emplace_back(env.state_min[i], env.state_max[i], grid.state_points);
    }
    return QGrids{StateGrid(std::move(state_axes)),
                  uniform_grid(grid.robot_min, grid.robot_max, grid.robot_points, env.dims),
                  uniform_grid(grid.human_min, grid.human_max, grid.human_points, env.dims)};
}

void ExperimentConfig::validate() const {
    env.validate();
    if (grid.state_points < 2) {
        throw ConfigError("must be >= 2", "grid.state_points");
    }
    if (grid.robot_points < 2 || !(grid.robot_max > grid.robot_min)) {
        throw ConfigError("robot grid needs >= 2 points and robot_max > robot_min", "grid.robot_points");
    }
    if (grid.human_points < 2 || !(grid.human_max > grid.human_min)) {
        throw ConfigError("human grid needs >= 2 points and human_max > human_min", "grid.human_points");
    }
    for (std::size_t i = 0; i < env.dims; ++i) {
        if (!(env.state_max[i] > env.state_min[i])) {
            throw ConfigError("the state grid needs state_max > state_min", "env.state_max");
        }
    }
    if (!(q_beta > 0.0) || !std::isfinite(q_beta)) {
        throw ConfigError("must be > 0", "q.beta");
    }
    for (const auto& p : profiles) {
        p.validate(env.dims);
    }
    active_profile();
    labeler.validate();
    learner.validate();
    agent.validate();
    const auto upper = robot_upper_bound();
    if (upper.size() != env.dims) {
        throw ConfigError("needs one value per dimension", "agent.robot_upper");
    }
    for (double u : upper) {
        if (!(u > 0.0) || !std::isfinite(u)) {
            throw ConfigError("must be finite and > 0", "agent.robot_upper");
        }
    }
    if (episodes < 1) {
        throw ConfigError("must be >= 1", "experiment.episodes");
    }
    if (eval.grid_points < 2) {
        throw ConfigError("must be >= 2", "eval.grid_points");
    }
    if (!eval.state.empty() && eval.state.size() != env.dims) {
        throw ConfigError("needs one value per dimension", "eval.state");
    }
}

ConfigEntries read_config_entries(std::string_view text) {
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (entries.values.contains(key)) {
            throw ConfigError("duplicate key on line " + std::to_string(line_no), key);
        }
        entries.values[key] = value;
        entries.lines[key] = line_no;
    }
    return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_config_entries(buf.str());
}

ExperimentConfig build_config(const ConfigEntries& entries) {
    ExperimentConfig cfg;
    HumanProfile base;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> named;

    for (const auto& [key, value] : entries.values) {
        if (auto it = setters().find(key); it != setters().end()) {
            it->second(cfg, key, value);
            continue;
        }
        if (key.starts_with("human.")) {
            const std::string rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) {
                auto it = profile_setters().find(rest);
                if (it == profile_setters().end()) {
                    throw ConfigError("unknown key", key);
                }
                it->second(base, key, value);
                continue;
            }
            const std::string name = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            if (name.empty() || name == "default" || !profile_setters().contains(field)) {
                throw ConfigError("unknown key", key);
            }
            named[name].emplace_back(field, value);
            continue;
        }
        throw ConfigError("unknown key", key);
    }

    cfg.profiles.clear();
    base.name = "default";
    cfg.profiles.push_back(base);
    for (const auto& [name, fields] : named) {
        HumanProfile p = base;
        p.name = name;
        for (const auto& [field, value] : fields) {
            profile_setters().at(field)(p, "human." + name + "." + field, value);
        }
        cfg.profiles.push_back(std::move(p));
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(std::string_view text) { return build_config(read_config_entries(text)); }

ExperimentConfig load_config(const std::filesystem::path& path) { return build_config(read_config_file(path)); }

std::map<std::string, std::string> config_echo(const ExperimentConfig& c) {
    std::map<std::string, std::string> out;
    out["env.dt"] = format_double(c.env.dt);
    out["env.goal"] = join(c.env.goal);
    out["env.friction"] = format_double(c.env.friction);
    out["env.effort_weight"] = format_double(c.env.effort_weight);
    out["env.gamma"] = format_double(c.env.gamma);
    out["env.horizon"] = std::to_string(c.env.horizon);
    out["env.dims"] = std::to_string(c.env.dims);
    out["env.state_min"] = join(c.env.state_min);
    out["env.state_max"] = join(c.env.state_max);
    out["env.max_thrust"] = format_double(c.env.max_thrust);
    out["grid.state_points"] = std::to_string(c.grid.state_points);
    out["grid.robot_min"] = format_double(c.grid.robot_min);
    out["grid.robot_max"] = format_double(c.grid.robot_max);
    out["grid.robot_points"] = std::to_string(c.grid.robot_points);
    out["grid.human_min"] = format_double(c.grid.human_min);
    out["grid.human_max"] = format_double(c.grid.human_max);
    out["grid.human_points"] = std::to_string(c.grid.human_points);
    out["q.beta"] = format_double(c.q_beta);
    for (const auto& p : c.profiles) {
        const std::string prefix = p.name == "default" ? "human." : "human." + p.name + ".";
        out[prefix + "capability"] = join(p.capability);
        out[prefix + "comfort_fraction"] = format_double(p.comfort_fraction);
        out[prefix + "beta_h"] = format_double(p.beta_h);
        out[prefix + "corrective_gain"] = format_double(p.corrective_gain);
        out[prefix + "fatigue_rate"] = format_double(p.fatigue_rate);
        out[prefix + "wrench_scale"] = format_double(p.wrench_scale);
    }
    out["experiment.profile"] = c.profile;
    out["experiment.episodes"] = std::to_string(c.episodes);
    out["experiment.seed"] = std::to_string(c.seed);
    out["experiment.adaptive"] = c.adaptive ? "true" : "false";
    out["labeler.delta"] = format_double(c.labeler.delta);
    out["labeler.torque_weight"] = format_double(c.labeler.torque_weight);
    out["learner.lr"] = format_double(c.learner.learn_rate);
    out["learner.clamp_eps"] = format_double(c.learner.clamp_eps);
    out["learner.balance_classes"] = c.learner.balance_classes ? "true" : "false";
    out["learner.features"] = c.learner.features == FeatureMap::linear ? "linear" : "quadratic";
    out["learner.refresh"] = c.refresh == RefreshPolicy::per_step ? "step" : "episode";
    out["agent.beta_r"] = format_double(c.agent.beta_r);
    out["agent.conditioning"] =
        c.agent.conditioning == Conditioning::previous_human ? "previous-human-action" : "marginalize";
    out["agent.fallback"] = c.agent.fallback == Fallback::unconstrained ? "unconstrained" : "greedy-safe";
    out["agent.human_model_beta"] = format_double(c.agent.human_model_beta);
    out["agent.min_inside_prob"] = format_double(c.agent.min_inside_prob);
    out["agent.robot_upper"] = join(c.robot_upper_bound());
    out["eval.grid_points"] = std::to_string(c.eval.grid_points);
    out["eval.every"] = std::to_string(c.eval.every);
    out["eval.state"] = join(c.eval_state());
    return out;
}

} // namespace coassist
