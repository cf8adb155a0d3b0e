#include "coassist/constraint.hpp"

#include "coassist/csv.hpp"
#include "coassist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coassist {

void LabelerConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("must be > 0", "labeler.delta");
    }
    if (!(torque_weight >= 0.0) || !std::isfinite(torque_weight)) {
        throw ConfigError("must be >= 0", "labeler.torque_weight");
    }
}

double feedback_magnitude(const Wrench& w, const LabelerConfig& cfg) {
    double acc = 0.0;
    for (double f : w.force) {
        acc += f * f;
    }
    for (double tau : w.torque) {
        const double scaled = cfg.torque_weight * tau;
        acc += scaled * scaled;
    }
    return std::sqrt(acc);
}

Feedback label_feedback(const Wrench& w, const LabelerConfig& cfg) {
    return feedback_magnitude(w, cfg) > cfg.delta ? Feedback::positive : Feedback::negative;
}

FeatureVector featurize(const FeatureSpec& spec, const State& s, const JointAction& a) {
    const std::size_t n = spec.dims;
    if (s.position.size() != n || a.robot.size() != n || a.human.size() != n) {
        throw ConfigError("feature inputs do not match the configured dimensionality");
    }
    FeatureVector x(spec.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = s.position[i];
        x[spec.robot_offset() + i] = a.robot[i];
        x[spec.human_offset() + i] = a.human[i];
    }
    if (spec.map == FeatureMap::quadratic) {
        for (std::size_t i = 0; i < n; ++i) {
            x[spec.quad_offset() + i] = a.robot[i] * a.robot[i];
            x[spec.quad_offset() + n + i] = a.human[i] * a.human[i];
        }
    }
    x[spec.bias_index()] = 1.0;
    return x;
}

void LearnerConfig::validate() const {
    if (!(learn_rate > 0.0) || !std::isfinite(learn_rate)) {
        throw ConfigError("must be > 0", "learner.lr");
    }
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) {
        throw ConfigError("must lie in (0, 0.5)", "learner.clamp_eps");
    }
}

ConstraintModel::ConstraintModel(FeatureSpec spec_, LearnerConfig config_)
    : spec(spec_), config(config_), weights(spec_.size(), 0.0) {
    config.validate();
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

namespace {

void check_feature_size(const ConstraintModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size()) {
        throw ConfigError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                          std::to_string(model.weights.size()));
    }
}

} // namespace

double predict_in_region(const ConstraintModel& model, std::span<const double> x) {
    check_feature_size(model, x);
    return sigmoid(dot(model.weights, x));
}

double bce_loss(double p, Feedback y, double clamp_eps) {
    const double clamped = std::clamp(p, clamp_eps, 1.0 - clamp_eps);
    return y == Feedback::positive ? -std::log(clamped) : -std::log1p(-clamped);
}

std::vector<double> bce_gradient(const ConstraintModel& model, std::span<const double> x, Feedback y) {
    const double residual = predict_in_region(model, x) - as_target(y);
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = residual * x[i];
    }
    return g;
}

ConstraintModel sgd_step(const ConstraintModel& model, std::span<const double> x, Feedback y) {
    ConstraintModel next = model;
    if (y == Feedback::positive) {
        ++next.positives;
    } else {
        ++next.negatives;
    }
    ++next.samples_seen;

    double weight = 1.0;
    if (model.config.balance_classes) {
        const double count = static_cast<double>(y == Feedback::positive ? next.positives : next.negatives);
        weight = static_cast<double>(next.samples_seen) / (2.0 * count);
    }
    const auto grad = bce_gradient(model, x, y);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double updated = model.weights[i] - model.config.learn_rate * weight * grad[i];
        if (!std::isfinite(grad[i]) || !std::isfinite(updated)) {
            std::ostringstream msg;
            msg << "non-finite constraint-model update at sample " << next.samples_seen << ", weight " << i
                << " (gradient " << grad[i] << ", feature " << x[i] << ")";
            throw NumericError(msg.str());
        }
        next.weights[i] = updated;
    }
    return next;
}

double TrustRegion::robot_margin(std::span<const double> robot) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < robot.size(); ++i) {
        acc += robot_weights[i] * robot[i] + robot_quadratic[i] * robot[i] * robot[i];
    }
    return acc;
}

double TrustRegion::human_margin(std::span<const double> human) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < human.size(); ++i) {
        acc += human_weights[i] * human[i] + human_quadratic[i] * human[i] * human[i];
    }
    return acc;
}

bool TrustRegion::within_robot_box(std::span<const double> robot) const {
    for (std::size_t i = 0; i < robot.size(); ++i) {
        if (!(robot[i] <= robot_upper[i])) {
            return false;
        }
    }
    return true;
}

TrustRegion extract_trust_region(const ConstraintModel& model, const State& s,
                                 std::span<const double> robot_upper) {
    const FeatureSpec& spec = model.spec;
    const std::size_t n = spec.dims;
    if (robot_upper.size() != n || s.position.size() != n) {
        throw ConfigError("trust region inputs do not match the model dimensionality");
    }
    TrustRegion tr;
    tr.robot_upper.assign(robot_upper.begin(), robot_upper.end());
    tr.robot_weights.assign(model.weights.begin() + spec.robot_offset(),
                            model.weights.begin() + spec.robot_offset() + n);
    tr.human_weights.assign(model.weights.begin() + spec.human_offset(),
                            model.weights.begin() + spec.human_offset() + n);
    tr.robot_quadratic.assign(n, 0.0);
    tr.human_quadratic.assign(n, 0.0);
    if (spec.map == FeatureMap::quadratic) {
        for (std::size_t i = 0; i < n; ++i) {
            tr.robot_quadratic[i] = model.weights[spec.quad_offset() + i];
            tr.human_quadratic[i] = model.weights[spec.quad_offset() + n + i];
        }
    }
    tr.offset = model.weights[spec.bias_index()];
    for (std::size_t i = 0; i < n; ++i) {
        tr.offset += model.weights[i] * s.position[i];
    }
    tr.trained = model.trained();
    return tr;
}

bool region_contains(const TrustRegion& tr, std::span<const double> robot, std::span<const double> human) {
    return tr.within_robot_box(robot) && tr.margin(robot, human) >= 0.0;
}

std::vector<double> boundary_crossings(const TrustRegion& tr, Agent agent, std::size_t dim,
                                       const JointAction& ref) {
    const bool is_robot = agent == Agent::robot;
    const double w = is_robot ? tr.robot_weights[dim] : tr.human_weights[dim];
    const double q = is_robot ? tr.robot_quadratic[dim] : tr.human_quadratic[dim];
    const double v0 = is_robot ? ref.robot[dim] : ref.human[dim];
    // Constant part of g with the chosen coordinate removed.
    const double c = tr.margin(ref.robot, ref.human) - (w * v0 + q * v0 * v0);

    std::vector<double> roots;
    if (q == 0.0) {
        if (w != 0.0) {
            roots.push_back(-c / w);
        }
        return roots;
    }
    const double disc = w * w - 4.0 * q * c;
    if (disc < 0.0) {
        return roots;
    }
    // Numerically stable pair of roots.
    const double root = std::sqrt(disc);
    const double k = -0.5 * (w + (w >= 0.0 ? root : -root));
    roots.push_back(k / q);
    if (k != 0.0) {
        roots.push_back(c / k);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double boundary_on_segment(const TrustRegion& tr, Agent agent, std::size_t dim, const JointAction& ref,
                           double lo, double hi) {
    JointAction probe = ref;
    auto inside_at = [&](double v) {
        (agent == Agent::robot ? probe.robot : probe.human)[dim] = v;
        return tr.margin(probe.robot, probe.human) >= 0.0;
    };
    for (double r : boundary_crossings(tr, agent, dim, ref)) {
        if (r < lo || r > hi) {
            continue;
        }
        const double step = 1e-9 * std::max(1.0, hi - lo);
        if (inside_at(std::max(lo, r - step)) && !inside_at(std::min(hi, r + step))) {
            return r;
        }
    }
    return inside_at(lo) ? hi : lo;
}

void save_checkpoint(const ConstraintModel& model, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& config_echo) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "# constraint model checkpoint\n";
    out << "version = 1\n";
    out << "dims = " << model.spec.dims << '\n';
    out << "feature_map = " << (model.spec.map == FeatureMap::linear ? "linear" : "quadratic") << '\n';
    out << "dimension = " << model.weights.size() << '\n';
    out << "weights = ";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        out << (i ? "," : "") << format_double(model.weights[i]);
    }
    out << '\n';
    out << "samples_seen = " << model.samples_seen << '\n';
    out << "positives = " << model.positives << '\n';
    out << "negatives = " << model.negatives << '\n';
    out << "learn_rate = " << format_double(model.config.learn_rate) << '\n';
    out << "clamp_eps = " << format_double(model.config.clamp_eps) << '\n';
    out << "balance_classes = " << (model.config.balance_classes ? "true" : "false") << '\n';
    for (const auto& [key, value] : config_echo) {
        out << "config." << key << " = " << value << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint " + path.string());
    }
    std::map<std::string, std::string> fields;
    Checkpoint ckpt;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        if (key.starts_with("config.")) {
            ckpt.config_echo[key.substr(7)] = value;
        } else {
            fields[key] = value;
        }
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw IoError(path.string() + ": checkpoint is missing '" + key + "'");
        }
        return it->second;
    };
    auto need_count = [&](const std::string& key) {
        auto v = parse_int(need(key));
        if (!v || *v < 0) {
            throw IoError(path.string() + ": bad value for '" + key + "'");
        }
        return static_cast<std::uint64_t>(*v);
    };
    auto need_double = [&](const std::string& key) {
        auto v = parse_double(need(key));
        if (!v) {
            throw IoError(path.string() + ": bad value for '" + key + "'");
        }
        return *v;
    };

    if (need("version") != "1") {
        throw IoError(path.string() + ": unsupported checkpoint version " + need("version"));
    }
    FeatureSpec spec;
    spec.dims = need_count("dims");
    const std::string& map = need("feature_map");
    if (map == "linear") {
        spec.map = FeatureMap::linear;
    } else if (map == "quadratic") {
        spec.map = FeatureMap::quadratic;
    } else {
        throw IoError(path.string() + ": unknown feature_map '" + map + "'");
    }
    LearnerConfig cfg;
    cfg.features = spec.map;
    cfg.learn_rate = need_double("learn_rate");
    cfg.clamp_eps = need_double("clamp_eps");
    cfg.balance_classes = need("balance_classes") == "true";

    ConstraintModel model(spec, cfg);
    const auto parts = split_fields(need("weights"));
    if (parts.size() != spec.size() || need_count("dimension") != spec.size()) {
        throw IoError(path.string() + ": weight count does not match the feature layout");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto v = parse_double(parts[i]);
        if (!v || !std::isfinite(*v)) {
            throw IoError(path.string() + ": bad weight '" + parts[i] + "'");
        }
        model.weights[i] = *v;
    }
    model.samples_seen = need_count("samples_seen");
    model.positives = need_count("positives");
    model.negatives = need_count("negatives");
    ckpt.model = std::move(model);
    return ckpt;
}

} // namespace coassist
