#include "coassist/experiment.hpp"

#include "coassist/agent.hpp"
#include "coassist/csv.hpp"
#include "coassist/errors.hpp"
#include "coassist/human.hpp"

#include <algorithm>
#include <cmath>

namespace coassist {

namespace {

constexpr double kMaxEvalPoints = 1e10;

double wrench_norm(const Wrench& w) {
    const double f = w.force_norm();
    const double t = w.torque_norm();
    return std::sqrt(f * f + t * t);
}

bool is_checkpoint(const ExperimentConfig& cfg, std::size_t episode) {
    const bool last = episode + 1 == cfg.episodes;
    return last || (cfg.eval.every > 0 && (episode + 1) % cfg.eval.every == 0);
}

State eval_state(const ExperimentConfig& cfg) {
    return State{cfg.eval_state(), 0};
}

// Every point of the product of `axes`, flattened row-major.
std::vector<std::vector<double>> enumerate(const std::vector<Axis>& axes) {
    std::vector<std::vector<double>> out;
    ProductGrid grid(axes);
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.push_back(grid.point(i));
    }
    return out;
}

} // namespace

std::vector<std::string> MetricsRow::csv_header() {
    return {"episode", "reward", "mean_wrench_norm", "neg_labels", "boundary_est", "accuracy"};
}

std::vector<std::string> MetricsRow::csv_fields() const {
    return {std::to_string(episode),  format_double(reward),       format_double(mean_wrench_norm),
            std::to_string(neg_labels), format_double(boundary_est),
            accuracy ? format_double(*accuracy) : std::string()};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const QTable& q) {
    cfg.validate();
    const EnvParams& env = cfg.env;
    const auto upper = cfg.robot_upper_bound();
    const FeatureSpec spec{env.dims, cfg.learner.features};

    ExperimentResult result;
    result.model = ConstraintModel(spec, cfg.learner);
    result.rows.reserve(cfg.episodes);

    for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
        SeedStream rng = SeedStream::derive(cfg.seed, episode);
        HumanProfile profile = cfg.active_profile();
        const ConstraintModel frozen = result.model;
        std::size_t neg_labels = 0;
        double wrench_sum = 0.0;

        RobotPolicy robot = [&](const State& s, std::span<const double> human_ref, SeedStream& r) {
            const ConstraintModel& policy_model =
                cfg.refresh == RefreshPolicy::per_step ? result.model : frozen;
            const TrustRegion tr = extract_trust_region(policy_model, s, upper);
            const RobotDist rd = robot_dist(q, s, human_ref, tr, cfg.agent);
            return RobotDecision{robot_act(q, rd.dist, r), rd.fallback};
        };
        HumanModel human = [&](const State& s, std::span<const double> robot_action, SeedStream& r) {
            HumanResponse response = human_respond(q, s, robot_action, profile, r);
            profile = fatigue_step(profile);
            return response;
        };
        LearnerHook learner = [&](const State& s, const JointAction& a, const Wrench& w) {
            const Feedback y = label_feedback(w, cfg.labeler);
            wrench_sum += wrench_norm(w);
            if (y == Feedback::negative) {
                ++neg_labels;
            }
            if (cfg.adaptive) {
                result.model = sgd_step(result.model, featurize(spec, s, a), y);
            }
        };

        const Trajectory traj =
            rollout(env, RolloutGrids{q.robot_grid(), q.human_grid()}, robot, human, learner, rng);

        MetricsRow row;
        row.episode = episode;
        row.reward = traj.total_reward();
        row.mean_wrench_norm = traj.steps.empty() ? 0.0 : wrench_sum / static_cast<double>(traj.steps.size());
        row.neg_labels = neg_labels;
        row.boundary_est = boundary_estimate(result.model, cfg);
        if (is_checkpoint(cfg, episode)) {
            row.accuracy = eval_recovery(result.model, cfg.active_profile(), cfg, cfg.eval.grid_points).accuracy;
        }
        for (const auto& st : traj.steps) {
            result.fallback_steps += st.fallback ? 1 : 0;
        }
        if (!std::isfinite(row.reward) || !std::isfinite(row.mean_wrench_norm) ||
            !std::isfinite(row.boundary_est)) {
            throw NumericError("non-finite metrics in episode " + std::to_string(episode));
        }
        result.rows.push_back(row);
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const QTable q = backward_induction_q(cfg.env, cfg.make_grids(), cfg.q_beta);
    return run_experiment(cfg, q);
}

void write_experiment(const ExperimentResult& result, const ExperimentConfig& cfg,
                      const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    write_csv(std::span<const MetricsRow>(result.rows), out_dir / "metrics.csv");
    save_checkpoint(result.model, out_dir / "model.ckpt", config_echo(cfg));
}

double boundary_estimate(const ConstraintModel& model, const ExperimentConfig& cfg, std::size_t dim) {
    const auto upper = cfg.robot_upper_bound();
    const TrustRegion tr = extract_trust_region(model, eval_state(cfg), upper);
    JointAction ref;
    ref.robot.resize(cfg.env.dims);
    for (std::size_t i = 0; i < cfg.env.dims; ++i) {
        const double hi = std::min(cfg.grid.robot_max, upper[i]);
        ref.robot[i] = 0.5 * (cfg.grid.robot_min + std::max(cfg.grid.robot_min, hi));
    }
    ref.human.assign(cfg.env.dims, cfg.grid.human_min);
    return boundary_on_segment(tr, Agent::human, dim, ref, cfg.grid.human_min, cfg.grid.human_max);
}

RecoveryResult eval_recovery(const ConstraintModel& model, const HumanProfile& profile,
                             const ExperimentConfig& cfg, std::size_t grid_points) {
    const std::size_t dims = cfg.env.dims;
    if (grid_points < 2) {
        throw ConfigError("must be >= 2", "eval.grid_points");
    }
    if (std::pow(static_cast<double>(grid_points), 2.0 * static_cast<double>(dims)) > kMaxEvalPoints) {
        throw ConfigError("evaluation grid too large for the task dimension", "eval.grid_points");
    }
    profile.validate(dims);
    const auto upper = cfg.robot_upper_bound();
    const State s = eval_state(cfg);
    const TrustRegion tr = extract_trust_region(model, s, upper);

    const auto robots = enumerate(std::vector<Axis>(dims, Axis(cfg.grid.robot_min, cfg.grid.robot_max, grid_points)));
    const auto humans = enumerate(std::vector<Axis>(dims, Axis(cfg.grid.human_min, cfg.grid.human_max, grid_points)));

    // The wrench depends on the human share only, so truth and the human part of
    // the margin are computed once per human point.
    std::vector<double> human_part(humans.size());
    std::vector<char> truth(humans.size());
    const std::vector<double> zero_robot(dims, 0.0);
    for (std::size_t h = 0; h < humans.size(); ++h) {
        human_part[h] = tr.human_margin(humans[h]);
        const Wrench w = human_wrench(profile, s, JointAction{zero_robot, humans[h]});
        truth[h] = label_feedback(w, cfg.labeler) == Feedback::positive;
    }

    std::size_t agree = 0;
    for (const auto& robot : robots) {
        const bool in_box = tr.within_robot_box(robot);
        const double base = tr.offset + tr.robot_margin(robot);
        for (std::size_t h = 0; h < humans.size(); ++h) {
            const bool predicted = in_box && base + human_part[h] >= 0.0;
            const bool actual = in_box && truth[h];
            agree += predicted == actual ? 1 : 0;
        }
    }

    RecoveryResult out;
    out.accuracy = static_cast<double>(agree) / (static_cast<double>(robots.size()) * static_cast<double>(humans.size()));
    out.boundary_est = boundary_estimate(model, cfg, 0);
    for (std::size_t d = 0; d < dims; ++d) {
        const double est = d == 0 ? out.boundary_est : boundary_estimate(model, cfg, d);
        out.boundary_error = std::max(out.boundary_error, std::abs(est - profile.capability[d]));
    }
    return out;
}

} // namespace coassist
