#include "coassist/agent.hpp"

#include "coassist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coassist {

void AgentConfig::validate() const {
    if (!(beta_r > 0.0) || !std::isfinite(beta_r)) {
        throw ConfigError("must be > 0", "agent.beta_r");
    }
    if (!(human_model_beta > 0.0) || !std::isfinite(human_model_beta)) {
        throw ConfigError("must be > 0", "agent.human_model_beta");
    }
    if (!(min_inside_prob > 0.0 && min_inside_prob <= 1.0)) {
        throw ConfigError("must lie in (0, 1]", "agent.min_inside_prob");
    }
}

namespace {

BoltzmannDist one_hot(std::size_t n, std::size_t index, double beta) {
    BoltzmannDist d;
    d.beta = beta;
    d.probs.assign(n, 0.0);
    d.probs[index] = 1.0;
    return d;
}

// Index of the largest score, ties broken by the larger Q value.
std::size_t best_by(const std::vector<double>& score, const std::vector<double>& q) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < score.size(); ++i) {
        if (score[i] > score[best] || (score[i] == score[best] && q[i] > q[best])) {
            best = i;
        }
    }
    return best;
}

} // namespace

RobotDist robot_dist(const QTable& q, const State& s, std::span<const double> human_ref,
                     const TrustRegion& tr, const AgentConfig& cfg) {
    const ActionGrid& robot_grid = q.robot_grid();
    const ActionGrid& human_grid = q.human_grid();
    const std::size_t n_robot = robot_grid.size();
    const std::size_t si = q.state_index(s);
    const int t = q.time_index(s);

    std::vector<double> q_slice(n_robot);
    // How close each robot action comes to the region; used by greedy_safe.
    std::vector<double> score(n_robot);
    RobotDist out;
    out.feasible.assign(n_robot, false);
    std::vector<double> robot(robot_grid.dims());

    if (cfg.conditioning == Conditioning::previous_human) {
        q_slice = q.robot_slice(si, t, human_grid.nearest(human_ref));
        for (std::size_t r = 0; r < n_robot; ++r) {
            robot_grid.point(r, robot);
            const bool in_box = tr.within_robot_box(robot);
            const double g = tr.margin(robot, human_ref);
            out.feasible[r] = in_box && g >= 0.0;
            score[r] = in_box ? g : -std::numeric_limits<double>::infinity();
        }
    } else {
        std::vector<double> human(human_grid.dims());
        std::vector<double> human_margin(human_grid.size());
        for (std::size_t h = 0; h < human_grid.size(); ++h) {
            human_grid.point(h, human);
            human_margin[h] = tr.human_margin(human);
        }
        for (std::size_t r = 0; r < n_robot; ++r) {
            robot_grid.point(r, robot);
            const auto slice = q.human_slice(si, t, r);
            const auto model = boltzmann_dist(slice, cfg.human_model_beta);
            const bool in_box = tr.within_robot_box(robot);
            const double base = tr.offset + tr.robot_margin(robot);
            double expected = 0.0;
            double inside = 0.0;
            for (std::size_t h = 0; h < slice.size(); ++h) {
                expected += model.probs[h] * slice[h];
                if (base + human_margin[h] >= 0.0) {
                    inside += model.probs[h];
                }
            }
            q_slice[r] = expected;
            out.feasible[r] = in_box && inside >= cfg.min_inside_prob;
            score[r] = in_box ? inside : -1.0;
        }
    }

    if (std::find(out.feasible.begin(), out.feasible.end(), true) != out.feasible.end()) {
        out.dist = boltzmann_dist(q_slice, cfg.beta_r, out.feasible);
        return out;
    }
    out.fallback = true;
    if (cfg.fallback == Fallback::unconstrained) {
        out.dist = boltzmann_dist(q_slice, cfg.beta_r);
    } else {
        out.dist = one_hot(n_robot, best_by(score, q_slice), cfg.beta_r);
    }
    return out;
}

std::vector<double> robot_act(const QTable& q, const BoltzmannDist& dist, SeedStream& rng) {
    return q.robot_grid().point(sample_action(dist, rng));
}

} // namespace coassist
