#include "coassist/joint_q.hpp"

#include "coassist/csv.hpp"
#include "coassist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>

namespace coassist {

std::vector<std::size_t> BoltzmannDist::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            out.push_back(i);
        }
    }
    return out;
}

std::size_t BoltzmannDist::argmax() const {
    return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

BoltzmannDist boltzmann_dist(std::span<const double> q, double beta, const std::vector<bool>& feasible) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("Boltzmann temperature must be finite and > 0");
    }
    if (!feasible.empty() && feasible.size() != q.size()) {
        throw ConfigError("feasibility mask size does not match the Q slice");
    }
    auto ok = [&](std::size_t i) { return feasible.empty() || feasible[i]; };

    double qmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i])) {
            throw NumericError("non-finite Q value at index " + std::to_string(i));
        }
        if (ok(i)) {
            qmax = std::max(qmax, q[i]);
        }
    }
    if (qmax == -std::numeric_limits<double>::infinity()) {
        throw EmptyTrustRegion("no feasible action in the Boltzmann support");
    }

    BoltzmannDist dist;
    dist.beta = beta;
    dist.probs.assign(q.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (ok(i)) {
            dist.probs[i] = std::exp((q[i] - qmax) / beta);
            total += dist.probs[i];
        }
    }
    for (double& p : dist.probs) {
        p /= total;
    }
    return dist;
}

std::size_t sample_action(const BoltzmannDist& dist, SeedStream& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last = dist.probs.size();
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        if (dist.probs[i] <= 0.0) {
            continue;
        }
        cumulative += dist.probs[i];
        last = i;
        if (u < cumulative) {
            return i;
        }
    }
    if (last == dist.probs.size()) {
        throw EmptyTrustRegion("cannot sample from an empty distribution");
    }
    // u landed in the rounding gap above the final cumulative sum.
    return last;
}

QTable::QTable(QGrids grids, int horizon, double gamma, double beta)
    : grids_(std::move(grids)), horizon_(horizon), gamma_(gamma), beta_(beta),
      state_size_(grids_.states.size()), human_size_(grids_.human.size()),
      joint_size_(grids_.robot.size() * grids_.human.size()) {
    if (state_size_ == 0 || joint_size_ == 0) {
        throw ConfigError("Q table grids must be non-empty");
    }
    if (horizon < 1) {
        throw ConfigError("Q table horizon must be >= 1");
    }
    values_.assign(static_cast<std::size_t>(horizon) * state_size_ * joint_size_, 0.0);
}

std::span<const double> QTable::human_slice(std::size_t s, int t, std::size_t r) const {
    return {values_.data() + offset(s, t) + r * human_size_, human_size_};
}

std::vector<double> QTable::robot_slice(std::size_t s, int t, std::size_t h) const {
    const std::size_t robot_size = grids_.robot.size();
    std::vector<double> out(robot_size);
    const double* base = values_.data() + offset(s, t);
    for (std::size_t r = 0; r < robot_size; ++r) {
        out[r] = base[r * human_size_ + h];
    }
    return out;
}

std::span<const double> QTable::joint_slice(std::size_t s, int t) const {
    return {values_.data() + offset(s, t), joint_size_};
}

std::size_t QTable::state_index(const State& s) const { return grids_.states.nearest(s.position); }

int QTable::time_index(const State& s) const { return std::clamp(s.t, 0, horizon_ - 1); }

namespace {

void check_grid_dims(const EnvParams& params, const QGrids& grids) {
    if (grids.states.size() == 0 || grids.robot.size() == 0 || grids.human.size() == 0) {
        throw ConfigError("empty grid");
    }
    if (grids.states.dims() != params.dims || grids.robot.dims() != params.dims ||
        grids.human.dims() != params.dims) {
        throw ConfigError("grid dimensionality does not match env.dims");
    }
}

} // namespace

QTable backward_induction_q(const EnvParams& params, const QGrids& grids, double beta) {
    params.validate(true);
    check_grid_dims(params, grids);
    if (!(beta > 0.0)) {
        throw ConfigError("must be > 0", "q.beta");
    }

    QTable q(grids, params.horizon, params.gamma, beta);
    const std::size_t n_states = grids.states.size();
    const std::size_t n_robot = grids.robot.size();
    const std::size_t n_human = grids.human.size();
    const std::size_t n_joint = n_robot * n_human;

    // Rewards and successors are time-invariant; tabulate them once.
    std::vector<double> rewards(n_states * n_joint);
    std::vector<std::size_t> successor(n_states * n_joint);
    State s;
    JointAction a{std::vector<double>(params.dims), std::vector<double>(params.dims)};
    for (std::size_t si = 0; si < n_states; ++si) {
        s.position = grids.states.point(si);
        s.t = 0;
        for (std::size_t r = 0; r < n_robot; ++r) {
            grids.robot.point(r, a.robot);
            for (std::size_t h = 0; h < n_human; ++h) {
                grids.human.point(h, a.human);
                auto [next, rew] = step(params, s, a);
                const std::size_t k = si * n_joint + r * n_human + h;
                rewards[k] = rew;
                successor[k] = grids.states.nearest(next.position);
            }
        }
    }

    const int last = params.horizon - 1;
    for (std::size_t si = 0; si < n_states; ++si) {
        for (std::size_t j = 0; j < n_joint; ++j) {
            q.at(si, last, j / n_human, j % n_human) = rewards[si * n_joint + j];
        }
    }

    std::vector<double> continuation(n_states);
    for (int t = last - 1; t >= 0; --t) {
        for (std::size_t si = 0; si < n_states; ++si) {
            auto slice = q.joint_slice(si, t + 1);
            const BoltzmannDist pi = boltzmann_dist(slice, beta);
            double v = 0.0;
            for (std::size_t j = 0; j < n_joint; ++j) {
                v += pi.probs[j] * slice[j];
            }
            continuation[si] = v;
        }
        for (std::size_t si = 0; si < n_states; ++si) {
            for (std::size_t j = 0; j < n_joint; ++j) {
                const std::size_t k = si * n_joint + j;
                const double value = rewards[k] + params.gamma * continuation[successor[k]];
                if (!std::isfinite(value)) {
                    throw NumericError("non-finite Q value at t = " + std::to_string(t));
                }
                q.at(si, t, j / n_human, j % n_human) = value;
            }
        }
    }
    return q;
}

JointPolicy joint_boltzmann_policy(const QTable& q) {
    auto cache = std::make_shared<std::map<std::pair<std::size_t, int>, BoltzmannDist>>();
    return [&q, cache](const State& s, SeedStream& rng) {
        const std::size_t si = q.state_index(s);
        const int t = q.time_index(s);
        auto it = cache->find({si, t});
        if (it == cache->end()) {
            it = cache->emplace(std::pair{si, t}, boltzmann_dist(q.joint_slice(si, t), q.beta())).first;
        }
        const std::size_t j = sample_action(it->second, rng);
        const std::size_t n_human = q.human_grid().size();
        return JointAction{q.robot_grid().point(j / n_human), q.human_grid().point(j % n_human)};
    };
}

McEstimate mc_q_oracle(const EnvParams& params, const JointPolicy& continuation, const State& s,
                       const JointAction& a, std::size_t n_samples, SeedStream& rng) {
    if (n_samples < 2) {
        throw ConfigError("Monte Carlo oracle needs at least 2 samples");
    }
    std::vector<double> returns(n_samples);
    for (std::size_t n = 0; n < n_samples; ++n) {
        auto [state, g] = step(params, s, a);
        double discount = params.gamma;
        while (state.t < params.horizon) {
            const JointAction next = continuation(state, rng);
            auto [succ, r] = step(params, state, next);
            g += discount * r;
            discount *= params.gamma;
            state = std::move(succ);
        }
        returns[n] = g;
    }
    // Accumulate around the first sample so constant returns give an exact
    // mean and a zero standard error.
    const double shift = returns.front();
    const double count = static_cast<double>(n_samples);
    double sum = 0.0;
    for (double g : returns) {
        sum += g - shift;
    }
    const double mean = shift + sum / count;
    double sum_sq = 0.0;
    for (double g : returns) {
        const double d = (g - shift) - sum / count;
        sum_sq += d * d;
    }
    const double sample_std = std::sqrt(sum_sq / (count - 1.0));
    return {mean, sample_std / std::sqrt(count)};
}

void write_qtable_csv(const QTable& q, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "state_idx,t,aR_idx,aH_idx,value\n";
    for (std::size_t s = 0; s < q.states().size(); ++s) {
        for (int t = 0; t < q.horizon(); ++t) {
            for (std::size_t r = 0; r < q.robot_grid().size(); ++r) {
                for (std::size_t h = 0; h < q.human_grid().size(); ++h) {
                    out << s << ',' << t << ',' << r << ',' << h << ',' << format_double(q(s, t, r, h))
                        << '\n';
                }
            }
        }
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace coassist
