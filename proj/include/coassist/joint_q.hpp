#pragma once

#include "coassist/game.hpp"
#include "coassist/grid.hpp"
#include "coassist/rng.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace coassist {

// Truncated Boltzmann distribution over a finite action index set.
// probs[i] is zero exactly on the masked-out indices.
struct BoltzmannDist {
    std::vector<double> probs;
    double beta = 1.0;

    std::vector<std::size_t> support() const;
    std::size_t argmax() const;
};

// probs_i proportional to exp(q_i / beta) on feasible indices. An empty mask
// means every index is feasible. Throws EmptyTrustRegion when nothing is feasible.
BoltzmannDist boltzmann_dist(std::span<const double> q, double beta,
                             const std::vector<bool>& feasible = {});

std::size_t sample_action(const BoltzmannDist& dist, SeedStream& rng);

struct QGrids {
    StateGrid states;
    ActionGrid robot;
    ActionGrid human;
};

// Joint action-value table Q_t(s, a_R, a_H) over the discretized game.
class QTable {
  public:
    QTable(QGrids grids, int horizon, double gamma, double beta);

    const StateGrid& states() const { return grids_.states; }
    const ActionGrid& robot_grid() const { return grids_.robot; }
    const ActionGrid& human_grid() const { return grids_.human; }
    int horizon() const { return horizon_; }
    double gamma() const { return gamma_; }
    // Temperature of the joint continuation policy used in the recursion.
    double beta() const { return beta_; }

    double operator()(std::size_t s, int t, std::size_t r, std::size_t h) const {
        return values_[offset(s, t) + r * human_size_ + h];
    }
    double& at(std::size_t s, int t, std::size_t r, std::size_t h) {
        return values_[offset(s, t) + r * human_size_ + h];
    }

    // Q over human actions for fixed (s, t, a_R).
    std::span<const double> human_slice(std::size_t s, int t, std::size_t r) const;
    // Q over robot actions for fixed (s, t, a_H).
    std::vector<double> robot_slice(std::size_t s, int t, std::size_t h) const;
    // All joint actions at (s, t), robot-major.
    std::span<const double> joint_slice(std::size_t s, int t) const;

    // Nearest-neighbour state lookup; t is clamped to [0, horizon - 1].
    std::size_t state_index(const State& s) const;
    int time_index(const State& s) const;

    const std::vector<double>& values() const { return values_; }

  private:
    std::size_t offset(std::size_t s, int t) const {
        return (static_cast<std::size_t>(t) * state_size_ + s) * joint_size_;
    }

    QGrids grids_;
    int horizon_;
    double gamma_;
    double beta_;
    std::size_t state_size_;
    std::size_t human_size_;
    std::size_t joint_size_;
    std::vector<double> values_;
};

// Finite-horizon backward induction:
//   Q_{T-1}(s, a) = R(s, a)
//   Q_t(s, a)     = R(s, a) + gamma * sum_a' pi_{t+1}(a' | s') Q_{t+1}(s', a')
// where s' is the successor snapped to the state grid and pi is the
// unconstrained joint Boltzmann policy at temperature `beta`.
QTable backward_induction_q(const EnvParams& params, const QGrids& grids, double beta);

using JointPolicy = std::function<JointAction(const State&, SeedStream&)>;

// Joint Boltzmann policy over the table (the recursion's continuation policy).
JointPolicy joint_boltzmann_policy(const QTable& q);

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

// Monte Carlo estimate of the discounted return of taking `a` at `s` (time
// s.t) and following `continuation` afterwards, using the true dynamics.
McEstimate mc_q_oracle(const EnvParams& params, const JointPolicy& continuation, const State& s,
                       const JointAction& a, std::size_t n_samples, SeedStream& rng);

// Debug dump: state_idx,t,aR_idx,aH_idx,value
void write_qtable_csv(const QTable& q, const std::filesystem::path& path);

} // namespace coassist
