#pragma once

#include "coassist/game.hpp"
#include "coassist/joint_q.hpp"
#include "coassist/rng.hpp"

#include <span>
#include <string>
#include <vector>

namespace coassist {

// Simulated operator with a latent physical limit. `capability` is the
// ground truth the constraint learner tries to recover.
struct HumanProfile {
    std::string name = "default";
    // Maximum sustainable action magnitude per dimension (force units).
    std::vector<double> capability{0.4};
    // Fraction of capability below which no corrective force is added.
    double comfort_fraction = 1.0;
    double beta_h = 0.05;
    // Extra force (N per force unit) per unit of effort beyond the comfort zone.
    double corrective_gain = 0.0;
    // Per-step multiplicative capability decay.
    double fatigue_rate = 0.0;
    // Emitted force (N) per unit of human action.
    double wrench_scale = 10.0;

    void validate(std::size_t dims) const;
};

// |a_i| <= capability_i for every dimension (up to grid rounding).
bool within_capability(const HumanProfile& profile, std::span<const double> human);

std::vector<bool> capability_mask(const HumanProfile& profile, const ActionGrid& human_grid);

// Constrained Boltzmann response to the robot's action: exp(Q(s, a_R, .) / beta_h)
// restricted to actions within capability. Throws DegenerateProfile when the
// capability admits no grid point.
std::vector<double> human_action(const QTable& q, const State& s, std::span<const double> robot,
                                 const HumanProfile& profile, SeedStream& rng);

// Unconstrained Boltzmann response: the share the joint task asks of the
// human given the robot's action, before the human's own limit is applied.
std::vector<double> human_demand(const QTable& q, const State& s, std::span<const double> robot,
                                 double beta_h, SeedStream& rng);

// Engaged (request within capability): force along the task axes of
// wrench_scale * a_H plus a corrective term k_p * (|a_H| - rho c*)_+; torque zero.
// Disengaged: the zero wrench.
Wrench human_wrench(const HumanProfile& profile, const State& s, const JointAction& a);

HumanProfile fatigue_step(const HumanProfile& profile);

// One interaction step: the human is asked for a share drawn from
// human_demand, follows it when it is within capability and lets go otherwise.
// Conditioned on engagement, the requested share is distributed exactly as
// human_action, since truncating a Boltzmann distribution is conditioning it.
HumanResponse human_respond(const QTable& q, const State& s, std::span<const double> robot,
                            const HumanProfile& profile, SeedStream& rng);

} // namespace coassist
