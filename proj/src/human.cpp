#include "coassist/human.hpp"

#include "coassist/errors.hpp"

#include <cmath>

namespace coassist {

namespace {

constexpr double kCapabilityTolerance = 1e-9;

std::size_t robot_index(const QTable& q, std::span<const double> robot) {
    auto r = q.robot_grid().index_of(robot);
    if (!r) {
        throw InvalidAction("robot action is not on the robot grid");
    }
    return *r;
}

} // namespace

void HumanProfile::validate(std::size_t dims) const {
    const std::string prefix = name == "default" ? "human." : "human." + name + ".";
    if (capability.size() != dims) {
        throw ConfigError("needs one value per dimension", prefix + "capability");
    }
    for (double c : capability) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ConfigError("must be > 0", prefix + "capability");
        }
    }
    if (!(comfort_fraction > 0.0 && comfort_fraction <= 1.0)) {
        throw ConfigError("must lie in (0, 1]", prefix + "comfort_fraction");
    }
    if (!(beta_h > 0.0) || !std::isfinite(beta_h)) {
        throw ConfigError("must be > 0", prefix + "beta_h");
    }
    if (!(corrective_gain >= 0.0) || !std::isfinite(corrective_gain)) {
        throw ConfigError("must be >= 0", prefix + "corrective_gain");
    }
    if (!(fatigue_rate >= 0.0 && fatigue_rate <= 1.0)) {
        throw ConfigError("must lie in [0, 1]", prefix + "fatigue_rate");
    }
    if (!(wrench_scale > 0.0) || !std::isfinite(wrench_scale)) {
        throw ConfigError("must be > 0", prefix + "wrench_scale");
    }
}

bool within_capability(const HumanProfile& profile, std::span<const double> human) {
    for (std::size_t i = 0; i < human.size(); ++i) {
        if (!(std::abs(human[i]) <= profile.capability[i] + kCapabilityTolerance)) {
            return false;
        }
    }
    return true;
}

std::vector<bool> capability_mask(const HumanProfile& profile, const ActionGrid& human_grid) {
    std::vector<bool> mask(human_grid.size());
    std::vector<double> point(human_grid.dims());
    for (std::size_t h = 0; h < human_grid.size(); ++h) {
        human_grid.point(h, point);
        mask[h] = within_capability(profile, point);
    }
    return mask;
}

std::vector<double> human_action(const QTable& q, const State& s, std::span<const double> robot,
                                 const HumanProfile& profile, SeedStream& rng) {
    const auto mask = capability_mask(profile, q.human_grid());
    bool any = false;
    for (bool m : mask) {
        any = any || m;
    }
    if (!any) {
        throw DegenerateProfile("capability of profile '" + profile.name +
                                "' excludes every human grid action");
    }
    const auto slice = q.human_slice(q.state_index(s), q.time_index(s), robot_index(q, robot));
    const auto dist = boltzmann_dist(slice, profile.beta_h, mask);
    return q.human_grid().point(sample_action(dist, rng));
}

std::vector<double> human_demand(const QTable& q, const State& s, std::span<const double> robot,
                                 double beta_h, SeedStream& rng) {
    const auto slice = q.human_slice(q.state_index(s), q.time_index(s), robot_index(q, robot));
    const auto dist = boltzmann_dist(slice, beta_h);
    return q.human_grid().point(sample_action(dist, rng));
}

Wrench human_wrench(const HumanProfile& profile, const State& /*s*/, const JointAction& a) {
    Wrench w;
    if (!within_capability(profile, a.human)) {
        return w;
    }
    for (std::size_t i = 0; i < a.human.size() && i < 3; ++i) {
        const double effort = std::abs(a.human[i]);
        const double excess = std::max(0.0, effort - profile.comfort_fraction * profile.capability[i]);
        const double magnitude = profile.wrench_scale * effort + profile.corrective_gain * excess;
        w.force[i] = a.human[i] < 0.0 ? -magnitude : magnitude;
    }
    return w;
}

HumanProfile fatigue_step(const HumanProfile& profile) {
    HumanProfile next = profile;
    for (double& c : next.capability) {
        c *= 1.0 - profile.fatigue_rate;
    }
    return next;
}

HumanResponse human_respond(const QTable& q, const State& s, std::span<const double> robot,
                            const HumanProfile& profile, SeedStream& rng) {
    HumanResponse out;
    out.requested = human_demand(q, s, robot, profile.beta_h, rng);
    const bool engaged = within_capability(profile, out.requested);
    out.applied = engaged ? out.requested : std::vector<double>(out.requested.size(), 0.0);
    out.wrench = human_wrench(profile, s, JointAction{{robot.begin(), robot.end()}, out.requested});
    return out;
}

} // namespace coassist
