#pragma once

#include "coassist/game.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coassist {

enum class Feedback : std::uint8_t { negative = 0, positive = 1 };

inline double as_target(Feedback y) { return y == Feedback::positive ? 1.0 : 0.0; }

struct LabelerConfig {
    // Wrench-norm threshold (N); labels are positive strictly above it.
    double delta = 0.05;
    // Converts torque (N*m) to a force-equivalent (1/m) inside the norm.
    double torque_weight = 1.0;

    void validate() const;
};

// ||(f, torque_weight * tau)||_2
double feedback_magnitude(const Wrench& w, const LabelerConfig& cfg);

Feedback label_feedback(const Wrench& w, const LabelerConfig& cfg);

enum class FeatureMap : std::uint8_t { linear, quadratic };

// Layout: [position..., robot..., human..., (robot^2..., human^2...), 1].
// The quadratic block is present only for FeatureMap::quadratic.
struct FeatureSpec {
    std::size_t dims = 1;
    FeatureMap map = FeatureMap::linear;

    std::size_t size() const { return map == FeatureMap::linear ? 3 * dims + 1 : 5 * dims + 1; }
    std::size_t robot_offset() const { return dims; }
    std::size_t human_offset() const { return 2 * dims; }
    std::size_t quad_offset() const { return 3 * dims; }
    std::size_t bias_index() const { return size() - 1; }
};

using FeatureVector = std::vector<double>;

FeatureVector featurize(const FeatureSpec& spec, const State& s, const JointAction& a);

struct LearnerConfig {
    double learn_rate = 0.05;
    double clamp_eps = 1e-7;
    // Inverse-frequency weighting of the two label classes.
    bool balance_classes = false;
    FeatureMap features = FeatureMap::linear;

    void validate() const;
};

// Logistic constraint model: P(joint action inside the trust region) = sigmoid(theta . x).
struct ConstraintModel {
    FeatureSpec spec;
    LearnerConfig config;
    std::vector<double> weights;
    std::uint64_t samples_seen = 0;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;

    ConstraintModel() = default;
    ConstraintModel(FeatureSpec spec, LearnerConfig config);

    bool trained() const { return samples_seen > 0; }
    bool operator==(const ConstraintModel&) const = default;
};

double sigmoid(double z);
double dot(std::span<const double> a, std::span<const double> b);

// sigmoid(theta . x), unclamped.
double predict_in_region(const ConstraintModel& model, std::span<const double> x);

// -[y ln p + (1 - y) ln(1 - p)] with p clamped to [eps, 1 - eps].
double bce_loss(double p, Feedback y, double clamp_eps);

// d/dtheta of bce_loss(predict_in_region(theta, x), y): (sigmoid(theta . x) - y) x.
std::vector<double> bce_gradient(const ConstraintModel& model, std::span<const double> x, Feedback y);

// One online update theta <- theta - eta * w_y * (sigmoid(theta . x) - y) x, where
// w_y = 1 unless class balancing is on. Throws NumericError on a non-finite step.
ConstraintModel sgd_step(const ConstraintModel& model, std::span<const double> x, Feedback y);

// Learned region g(a) >= 0 intersected with the robot box a_R <= robot_upper.
// g(a) = sum_i w_i a_i + sum_i q_i a_i^2 + offset, where the offset folds the
// state features at the query state and the bias.
struct TrustRegion {
    std::vector<double> robot_weights;
    std::vector<double> human_weights;
    std::vector<double> robot_quadratic;
    std::vector<double> human_quadratic;
    double offset = 0.0;
    std::vector<double> robot_upper;
    bool trained = false;

    double robot_margin(std::span<const double> robot) const;
    double human_margin(std::span<const double> human) const;
    double margin(std::span<const double> robot, std::span<const double> human) const {
        return offset + robot_margin(robot) + human_margin(human);
    }
    bool within_robot_box(std::span<const double> robot) const;
};

TrustRegion extract_trust_region(const ConstraintModel& model, const State& s,
                                 std::span<const double> robot_upper);

bool region_contains(const TrustRegion& tr, std::span<const double> robot, std::span<const double> human);

enum class Agent : std::uint8_t { robot, human };

// Values v of coordinate (agent, dim) where g changes sign with the other
// coordinates held at `ref`; sorted ascending. Empty when g is constant along it.
std::vector<double> boundary_crossings(const TrustRegion& tr, Agent agent, std::size_t dim,
                                       const JointAction& ref);

// Point on [lo, hi] along (agent, dim) where the region is left when moving
// towards hi; hi when the whole segment is inside, lo when none of it is.
double boundary_on_segment(const TrustRegion& tr, Agent agent, std::size_t dim, const JointAction& ref,
                           double lo, double hi);

// Plain-text key = value checkpoint. `config_echo` is written as config.<key> lines.
void save_checkpoint(const ConstraintModel& model, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& config_echo = {});

struct Checkpoint {
    ConstraintModel model;
    std::map<std::string, std::string> config_echo;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace coassist
