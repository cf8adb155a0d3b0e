#pragma once

#include "coassist/config.hpp"
#include "coassist/constraint.hpp"
#include "coassist/joint_q.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace coassist {

struct MetricsRow {
    std::size_t episode = 0;
    // Undiscounted sum of step rewards.
    double reward = 0.0;
    double mean_wrench_norm = 0.0;
    std::size_t neg_labels = 0;
    double boundary_est = 0.0;
    // Present only on evaluation checkpoints.
    std::optional<double> accuracy;

    static std::vector<std::string> csv_header();
    std::vector<std::string> csv_fields() const;
};

struct ExperimentResult {
    std::vector<MetricsRow> rows;
    ConstraintModel model;
    // Steps on which the robot fell back to its unconstrained policy.
    std::size_t fallback_steps = 0;
};

// Seeded episode loop: robot acts under the current trust region, the human
// responds, the wrench is labeled and (when adaptive) the model takes one SGD
// step per interaction.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const QTable& q);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes metrics.csv and model.ckpt into `out_dir`, creating it if needed.
void write_experiment(const ExperimentResult& result, const ExperimentConfig& cfg,
                      const std::filesystem::path& out_dir);

struct RecoveryResult {
    double accuracy = 0.0;
    double boundary_error = 0.0;
    double boundary_est = 0.0;
};

// Learned boundary along human axis `dim` at the evaluation state, with the
// robot at the middle of its box and the other human coordinates at the grid minimum.
double boundary_estimate(const ConstraintModel& model, const ExperimentConfig& cfg, std::size_t dim = 0);

// Agreement of region_contains with the ground-truth region (labeler fires on
// the profile's wrench and the robot stays in its box) over a uniform grid with
// `grid_points` values per joint-action coordinate. boundary_error is the
// largest per-dimension |boundary estimate - capability|.
RecoveryResult eval_recovery(const ConstraintModel& model, const HumanProfile& profile,
                             const ExperimentConfig& cfg, std::size_t grid_points);

} // namespace coassist
