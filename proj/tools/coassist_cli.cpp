#include "coassist/config.hpp"
#include "coassist/constraint.hpp"
#include "coassist/csv.hpp"
#include "coassist/errors.hpp"
#include "coassist/experiment.hpp"
#include "coassist/ft_analysis.hpp"
#include "coassist/joint_q.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kIo = 3, kNumeric = 4 };

int simulate(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
             const std::string& dump_q) {
    auto entries = coassist::read_config_file(config_path);
    entries.set("experiment.seed", std::to_string(seed));
    const auto cfg = coassist::build_config(entries);
    const auto q = coassist::backward_induction_q(cfg.env, cfg.make_grids(), cfg.q_beta);
    if (!dump_q.empty()) {
        coassist::write_qtable_csv(q, dump_q);
    }
    const auto result = coassist::run_experiment(cfg, q);
    coassist::write_experiment(result, cfg, out_dir);
    const auto& last = result.rows.back();
    std::cout << "episodes=" << result.rows.size() << " final_boundary_est=" << last.boundary_est
              << " fallback_steps=" << result.fallback_steps << '\n';
    return kOk;
}

int evaluate(const std::string& checkpoint_path, const std::string& config_path,
             std::optional<std::size_t> grid_points) {
    const auto cfg = coassist::load_config(config_path);
    const auto checkpoint = coassist::load_checkpoint(checkpoint_path);
    if (checkpoint.model.spec.dims != cfg.env.dims) {
        throw coassist::ConfigError("checkpoint has " + std::to_string(checkpoint.model.spec.dims) +
                                        " dimensions, config has " + std::to_string(cfg.env.dims),
                                    "env.dims");
    }
    const auto r = coassist::eval_recovery(checkpoint.model, cfg.active_profile(), cfg,
                                           grid_points.value_or(cfg.eval.grid_points));
    std::cout << "accuracy=" << coassist::format_double(r.accuracy)
              << " boundary_error=" << coassist::format_double(r.boundary_error)
              << " boundary_est=" << coassist::format_double(r.boundary_est) << '\n';
    return kOk;
}

int analyze(const std::string& log_path, std::size_t runs, const std::string& out_path) {
    const auto analysis = coassist::analyze_ft(log_path, runs);
    for (const auto& w : analysis.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    coassist::write_ft_analysis(analysis, out_path);
    std::cout << "runs=" << analysis.runs << " aligned_length=" << analysis.aligned_length << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-autonomy co-transport simulator with online trust-region learning"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string dump_q;
    auto* sim = app.add_subcommand("simulate", "Run a seeded experiment and write metrics.csv and model.ckpt");
    sim->add_option("--config", config_path, "Experiment config file")->required();
    sim->add_option("--seed", seed, "Seed overriding experiment.seed")->required();
    sim->add_option("--out", out_dir, "Output directory")->required();
    sim->add_option("--dump-q", dump_q, "Also write the Q table as CSV to this path");

    std::string checkpoint_path;
    std::string eval_config;
    std::optional<std::size_t> grid_points;
    auto* ev = app.add_subcommand("eval", "Score a checkpoint against the config's human profile");
    ev->add_option("--checkpoint", checkpoint_path, "Model checkpoint")->required();
    ev->add_option("--config", eval_config, "Experiment config file")->required();
    ev->add_option("--grid-points", grid_points, "Evaluation points per joint-action coordinate");

    std::string log_path;
    std::size_t runs = 0;
    std::string ft_out;
    auto* ft = app.add_subcommand("analyze-ft", "Per-channel mean and std across runs of an FT log");
    ft->add_option("--log", log_path, "FT log CSV (run,t,fx,fy,fz,tx,ty,tz)")->required();
    ft->add_option("--runs", runs, "Number of runs to aggregate")->required()->check(CLI::PositiveNumber);
    ft->add_option("--out", ft_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*sim) {
            return simulate(config_path, seed, out_dir, dump_q);
        }
        if (*ev) {
            return evaluate(checkpoint_path, eval_config, grid_points);
        }
        return analyze(log_path, runs, ft_out);
    } catch (const coassist::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const coassist::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const coassist::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const coassist::DegenerateProfile& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const coassist::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    }
}
