#include "test_support.hpp"

#include "doctest.h"

#include <cstdlib>
#include <string>
#include <sys/wait.h>

using namespace coassist;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args, const std::filesystem::path& dir) {
    const auto log = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + COASSIST_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testing::slurp(log);
    return r;
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

void write_small_config(const std::filesystem::path& path, const std::string& extra = {}) {
    testing::spill(path, "env.friction = 0.2\nenv.horizon = 4\ngrid.state_points = 21\ngrid.robot_points = 5\n"
                         "grid.human_min = 0.05\ngrid.human_points = 20\nexperiment.episodes = 4\n"
                         "eval.grid_points = 101\n" +
                             extra);
}

} // namespace

TEST_CASE("simulate writes metrics and a checkpoint, eval reads them back") {
    const auto dir = testing::scratch_dir("cli_sim");
    write_small_config(dir / "run.cfg");
    auto r = cli("simulate --config " + quoted(dir / "run.cfg") + " --seed 3 --out " + quoted(dir / "out"), dir);
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "out" / "metrics.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "model.ckpt"));
    const auto ckpt = testing::slurp(dir / "out" / "model.ckpt");
    CHECK(ckpt.find("config.experiment.seed = 3") != std::string::npos);

    r = cli("eval --checkpoint " + quoted(dir / "out" / "model.ckpt") + " --config " + quoted(dir / "run.cfg"), dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("accuracy=") != std::string::npos);
    CHECK(r.out.find("boundary_error=") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 2") {
    const auto dir = testing::scratch_dir("cli_cfg");
    write_small_config(dir / "bad.cfg", "env.bogus = 1\n");
    auto r = cli("simulate --config " + quoted(dir / "bad.cfg") + " --seed 1 --out " + quoted(dir / "out"), dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("env.bogus") != std::string::npos);

    write_small_config(dir / "worse.cfg", "labeler.delta = -1\n");
    r = cli("simulate --config " + quoted(dir / "worse.cfg") + " --seed 1 --out " + quoted(dir / "out"), dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("labeler.delta") != std::string::npos);

    r = cli("simulate --config " + quoted(dir / "bad.cfg"), dir);
    CHECK(r.code == 2);
    r = cli("frobnicate", dir);
    CHECK(r.code == 2);
    r = cli("--help", dir);
    CHECK(r.code == 0);
}

TEST_CASE("I/O problems exit with code 3") {
    const auto dir = testing::scratch_dir("cli_io");
    auto r = cli("simulate --config " + quoted(dir / "missing.cfg") + " --seed 1 --out " + quoted(dir / "out"), dir);
    CHECK(r.code == 3);
    testing::spill(dir / "log.csv", "run,t,fx,fy,fz,tx,ty,tz\na,0,1,2,3,4,5,6\na,1,x,2,3,4,5,6\n");
    r = cli("analyze-ft --log " + quoted(dir / "log.csv") + " --runs 1 --out " + quoted(dir / "ft.csv"), dir);
    CHECK(r.code == 3);
    CHECK(r.out.find(":3") != std::string::npos);
    write_small_config(dir / "run.cfg");
    r = cli("eval --checkpoint " + quoted(dir / "missing.ckpt") + " --config " + quoted(dir / "run.cfg"), dir);
    CHECK(r.code == 3);
}

TEST_CASE("analyze-ft writes the per-channel series") {
    const auto dir = testing::scratch_dir("cli_ft");
    testing::spill(dir / "log.csv", "run,t,fx,fy,fz,tx,ty,tz\na,0,1,0,0,0,0,0\na,1,1,0,0,0,0,0\n"
                                    "b,0,3,0,0,0,0,0\nb,1,3,0,0,0,0,0\n");
    auto r = cli("analyze-ft --log " + quoted(dir / "log.csv") + " --runs 2 --out " + quoted(dir / "ft.csv"), dir);
    REQUIRE(r.code == 0);
    const auto text = testing::slurp(dir / "ft.csv");
    CHECK(text.rfind("channel,t,mean,std\nfx,0,2,1.4142135623730951\n", 0) == 0);
    r = cli("analyze-ft --log " + quoted(dir / "log.csv") + " --runs 1 --out " + quoted(dir / "one.csv"), dir);
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
}
