#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace coassist {

inline constexpr std::array<const char*, 6> kFtChannels{"fx", "fy", "fz", "tx", "ty", "tz"};

struct FtLogRow {
    std::string run;
    double t = 0.0;
    std::array<double, 6> wrench{};
};

// Rows of a `run,t,fx,fy,fz,tx,ty,tz` log in file order. Unparseable rows
// raise IoError with the line number.
std::vector<FtLogRow> read_ft_log(const std::filesystem::path& path);

struct FtSeriesRow {
    std::string channel;
    double t = 0.0;
    double mean = 0.0;
    double std = 0.0;

    static std::vector<std::string> csv_header();
    std::vector<std::string> csv_fields() const;
};

struct FtAnalysis {
    std::vector<FtSeriesRow> rows;
    std::size_t runs = 0;
    std::size_t aligned_length = 0;
    std::vector<std::string> warnings;
};

// Per-channel mean and sample standard deviation across the first `n_runs`
// runs (in order of first appearance), aligned by position within each run
// and truncated to the shortest. Rows are channel-major; `t` is taken from
// the first run.
FtAnalysis analyze_ft(const std::vector<FtLogRow>& log, std::size_t n_runs);
FtAnalysis analyze_ft(const std::filesystem::path& log_path, std::size_t n_runs);

void write_ft_analysis(const FtAnalysis& analysis, const std::filesystem::path& path);

} // namespace coassist
