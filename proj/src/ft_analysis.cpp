#include "coassist/ft_analysis.hpp"

#include "coassist/csv.hpp"
#include "coassist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

namespace coassist {

std::vector<FtLogRow> read_ft_log(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::vector<std::string> expected{"run", "t", "fx", "fy", "fz", "tx", "ty", "tz"};
    if (table.header != expected) {
        throw IoError(path.string() + ": header must be run,t,fx,fy,fz,tx,ty,tz");
    }
    std::vector<FtLogRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& fields = table.rows[i];
        const std::string where = path.string() + ":" + std::to_string(table.line_numbers[i]);
        if (fields.size() != expected.size()) {
            throw IoError(where + ": expected 8 fields, got " + std::to_string(fields.size()));
        }
        FtLogRow row;
        row.run = fields[0];
        if (row.run.empty()) {
            throw IoError(where + ": empty run id");
        }
        auto t = parse_double(fields[1]);
        if (!t || !std::isfinite(*t)) {
            throw IoError(where + ": unparseable t '" + fields[1] + "'");
        }
        row.t = *t;
        for (std::size_t c = 0; c < 6; ++c) {
            auto v = parse_double(fields[c + 2]);
            if (!v || !std::isfinite(*v)) {
                throw IoError(where + ": unparseable " + kFtChannels[c] + " '" + fields[c + 2] + "'");
            }
            row.wrench[c] = *v;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> FtSeriesRow::csv_header() { return {"channel", "t", "mean", "std"}; }

std::vector<std::string> FtSeriesRow::csv_fields() const {
    return {channel, format_double(t), format_double(mean), format_double(std)};
}

FtAnalysis analyze_ft(const std::vector<FtLogRow>& log, std::size_t n_runs) {
    if (n_runs < 1) {
        throw ConfigError("must be >= 1", "runs");
    }
    std::vector<std::string> order;
    std::map<std::string, std::vector<const FtLogRow*>> by_run;
    for (const auto& row : log) {
        auto& series = by_run[row.run];
        if (series.empty()) {
            order.push_back(row.run);
        } else if (row.t < series.back()->t) {
            throw IoError("run '" + row.run + "': timestamps decrease at t = " + format_double(row.t));
        }
        series.push_back(&row);
    }
    if (order.size() < n_runs) {
        throw IoError("log holds " + std::to_string(order.size()) + " runs, " + std::to_string(n_runs) +
                      " requested");
    }

    FtAnalysis out;
    out.runs = n_runs;
    std::vector<std::span<const FtLogRow* const>> runs;
    out.aligned_length = by_run[order[0]].size();
    for (std::size_t r = 0; r < n_runs; ++r) {
        const auto& series = by_run[order[r]];
        runs.emplace_back(series);
        out.aligned_length = std::min(out.aligned_length, series.size());
    }
    if (n_runs == 1) {
        out.warnings.push_back("single run: standard deviation is reported as zero");
    }

    out.rows.reserve(6 * out.aligned_length);
    for (std::size_t c = 0; c < 6; ++c) {
        for (std::size_t k = 0; k < out.aligned_length; ++k) {
            // Welford update across runs.
            double mean = 0.0;
            double m2 = 0.0;
            for (std::size_t r = 0; r < n_runs; ++r) {
                const double x = runs[r][k]->wrench[c];
                const double d = x - mean;
                mean += d / static_cast<double>(r + 1);
                m2 += d * (x - mean);
            }
            const double var = n_runs > 1 ? m2 / static_cast<double>(n_runs - 1) : 0.0;
            out.rows.push_back(FtSeriesRow{kFtChannels[c], runs[0][k]->t, mean, std::sqrt(std::max(0.0, var))});
        }
    }
    return out;
}

FtAnalysis analyze_ft(const std::filesystem::path& log_path, std::size_t n_runs) {
    return analyze_ft(read_ft_log(log_path), n_runs);
}

void write_ft_analysis(const FtAnalysis& analysis, const std::filesystem::path& path) {
    write_csv(std::span<const FtSeriesRow>(analysis.rows), path);
}

} // namespace coassist
