#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "srnlsd/transforms.hpp"

namespace srnlsd::cli {

inline constexpr int kExitNoReject = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitReject = 3;

/**
 * Reads a time-by-variable CSV (T rows, N columns) into an N x T series.
 * A first row containing any non-numeric cell is treated as a header.
 * Empty or non-numeric cells are hard errors naming the 1-based file row
 * and column.
 */
[[nodiscard]] SeriesMatrix read_series_csv(std::istream& in);

struct TestArgs {
    std::string input;
    std::size_t lags = 1;
    std::string transforms = "pow:1,pow:2";
    std::string shrinkage = "lw";
    double alpha = 0.05;
    std::string mean_correction = "as-written";
    std::string format = "json";
};

struct SimulateArgs {
    std::string preset = "fig1";
    std::string scale = "desk";
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string json_output;
    std::size_t workers = 0;
    std::optional<std::size_t> replications;
    std::vector<std::size_t> t_values;
    std::vector<std::size_t> axis_values;
    std::vector<double> df_values;
    std::size_t lags = 1;
    double alpha = 0.05;
    std::string mean_correction = "as-written";
    bool quiet = false;
};

struct PlotArgs {
    std::string input;
    std::string output;
    double nominal = 0.05;
};

int cmd_test(const TestArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srnlsd::cli
