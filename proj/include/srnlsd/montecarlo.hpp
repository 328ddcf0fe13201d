#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srnlsd/moments.hpp"
#include "srnlsd/transforms.hpp"

namespace srnlsd {

// ---------------------------------------------------------------------------
// Seeding
//
// Every replication owns an independent std::mt19937_64 stream whose seed is
//
//   s = mix64(master_seed)
//   s = mix64(s ^ t_index)
//   s = mix64(s ^ axis_index)
//   s = mix64(s ^ bit_cast<uint64_t>(df))
//   s = mix64(s ^ replication)
//
// where mix64 is the SplitMix64 output function:
//
//   z += 0x9e3779b97f4a7c15
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   return z ^ (z >> 31)
//
// Seeds depend only on grid coordinates, so results do not depend on how
// replications are scheduled across workers.
// ---------------------------------------------------------------------------

[[nodiscard]] std::uint64_t mix64(std::uint64_t z) noexcept;

[[nodiscard]] std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t t_index,
                                             std::size_t axis_index, double df,
                                             std::size_t replication) noexcept;

/**
 * n_rows x n_cols matrix of i.i.d. Student-t(df) draws scaled by sqrt((df-2)/df)
 * to unit variance. Draws fill the matrix column by column (one observation
 * at a time). Throws InvalidDf unless df > 2.
 */
[[nodiscard]] SeriesMatrix sample_student_t_unit_variance(std::size_t n_rows, std::size_t n_cols, double df,
                                                          std::uint64_t seed);

/// Which dimension varies along the second grid axis.
enum class GridAxis { N, K };

[[nodiscard]] std::string_view to_string(GridAxis axis);

struct ExperimentGrid {
    std::vector<std::size_t> t_values;
    GridAxis axis = GridAxis::N;
    std::vector<std::size_t> axis_values;
    /// K (number of powers) when the axis is N; N when the axis is K.
    std::size_t fixed_dim = 2;
    double df = 10.0;
    std::size_t max_lag = 1;
    std::size_t replications = 500;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    MeanCorrection mean_correction = MeanCorrection::AsWritten;

    /// Throws InvalidDf for df <= 2 and DomainError for other invalid settings.
    void validate() const;

    [[nodiscard]] std::size_t n_series(std::size_t axis_index) const;
    [[nodiscard]] std::size_t n_transforms(std::size_t axis_index) const;
    /// Powers 1..K for the given column of the grid.
    [[nodiscard]] TransformSpec transforms(std::size_t axis_index) const;
};

enum class Preset { Fig1, Fig2 };
enum class Scale { Desk, Full };

[[nodiscard]] Preset parse_preset(std::string_view text);
[[nodiscard]] Scale parse_scale(std::string_view text);

/**
 * One grid per degrees-of-freedom value.
 *
 * fig1 varies N with K = 2 (level and square); fig2 varies K (powers 1..K)
 * with N = 2. The desk scale runs T in {100, 300, 1000}, axis in {2, 6, 10},
 * df in {4, 10} with 500 replications. The full scale runs T = 100..1000 and
 * axis = 2..20 in steps, df in {4, 7, 10} with 1000 replications.
 */
[[nodiscard]] std::vector<ExperimentGrid> make_preset(Preset preset, Scale scale, std::uint64_t seed);

enum class Decision : std::uint8_t { Accept, Reject, Failed };

struct ReplicationOutcome {
    Decision nlsd = Decision::Failed;
    Decision srnlsd = Decision::Failed;
};

/// Evaluates one simulated N x T dataset; the default runs both tests at the grid's level.
using ReplicationEvaluator =
    std::function<ReplicationOutcome(const SeriesMatrix& raw, const TransformSpec& spec, const ExperimentGrid& grid)>;

[[nodiscard]] ReplicationOutcome evaluate_both_tests(const SeriesMatrix& raw, const TransformSpec& spec,
                                                     const ExperimentGrid& grid);

struct TestTally {
    std::size_t rejections = 0;
    std::size_t failures = 0;
};

struct CellResult {
    TestTally nlsd;
    TestTally srnlsd;
    /// p = N*K is at least T.
    bool high_dimensional = false;
};

struct SizeGrid {
    ExperimentGrid grid;
    /// Row-major: cells[t_index * axis_values.size() + axis_index].
    std::vector<CellResult> cells;
    double elapsed_seconds = 0.0;

    [[nodiscard]] const CellResult& cell(std::size_t t_index, std::size_t axis_index) const;
    /// Rejection fraction, or nullopt when any replication failed.
    [[nodiscard]] std::optional<double> rate_nlsd(std::size_t t_index, std::size_t axis_index) const;
    [[nodiscard]] std::optional<double> rate_srnlsd(std::size_t t_index, std::size_t axis_index) const;
};

[[nodiscard]] std::optional<double> rejection_rate(const TestTally& tally, std::size_t replications);

struct RunOptions {
    /// 0 selects std::thread::hardware_concurrency().
    std::size_t workers = 1;
    ReplicationEvaluator evaluator;
};

/**
 * Runs `replications` null datasets per (T, axis) cell and counts rejections
 * of both tests. Failures inside a replication are tallied per test and never
 * abort the grid. Results are identical for any number of workers.
 */
[[nodiscard]] SizeGrid run_size_experiment(const ExperimentGrid& grid, const RunOptions& options = {});

/// Long-format CSV; header `T,axis2_name,axis2_value,df,test,rate,failures,replications`.
void write_size_csv(std::ostream& out, const std::vector<SizeGrid>& grids);
[[nodiscard]] std::string size_csv(const std::vector<SizeGrid>& grids);

/// One row of the long-format size CSV.
struct SizeRecord {
    std::size_t t = 0;
    GridAxis axis = GridAxis::N;
    std::size_t axis_value = 0;
    double df = 0.0;
    bool srnlsd = false;
    std::optional<double> rate;
    std::size_t failures = 0;
    std::size_t replications = 0;
};

/// Parses and validates every row; ParseError carries the 1-based row and column.
[[nodiscard]] std::vector<SizeRecord> read_size_records(std::istream& in);

/// Inverse of write_size_csv. Recovers counts, axes, df and replications; one grid per df.
[[nodiscard]] std::vector<SizeGrid> read_size_csv(std::istream& in);

[[nodiscard]] nlohmann::json to_json(const SizeGrid& grid);

}  // namespace srnlsd
