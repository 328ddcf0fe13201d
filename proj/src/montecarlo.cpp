#include "srnlsd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <boost/random/student_t_distribution.hpp>

#include "srnlsd/chi_square.hpp"
#include "srnlsd/errors.hpp"
#include "srnlsd/shrinkage.hpp"
#include "srnlsd/testkit.hpp"

namespace srnlsd {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t t_index, std::size_t axis_index, double df,
                               std::size_t replication) noexcept {
    std::uint64_t s = mix64(master_seed);
    s = mix64(s ^ static_cast<std::uint64_t>(t_index));
    s = mix64(s ^ static_cast<std::uint64_t>(axis_index));
    s = mix64(s ^ std::bit_cast<std::uint64_t>(df));
    return mix64(s ^ static_cast<std::uint64_t>(replication));
}

SeriesMatrix sample_student_t_unit_variance(std::size_t n_rows, std::size_t n_cols, double df, std::uint64_t seed) {
    if (!(df > 2.0) || !std::isfinite(df)) {
        throw InvalidDf("Student-t degrees of freedom must exceed 2 for unit-variance scaling, got " +
                        std::to_string(df));
    }
    std::mt19937_64 engine(seed);
    boost::random::student_t_distribution<double> dist(df);
    const double scale = std::sqrt((df - 2.0) / df);
    Matrix out(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) out(r, c) = scale * dist(engine);
    }
    return SeriesMatrix(std::move(out));
}

std::string_view to_string(GridAxis axis) { return axis == GridAxis::N ? "N" : "K"; }

void ExperimentGrid::validate() const {
    if (!(df > 2.0) || !std::isfinite(df)) {
        throw InvalidDf("Student-t degrees of freedom must exceed 2, got " + std::to_string(df));
    }
    if (t_values.empty() || axis_values.empty()) throw DomainError("experiment grid has an empty axis");
    if (replications < 1) throw DomainError("replications must be at least 1");
    if (max_lag < 1) throw DomainError("the number of lags H must be at least 1");
    if (fixed_dim < 1) throw DomainError("the fixed dimension must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    for (auto t : t_values) {
        if (t <= max_lag) throw DomainError("every T must exceed H, got T=" + std::to_string(t));
    }
    for (auto v : axis_values) {
        if (v < 1) throw DomainError("axis values must be positive");
    }
}

std::size_t ExperimentGrid::n_series(std::size_t axis_index) const {
    return axis == GridAxis::N ? axis_values.at(axis_index) : fixed_dim;
}

std::size_t ExperimentGrid::n_transforms(std::size_t axis_index) const {
    return axis == GridAxis::K ? axis_values.at(axis_index) : fixed_dim;
}

TransformSpec ExperimentGrid::transforms(std::size_t axis_index) const {
    return TransformSpec::powers(static_cast<int>(n_transforms(axis_index)));
}

Preset parse_preset(std::string_view text) {
    if (text == "fig1") return Preset::Fig1;
    if (text == "fig2") return Preset::Fig2;
    throw ParseError("unknown preset '" + std::string(text) + "' (expected fig1 or fig2)");
}

Scale parse_scale(std::string_view text) {
    if (text == "desk") return Scale::Desk;
    if (text == "full") return Scale::Full;
    throw ParseError("unknown scale '" + std::string(text) + "' (expected desk or full)");
}

std::vector<ExperimentGrid> make_preset(Preset preset, Scale scale, std::uint64_t seed) {
    ExperimentGrid base;
    base.axis = preset == Preset::Fig1 ? GridAxis::N : GridAxis::K;
    base.fixed_dim = 2;
    base.max_lag = 1;
    base.alpha = 0.05;
    base.master_seed = seed;
    std::vector<double> dfs;
    if (scale == Scale::Desk) {
        base.t_values = {100, 300, 1000};
        base.axis_values = {2, 6, 10};
        base.replications = 500;
        dfs = {4.0, 10.0};
    } else {
        for (std::size_t t = 100; t <= 1000; t += 100) base.t_values.push_back(t);
        for (std::size_t v = 2; v <= 20; v += 2) base.axis_values.push_back(v);
        base.replications = 1000;
        dfs = {4.0, 7.0, 10.0};
    }
    std::vector<ExperimentGrid> out;
    for (double df : dfs) {
        ExperimentGrid g = base;
        g.df = df;
        out.push_back(std::move(g));
    }
    return out;
}

ReplicationOutcome evaluate_both_tests(const SeriesMatrix& raw, const TransformSpec& spec,
                                       const ExperimentGrid& grid) {
    ReplicationOutcome outcome;
    SeriesMatrix xa;
    std::vector<LagCovariance> gammas;
    try {
        xa = demean(apply_transforms(raw, spec));
        gammas = autocovariance_sequence(xa, grid.max_lag, grid.mean_correction);
    } catch (const Error&) {
        return outcome;
    }
    const auto dof = static_cast<double>(portmanteau_dof(xa.rows(), grid.max_lag));
    const double critical = chi_square_quantile(1.0 - grid.alpha, dof);
    const auto decide = [critical](double statistic) {
        return statistic > critical ? Decision::Reject : Decision::Accept;
    };
    try {
        outcome.nlsd = decide(nlsd_statistic(gammas, xa.cols()).statistic);
    } catch (const Error&) {
        outcome.nlsd = Decision::Failed;
    }
    try {
        const auto shrunk = shrink_covariance(gammas.front(), lw_scalars(xa, gammas.front()));
        outcome.srnlsd = decide(srnlsd_statistic(gammas, shrunk, xa.cols()).statistic);
    } catch (const Error&) {
        outcome.srnlsd = Decision::Failed;
    }
    return outcome;
}

const CellResult& SizeGrid::cell(std::size_t t_index, std::size_t axis_index) const {
    return cells.at(t_index * grid.axis_values.size() + axis_index);
}

std::optional<double> rejection_rate(const TestTally& tally, std::size_t replications) {
    if (tally.failures > 0 || replications == 0) return std::nullopt;
    return static_cast<double>(tally.rejections) / static_cast<double>(replications);
}

std::optional<double> SizeGrid::rate_nlsd(std::size_t t_index, std::size_t axis_index) const {
    return rejection_rate(cell(t_index, axis_index).nlsd, grid.replications);
}

std::optional<double> SizeGrid::rate_srnlsd(std::size_t t_index, std::size_t axis_index) const {
    return rejection_rate(cell(t_index, axis_index).srnlsd, grid.replications);
}

namespace {

void tally(TestTally& t, Decision d) {
    if (d == Decision::Reject) ++t.rejections;
    if (d == Decision::Failed) ++t.failures;
}

}  // namespace

SizeGrid run_size_experiment(const ExperimentGrid& grid, const RunOptions& options) {
    grid.validate();
    const auto start = std::chrono::steady_clock::now();
    const ReplicationEvaluator evaluator = options.evaluator ? options.evaluator : ReplicationEvaluator(evaluate_both_tests);

    const std::size_t n_t = grid.t_values.size();
    const std::size_t n_axis = grid.axis_values.size();
    const std::size_t reps = grid.replications;
    const std::size_t n_tasks = n_t * n_axis * reps;

    std::vector<TransformSpec> specs;
    specs.reserve(n_axis);
    for (std::size_t j = 0; j < n_axis; ++j) specs.push_back(grid.transforms(j));

    std::vector<ReplicationOutcome> outcomes(n_tasks);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t task = next.fetch_add(1); task < n_tasks; task = next.fetch_add(1)) {
            const std::size_t rep = task % reps;
            const std::size_t cell = task / reps;
            const std::size_t i = cell / n_axis;
            const std::size_t j = cell % n_axis;
            const auto seed = replication_seed(grid.master_seed, i, j, grid.df, rep);
            const auto raw = sample_student_t_unit_variance(grid.n_series(j), grid.t_values[i], grid.df, seed);
            outcomes[task] = evaluator(raw, specs[j], grid);
        }
    };

    std::size_t workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    workers = std::min(workers, std::max<std::size_t>(n_tasks, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    SizeGrid result;
    result.grid = grid;
    result.cells.resize(n_t * n_axis);
    for (std::size_t task = 0; task < n_tasks; ++task) {
        auto& cell = result.cells[task / reps];
        tally(cell.nlsd, outcomes[task].nlsd);
        tally(cell.srnlsd, outcomes[task].srnlsd);
    }
    for (std::size_t i = 0; i < n_t; ++i) {
        for (std::size_t j = 0; j < n_axis; ++j) {
            const std::size_t p = grid.n_series(j) * grid.n_transforms(j);
            result.cells[i * n_axis + j].high_dimensional = p >= grid.t_values[i];
        }
    }
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// CSV / JSON
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kCsvHeader = "T,axis2_name,axis2_value,df,test,rate,failures,replications";

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string rate_field(const std::optional<double>& rate) { return rate ? shortest(*rate) : "NA"; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string& text, std::size_t row, std::size_t col) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("size grid CSV: invalid value '" + text + "' at row " + std::to_string(row) +
                             ", column " + std::to_string(col),
                         row, col);
    }
    return value;
}

std::size_t index_of(std::vector<std::size_t>& values, std::size_t v) {
    const auto it = std::find(values.begin(), values.end(), v);
    if (it != values.end()) return static_cast<std::size_t>(it - values.begin());
    values.push_back(v);
    return values.size() - 1;
}

}  // namespace

void write_size_csv(std::ostream& out, const std::vector<SizeGrid>& grids) {
    out << kCsvHeader << '\n';
    for (const auto& g : grids) {
        const std::string axis_name(to_string(g.grid.axis));
        const std::string df = shortest(g.grid.df);
        for (std::size_t i = 0; i < g.grid.t_values.size(); ++i) {
            for (std::size_t j = 0; j < g.grid.axis_values.size(); ++j) {
                const auto& cell = g.cell(i, j);
                const std::string prefix = std::to_string(g.grid.t_values[i]) + ',' + axis_name + ',' +
                                           std::to_string(g.grid.axis_values[j]) + ',' + df + ',';
                out << prefix << "nlsd," << rate_field(g.rate_nlsd(i, j)) << ',' << cell.nlsd.failures << ','
                    << g.grid.replications << '\n';
                out << prefix << "srnlsd," << rate_field(g.rate_srnlsd(i, j)) << ',' << cell.srnlsd.failures
                    << ',' << g.grid.replications << '\n';
            }
        }
    }
}

std::string size_csv(const std::vector<SizeGrid>& grids) {
    std::ostringstream os;
    write_size_csv(os, grids);
    return os.str();
}

std::vector<SizeRecord> read_size_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("size grid CSV: missing header", 1, 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw ParseError("size grid CSV: unexpected header '" + line + "'", 1, 0);
    }

    std::vector<SizeRecord> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) {
            throw ParseError("size grid CSV: expected 8 fields at row " + std::to_string(row) + ", got " +
                                 std::to_string(fields.size()),
                             row, 0);
        }
        SizeRecord rec;
        rec.t = parse_field<std::size_t>(fields[0], row, 1);
        if (fields[1] == "N") {
            rec.axis = GridAxis::N;
        } else if (fields[1] == "K") {
            rec.axis = GridAxis::K;
        } else {
            throw ParseError("size grid CSV: axis2_name must be N or K at row " + std::to_string(row), row, 2);
        }
        rec.axis_value = parse_field<std::size_t>(fields[2], row, 3);
        rec.df = parse_field<double>(fields[3], row, 4);
        if (fields[4] == "nlsd") {
            rec.srnlsd = false;
        } else if (fields[4] == "srnlsd") {
            rec.srnlsd = true;
        } else {
            throw ParseError("size grid CSV: test must be nlsd or srnlsd at row " + std::to_string(row), row, 5);
        }
        if (fields[5] != "NA") {
            rec.rate = parse_field<double>(fields[5], row, 6);
            if (!(*rec.rate >= 0.0 && *rec.rate <= 1.0)) {
                throw ParseError("size grid CSV: rate outside [0, 1] at row " + std::to_string(row), row, 6);
            }
        }
        rec.failures = parse_field<std::size_t>(fields[6], row, 7);
        rec.replications = parse_field<std::size_t>(fields[7], row, 8);
        if (!rec.rate && rec.failures == 0) {
            throw ParseError("size grid CSV: NA rate without failures at row " + std::to_string(row), row, 6);
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<SizeGrid> read_size_csv(std::istream& in) {
    const auto records = read_size_records(in);

    struct Partial {
        SizeGrid grid;
        std::vector<std::pair<std::size_t, std::size_t>> coords;  // (t index, axis index) per record
        std::vector<const SizeRecord*> records;
    };
    std::vector<Partial> partials;
    std::map<std::uint64_t, std::size_t> by_df;

    for (const auto& rec : records) {
        auto [it, inserted] = by_df.try_emplace(std::bit_cast<std::uint64_t>(rec.df), partials.size());
        if (inserted) {
            Partial p;
            p.grid.grid.axis = rec.axis;
            p.grid.grid.df = rec.df;
            p.grid.grid.replications = rec.replications;
            partials.push_back(std::move(p));
        }
        auto& part = partials[it->second];
        if (part.grid.grid.axis != rec.axis || part.grid.grid.replications != rec.replications) {
            throw ParseError("size grid CSV: inconsistent axis or replications for df=" + shortest(rec.df));
        }
        part.coords.emplace_back(index_of(part.grid.grid.t_values, rec.t),
                                 index_of(part.grid.grid.axis_values, rec.axis_value));
        part.records.push_back(&rec);
    }

    std::vector<SizeGrid> out;
    for (auto& part : partials) {
        auto& g = part.grid;
        const std::size_t n_axis = g.grid.axis_values.size();
        const std::size_t n_cells = g.grid.t_values.size() * n_axis;
        g.cells.assign(n_cells, CellResult{});
        std::vector<unsigned> seen(n_cells, 0);
        for (std::size_t k = 0; k < part.records.size(); ++k) {
            const auto& rec = *part.records[k];
            const std::size_t idx = part.coords[k].first * n_axis + part.coords[k].second;
            auto& tally = rec.srnlsd ? g.cells[idx].srnlsd : g.cells[idx].nlsd;
            const unsigned bit = rec.srnlsd ? 2u : 1u;
            if (seen[idx] & bit) throw ParseError("size grid CSV: duplicate cell");
            seen[idx] |= bit;
            tally.failures = rec.failures;
            if (rec.rate) {
                tally.rejections =
                    static_cast<std::size_t>(std::llround(*rec.rate * static_cast<double>(g.grid.replications)));
            }
        }
        if (std::any_of(seen.begin(), seen.end(), [](unsigned s) { return s != 3u; })) {
            throw ParseError("size grid CSV: incomplete grid for df=" + shortest(g.grid.df));
        }
        for (std::size_t i = 0; i < g.grid.t_values.size(); ++i) {
            for (std::size_t j = 0; j < n_axis; ++j) {
                const std::size_t p = g.grid.n_series(j) * g.grid.n_transforms(j);
                g.cells[i * n_axis + j].high_dimensional = p >= g.grid.t_values[i];
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

nlohmann::json to_json(const SizeGrid& g) {
    const auto rate_json = [](const std::optional<double>& r) { return r ? nlohmann::json(*r) : nlohmann::json(); };
    nlohmann::json nlsd = nlohmann::json::array();
    nlohmann::json sr = nlohmann::json::array();
    nlohmann::json nlsd_fail = nlohmann::json::array();
    nlohmann::json sr_fail = nlohmann::json::array();
    nlohmann::json high = nlohmann::json::array();
    for (std::size_t i = 0; i < g.grid.t_values.size(); ++i) {
        nlohmann::json r1 = nlohmann::json::array(), r2 = nlohmann::json::array();
        nlohmann::json f1 = nlohmann::json::array(), f2 = nlohmann::json::array();
        nlohmann::json hd = nlohmann::json::array();
        for (std::size_t j = 0; j < g.grid.axis_values.size(); ++j) {
            r1.push_back(rate_json(g.rate_nlsd(i, j)));
            r2.push_back(rate_json(g.rate_srnlsd(i, j)));
            f1.push_back(g.cell(i, j).nlsd.failures);
            f2.push_back(g.cell(i, j).srnlsd.failures);
            hd.push_back(g.cell(i, j).high_dimensional);
        }
        nlsd.push_back(std::move(r1));
        sr.push_back(std::move(r2));
        nlsd_fail.push_back(std::move(f1));
        sr_fail.push_back(std::move(f2));
        high.push_back(std::move(hd));
    }
    nlohmann::json grid = {
        {"T_values", g.grid.t_values},
        {"alpha", g.grid.alpha},
        {"axis2_name", to_string(g.grid.axis)},
        {"axis2_values", g.grid.axis_values},
        {"df", g.grid.df},
        {"fixed_dim", g.grid.fixed_dim},
        {"lags", g.grid.max_lag},
        {"master_seed", g.grid.master_seed},
        {"mean_correction", to_string(g.grid.mean_correction)},
        {"replications", g.grid.replications},
    };
    return nlohmann::json{
        {"elapsed_seconds", g.elapsed_seconds},
        {"failures_nlsd", std::move(nlsd_fail)},
        {"failures_srnlsd", std::move(sr_fail)},
        {"grid", std::move(grid)},
        {"high_dimensional", std::move(high)},
        {"rates_nlsd", std::move(nlsd)},
        {"rates_srnlsd", std::move(sr)},
    };
}

}  // namespace srnlsd
