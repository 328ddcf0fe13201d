#include "srnlsd/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "srnlsd/errors.hpp"
#include "srnlsd/montecarlo.hpp"
#include "srnlsd/plot.hpp"
#include "srnlsd/testkit.hpp"

namespace srnlsd::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return first < last ? std::string(first, last) : std::string{};
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

SeriesMatrix read_series_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);

        if (first_content) {
            first_content = false;
            width = fields.size();
            const bool header = std::any_of(fields.begin(), fields.end(),
                                            [](const std::string& f) { return !f.empty() && !parse_number(f); });
            if (header) continue;
        }
        if (fields.size() != width) {
            throw ParseError("row " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                 " columns, expected " + std::to_string(width),
                             line_no, 0);
        }
        std::vector<double> values;
        values.reserve(width);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c].empty()) {
                throw ParseError("missing value at row " + std::to_string(line_no) + ", column " +
                                     std::to_string(c + 1),
                                 line_no, c + 1);
            }
            const auto v = parse_number(fields[c]);
            if (!v) {
                throw ParseError("non-numeric value '" + fields[c] + "' at row " + std::to_string(line_no) +
                                     ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            }
            values.push_back(*v);
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw ParseError("input contains no data rows");

    Matrix m(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t n = 0; n < width; ++n) {
            m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t)) = rows[t][n];
        }
    }
    return SeriesMatrix(std::move(m));
}

int cmd_test(const TestArgs& args, std::ostream& out, std::ostream& err) {
    try {
        TestConfig config;
        config.max_lag = args.lags;
        config.transforms = TransformSpec::parse(args.transforms);
        config.shrinkage = parse_shrinkage_mode(args.shrinkage);
        config.alpha = args.alpha;
        config.mean_correction = parse_mean_correction(args.mean_correction);

        std::ifstream file(args.input);
        if (!file) {
            err << "error: cannot open input file '" << args.input << "'\n";
            return kExitError;
        }
        const SeriesMatrix raw = read_series_csv(file);
        const TestReport report = run_test(raw, config);
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';
        if (args.format == "tsv") {
            out << to_tsv(report) << '\n';
        } else {
            out << to_json(report).dump(2) << '\n';
        }
        return report.reject ? kExitReject : kExitNoReject;
    } catch (const NotPositiveDefinite& e) {
        err << "error: NotPositiveDefinite: " << e.what() << '\n';
        return kExitError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

namespace {

void print_summary(std::ostream& out, const SizeGrid& g) {
    out << "df=" << g.grid.df << "  replications=" << g.grid.replications << "  axis=" << to_string(g.grid.axis)
        << "  (cells: NLSD / SR-NLSD rejection rate)\n";
    out << std::setw(6) << "T";
    for (auto v : g.grid.axis_values) out << std::setw(16) << (std::string(to_string(g.grid.axis)) + "=" + std::to_string(v));
    out << '\n';
    const auto cell_text = [](const std::optional<double>& r) {
        if (!r) return std::string("NA");
        std::ostringstream os;
        os << std::fixed << std::setprecision(3) << *r;
        return os.str();
    };
    for (std::size_t i = 0; i < g.grid.t_values.size(); ++i) {
        out << std::setw(6) << g.grid.t_values[i];
        for (std::size_t j = 0; j < g.grid.axis_values.size(); ++j) {
            out << std::setw(16) << (cell_text(g.rate_nlsd(i, j)) + " / " + cell_text(g.rate_srnlsd(i, j)));
        }
        out << '\n';
    }
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        if (!args.seed) {
            err << "error: --seed is required for simulate\n";
            return kExitUsage;
        }
        auto grids = make_preset(parse_preset(args.preset), parse_scale(args.scale), *args.seed);
        const MeanCorrection mc = parse_mean_correction(args.mean_correction);
        if (!args.df_values.empty()) {
            std::vector<ExperimentGrid> custom;
            for (double df : args.df_values) {
                ExperimentGrid g = grids.front();
                g.df = df;
                custom.push_back(std::move(g));
            }
            grids = std::move(custom);
        }
        for (auto& g : grids) {
            if (args.replications) g.replications = *args.replications;
            if (!args.t_values.empty()) g.t_values = args.t_values;
            if (!args.axis_values.empty()) g.axis_values = args.axis_values;
            g.max_lag = args.lags;
            g.alpha = args.alpha;
            g.mean_correction = mc;
            g.validate();
        }

        RunOptions options;
        options.workers = args.workers;
        std::vector<SizeGrid> results;
        for (const auto& g : grids) {
            results.push_back(run_size_experiment(g, options));
            if (!args.quiet) print_summary(out, results.back());
        }

        if (args.output.empty()) {
            write_size_csv(out, results);
        } else {
            std::ofstream file(args.output, std::ios::binary);
            if (!file) {
                err << "error: cannot write '" << args.output << "'\n";
                return kExitError;
            }
            write_size_csv(file, results);
        }
        if (!args.json_output.empty()) {
            nlohmann::json doc = nlohmann::json::array();
            for (const auto& r : results) doc.push_back(to_json(r));
            std::ofstream file(args.json_output);
            if (!file) {
                err << "error: cannot write '" << args.json_output << "'\n";
                return kExitError;
            }
            file << doc.dump(2) << '\n';
        }
        return kExitNoReject;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream file(args.input);
        if (!file) {
            err << "error: cannot open input file '" << args.input << "'\n";
            return kExitError;
        }
        const auto records = read_size_records(file);
        HeatmapOptions options;
        options.nominal = args.nominal;
        const std::string svg = render_size_heatmap(records, options);
        if (args.output.empty()) {
            out << svg;
        } else {
            std::ofstream dst(args.output, std::ios::binary);
            if (!dst) {
                err << "error: cannot write '" << args.output << "'\n";
                return kExitError;
            }
            dst << svg;
        }
        return kExitNoReject;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shrinkage-regularized nonlinear serial dependence (SR-NLSD) test"};
    app.name("srnlsd");
    app.require_subcommand(1);

    TestArgs test_args;
    auto* test = app.add_subcommand("test", "Test a CSV series for linear and nonlinear serial dependence");
    test->add_option("input", test_args.input, "CSV file: rows are time, columns are variables")
        ->required()
        ->check(CLI::ExistingFile);
    test->add_option("--lags", test_args.lags, "Maximum lag H")->check(CLI::PositiveNumber)->capture_default_str();
    test->add_option("--transforms", test_args.transforms, "Transform list, e.g. pow:1,pow:2,abs,log")
        ->capture_default_str();
    test->add_option("--shrinkage", test_args.shrinkage, "Lag-0 covariance estimator")
        ->check(CLI::IsMember({"lw", "none"}))
        ->capture_default_str();
    test->add_option("--alpha", test_args.alpha, "Significance level")->capture_default_str();
    test->add_option("--mean-correction", test_args.mean_correction, "Autocovariance mean correction")
        ->check(CLI::IsMember({"as-written", "grand-mean"}))
        ->capture_default_str();
    test->add_option("--format", test_args.format, "Report format")
        ->check(CLI::IsMember({"json", "tsv"}))
        ->capture_default_str();

    SimulateArgs sim_args;
    std::uint64_t seed = 0;
    auto* sim = app.add_subcommand("simulate", "Run an empirical-size Monte Carlo experiment");
    sim->add_option("--preset", sim_args.preset, "fig1 (vary N, K=2) or fig2 (vary K, N=2)")
        ->check(CLI::IsMember({"fig1", "fig2"}))
        ->capture_default_str();
    sim->add_option("--scale", sim_args.scale, "desk or full grid")
        ->check(CLI::IsMember({"desk", "full"}))
        ->capture_default_str();
    auto* seed_opt = sim->add_option("--seed", seed, "Master seed")->required();
    sim->add_option("-o,--output", sim_args.output, "Output CSV (default: stdout)");
    sim->add_option("--json", sim_args.json_output, "Also write the size grids as JSON");
    sim->add_option("--workers", sim_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
    sim->add_option("--reps", sim_args.replications, "Override the replication count");
    sim->add_option("--T-values", sim_args.t_values, "Override sample sizes")->delimiter(',');
    sim->add_option("--axis-values", sim_args.axis_values, "Override N (fig1) or K (fig2) values")->delimiter(',');
    sim->add_option("--df-values", sim_args.df_values, "Override Student-t degrees of freedom")->delimiter(',');
    sim->add_option("--lags", sim_args.lags, "Maximum lag H")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--alpha", sim_args.alpha, "Significance level")->capture_default_str();
    sim->add_option("--mean-correction", sim_args.mean_correction, "Autocovariance mean correction")
        ->check(CLI::IsMember({"as-written", "grand-mean"}))
        ->capture_default_str();
    sim->add_flag("-q,--quiet", sim_args.quiet, "Do not print the summary table");

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render a size-grid CSV as an SVG heatmap");
    plot->add_option("input", plot_args.input, "CSV written by simulate")->required()->check(CLI::ExistingFile);
    plot->add_option("-o,--output", plot_args.output, "Output SVG (default: stdout)");
    plot->add_option("--nominal", plot_args.nominal, "Nominal level at the color-scale midpoint")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    if (*test) return cmd_test(test_args, out, err);
    if (*sim) {
        if (*seed_opt) sim_args.seed = seed;
        // Summary goes to stdout only when the CSV does not.
        if (sim_args.output.empty()) sim_args.quiet = true;
        return cmd_simulate(sim_args, out, err);
    }
    return cmd_plot(plot_args, out, err);
}

}  // namespace srnlsd::cli
