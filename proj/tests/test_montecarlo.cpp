#include <doctest.h>

#include <cmath>
#include <sstream>

#include "srnlsd/errors.hpp"
#include "srnlsd/montecarlo.hpp"

using namespace srnlsd;

namespace {

ExperimentGrid small_grid() {
    ExperimentGrid g;
    g.t_values = {40, 80};
    g.axis = GridAxis::N;
    g.axis_values = {1, 3};
    g.fixed_dim = 2;
    g.df = 7.0;
    g.replications = 60;
    g.master_seed = 99;
    return g;
}

ReplicationOutcome always_reject(const SeriesMatrix&, const TransformSpec&, const ExperimentGrid&) {
    return {Decision::Reject, Decision::Reject};
}

}  // namespace

TEST_CASE("seed mixing is SplitMix64") {
    // First output of the reference SplitMix64 generator seeded with 0.
    CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(replication_seed(1, 0, 0, 4.0, 0) != replication_seed(1, 0, 0, 4.0, 1));
    CHECK(replication_seed(1, 0, 0, 4.0, 0) != replication_seed(1, 0, 0, 10.0, 0));
    CHECK(replication_seed(1, 0, 1, 4.0, 0) != replication_seed(1, 1, 0, 4.0, 0));
    CHECK(replication_seed(1, 2, 3, 7.0, 5) == replication_seed(1, 2, 3, 7.0, 5));
}

TEST_CASE("unit-variance Student-t draws") {
    const auto x = sample_student_t_unit_variance(1000, 1000, 10.0, 321);
    const double n = static_cast<double>(x.values().size());
    const double mean = x.values().mean();
    const double var = (x.values().array() - mean).square().sum() / (n - 1.0);
    CHECK(var >= 0.99);
    CHECK(var <= 1.01);
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(n));

    const auto heavy = sample_student_t_unit_variance(1, 200000, 4.0, 5);
    const double hm = heavy.values().mean();
    CHECK(std::abs(hm) <= 4.0 / std::sqrt(200000.0));

    CHECK(sample_student_t_unit_variance(3, 50, 4.0, 77).values() == sample_student_t_unit_variance(3, 50, 4.0, 77).values());
    CHECK(sample_student_t_unit_variance(3, 50, 4.0, 77).values() != sample_student_t_unit_variance(3, 50, 4.0, 78).values());
    CHECK_THROWS_AS((void)sample_student_t_unit_variance(1, 10, 2.0, 1), InvalidDf);
    CHECK_THROWS_AS((void)sample_student_t_unit_variance(1, 10, 1.5, 1), InvalidDf);
}

TEST_CASE("always-reject stub yields unit rates") {
    RunOptions options;
    options.evaluator = always_reject;
    const auto result = run_size_experiment(small_grid(), options);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(result.rate_nlsd(i, j) == 1.0);
            CHECK(result.rate_srnlsd(i, j) == 1.0);
        }
}

TEST_CASE("failures make a rate unavailable without aborting the grid") {
    RunOptions options;
    options.evaluator = [](const SeriesMatrix& raw, const TransformSpec&, const ExperimentGrid&) {
        return ReplicationOutcome{raw.rows() > 2 ? Decision::Failed : Decision::Accept, Decision::Accept};
    };
    const auto result = run_size_experiment(small_grid(), options);
    CHECK(result.rate_nlsd(0, 0) == 0.0);
    CHECK_FALSE(result.rate_nlsd(0, 1).has_value());
    CHECK(result.cell(0, 1).nlsd.failures == 60);
    CHECK(result.rate_srnlsd(0, 1) == 0.0);
}

TEST_CASE("results do not depend on the number of workers") {
    const auto grid = small_grid();
    RunOptions serial;
    serial.workers = 1;
    RunOptions parallel;
    parallel.workers = 4;
    const auto a = run_size_experiment(grid, serial);
    const auto b = run_size_experiment(grid, parallel);
    const auto c = run_size_experiment(grid, serial);
    CHECK(size_csv({a}) == size_csv({b}));
    CHECK(size_csv({a}) == size_csv({c}));
    for (const auto& cell : a.cells) {
        CHECK(cell.nlsd.rejections <= grid.replications);
        CHECK(cell.srnlsd.rejections <= grid.replications);
    }
}

TEST_CASE("rates are counts over replications") {
    const auto result = run_size_experiment(small_grid());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const auto r = result.rate_srnlsd(i, j);
            REQUIRE(r.has_value());
            CHECK(*r >= 0.0);
            CHECK(*r <= 1.0);
            const double count = *r * 60.0;
            CHECK(count == std::round(count));
        }
}

TEST_CASE("high-dimensional cells are flagged and still run") {
    ExperimentGrid g = small_grid();
    g.t_values = {12};
    g.axis_values = {2, 8};  // p = 4 and p = 16
    g.replications = 20;
    const auto result = run_size_experiment(g);
    CHECK_FALSE(result.cell(0, 0).high_dimensional);
    CHECK(result.cell(0, 1).high_dimensional);
    CHECK(result.cell(0, 1).nlsd.failures == 20);
    CHECK_FALSE(result.rate_nlsd(0, 1).has_value());
    CHECK(result.cell(0, 1).srnlsd.failures == 0);
}

TEST_CASE("grid validation") {
    ExperimentGrid g = small_grid();
    g.df = 2.0;
    CHECK_THROWS_AS((void)run_size_experiment(g), InvalidDf);
    g = small_grid();
    g.replications = 0;
    CHECK_THROWS_AS((void)run_size_experiment(g), DomainError);
    g = small_grid();
    g.t_values = {1};
    CHECK_THROWS_AS((void)run_size_experiment(g), DomainError);
}

TEST_CASE("presets") {
    const auto desk = make_preset(Preset::Fig1, Scale::Desk, 42);
    REQUIRE(desk.size() == 2);
    CHECK(desk[0].df == 4.0);
    CHECK(desk[1].df == 10.0);
    CHECK(desk[0].t_values == std::vector<std::size_t>{100, 300, 1000});
    CHECK(desk[0].axis_values == std::vector<std::size_t>{2, 6, 10});
    CHECK(desk[0].axis == GridAxis::N);
    CHECK(desk[0].fixed_dim == 2);
    CHECK(desk[0].replications == 500);
    CHECK(desk[0].transforms(1) == TransformSpec::powers(2));
    CHECK(desk[0].n_series(1) == 6);

    const auto full = make_preset(Preset::Fig2, Scale::Full, 42);
    REQUIRE(full.size() == 3);
    CHECK(full[1].df == 7.0);
    CHECK(full[0].t_values.size() == 10);
    CHECK(full[0].t_values.front() == 100);
    CHECK(full[0].t_values.back() == 1000);
    CHECK(full[0].axis_values.size() == 10);
    CHECK(full[0].axis_values.back() == 20);
    CHECK(full[0].axis == GridAxis::K);
    CHECK(full[0].n_series(4) == 2);
    CHECK(full[0].transforms(4) == TransformSpec::powers(10));
    CHECK(full[0].replications == 1000);

    // Row count of the full fig2 CSV: 10 T x 10 K x 3 df x 2 tests.
    std::vector<SizeGrid> grids;
    for (auto g : full) {
        g.replications = 1;
        RunOptions stub;
        stub.evaluator = always_reject;
        grids.push_back(run_size_experiment(g, stub));
    }
    std::istringstream csv(size_csv(grids));
    std::string line;
    std::size_t rows = 0;
    std::getline(csv, line);
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 600);

    CHECK_THROWS_AS((void)parse_preset("fig3"), ParseError);
    CHECK_THROWS_AS((void)parse_scale("huge"), ParseError);
}

TEST_CASE("CSV format and round trip") {
    RunOptions options;
    options.evaluator = [](const SeriesMatrix& raw, const TransformSpec&, const ExperimentGrid&) {
        const bool odd = raw.values()(0, 0) > 0.0;
        return ReplicationOutcome{raw.cols() == 40 && raw.rows() == 3 ? Decision::Failed
                                  : odd                                ? Decision::Reject
                                                                       : Decision::Accept,
                                  odd ? Decision::Accept : Decision::Reject};
    };
    ExperimentGrid g2 = small_grid();
    g2.df = 4.5;
    const std::vector<SizeGrid> grids{run_size_experiment(small_grid(), options), run_size_experiment(g2, options)};
    const std::string text = size_csv(grids);
    CHECK(text.rfind("T,axis2_name,axis2_value,df,test,rate,failures,replications\n", 0) == 0);
    CHECK(text.find("\n40,N,1,7,nlsd,") != std::string::npos);
    CHECK(text.find("\n40,N,3,7,nlsd,NA,60,60\n") != std::string::npos);
    CHECK(text.find("\n80,N,3,4.5,srnlsd,") != std::string::npos);

    std::istringstream in(text);
    const auto back = read_size_csv(in);
    REQUIRE(back.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(back[k].grid.t_values == grids[k].grid.t_values);
        CHECK(back[k].grid.axis_values == grids[k].grid.axis_values);
        CHECK(back[k].grid.axis == grids[k].grid.axis);
        CHECK(back[k].grid.df == grids[k].grid.df);
        CHECK(back[k].grid.replications == grids[k].grid.replications);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(back[k].rate_nlsd(i, j) == grids[k].rate_nlsd(i, j));
                CHECK(back[k].rate_srnlsd(i, j) == grids[k].rate_srnlsd(i, j));
                CHECK(back[k].cell(i, j).nlsd.failures == grids[k].cell(i, j).nlsd.failures);
            }
    }
    CHECK(size_csv(back) == text);

    std::istringstream bad_header("T,N,rate\n");
    CHECK_THROWS_AS((void)read_size_csv(bad_header), ParseError);
    std::istringstream bad_value("T,axis2_name,axis2_value,df,test,rate,failures,replications\n100,N,2,4,nlsd,abc,0,10\n");
    try {
        (void)read_size_csv(bad_value);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
        CHECK(e.column() == 6);
    }
    std::istringstream incomplete("T,axis2_name,axis2_value,df,test,rate,failures,replications\n100,N,2,4,nlsd,0.1,0,10\n");
    CHECK_THROWS_AS((void)read_size_csv(incomplete), ParseError);
}

TEST_CASE("JSON echo") {
    RunOptions options;
    options.evaluator = always_reject;
    const auto j = to_json(run_size_experiment(small_grid(), options));
    CHECK(j["grid"]["df"] == 7.0);
    CHECK(j["grid"]["master_seed"] == 99);
    CHECK(j["rates_nlsd"].size() == 2);
    CHECK(j["rates_nlsd"][1][1] == 1.0);
    CHECK(j["high_dimensional"][0][0] == false);
}

TEST_CASE("shrinkage is no more liberal than NLSD in high dimension") {
    ExperimentGrid g;
    g.t_values = {100};
    g.axis = GridAxis::N;
    g.axis_values = {10, 20};
    g.fixed_dim = 2;
    g.df = 10.0;
    g.replications = 300;
    g.master_seed = 5;
    const auto result = run_size_experiment(g);
    for (std::size_t j = 0; j < 2; ++j) {
        const auto nl = result.rate_nlsd(0, j);
        const auto sr = result.rate_srnlsd(0, j);
        REQUIRE(nl.has_value());
        REQUIRE(sr.has_value());
        const double se = std::sqrt(*nl * (1.0 - *nl) / 300.0);
        CHECK(*sr <= *nl + 2.0 * se);
    }
}
