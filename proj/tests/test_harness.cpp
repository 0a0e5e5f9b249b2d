#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpl/config.hpp"
#include "wpl/experiments.hpp"
#include "wpl/fit.hpp"
#include "wpl/parallel.hpp"
#include "wpl/report.hpp"

using namespace wpl;

TEST_CASE("loglog_fit: exact power laws and noise tolerance") {
    std::vector<std::pair<double, double>> sq;
    for (double x : {1.0, 2.0, 3.0, 5.0, 11.0}) sq.emplace_back(x, x * x);
    auto f = loglog_fit(sq);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.residual <= 1e-12);

    std::vector<std::pair<double, double>> flat;
    for (double x : {1.0, 4.0, 9.0}) flat.emplace_back(x, 7.5);
    CHECK(loglog_fit(flat).slope == doctest::Approx(0.0).epsilon(1e-12));

    // y = 3 x^{-1/2} with deterministic 1% multiplicative perturbation
    std::vector<std::pair<double, double>> noisy;
    Rng rng(2);
    for (int i = 0; i < 40; ++i) {
        double x = std::pow(2.0, 0.25 * i);
        noisy.emplace_back(x, 3.0 / std::sqrt(x) * (1.0 + 0.01 * (2.0 * rng.uniform() - 1.0)));
    }
    auto g = loglog_fit(noisy);
    CHECK(g.slope >= -0.55);
    CHECK(g.slope <= -0.45);
}

TEST_CASE("loglog_fit input validation") {
    CHECK_THROWS_AS(loglog_fit({{1, 1}, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(loglog_fit({{1, 1}, {2, 2}, {-3, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(loglog_fit({{1, 1}, {2, 0.0}, {3, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(loglog_fit({{2, 1}, {2, 2}, {2, 3}}), std::invalid_argument);
}

TEST_CASE("config: parsing, types, lists, errors") {
    auto cfg = ExperimentConfig::from_string(
        "# comment\n"
        "lambda = 64, 128,256\n"
        "s = 1.6\n"
        "pairs = 40\n"
        "classwise = true\n"
        "name = run-a # trailing comment\n");
    CHECK(cfg.get_double_list("lambda", {}) == std::vector<double>{64, 128, 256});
    CHECK(cfg.get_double("s", 0.0) == 1.6);
    CHECK(cfg.get_int("pairs", 0) == 40);
    CHECK(cfg.get_bool("classwise", false));
    CHECK(cfg.get_string("name", "") == "run-a");
    CHECK(cfg.get_double("missing", 2.5) == 2.5);
    CHECK(cfg.effective().at("missing") == "2.500000");

    CHECK_THROWS_AS(ExperimentConfig::from_string("not a pair\n"), std::invalid_argument);
    auto bad = ExperimentConfig::from_string("x = abc\n");
    CHECK_THROWS_AS(bad.get_double("x", 0.0), std::invalid_argument);
}

TEST_CASE("table: row width enforcement and CSV shape") {
    Table t;
    t.columns = {"a", "b"};
    t.add_row({1L, 2.5});
    CHECK_THROWS_AS(t.add_row({1L}), std::invalid_argument);
    const std::string csv = t.to_csv();
    CHECK(csv == "a,b\n1,2.5\n");
}

TEST_CASE("unknown experiment and empty grids abort with the offending key") {
    ExperimentConfig cfg;
    RunOptions opts;
    CHECK_THROWS_WITH_AS(run_experiment("no-such-thing", cfg, opts),
                         doctest::Contains("unknown experiment"), std::invalid_argument);

    auto empty = ExperimentConfig::from_string("lambda =\n");
    CHECK_THROWS_WITH_AS(run_experiment("overlap-scan", empty, opts),
                         doctest::Contains("empty parameter grid"), std::invalid_argument);
}

TEST_CASE("overlap-scan: identical config and seed give byte-identical CSV") {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64\n"
        "eps0 = 0.25\n"
        "pairs = 50\n"
        "seed = 7\n");
    RunOptions opts;
    opts.workers = 2;
    auto r1 = run_experiment("overlap-scan", cfg, opts);
    opts.workers = 1;
    auto r2 = run_experiment("overlap-scan", cfg, opts);
    CHECK(r1.table.to_csv() == r2.table.to_csv());
    CHECK(r1.table.rows.size() == 50);
    // row schema: the module columns lead in order
    const std::vector<std::string> lead{"lambda", "eps0", "t", "m", "N1", "N2", "N3", "Nlambda"};
    for (std::size_t i = 0; i < lead.size(); ++i) REQUIRE(r1.table.columns[i] == lead[i]);
    // every row carries the reference tag
    const std::size_t ref_col = r1.table.columns.size() - 1;
    CHECK(r1.table.columns[ref_col] == "ref");
    for (const auto& row : r1.table.rows) {
        REQUIRE_FALSE(std::get<std::string>(row[ref_col]).empty());
    }
}

TEST_CASE("seed override changes the sample stream") {
    auto cfg = ExperimentConfig::from_string("lambda = 64\neps0 = 0.25\npairs = 20\nseed = 7\n");
    RunOptions opts;
    auto base = run_experiment("overlap-scan", cfg, opts);
    opts.seed = 8;
    auto other = run_experiment("overlap-scan", cfg, opts);
    CHECK(base.table.to_csv() != other.table.to_csv());
}

TEST_CASE("row count arithmetic: cells x seeds sampled rows, plus the probes") {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64\n"
        "eps0 = 0.25\n"
        "seeds = 3\n"
        "k_half_over_lambda = 0.5\n"
        "j_half_over_sqrt = 1.0\n");
    RunOptions opts;
    opts.workers = 2;
    auto rep = run_experiment("dispersive-sweep", cfg, opts);
    // |lambda| x |eps0| x seeds sampled rows; the structured probes ride along
    long gaussian_rows = 0;
    const std::size_t ens_col = 2;
    for (const auto& row : rep.table.rows) {
        if (std::get<std::string>(row[ens_col]) == "gaussian") ++gaussian_rows;
    }
    CHECK(gaussian_rows == 3);
    CHECK(rep.table.rows.size() >= 5);  // + profile and ring probes
    CHECK(rep.summary.contains("ratio_max"));
    CHECK(rep.summary["config"].contains("seeds"));
    CHECK(rep.summary.contains("config_hash"));
}

TEST_CASE("defaults are recorded for every experiment") {
    for (const auto& name : experiment_names()) {
        auto d = experiment_defaults(name);
        CHECK(!d.empty());
    }
    CHECK_THROWS_AS(experiment_defaults("nope"), std::invalid_argument);
}

TEST_CASE("json summary carries provenance") {
    auto cfg = ExperimentConfig::from_string("lambda = 64\neps0 = 0.25\npairs = 5\n");
    RunOptions opts;
    auto rep = run_experiment("overlap-scan", cfg, opts);
    CHECK(rep.summary["version"] == "0.1.0");
    CHECK(rep.summary.contains("config_hash"));
    CHECK(rep.summary["config"].contains("pairs"));
}
