#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "unroll/bench.hpp"

using namespace unroll;

namespace {

int triple_count(int n) {
    int count = 0;
    for (int a = 1; a <= n; ++a)
        for (int b = a; b <= n; ++b)
            for (int c = b; c <= n; ++c) count += a * a + b * b == c * c;
    return count;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("names round trip") {
    for (TriplesVariant v : kAllVariants) CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_AS(parse_variant("nested"), Error);
    CHECK(bundled_model_text(TriplesVariant::Guarded).find("a**2+b**2=c**2") != std::string_view::npos);
}

TEST_CASE("27 rows with equal constraint counts") {
    BenchConfig cfg;
    cfg.n_values = {10, 20, 50};
    cfg.repeats = 3;
    auto rows = run_bench(cfg);
    REQUIRE(rows.size() == 27);
    std::map<std::int64_t, std::uint64_t> counts;
    for (const auto& r : rows) {
        CHECK(r.status == BenchStatus::Ok);
        CHECK(r.wall_time > 0);
        CHECK(r.constraints_emitted == static_cast<std::uint64_t>(triple_count(static_cast<int>(r.n))));
        counts[r.n] = r.constraints_emitted;
    }
    CHECK(counts[10] == 2);
    CHECK(counts[20] == 6);
    CHECK(counts[50] == 20);

    std::ostringstream csv;
    emit_plot_data(rows, csv);
    std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 28);
    CHECK(text.rfind("variant,pipeline,n,median_seconds,status\n", 0) == 0);
}

TEST_CASE("timeout rows stop larger n") {
    BenchConfig cfg;
    cfg.variants = {TriplesVariant::InReturn};
    cfg.pipelines = {Pipeline::Naive};
    cfg.n_values = {200, 300};
    cfg.timeout_seconds = 0.001;
    cfg.repeats = 1;
    auto rows = run_bench(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == BenchStatus::Timeout);
    std::ostringstream csv;
    emit_plot_data(rows, csv);
    CHECK(csv.str().find("in_return,naive,200,,timeout\n") != std::string::npos);
}

TEST_CASE("invalid configurations") {
    BenchConfig cfg;
    cfg.n_values = {20, 10};
    CHECK_THROWS_AS(run_bench(cfg), Error);
    cfg.n_values = {10};
    cfg.repeats = 0;
    CHECK_THROWS_AS(run_bench(cfg), Error);
    std::ostringstream out;
    CHECK_THROWS_AS(emit_plot_data({}, out), Error);
    CHECK_THROWS_AS(emit_plot_data({}, std::string("/nonexistent/dir/x.csv")), Error);
}

TEST_CASE("error rows") {
    BenchConfig cfg;
    cfg.variants = {TriplesVariant::Guarded};
    cfg.pipelines = {Pipeline::Naive};
    cfg.n_values = {0, 3};
    cfg.repeats = 1;
    auto rows = run_bench(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == BenchStatus::Error);
    CHECK(rows[1].status == BenchStatus::Ok);
}

TEST_CASE("power-law fit") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {50.0, 100.0, 150.0, 200.0}) pts.push_back({n, 2e-7 * std::pow(n, 3)});
    CHECK(fit_power_law_exponent(pts) == doctest::Approx(3.0));
    CHECK_THROWS_AS(fit_power_law_exponent({{10, 1}}), Error);
    CHECK_THROWS_AS(fit_power_law_exponent({{10, 1}, {10, 2}}), Error);
}

}
