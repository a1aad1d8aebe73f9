#pragma once

#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unroll/expand.hpp"

namespace unroll {

/// The three formulations of the Boolean Pythagorean Triples model.
enum class TriplesVariant { Quantifier, Guarded, InReturn };

inline constexpr TriplesVariant kAllVariants[] = {TriplesVariant::Quantifier,
                                                  TriplesVariant::Guarded,
                                                  TriplesVariant::InReturn};

const char* variant_name(TriplesVariant v);  // quantifier | guarded | in_return
TriplesVariant parse_variant(std::string_view name);

/// Source text of the bundled model for `v` (models/triples_*.model).
std::string_view bundled_model_text(TriplesVariant v);

enum class BenchStatus { Ok, Timeout, Error };

struct BenchRow {
    TriplesVariant variant;
    Pipeline pipeline;
    std::int64_t n = 0;
    double wall_time = 0;  // median seconds
    std::uint64_t combinations_considered = 0;
    std::uint64_t constraints_emitted = 0;
    BenchStatus status = BenchStatus::Ok;
    std::string message;  // for Error rows
};

struct BenchConfig {
    std::vector<TriplesVariant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
    std::vector<Pipeline> pipelines{std::begin(kAllPipelines), std::end(kAllPipelines)};
    std::vector<std::int64_t> n_values;  // ascending
    double timeout_seconds = 3600;
    int repeats = 3;
    bool warm_up = true;
};

/// Runs every (variant, pipeline, n) `repeats` times after one discarded
/// warm-up and records the median. A run over the time limit records a
/// timeout row and skips the larger n for that (variant, pipeline).
std::vector<BenchRow> run_bench(const BenchConfig& config);

/// `variant,pipeline,n,median_seconds,status`; timeouts leave the time empty.
void emit_plot_data(const std::vector<BenchRow>& rows, std::ostream& out);
void emit_plot_data(const std::vector<BenchRow>& rows, const std::string& path);

const char* status_name(BenchStatus s);

/// Least-squares slope of log(time) against log(n).
double fit_power_law_exponent(const std::vector<std::pair<double, double>>& n_and_seconds);

}  // namespace unroll
