#include "unroll/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "bundled_models.hpp"
#include "unroll/parser.hpp"

namespace unroll {

const char* variant_name(TriplesVariant v) {
    switch (v) {
    case TriplesVariant::Quantifier: return "quantifier";
    case TriplesVariant::Guarded: return "guarded";
    case TriplesVariant::InReturn: return "in_return";
    }
    return "?";
}

TriplesVariant parse_variant(std::string_view name) {
    for (TriplesVariant v : kAllVariants)
        if (name == variant_name(v)) return v;
    throw Error(ErrorKind::Validation,
                "unknown variant '" + std::string(name) + "' (expected quantifier, guarded or in_return)");
}

std::string_view bundled_model_text(TriplesVariant v) {
    switch (v) {
    case TriplesVariant::Quantifier: return bundled::kTriplesForall;
    case TriplesVariant::Guarded: return bundled::kTriplesGuarded;
    case TriplesVariant::InReturn: return bundled::kTriplesInReturn;
    }
    return {};
}

const char* status_name(BenchStatus s) {
    switch (s) {
    case BenchStatus::Ok: return "ok";
    case BenchStatus::Timeout: return "timeout";
    case BenchStatus::Error: return "error";
    }
    return "?";
}

namespace {

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
    if (!std::is_sorted(config.n_values.begin(), config.n_values.end()))
        throw Error(ErrorKind::Validation, "n values must be ascending");
    if (config.repeats < 1) throw Error(ErrorKind::Validation, "repeats must be at least 1");

    std::vector<BenchRow> rows;
    for (TriplesVariant variant : config.variants) {
        Model model = parse_model(bundled_model_text(variant), std::string("triples_") + variant_name(variant));
        for (Pipeline pipeline : config.pipelines) {
            for (std::int64_t n : config.n_values) {
                BenchRow row;
                row.variant = variant;
                row.pipeline = pipeline;
                row.n = n;
                try {
                    Model bound = bind_params(model, {{"n", Value(n)}});
                    std::vector<double> times;
                    int runs = config.repeats + (config.warm_up ? 1 : 0);
                    for (int r = 0; r < runs; ++r) {
                        Deadline deadline{std::chrono::duration<double>(config.timeout_seconds)};
                        ExpandOptions opts;
                        opts.deadline = &deadline;
                        auto t0 = std::chrono::steady_clock::now();
                        auto [fm, stats] = flatten(bound, pipeline, opts);
                        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                        if (secs > config.timeout_seconds)
                            throw Error(ErrorKind::Timeout, "time limit exceeded");
                        row.combinations_considered = stats.combinations_considered;
                        row.constraints_emitted = fm.constraints.size();
                        if (r > 0 || !config.warm_up) times.push_back(secs);
                    }
                    row.wall_time = median(times);
                } catch (const Error& err) {
                    row.status = err.kind() == ErrorKind::Timeout ? BenchStatus::Timeout : BenchStatus::Error;
                    row.message = err.message();
                }
                rows.push_back(row);
                // Larger n will not be faster.
                if (row.status == BenchStatus::Timeout) break;
            }
        }
    }
    return rows;
}

void emit_plot_data(const std::vector<BenchRow>& rows, std::ostream& out) {
    if (rows.empty()) throw Error(ErrorKind::Validation, "no benchmark rows to write");
    out << "variant,pipeline,n,median_seconds,status\n";
    for (const auto& r : rows) {
        out << variant_name(r.variant) << ',' << pipeline_name(r.pipeline) << ',' << r.n << ',';
        if (r.status == BenchStatus::Ok) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", r.wall_time);
            out << buf;
        }
        out << ',' << status_name(r.status) << '\n';
    }
}

void emit_plot_data(const std::vector<BenchRow>& rows, const std::string& path) {
    if (rows.empty()) throw Error(ErrorKind::Validation, "no benchmark rows to write");
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    emit_plot_data(rows, f);
    if (!f.flush()) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

double fit_power_law_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw Error(ErrorKind::Validation, "need at least two points to fit");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, t] : points) {
        if (n <= 0 || t <= 0) throw Error(ErrorKind::Validation, "power-law fit needs positive values");
        double x = std::log(n), y = std::log(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double k = static_cast<double>(points.size());
    double denom = k * sxx - sx * sx;
    if (denom == 0) throw Error(ErrorKind::Validation, "power-law fit needs distinct n values");
    return (k * sxy - sx * sy) / denom;
}

}  // namespace unroll
