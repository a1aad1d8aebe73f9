#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "unroll/bench.hpp"
#include "unroll/expand.hpp"
#include "unroll/genmodel.hpp"
#include "unroll/parser.hpp"
#include "unroll/printer.hpp"

namespace unroll::cli {

namespace {

struct ModelArgs {
    std::string path;
    std::vector<std::string> lets;
    std::string param_file;
    double timeout = 0;
    bool break_simplifier = false;
};

void add_model_args(CLI::App& sub, ModelArgs& a) {
    sub.add_option("model", a.path, "Model file")->required();
    sub.add_option("--let", a.lets, "Bind a parameter, NAME=VALUE (repeatable)")->allow_extra_args(false);
    sub.add_option("--param", a.param_file, "Parameter file with `letting NAME be VALUE` lines");
    sub.add_option("--timeout", a.timeout, "Give up after this many seconds (exit 4)")->check(CLI::NonNegativeNumber);
    sub.add_flag("--test-break-simplifier", a.break_simplifier,
                 "Skip item simplification in the solver-aided pipelines (self-test for compare)");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Value parse_let_value(const std::string& name, const std::string& text) {
    if (text == "true") return Value(true);
    if (text == "false") return Value(false);
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used == text.size()) return Value(static_cast<std::int64_t>(v));
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Syntax, "--let " + name + ": '" + text + "' is not an integer");
}

Model load(const ModelArgs& a) {
    Model m = parse_model(read_file(a.path), a.path);
    Bindings b;
    if (!a.param_file.empty()) b = parse_params(read_file(a.param_file), m, a.param_file);
    for (const auto& let : a.lets) {
        auto eq = let.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::Syntax, "--let expects NAME=VALUE, got '" + let + "'");
        std::string name = let.substr(0, eq);
        b.insert_or_assign(name, parse_let_value(name, let.substr(eq + 1)));
    }
    return bind_params(m, b);
}

double seconds(ExpansionStats::Duration d) { return std::chrono::duration<double>(d).count(); }

nlohmann::json stats_json(Pipeline p, const ExpansionStats& s, std::size_t constraints) {
    return {
        {"schema", 1},
        {"pipeline", pipeline_name(p)},
        {"combinations_considered", s.combinations_considered},
        {"items_emitted", s.items_emitted},
        {"items_discarded_as_identity", s.items_discarded_as_identity},
        {"constraints", constraints},
        {"generator_solve_seconds", seconds(s.generator_solve_time)},
        {"substitution_seconds", seconds(s.substitution_time)},
        {"total_seconds", seconds(s.total_time)},
    };
}

void print_commented(std::ostream& out, const std::string& title, const std::string& body) {
    out << "$ " << title << "\n";
    std::istringstream lines(body);
    for (std::string line; std::getline(lines, line);) out << "$   " << line << "\n";
}

ExpandOptions expand_options(const ModelArgs& a, const Deadline* deadline) {
    ExpandOptions o;
    o.deadline = deadline;
    o.break_simplifier_for_testing = a.break_simplifier;
    return o;
}

int cmd_flatten(const ModelArgs& a, const std::string& pipeline_text, bool stats, bool dump_generator,
                bool dump_rewrite, std::ostream& out, std::ostream& err) {
    Pipeline pipeline = parse_pipeline(pipeline_text);
    Model bound = load(a);

    if (dump_generator || dump_rewrite) {
        Scope scope(bound);
        GeneratorMode mode =
            pipeline == Pipeline::SolverAidedSimple ? GeneratorMode::Simple : GeneratorMode::Full;
        int index = 0;
        for_each_comprehension(bound, [&](const Expr& host) {
            ++index;
            GeneratorModel g = build_generator_model(host, mode, scope);
            std::string where = "comprehension " + std::to_string(index) + ": " + to_string(host);
            if (dump_rewrite) {
                std::string body = g.rewrite ? to_string(*g.rewrite) : "(not rewritten)\n";
                print_commented(out, "rewrite of " + where, body);
            }
            if (dump_generator) print_commented(out, "generator model of " + where, to_string(g));
        });
    }

    Deadline deadline = a.timeout > 0 ? Deadline(std::chrono::duration<double>(a.timeout)) : Deadline();
    auto [fm, s] = flatten(bound, pipeline, expand_options(a, &deadline));
    out << to_string(fm);
    if (stats) err << stats_json(pipeline, s, fm.constraints.size()).dump(2) << "\n";
    return kOk;
}

void structural_diff(const FlatModel& a, const FlatModel& b, const char* name_a, const char* name_b,
                     std::ostream& out) {
    out << "--- " << name_a << "\n+++ " << name_b << "\n";
    if (a.constraints.size() != b.constraints.size())
        out << "constraint count: " << a.constraints.size() << " vs " << b.constraints.size() << "\n";
    std::size_t n = std::max(a.constraints.size(), b.constraints.size());
    std::size_t shown = 0;
    for (std::size_t i = 0; i < n && shown < 20; ++i) {
        const Expr* x = i < a.constraints.size() ? &a.constraints[i] : nullptr;
        const Expr* y = i < b.constraints.size() ? &b.constraints[i] : nullptr;
        if (x && y && structurally_equal(*x, *y)) continue;
        ++shown;
        out << "@@ constraint " << i + 1 << "\n";
        if (x) out << "- " << to_string(*x) << "\n";
        if (y) out << "+ " << to_string(*y) << "\n";
    }
}

int cmd_compare(const ModelArgs& a, std::ostream& out, std::ostream& err) {
    Model bound = load(a);
    Deadline deadline = a.timeout > 0 ? Deadline(std::chrono::duration<double>(a.timeout)) : Deadline();

    std::vector<std::pair<FlatModel, ExpansionStats>> results;
    std::vector<std::string> printed;
    for (Pipeline p : kAllPipelines) {
        results.push_back(flatten(bound, p, expand_options(a, &deadline)));
        printed.push_back(to_string(results.back().first));
    }

    bool same = true;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (printed[i] == printed[0]) continue;
        if (same) out << "MISMATCH\n";
        same = false;
        structural_diff(results[0].first, results[i].first, pipeline_name(kAllPipelines[0]),
                        pipeline_name(kAllPipelines[i]), out);
    }
    if (!same) return kMismatch;

    out << "identical output from all pipelines\n";
    out << std::left << std::setw(22) << "pipeline" << std::right << std::setw(14) << "combinations"
        << std::setw(10) << "emitted" << std::setw(11) << "discarded" << std::setw(13) << "constraints" << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& s = results[i].second;
        out << std::left << std::setw(22) << pipeline_name(kAllPipelines[i]) << std::right << std::setw(14)
            << s.combinations_considered << std::setw(10) << s.items_emitted << std::setw(11)
            << s.items_discarded_as_identity << std::setw(13) << results[i].first.constraints.size() << "\n";
        err << pipeline_name(kAllPipelines[i]) << ": " << std::fixed << std::setprecision(6)
            << seconds(s.total_time) << " s\n";
    }
    return kOk;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "10,20,...,200" expands with the step of the two values before "...".
std::vector<std::int64_t> parse_n_list(const std::string& text) {
    std::vector<std::int64_t> out;
    auto items = split(text);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i] == "...") {
            if (out.size() < 2 || i + 1 >= items.size())
                throw Error(ErrorKind::Syntax, "'...' needs two values before it and one after");
            std::int64_t step = out[out.size() - 1] - out[out.size() - 2];
            std::int64_t end = std::stoll(items[i + 1]);
            if (step <= 0) throw Error(ErrorKind::Syntax, "'...' needs an ascending sequence");
            for (std::int64_t v = out.back() + step; v < end; v += step) out.push_back(v);
            continue;
        }
        try {
            out.push_back(std::stoll(items[i]));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Syntax, "bad n value '" + items[i] + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::Syntax, "no n values given");
    return out;
}

int cmd_bench(const std::string& variants, const std::string& pipelines, const std::string& ns, double timeout,
              int repeats, bool no_warm_up, const std::string& out_path, std::ostream& out, std::ostream& err) {
    BenchConfig cfg;
    cfg.variants.clear();
    for (const auto& v : split(variants)) cfg.variants.push_back(parse_variant(v));
    cfg.pipelines.clear();
    for (const auto& p : split(pipelines)) cfg.pipelines.push_back(parse_pipeline(p));
    cfg.n_values = parse_n_list(ns);
    cfg.timeout_seconds = timeout;
    cfg.repeats = repeats;
    cfg.warm_up = !no_warm_up;

    auto rows = run_bench(cfg);
    if (!out_path.empty()) emit_plot_data(rows, out_path);

    // Timings vary between runs, so they only go to stderr and the CSV.
    out << "variant,pipeline,n,combinations,constraints,status\n";
    for (const auto& r : rows) {
        out << variant_name(r.variant) << ',' << pipeline_name(r.pipeline) << ',' << r.n << ','
            << r.combinations_considered << ',' << r.constraints_emitted << ',' << status_name(r.status) << "\n";
        err << variant_name(r.variant) << ' ' << pipeline_name(r.pipeline) << " n=" << r.n << ": ";
        if (r.status == BenchStatus::Ok) err << std::fixed << std::setprecision(6) << r.wall_time << " s\n";
        else err << status_name(r.status) << (r.message.empty() ? "" : " (" + r.message + ")") << "\n";
    }
    return kOk;
}

int exit_code_for(const Error& e) {
    if (e.kind() == ErrorKind::Timeout) return kTimeout;
    if (is_evaluation_error(e.kind())) return kEvaluation;
    return kUsageOrInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unroll comprehensions and quantifiers of constraint models", "unroll"};
    app.require_subcommand(1);

    ModelArgs flat_args;
    std::string pipeline = "solver-aided-full";
    bool stats = false, dump_generator = false, dump_rewrite = false;
    auto* flat = app.add_subcommand("flatten", "Expand a model and print the flat result");
    add_model_args(*flat, flat_args);
    flat->add_option("--pipeline", pipeline, "naive | solver-aided-simple | solver-aided-full")
        ->capture_default_str();
    flat->add_flag("--stats", stats, "Print expansion statistics as JSON to stderr");
    flat->add_flag("--dump-generator", dump_generator, "Print each generator model (as $ comments)");
    flat->add_flag("--dump-rewrite", dump_rewrite, "Print each dummy-variable rewrite (as $ comments)");

    ModelArgs cmp_args;
    auto* cmp = app.add_subcommand("compare", "Run all pipelines and check that their output is identical");
    add_model_args(*cmp, cmp_args);

    std::string variants = "quantifier,guarded,in_return";
    std::string pipelines = "naive,solver-aided-simple,solver-aided-full";
    std::string ns = "10,20,50";
    double timeout = 3600;
    int repeats = 3;
    bool no_warm_up = false;
    std::string out_path;
    auto* bench = app.add_subcommand("bench", "Time the Pythagorean triples models");
    bench->add_option("--variants", variants, "Comma-separated: quantifier, guarded, in_return")
        ->capture_default_str();
    bench->add_option("--pipelines", pipelines, "Comma-separated pipeline names")->capture_default_str();
    bench->add_option("--n", ns, "Comma-separated n values; 10,20,...,200 expands")->capture_default_str();
    bench->add_option("--timeout", timeout, "Per-run limit in seconds")->capture_default_str();
    bench->add_option("--repeats", repeats, "Timed runs per point (median is reported)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench->add_flag("--no-warm-up", no_warm_up, "Do not discard a first untimed run");
    bench->add_option("--out", out_path, "CSV output file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrInput;
    }

    std::string file;
    try {
        if (*flat) {
            file = flat_args.path;
            return cmd_flatten(flat_args, pipeline, stats, dump_generator, dump_rewrite, out, err);
        }
        if (*cmp) {
            file = cmp_args.path;
            return cmd_compare(cmp_args, out, err);
        }
        return cmd_bench(variants, pipelines, ns, timeout, repeats, no_warm_up, out_path, out, err);
    } catch (const Error& e) {
        err << e.describe(file) << "\n";
        return exit_code_for(e);
    }
}

}  // namespace unroll::cli
