#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <variant>

#include "unroll/bench.hpp"
#include "unroll/eval.hpp"
#include "unroll/expand.hpp"
#include "unroll/fdsolver.hpp"
#include "unroll/genmodel.hpp"
#include "unroll/parser.hpp"
#include "unroll/printer.hpp"

namespace py = pybind11;
using namespace unroll;

namespace {

using Scalar = std::variant<bool, std::int64_t>;
using Params = std::map<std::string, Scalar>;

Value to_value(const Scalar& s) {
    if (std::holds_alternative<bool>(s)) return Value(std::get<bool>(s));
    return Value(std::get<std::int64_t>(s));
}

py::object to_py(const Value& v) {
    if (v.is_bool()) return py::bool_(v.as_bool());
    if (v.is_int()) return py::int_(v.as_int());
    py::list items;
    for (const auto& item : v.as_matrix().items) items.append(to_py(item));
    return std::move(items);
}

Model load(const std::string& text, const Params& params) {
    Bindings b;
    for (const auto& [k, v] : params) b.emplace(k, to_value(v));
    return bind_params(parse_model(text), b);
}

Env to_env(const Params& params) {
    Env env;
    for (const auto& [k, v] : params) env.bind(k, to_value(v));
    return env;
}

GeneratorMode parse_mode(const std::string& mode) {
    if (mode == "simple") return GeneratorMode::Simple;
    if (mode == "full") return GeneratorMode::Full;
    throw Error(ErrorKind::Validation, "mode must be 'simple' or 'full'");
}

double seconds(ExpansionStats::Duration d) { return std::chrono::duration<double>(d).count(); }

py::dict stats_dict(const ExpansionStats& s, std::size_t constraints) {
    py::dict d;
    d["combinations_considered"] = s.combinations_considered;
    d["items_emitted"] = s.items_emitted;
    d["items_discarded_as_identity"] = s.items_discarded_as_identity;
    d["constraints"] = constraints;
    d["generator_solve_seconds"] = seconds(s.generator_solve_time);
    d["substitution_seconds"] = seconds(s.substitution_time);
    d["total_seconds"] = seconds(s.total_time);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Comprehension unrolling (C++ core)";
    py::register_exception<Error>(m, "UnrollError", PyExc_RuntimeError);

    m.def(
        "flatten",
        [](const std::string& text, const Params& params, const std::string& pipeline) {
            auto [fm, stats] = flatten(load(text, params), parse_pipeline(pipeline));
            return py::make_tuple(to_string(fm), stats_dict(stats, fm.constraints.size()));
        },
        py::arg("model"), py::arg("params") = Params{}, py::arg("pipeline") = "solver-aided-full",
        "Flatten model text; returns (flat model text, stats dict).");

    m.def(
        "compare",
        [](const std::string& text, const Params& params) {
            Model bound = load(text, params);
            py::dict outputs;
            std::string first;
            bool identical = true;
            for (Pipeline p : kAllPipelines) {
                std::string s = to_string(flatten(bound, p).first);
                if (p == Pipeline::Naive) first = s;
                else identical = identical && s == first;
                outputs[pipeline_name(p)] = s;
            }
            py::dict out;
            out["identical"] = identical;
            out["outputs"] = outputs;
            return out;
        },
        py::arg("model"), py::arg("params") = Params{},
        "Run all three pipelines; returns {'identical': bool, 'outputs': {pipeline: text}}.");

    m.def(
        "generator_models",
        [](const std::string& text, const Params& params, const std::string& mode) {
            Model bound = load(text, params);
            Scope scope(bound);
            std::vector<std::string> out;
            for_each_comprehension(bound, [&](const Expr& host) {
                out.push_back(to_string(build_generator_model(host, parse_mode(mode), scope)));
            });
            return out;
        },
        py::arg("model"), py::arg("params") = Params{}, py::arg("mode") = "full",
        "Generator model text for every comprehension, in order.");

    m.def(
        "rewrites",
        [](const std::string& text, const Params& params) {
            Model bound = load(text, params);
            Scope scope(bound);
            std::vector<py::object> out;
            for_each_comprehension(bound, [&](const Expr& host) {
                GeneratorModel g = build_generator_model(host, GeneratorMode::Full, scope);
                if (!g.rewrite) {
                    out.push_back(py::none());
                    return;
                }
                py::dict d;
                d["rewritten"] = to_string(g.rewrite->rewritten);
                py::list dummies;
                for (std::size_t i = 0; i < g.rewrite->dummies.size(); ++i) {
                    const auto& dv = g.rewrite->dummies[i];
                    dummies.append(py::make_tuple(dv.name, dv.declared_type.to_string(),
                                                  to_string(g.rewrite->replaced[i].second)));
                }
                d["dummies"] = dummies;
                out.push_back(d);
            });
            return out;
        },
        py::arg("model"), py::arg("params") = Params{},
        "Dummy-variable rewrite of each aggregate comprehension (None for allDiff).");

    m.def(
        "generator_solutions",
        [](const std::string& text, const Params& params, const std::string& mode) {
            Model bound = load(text, params);
            Scope scope(bound);
            std::vector<std::vector<std::map<std::string, std::int64_t>>> out;
            for_each_comprehension(bound, [&](const Expr& host) {
                GeneratorModel g = build_generator_model(host, parse_mode(mode), scope);
                SolveOptions so;
                so.existential = ExistentialMode::Symbolic;
                auto& sols = out.emplace_back();
                for (const auto& a : solve_all(g, so)) {
                    std::map<std::string, std::int64_t> row;
                    for (const auto& [k, v] : a.bindings) row[k] = v.as_scalar();
                    sols.push_back(std::move(row));
                }
            });
            return out;
        },
        py::arg("model"), py::arg("params") = Params{}, py::arg("mode") = "full",
        "Induction-variable assignments produced by each generator model.");

    m.def(
        "simplify",
        [](const std::string& expr, const Params& env) { return to_string(simplify(parse_expression(expr), to_env(env))); },
        py::arg("expr"), py::arg("env") = Params{}, "Partially evaluate an expression; returns canonical text.");

    m.def(
        "evaluate",
        [](const std::string& expr, const Params& env) { return to_py(eval_static(parse_expression(expr), to_env(env))); },
        py::arg("expr"), py::arg("env") = Params{}, "Evaluate a ground expression.");

    m.def(
        "bundled_model", [](const std::string& variant) { return std::string(bundled_model_text(parse_variant(variant))); },
        py::arg("variant"), "Text of a bundled triples model: quantifier, guarded or in_return.");

    m.def(
        "run_bench",
        [](const std::vector<std::string>& variants, const std::vector<std::string>& pipelines,
           const std::vector<std::int64_t>& n_values, double timeout, int repeats, bool warm_up) {
            BenchConfig cfg;
            cfg.variants.clear();
            for (const auto& v : variants) cfg.variants.push_back(parse_variant(v));
            cfg.pipelines.clear();
            for (const auto& p : pipelines) cfg.pipelines.push_back(parse_pipeline(p));
            cfg.n_values = n_values;
            cfg.timeout_seconds = timeout;
            cfg.repeats = repeats;
            cfg.warm_up = warm_up;
            std::vector<BenchRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_bench(cfg);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["variant"] = variant_name(r.variant);
                d["pipeline"] = pipeline_name(r.pipeline);
                d["n"] = r.n;
                d["median_seconds"] = r.status == BenchStatus::Ok ? py::object(py::float_(r.wall_time)) : py::none();
                d["combinations_considered"] = r.combinations_considered;
                d["constraints_emitted"] = r.constraints_emitted;
                d["status"] = status_name(r.status);
                out.append(d);
            }
            return out;
        },
        py::arg("variants") = std::vector<std::string>{"quantifier", "guarded", "in_return"},
        py::arg("pipelines") = std::vector<std::string>{"naive", "solver-aided-simple", "solver-aided-full"},
        py::arg("n_values") = std::vector<std::int64_t>{10, 20, 50}, py::arg("timeout") = 3600.0,
        py::arg("repeats") = 3, py::arg("warm_up") = true, "Time the triples models; one dict per row.");
}
