"""Comprehension unrolling for a small constraint modelling language."""

from ._core import (
    UnrollError,
    bundled_model,
    compare,
    evaluate,
    flatten,
    generator_models,
    generator_solutions,
    rewrites,
    run_bench,
    simplify,
)

__all__ = [
    "UnrollError",
    "bundled_model",
    "compare",
    "evaluate",
    "flatten",
    "generator_models",
    "generator_solutions",
    "rewrites",
    "run_bench",
    "simplify",
]
