import pytest

import unroll

WORKED = """
find m: matrix indexed by [int(1..4)] of int(1..4)
such that
  and([ m[i] = i | i: int(1..4), i % 2 = 0 ])
"""


def triple_count(n):
    return sum(
        1
        for a in range(1, n + 1)
        for b in range(a, n + 1)
        for c in range(b, n + 1)
        if a * a + b * b == c * c
    )


def test_flatten_worked_example():
    for pipeline in ("naive", "solver-aided-simple", "solver-aided-full"):
        text, stats = unroll.flatten(WORKED, pipeline=pipeline)
        assert text.endswith("such that\n  m[2] = 2,\n  m[4] = 4\n")
        assert stats["constraints"] == 2
    _, stats = unroll.flatten(WORKED, pipeline="naive")
    assert stats["combinations_considered"] == 4


def test_generator_model_and_solutions():
    (model,) = unroll.generator_models(WORKED, mode="simple")
    assert "branching on [i]" in model
    assert unroll.generator_solutions(WORKED) == [[{"i": 2}, {"i": 4}]]


def test_rewrites():
    text = """
find m: matrix indexed by [int(1..4)] of int(1..4)
such that
  and([ !(i % 2 = 0 /\\ m[i] % 2 = 0) \\/ (m[i] = i) | i: int(1..4) ])
"""
    (rw,) = unroll.rewrites(text)
    assert [d[0] for d in rw["dummies"]] == ["__Z1", "__Z2"]
    assert unroll.generator_solutions(text) == [[{"i": 2}, {"i": 4}]]


@pytest.mark.parametrize("variant", ["quantifier", "guarded", "in_return"])
def test_bundled_models_agree(variant):
    result = unroll.compare(unroll.bundled_model(variant), {"n": 20})
    assert result["identical"]
    flat = result["outputs"]["naive"]
    body = flat.split("such that\n", 1)[1]
    assert body.count("\n") == triple_count(20)


def test_simplify_and_evaluate():
    assert unroll.simplify("(true /\\ p) \\/ false") == "p"
    assert unroll.simplify("i % 2 = 0 /\\ m[i] = i", {"i": 4}) == "m[4] = 4"
    assert unroll.evaluate("3**2 + 4**2 = 5**2") is True
    assert unroll.evaluate("-7 / 2") == -4


def test_errors():
    with pytest.raises(unroll.UnrollError, match="MissingParam"):
        unroll.flatten(unroll.bundled_model("guarded"))
    with pytest.raises(unroll.UnrollError, match="DivByZero"):
        unroll.evaluate("1 / 0")
    with pytest.raises(unroll.UnrollError):
        unroll.flatten("find x: int(1..3)\nsuch that x = = 1")


def test_run_bench():
    rows = unroll.run_bench(["guarded"], ["naive", "solver-aided-full"], [10, 20], repeats=1)
    assert len(rows) == 4
    assert all(r["status"] == "ok" for r in rows)
    assert {r["n"]: r["constraints_emitted"] for r in rows} == {10: 2, 20: 6}
