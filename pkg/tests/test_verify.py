from __future__ import annotations

import pytest

from twwkit import fixtures
from twwkit.cwexpr import eval_expr, expr_width
from twwkit.trigraph import sequence_width
from twwkit.verify import SUITES, run_bounds, run_golden, run_oracle, run_suite


def test_bundled_fixtures():
    g, seq = fixtures.c7()
    assert g.n == 7 and g.m == 7
    g, seq = fixtures.a1()
    assert [sequence_width(seq, m) for m in ("tww", "ctww", "ttww", "tvtww")] == [2, 3, 5, 3]
    e = fixtures.a2()
    lg = eval_expr(e)
    assert (lg.graph.n, lg.graph.m, expr_width(e)) == (10, 15, 3)
    assert lg.names[0] == "j"


def test_bounds_suite_small():
    result = run_bounds(max_n=4, seed=1)
    assert result.ok, result.failures[:1]
    assert result.instances > 0 and result.checks == 9 * result.instances


def test_oracle_suite_small():
    result = run_oracle(max_n=4, seed=2, pairs=40, max_template=3)
    assert result.ok, result.failures[:1]
    assert result.instances == 40 and result.checks == 80


def test_golden_suite():
    result = run_golden()
    assert result.ok, result.failures[:1]


def test_run_suite_dispatch():
    assert set(SUITES) == {"bounds", "oracle", "golden"}
    assert run_suite("golden").suite == "golden"
    with pytest.raises(ValueError):
        run_suite("nope")
