import csv
import io
import json

import numpy as np
import pytest

from leebounds.bounds import DomainError, make_curve
from leebounds.compare import (
    AmbiguityError,
    BracketError,
    ComparisonGrid,
    VerifyConfig,
    comparison_grid,
    concat_prime_scan,
    crossover,
    delta_q,
    delta_q_table,
    dominance_scan,
    verification_suite,
)

# crossovers computed once by this package and frozen (prescan + bisection)
FROZEN_DELTA_Q = {
    25: 0.030742,
    49: 0.009451,
    121: 0.002263,
    169: 0.001360,
    289: 0.000607,
    361: 0.000435,
    529: 0.000247,
}


def test_crossover_table_example():
    res = crossover(make_curve("astola", q=25), make_curve("victoria", gamma=0.25), (1e-4, 0.2))
    assert res.delta_star == pytest.approx(0.0308, abs=2e-4)
    assert res.bracket[1] - res.bracket[0] <= 1e-8
    assert res.curve_a == "astola(q=25)"


def test_crossover_sign_change_at_bracket():
    a, b = make_curve("astola", q=49), make_curve("victoria", q=49)
    res = crossover(a, b, (1e-6, 0.2))
    lo, hi = res.bracket
    assert (a(lo) - b(lo)) * (a(hi) - b(hi)) <= 0


def test_crossover_q529():
    res = crossover(make_curve("astola", q=529), make_curve("victoria", gamma=1 / 22), (1e-6, 0.2))
    assert res.delta_star == pytest.approx(0.0003, abs=2e-4)


def test_crossover_errors():
    a = make_curve("astola", q=25)
    with pytest.raises(BracketError):
        crossover(a, a, (1e-4, 0.2))
    with pytest.raises(DomainError):
        crossover(a, make_curve("victoria", gamma=0.25), (1e-4, 0.9))


def test_crossover_ambiguity():
    # a line against a parabola-like curve crossing twice
    from leebounds.bounds import BoundCurve

    c1 = BoundCurve("bump", {}, "delta_to_R", (0.0, 1.0), lambda d: 4 * d * (1 - d))
    c2 = BoundCurve("flat", {}, "delta_to_R", (0.0, 1.0), lambda d: 0.5)
    with pytest.raises(AmbiguityError):
        crossover(c1, c2, (0.0, 1.0))


@pytest.mark.parametrize("q, expected", sorted(FROZEN_DELTA_Q.items()))
def test_delta_q_frozen(q, expected):
    assert delta_q(q).delta_star == pytest.approx(expected, abs=1e-6)


def test_delta_q_table_display():
    rows = delta_q_table([25, 49, 169])
    assert [r["display"] for r in rows] == ["0.0307", "0.0095", "0.0014"]
    assert rows[1]["delta_q"] == pytest.approx(0.009451, abs=1e-6)
    with pytest.raises(ValueError):
        delta_q(27)
    with pytest.raises(ValueError):
        delta_q(9)


def test_comparison_grid_single_point():
    g = comparison_grid([make_curve("victoria", gamma=0.1)], [0.0])
    assert g.columns == {"victoria(gamma=0.1)": [pytest.approx(0.9)]}


def test_comparison_grid_marks_out_of_domain():
    curves = [make_curve("astola", q=529), make_curve("victoria", gamma=1 / 22)]
    grid = np.linspace(0, 0.5, 51)
    g = comparison_grid(curves, grid)
    ast = g.columns["astola(q=529)"]
    assert all(v is not None for v in ast)
    g2 = comparison_grid([make_curve("concat", p=7, t=2)], np.linspace(0, 0.9, 10))
    col = g2.columns["concat(p=7,t=2)"]
    assert col[0] == pytest.approx(47 / 72) and col[-1] is None


def test_comparison_grid_errors():
    with pytest.raises(ValueError):
        comparison_grid([make_curve("concat-asymptote")], [])
    with pytest.raises(ValueError):
        comparison_grid([make_curve("concat-asymptote")], [0.2, 0.1])
    with pytest.raises(ValueError):
        ComparisonGrid([0.0, 1.0], {"x": [1.0]})


def test_comparison_grid_workers_identical():
    curves = [make_curve("descent", p=7), make_curve("concat-envelope", p=7), make_curve("astola", q=11)]
    grid = np.linspace(0, 0.5, 101)
    assert comparison_grid(curves, grid, workers=3) == comparison_grid(curves, grid)


def test_csv_and_json_format():
    g = comparison_grid([make_curve("concat", p=7, t=2), make_curve("concat-asymptote")], [0.0, 0.5, 0.9])
    text = g.to_csv()
    assert text.endswith("\n") and "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["delta", "concat(p=7,t=2)", "concat-asymptote"]
    assert rows[1] == ["0", "0.652777777778", "0.5"]
    assert rows[3][1] == ""
    doc = json.loads(g.to_json())
    assert doc["delta"] == [0.0, 0.5, 0.9]
    assert doc["columns"]["concat(p=7,t=2)"][2] is None


def test_dominance_scan():
    v = make_curve("victoria", gamma=0.0)
    grid = np.linspace(0, 0.5, 101)
    assert dominance_scan(v, v, grid).relation == "equal"
    res = dominance_scan(v, make_curve("concat-asymptote"), grid)
    assert res.relation == "a_dominates"
    res = dominance_scan(make_curve("descent", p=11), make_curve("astola", q=11), np.linspace(0.001, 0.5, 500))
    assert res.relation == "crossing"


def test_concat_prime_scan():
    rows = {r["p"]: r["relation"] for r in concat_prime_scan(121, [7, 19, 23, 113, 127])}
    assert rows[7] == rows[19] == "a_dominates"
    assert rows[23] == rows[113] == rows[127] == "crossing"
    with pytest.raises(DomainError):
        concat_prime_scan(5, [7])


def test_verification_suite_subset():
    cfg = VerifyConfig(victorian=((7, (1, 2)),), bch=((5, 2, 0),), concat=())
    rep = verification_suite(cfg, ["victorian", "bch"])
    assert rep["passed"]
    measured = [(c["check"], c["measured"]) for c in rep["checks"]]
    assert measured == [("victorian", 12), ("victorian", 8), ("bch", 4)]


def test_verification_reports_cap_failure():
    cfg = VerifyConfig(victorian=((11, (3,)),), cap=10)
    rep = verification_suite(cfg, ["victorian"])
    assert not rep["passed"]
    assert "EnumerationCapExceeded" in rep["checks"][0]["error"]


def test_verification_deterministic():
    cfg = VerifyConfig(descent=((3, (1, 2)),))
    a = verification_suite(cfg, ["descent"])
    b = verification_suite(VerifyConfig(descent=((3, (1, 2)),), workers=2), ["descent"])
    assert a == b
    assert [c["measured"] for c in a["checks"]] == [12, 8]
