"""Each mutation breaks exactly the identities that mention the mutated datum."""

import json

import pytest

from bisimp import fixtures
from bisimp.bisimplicial import verify_bisimplicial
from bisimp.crossed import check_crossed_module, check_crossed_square, check_two_crossed_module
from bisimp.report import jsonable

# d^h_2 at (2,2) is the only changed map: every identity that applies it fails
BROKEN_FACE = {
    "horizontal q=2: d0d2=d1d0 on G2",
    "horizontal q=2: d1d2=d1d1 on G2",
    "horizontal q=2: d2s0=s0d1 on G1",
    "horizontal q=2: d2s1=id on G1",
    "d^h_2 s^v_0 commute on G(2,1)",
    "d^h_2 s^v_1 commute on G(2,1)",
    "d^h_2 d^v_0 commute on G(2,2)",
    "d^h_2 d^v_1 commute on G(2,2)",
    "d^h_2 d^v_2 commute on G(2,2)",
}

EXPECTED = {
    "broken-face": (verify_bisimplicial, BROKEN_FACE),
    "trivial-h": (check_crossed_square, {
        "2: lambda h(x,y) = x (nu(y).x^-1)",
        "2: lambda' h(x,y) = (mu(x).y) y^-1",
    }),
    "trivial-lifting": (check_two_crossed_module, {"1: d2{y,y'} = y y' y^-1 (d1(y).y')^-1"}),
    "trivial-action": (check_crossed_module, {"CM1: d(p.x) = p d(x) p^-1"}),
    "trivial-action-identity": (check_crossed_module, {
        "CM1: d(p.x) = p d(x) p^-1",
        "CM2: d(x).y = x y x^-1",
    }),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_mutation_fails_exactly_as_predicted(name):
    checker, expected = EXPECTED[name]
    rep = checker(fixtures.MUTATIONS[name]())
    assert {c.name for c in rep.failures} == expected
    for c in rep.failures:
        text = json.dumps(jsonable(c.witness))
        assert json.loads(text)


def test_unmutated_counterparts_pass():
    assert verify_bisimplicial(fixtures.constant_grid()).ok
    assert check_crossed_square(fixtures.d4_square()).ok
    assert check_two_crossed_module(fixtures.d4_cone()).ok
    assert check_crossed_module(fixtures.c3_in_s3()).ok


def test_trivial_h_witness_is_a_rotation():
    """nu(y) moves x only when x is a quarter turn, so the witness has x = r or r^-1 and rhs = r^2."""
    rep = check_crossed_square(fixtures.trivial_h_square())
    for c in rep.failures:
        w = {k: [int(v) for v in val] for k, val in c.witness.items()}
        assert w["x"] in ([1, 2, 3, 0], [3, 0, 1, 2])
        assert w["lhs"] == [0, 1, 2, 3]
        assert w["rhs"] == [2, 3, 0, 1]
