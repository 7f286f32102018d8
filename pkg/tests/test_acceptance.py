"""Acceptance suite: one test per criterion, each reporting a single PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` or under pytest; the
pytest run prints the lines in the terminal summary.
"""

import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bisimp import fixtures  # noqa: E402
from bisimp.crossed import (  # noqa: E402
    check_crossed_module, check_crossed_square, check_two_crossed_module,
    crossed_module_isomorphism, crossed_square_isomorphism, extract_crossed_module,
    extract_crossed_square, lifting_vs_pairing, product_crossed_module, two_crossed_from_cols,
    two_crossed_from_rows, two_crossed_from_simplicial,
)
from bisimp.fingroup import perm_from_cycles  # noqa: E402
from bisimp.peiffer import (  # noqa: E402
    boundary_equalities_check, projection_laws_check, table_check,
)
from bisimp.bisimplicial import order_factorization_check  # noqa: E402
from bisimp.report import jsonable  # noqa: E402
from test_negative_controls import EXPECTED as MUTATION_EXPECTATIONS  # noqa: E402

RESULTS = {}
GRID_NAMES = ("constant", "external", "d4")


def grids():
    return {name: fixtures.GRIDS[name]() for name in GRID_NAMES}


def criterion_1():
    notes = []
    ok = True
    floors = {"constant": 0, "external": 5, "d4": 10}
    for name, g in grids().items():
        t = time.perf_counter()
        rep = table_check(g)
        dt = time.perf_counter() - t
        nv = rep.info["non_vacuous_rows"]
        ok &= rep.ok and nv >= floors[name] and dt < 60
        notes.append(f"{name}: {rep.counts()['FAIL']} FAIL, {nv} non-vacuous, {dt:.1f}s")
    return ok, "; ".join(notes)


def criterion_2():
    t = time.perf_counter()
    ok = True
    n_eq = n_inc = 0
    for name, g in grids().items():
        rep = boundary_equalities_check(g)
        ok &= rep.ok
        n_eq += sum("cap D) = [" in c.name for c in rep.checks)
        n_inc += sum(c.name.startswith("[K_") for c in rep.checks)
    dt = time.perf_counter() - t
    ok &= n_eq == 6 * len(GRID_NAMES) and n_inc > 0 and dt < 120
    return ok, f"{n_eq} equalities, {n_inc} inclusions, {dt:.1f}s"


def criterion_3():
    ok = True
    for g in grids().values():
        ok &= order_factorization_check(g).ok
    ext = fixtures.external_product_grid()
    ok &= ext.order_factorization(1, 1) == (324, 324, [1, 3, 3, 36])
    return ok, "all levels of all grids; (1,1) of the external product is 324 = 1·3·3·36"


def criterion_4():
    ex = extract_crossed_module(fixtures.external_product_grid())
    ok = all(check_crossed_module(x).ok for x in ex.as_list())
    c = fixtures.c3_in_s3()
    iso = crossed_module_isomorphism(ex.product, product_crossed_module(c, c))
    ok &= iso is not None
    return ok, f"three modules checked; product isomorphic to C3xC3 -> S3xS3: {iso is not None}"


def criterion_5():
    sq = extract_crossed_square(fixtures.d4_grid())
    ok = check_crossed_square(sq).ok
    P = sq.P
    r = P.index_of(perm_from_cycles(4, (0, 1, 2, 3)))
    s = P.index_of(perm_from_cycles(4, (0, 2)))
    m = int(np.flatnonzero(sq.mu.images == r)[0])
    n = int(np.flatnonzero(sq.nu.images == s)[0])
    h_rs = P.perms[sq.mu.images[sq.lam.images[sq.h[m, n]]]]
    ok &= bool((sq.h != 0).any()) and h_rs.tolist() == [2, 3, 0, 1]
    ok &= crossed_square_isomorphism(sq, fixtures.d4_square()) is not None
    return ok, f"axioms 1-5 exhaustive; h(r,s) = {h_rs.tolist()} (r^2); isomorphic to the normal-pair square"


def criterion_6():
    ok = check_two_crossed_module(two_crossed_from_simplicial(fixtures.nerve_fixture(2))).ok
    count = 1
    for g in grids().values():
        for k in range(3):
            for direction, build in (("v", two_crossed_from_rows), ("h", two_crossed_from_cols)):
                x = build(g, k)
                ok &= check_two_crossed_module(x).ok
                ok &= lifting_vs_pairing(g, direction, k, x).ok
                count += 1
    return ok, f"{count} structures, lifting equals the inverse pairing on each line"


def criterion_7():
    cone = fixtures.d4_cone()
    ok = check_two_crossed_module(cone).ok
    ok &= bool((cone.d1.images[cone.d2.images] == 0).all())
    return ok, f"orders {cone.orders}; six axioms and d1 d2 = 1"


def criterion_8():
    ok = True
    notes = []
    for name, (checker, expected) in sorted(MUTATION_EXPECTATIONS.items()):
        rep = checker(fixtures.MUTATIONS[name]())
        got = {c.name for c in rep.failures}
        serial = all(json.loads(json.dumps(jsonable(c.witness))) for c in rep.failures)
        ok &= got == expected and serial
        notes.append(f"{name}: {len(got)} FAIL")
    return ok, "; ".join(notes)


def criterion_9():
    ok = True
    n = 0
    for g in grids().values():
        rep = projection_laws_check(g)
        ok &= rep.ok
        n += len(rep.checks)
    return ok, f"{n} projection checks over every level"


CRITERIA = [
    (1, "pairing table reproduction", criterion_1),
    (2, "boundary equalities and inclusions", criterion_2),
    (3, "order factorization", criterion_3),
    (4, "crossed modules from a bisimplicial group", criterion_4),
    (5, "crossed square from a bisimplicial group", criterion_5),
    (6, "2-crossed modules from simplicial rows and columns", criterion_6),
    (7, "mapping cone", criterion_7),
    (8, "negative controls", criterion_8),
    (9, "projection laws", criterion_9),
]


def evaluate(number, title, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, line = evaluate(number, title, fn)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, line = evaluate(number, title, fn)
        print(line)
        failed += not ok
    sys.exit(1 if failed else 0)
