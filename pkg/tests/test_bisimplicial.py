import itertools

import numpy as np
import pytest

from bisimp import fixtures
from bisimp.bisimplicial import (
    IndexOutOfRange, codiagonal, diagonal, external_product,
    from_horizontal, from_vertical, moore_bicomplex_check, order_factorization_check,
    verify_bisimplicial,
)
from bisimp.fingroup import generate, is_isomorphic
from bisimp.simplicial import TruncationExceeded, constant_simplicial, verify_simplicial

LEVELS = list(itertools.product(range(3), range(3)))


def brute_moore(g, n, m):
    """Indices of G[n,m] killed by every face except the last in each direction."""
    G = g.G(n, m)
    out = []
    for x in range(G.order):
        if all(g.d_h(n, m, i).images[x] == 0 for i in range(n)) and \
                all(g.d_v(n, m, j).images[x] == 0 for j in range(m)):
            out.append(x)
    return out


def test_all_fixtures_verify(any_grid):
    rep = verify_bisimplicial(any_grid)
    assert rep.ok, [c.name for c in rep.failures]


def test_moore_cells_match_brute_force(any_grid):
    for n, m in LEVELS:
        assert any_grid.moore(n, m).indices.tolist() == brute_moore(any_grid, n, m)


def test_constant_grid_moore_concentrated_at_origin(constant_grid):
    orders = constant_grid.moore_orders()
    assert orders[(0, 0)] == 6
    assert all(v == 1 for k, v in orders.items() if k != (0, 0))
    assert constant_grid.degenerate_subgroup(1, 0).order == 6


def test_external_product_moore_orders(external_grid):
    orders = external_grid.moore_orders()
    assert orders[(0, 0)] == 36
    assert orders[(1, 0)] == 3 and orders[(0, 1)] == 3
    assert all(v == 1 for (p, q), v in orders.items() if p >= 1 and q >= 1)
    assert external_grid.G(1, 1).order == 324
    assert external_grid.moore(1, 1).is_trivial


def test_d4_grid_moore_orders(d4_grid):
    orders = d4_grid.moore_orders()
    assert orders[(0, 0)] == 8
    assert orders[(0, 1)] == 4 and orders[(1, 0)] == 4
    assert orders[(1, 1)] == 2
    assert all(orders[k] == 1 for k in [(0, 2), (2, 0), (1, 2), (2, 1), (2, 2)])


def test_factorization_324(external_grid):
    assert external_grid.order_factorization(1, 1) == (324, 324, [1, 3, 3, 36])
    rep = order_factorization_check(external_grid)
    assert rep.ok
    assert rep.get("|G(1,1)| = 324 = 1·3·3·36") is not None


def test_factorization_on_every_fixture(any_grid):
    for n, m in LEVELS:
        lhs, rhs, _ = any_grid.order_factorization(n, m)
        assert lhs == rhs
    assert order_factorization_check(any_grid).ok


def test_moore_bicomplex_is_a_bicomplex(any_grid):
    rep = moore_bicomplex_check(any_grid)
    assert rep.ok, [c.name for c in rep.failures]
    for n, m in LEVELS:
        cell = any_grid.moore_cell(n, m)
        assert cell.order == any_grid.moore(n, m).order
        if cell.boundary_h is not None:
            assert cell.boundary_h.codomain.order == any_grid.moore(n - 1, m).order
        if cell.boundary_v is not None:
            assert cell.boundary_v.codomain.order == any_grid.moore(n, m - 1).order


def test_degenerate_subgroups(external_grid, d4_grid):
    g = external_grid
    sh = g.s_h(0, 1, 0).images
    sv = g.s_v(1, 0, 0).images
    expected = generate(g.G(1, 1), np.concatenate([sh, sv]))
    assert g.degenerate_subgroup(1, 1) == expected
    with pytest.raises(TruncationExceeded):
        g.degenerate_subgroup(0, 0)
    for n, m in LEVELS[1:]:
        D = d4_grid.degenerate_subgroup(n, m)
        if n:
            assert D.mask[d4_grid.s_h(n - 1, m, 0).images].all()
        if m:
            assert D.mask[d4_grid.s_v(n, m - 1, m - 1).images].all()


def test_kernel_intersection_conventions(d4_grid):
    g = d4_grid
    assert g.kernel_intersection(1, 1).order == g.G(1, 1).order
    assert g.kernel_intersection(1, 1, h=[0], v=[0]) == g.moore(1, 1)
    with pytest.raises(IndexOutOfRange):
        g.kernel_intersection(0, 1, h=[0])
    with pytest.raises(IndexOutOfRange):
        g.kernel_intersection(1, 1, v=[2])


def test_one_sided_grids(nerve2):
    for g, axis in ((from_horizontal(nerve2), 0), (from_vertical(nerve2), 1)):
        assert verify_bisimplicial(g).ok
        for (p, q), order in g.moore_orders().items():
            if (p, q)[1 - axis] != 0:
                assert order == 1
    row = from_horizontal(nerve2).row(0)
    assert [G.order for G in row.levels] == [G.order for G in nerve2.levels]
    for n in range(1, 3):
        for a, b in zip(row.faces[n], nerve2.faces[n]):
            assert np.array_equal(a.images, b.images)


def test_external_product_of_constants_is_constant(s3):
    c = constant_simplicial(s3, N=2)
    g = external_product(c, c)
    assert verify_bisimplicial(g).ok
    orders = g.moore_orders()
    assert orders[(0, 0)] == 36
    assert all(v == 1 for k, v in orders.items() if k != (0, 0))
    for key, f in g.dh.items():
        assert f.is_injective


def test_truncated(d4_grid):
    t = d4_grid.truncated(1, 2)
    assert t.truncation == (1, 2)
    assert verify_bisimplicial(t).ok
    assert t.moore_orders() == {k: v for k, v in d4_grid.moore_orders().items() if k[0] <= 1}
    with pytest.raises(TruncationExceeded):
        d4_grid.truncated(3, 1)
    with pytest.raises(TruncationExceeded):
        t.G(2, 0)


def test_diagonal_and_codiagonal(d4_grid):
    d = diagonal(d4_grid)
    assert [G.order for G in d.levels] == [8, 256, 32768]
    assert verify_simplicial(d).ok
    c = codiagonal(d4_grid)
    assert verify_simplicial(c).ok
    assert c.moore_orders() == [8, 16, 2]
    # the two total complexes are weakly equivalent; at desk scale compare NG0 and NG2
    assert is_isomorphic(d.moore(0).group, c.moore(0).group)


def test_broken_face_is_flagged():
    rep = verify_bisimplicial(fixtures.broken_face_grid())
    assert not rep.ok
    assert len(rep.failures) == 9
    assert all(c.witness is not None for c in rep.failures)
