import numpy as np
import pytest

from bisimp import fixtures
from bisimp.bisimplicial import codiagonal, external_product, from_vertical
from bisimp.crossed import (
    AxiomViolation, CrossedSquareData, HypothesisViolated, check_crossed_module, check_crossed_square,
    check_two_crossed_module, crossed_module_isomorphism, crossed_square_isomorphism,
    extract_crossed_module, extract_crossed_square, lifting_vs_pairing, mapping_cone,
    normal_pair_square, product_crossed_module, two_crossed_from_cols, two_crossed_from_rows,
    two_crossed_from_simplicial, two_crossed_isomorphism,
)
from bisimp.fingroup import Homomorphism, cyclic, generate, perm_from_cycles, symmetric
from bisimp.report import FAIL
from bisimp.simplicial import CrossedModuleData, constant_simplicial

R = perm_from_cycles(4, (0, 1, 2, 3))
S = perm_from_cycles(4, (0, 2))
R2 = perm_from_cycles(4, (0, 2), (1, 3))


def failing(rep):
    return sorted(c.name for c in rep.failures)


def preimage(f, target_index):
    hits = np.flatnonzero(f.images == target_index)
    assert hits.size == 1
    return int(hits[0])


# -- crossed modules ------------------------------------------------------------------


def test_trivial_source_module_passes(s3):
    T = cyclic(1)
    x = CrossedModuleData(T, s3, Homomorphism.trivial(T, s3), np.zeros((6, 1), dtype=np.int64))
    assert check_crossed_module(x).ok


def test_inclusion_with_conjugation_passes(c3s3):
    rep = check_crossed_module(c3s3)
    assert rep.ok and rep.counts()[FAIL] == 0


def test_trivial_action_on_abelian_source_breaks_equivariance():
    rep = check_crossed_module(fixtures.trivial_action_xmod())
    names = failing(rep)
    assert len(names) == 1 and names[0].startswith("CM1")
    assert rep.failures[0].witness is not None


def test_trivial_action_on_identity_breaks_both():
    names = failing(check_crossed_module(fixtures.trivial_action_identity_xmod()))
    assert [n[:3] for n in names] == ["CM1", "CM2"]


def test_extract_from_constant_grid(constant_grid):
    ex = extract_crossed_module(constant_grid)
    for x in ex.as_list():
        assert check_crossed_module(x).ok
        assert x.M.order == 1 and x.P.order == 6


def test_extract_from_external_product(external_grid, c3s3):
    ex = extract_crossed_module(external_grid)
    assert len(ex.as_list()) == 3
    for x in ex.as_list():
        assert check_crossed_module(x).ok
    assert ex.product.M.order == 9 and ex.product.P.order == 36
    assert crossed_module_isomorphism(ex.product, product_crossed_module(c3s3, c3s3)) is not None
    assert crossed_module_isomorphism(ex.vertical, c3s3) is None  # base is S3 x S3, not S3


def test_extract_with_one_trivial_factor_recovers_module(c3s3, nerve2):
    point = constant_simplicial(cyclic(1), N=2)
    for g, pick in ((external_product(point, nerve2), "vertical"),
                    (external_product(nerve2, point), "horizontal")):
        ex = extract_crossed_module(g)
        assert crossed_module_isomorphism(getattr(ex, pick), c3s3) is not None
        assert crossed_module_isomorphism(ex.product, c3s3) is not None


def test_extract_module_rejects_nontrivial_interior(d4_grid):
    with pytest.raises(HypothesisViolated) as info:
        extract_crossed_module(d4_grid)
    assert info.value.level == (1, 1)
    assert info.value.witness is not None


# -- crossed squares ------------------------------------------------------------------


def test_trivial_square_passes():
    G = cyclic(1)
    ident = Homomorphism.identity(G)
    zero = np.zeros((1, 1), dtype=np.int64)
    sq = CrossedSquareData(G, G, G, G, ident, ident, ident, ident, zero, zero, zero, zero)
    assert check_crossed_square(sq).ok


def test_normal_pair_square(d4):
    sq = fixtures.d4_square()
    assert sq.orders == {"L": 2, "M": 4, "N": 4, "P": 8}
    assert check_crossed_square(sq).ok
    P = sq.P
    m = preimage(sq.mu, P.index_of(R))
    n = preimage(sq.nu, P.index_of(S))
    assert np.array_equal(P.perms[sq.mu.images[sq.lam.images[sq.h[m, n]]]], R2)


def test_trivial_h_breaks_axiom_two():
    rep = check_crossed_square(fixtures.trivial_h_square())
    names = failing(rep)
    assert len(names) == 2 and all(n.startswith("2") for n in names)
    assert all(c.witness is not None for c in rep.failures)


def test_extract_square_from_d4_grid(d4_grid):
    sq = extract_crossed_square(d4_grid)
    assert check_crossed_square(sq).ok
    assert sq.orders == {"L": 2, "M": 4, "N": 4, "P": 8}
    assert (sq.h != 0).any()
    iso = crossed_square_isomorphism(sq, fixtures.d4_square())
    assert iso is not None and set(iso) == {0, 1, 2, 3}
    m = preimage(sq.mu, sq.P.index_of(R))
    n = preimage(sq.nu, sq.P.index_of(S))
    assert np.array_equal(sq.P.perms[sq.mu.images[sq.lam.images[sq.h[m, n]]]], R2)


def test_h_identities_on_d4(d4_grid):
    """lambda h(x,y) = x (nu(y).x)^-1, lambda' h(x,y) = (mu(x).y) y^-1, h(lambda z, y) = z (nu(y).z)^-1."""
    sq = extract_crossed_square(d4_grid)
    L, M, N = sq.L, sq.M, sq.N
    for x in range(M.order):
        for y in range(N.order):
            h = sq.h[x, y]
            assert sq.lam.images[h] == M.mul(x, M.inv(sq.act_M[sq.nu.images[y], x]))
            assert sq.lam2.images[h] == N.mul(sq.act_N[sq.mu.images[x], y], N.inv(y))
    for z in range(L.order):
        for y in range(N.order):
            assert sq.h[sq.lam.images[z], y] == L.mul(z, L.inv(sq.act_L[sq.nu.images[y], z]))
        for x in range(M.order):
            assert sq.h[x, sq.lam2.images[z]] == L.mul(sq.act_L[sq.mu.images[x], z], L.inv(z))


def test_extract_square_external_and_constant(external_grid, constant_grid):
    sq = extract_crossed_square(external_grid)
    assert sq.L.order == 1 and check_crossed_square(sq).ok
    c = extract_crossed_square(constant_grid)
    assert c.orders == {"L": 1, "M": 1, "N": 1, "P": 6}
    assert check_crossed_square(c).ok


def test_extract_square_rejects_level_two():
    g = from_vertical(fixtures.d4_diagonal())
    with pytest.raises(HypothesisViolated) as info:
        extract_crossed_square(g)
    assert info.value.level[1] == 2


def test_check_then_extract_is_stable(d4_grid):
    a = check_crossed_square(extract_crossed_square(d4_grid))
    b = check_crossed_square(extract_crossed_square(d4_grid))
    assert [(c.name, c.status) for c in a.checks] == [(c.name, c.status) for c in b.checks]


# -- 2-crossed modules -----------------------------------------------------------------------


def test_nerve_two_crossed(nerve2):
    x = two_crossed_from_simplicial(nerve2)
    assert x.L.order == 1
    assert check_two_crossed_module(x).ok


def test_constant_two_crossed(s3):
    x = two_crossed_from_simplicial(constant_simplicial(s3, N=2))
    assert (x.L.order, x.M.order, x.N.order) == (1, 1, 6)
    assert check_two_crossed_module(x).ok


def test_two_crossed_with_nontrivial_top():
    s = fixtures.d4_diagonal()
    x = two_crossed_from_simplicial(s)
    assert x.L.order == 4
    assert check_two_crossed_module(x).ok


def test_rows_and_columns_on_every_grid(any_grid):
    for k in range(3):
        for direction, build in (("v", two_crossed_from_rows), ("h", two_crossed_from_cols)):
            x = build(any_grid, k)
            assert check_two_crossed_module(x).ok
            assert lifting_vs_pairing(any_grid, direction, k, x).ok
            assert (x.lift[0, :] == 0).all() and (x.lift[:, 0] == 0).all()


def test_row_of_product_with_point_reduces_to_factor(nerve2):
    g = external_product(constant_simplicial(cyclic(1), N=2), nerve2)
    row = two_crossed_from_rows(g, 0)
    direct = two_crossed_from_simplicial(nerve2)
    assert two_crossed_isomorphism(row, direct) is not None


def test_trivial_lifting_breaks_only_first_axiom():
    rep = check_two_crossed_module(fixtures.trivial_lifting_cone())
    names = failing(rep)
    assert len(names) == 1 and names[0].startswith("1:")
    assert rep.failures[0].witness is not None


# -- mapping cone -------------------------------------------------------------------------------


def test_d4_cone():
    cone = fixtures.d4_cone()
    assert cone.orders == {"L": 2, "M": 16, "N": 8}
    assert check_two_crossed_module(cone).ok
    assert (cone.d1.images[cone.d2.images] == 0).all()


def test_s4_cone_separates_liftings():
    sq = fixtures.s4_square()
    assert check_crossed_square(sq).ok
    assert check_two_crossed_module(mapping_cone(sq)).ok
    literal = check_two_crossed_module(mapping_cone(sq, lifting="h(x,ab)"))
    assert not literal.ok
    assert "1" in {c.name.split(":")[0] for c in literal.failures}


def test_cone_of_square_with_trivial_corner(external_grid):
    sq = extract_crossed_square(external_grid)
    cone = mapping_cone(sq)
    assert cone.L.order == 1
    assert check_two_crossed_module(cone).ok


def test_cone_matches_codiagonal(d4_grid):
    cone = mapping_cone(extract_crossed_square(d4_grid))
    total = two_crossed_from_simplicial(codiagonal(d4_grid))
    assert two_crossed_isomorphism(cone, total) is not None
    assert two_crossed_isomorphism(mapping_cone(extract_crossed_square(d4_grid), lifting="trivial"),
                                   total) is None


def test_cone_refuses_invalid_square():
    with pytest.raises(AxiomViolation):
        mapping_cone(fixtures.trivial_h_square())


def test_normal_pair_square_in_s3():
    S3 = symmetric(3)
    A3 = generate(S3, [i for i in range(6) if S3.element_orders[i] == 3])
    sq = normal_pair_square(S3, A3, S3.whole())
    assert check_crossed_square(sq).ok
    assert check_two_crossed_module(mapping_cone(sq)).ok
