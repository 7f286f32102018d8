import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisimp import kernels
from bisimp._kernels_py import enumerate_perms as py_enumerate
from bisimp.fingroup import (
    BadPermutation, FiniteGroup, Homomorphism, HomomorphismInvalid, OrderCapExceeded,
    commutator_subgroup, cyclic, dihedral, direct_product, generate, intersect, is_isomorphic,
    isomorphisms, normal_closure, perm_from_cycles, semidirect_product, symmetric,
)


def brute_closure(gens, degree):
    """Reference closure by repeated multiplication of tuples."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[i] for i in g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


S3_GENS = [[1, 0, 2], [0, 2, 1]]


# -- closure ---------------------------------------------------------------------


def test_empty_generating_set_gives_trivial_group():
    assert FiniteGroup.closure([], degree=3).order == 1


def test_adjacent_transpositions_give_order_six():
    assert FiniteGroup.closure(S3_GENS, degree=3).order == 6


def test_four_cycle_gives_order_four():
    assert FiniteGroup.closure([perm_from_cycles(4, (0, 1, 2, 3))]).order == 4


def test_order_cap_is_enforced():
    with pytest.raises(OrderCapExceeded):
        FiniteGroup.closure([[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], cap=100)


@pytest.mark.parametrize("bad", [[0, 0, 1], [0, 1, 3], [-1, 0, 1]])
def test_non_bijection_rejected(bad):
    with pytest.raises(BadPermutation):
        FiniteGroup.closure([bad], degree=3)


def test_closure_matches_brute_force_on_s4():
    gens = [[1, 2, 3, 0], [1, 0, 2, 3]]
    G = FiniteGroup.closure(gens)
    assert {tuple(p) for p in G.perms.tolist()} == brute_closure(gens, 4)


def test_backends_enumerate_identically():
    gens = np.array([[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], dtype=np.int32)
    a = kernels.enumerate_perms(gens, 1000)
    b = py_enumerate(gens, 1000)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


perm_strategy = st.integers(3, 6).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3))


@settings(max_examples=40, deadline=None)
@given(perm_strategy)
def test_group_axioms_hold_for_random_generators(gens):
    G = FiniteGroup.closure(gens)
    assert {tuple(p) for p in G.perms.tolist()} == brute_closure(gens, len(gens[0]))
    x = np.arange(G.order)
    assert np.array_equal(G.mul(x, G.inv(x)), np.zeros(G.order))
    assert np.array_equal(G.mul(0, x), x)
    rng = np.random.default_rng(len(gens))
    a, b, c = rng.integers(0, G.order, size=(3, 50))
    assert np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)))
    assert np.array_equal(G.lookup(G.perms), x)


@settings(max_examples=30, deadline=None)
@given(perm_strategy)
def test_multiplication_is_composition(gens):
    G = FiniteGroup.closure(gens)
    rng = np.random.default_rng(7)
    a, b = rng.integers(0, G.order, size=(2, 20))
    for i, j in zip(a, b):
        assert np.array_equal(G.perms[G.mul(i, j)], G.perms[i][G.perms[j]])


# -- kernels, closures, intersections -------------------------------------------------


def sign(p):
    inv = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return inv % 2


def test_identity_hom_has_trivial_kernel(s3):
    assert Homomorphism.identity(s3).kernel().is_trivial


def test_trivial_hom_kernel_is_everything(s3):
    assert Homomorphism.trivial(s3, s3).kernel().order == 6


def test_sign_kernel_has_order_three(s3):
    C2 = cyclic(2)
    images = [sign(p) and C2.index_of([1, 0]) for p in s3.perms.tolist()]
    f = Homomorphism(s3, C2, images)
    assert f.kernel().order == 3
    brute = [p for p in s3.perms.tolist() if sign(p) == 0]
    assert sorted(map(tuple, s3.perms[f.kernel().indices].tolist())) == sorted(map(tuple, brute))


def test_non_homomorphism_is_rejected(s3):
    C2 = cyclic(2)
    images = np.zeros(6, dtype=np.int64)
    images[s3.generators[0]] = 1
    with pytest.raises(HomomorphismInvalid):
        Homomorphism(s3, C2, images)


def test_normal_closure(s3):
    assert normal_closure(s3, s3.trivial()).is_trivial
    assert normal_closure(s3, s3.whole()).order == 6
    t = s3.index_of([1, 0, 2])
    assert normal_closure(s3, [t]).order == 6


def test_commutator_subgroups(s3):
    assert commutator_subgroup(s3.trivial(), s3.whole()).is_trivial
    A = generate(s3, [s3.index_of([1, 2, 0])])
    assert commutator_subgroup(A, A).is_trivial
    assert commutator_subgroup(s3.whole(), s3.whole()).order == 3


def test_intersection_in_d4():
    D4 = FiniteGroup.closure([perm_from_cycles(4, (0, 1, 2, 3)), perm_from_cycles(4, (0, 2))])
    rot = generate(D4, [D4.index_of(perm_from_cycles(4, (0, 1, 2, 3)))])
    klein = generate(D4, [D4.index_of(perm_from_cycles(4, (0, 2), (1, 3))),
                          D4.index_of(perm_from_cycles(4, (0, 1), (2, 3)))])
    both = intersect(rot, klein)
    assert both.order == 2
    assert D4.index_of(perm_from_cycles(4, (0, 2), (1, 3))) in both
    assert intersect(rot, rot) == rot
    assert intersect(rot, D4.trivial()).is_trivial


# -- products and isomorphisms ------------------------------------------------------------


def test_direct_products():
    C3 = cyclic(3)
    P = direct_product(C3, C3).group
    assert P.order == 9
    assert set(P.element_orders.tolist()) <= {1, 3}
    S3 = symmetric(3)
    assert is_isomorphic(direct_product(S3, FiniteGroup.closure([], degree=1)).group, S3)


def test_semidirect_product_c3_by_c2_is_s3():
    C3, C2 = cyclic(3), cyclic(2)
    flip = C3.inv(np.arange(3))
    action = np.stack([np.arange(3), flip])
    G, _, _, _ = semidirect_product(C3, C2, action)
    assert G.order == 6 and not G.is_abelian
    assert is_isomorphic(G, symmetric(3))


def test_isomorphism_tests():
    C4 = cyclic(4)
    V4 = direct_product(cyclic(2), cyclic(2)).group
    assert not is_isomorphic(C4, V4)
    assert is_isomorphic(C4, C4)
    a = FiniteGroup.closure(S3_GENS)
    b = FiniteGroup.closure([[1, 2, 0], [1, 0, 2]])
    assert is_isomorphic(a, b)


@pytest.mark.parametrize("group,count", [(symmetric(3), 6), (dihedral(4), 8), (cyclic(5), 4)])
def test_automorphism_counts(group, count):
    autos = list(isomorphisms(group, group))
    assert len(autos) == count
    for f in autos:
        assert f.violation() is None and f.is_injective


def test_environment_forces_fallback_backend():
    import os
    import subprocess
    import sys
    code = "import bisimp.kernels as k; print(k.BACKEND, k.enumerate_perms.__module__)"
    env = dict(os.environ, BISIMP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.split() == ["python", "bisimp._kernels_py"]
