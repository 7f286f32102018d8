import numpy as np
import pytest

from bisimp.crossed import check_crossed_module, crossed_module_isomorphism, two_crossed_from_simplicial
from bisimp.fingroup import Homomorphism, cyclic, dihedral, generate, is_isomorphic, symmetric
from bisimp.simplicial import (
    CrossedModuleData, SimplicialGroupTrunc, TruncationExceeded, chain, constant_simplicial, nerve,
    verify_simplicial,
)


def moore_crossed_module(s):
    x = two_crossed_from_simplicial(s)
    return CrossedModuleData(x.M, x.N, x.d1, x.act_M, name="NG1 -> NG0")


def test_constant_simplicial_passes_and_has_trivial_moore(s3):
    s = constant_simplicial(s3, N=3)
    rep = verify_simplicial(s)
    assert rep.ok and rep.counts()["FAIL"] == 0
    assert s.moore_orders() == [6, 1, 1, 1]
    assert s.moore(0).order == s3.order


def test_nerve_orders(c3s3, nerve2):
    assert [G.order for G in nerve2.levels] == [6, 18, 54]
    assert nerve2.moore_orders() == [6, 3, 1]
    assert verify_simplicial(nerve2).ok
    assert is_isomorphic(nerve2.moore(1).group, c3s3.M)


def test_nerve_default_truncation(c3s3):
    s = nerve(c3s3)
    assert s.N == 3
    assert s.moore_orders() == [6, 3, 1, 1]
    assert verify_simplicial(s).ok


def test_nerve_of_trivial_module_is_constant(s3):
    T = cyclic(1)
    x = CrossedModuleData(T, s3, Homomorphism.trivial(T, s3), np.zeros((6, 1), dtype=np.int64))
    s = nerve(x, N=2)
    c = constant_simplicial(s3, N=2)
    assert [G.order for G in s.levels] == [6, 6, 6]
    assert s.moore_orders() == c.moore_orders()
    for n in range(1, 3):
        for f in s.faces[n]:
            assert f.is_injective


@pytest.mark.parametrize("module", ["c3s3", "d4_rot", "identity_s3"])
def test_moore_round_trip_recovers_module(module, c3s3):
    if module == "c3s3":
        x = c3s3
    elif module == "d4_rot":
        D = dihedral(4)
        R = generate(D, [D.generators[0]])
        x = CrossedModuleData.by_conjugation(R.group, D, Homomorphism(R.group, D, R.indices))
    else:
        S = symmetric(3)
        x = CrossedModuleData.by_conjugation(S, S, Homomorphism.identity(S))
    assert check_crossed_module(x).ok
    s = nerve(x, N=2)
    assert verify_simplicial(s).ok
    back = moore_crossed_module(s)
    assert check_crossed_module(back).ok
    assert crossed_module_isomorphism(x, back) is not None


def test_boundary_is_a_complex(nerve2):
    for n in range(2, nerve2.N + 1):
        two = chain(nerve2.boundary(n), nerve2.boundary(n - 1))
        assert (two == 0).all()


def test_truncation_errors(nerve2):
    with pytest.raises(TruncationExceeded):
        nerve2.moore(3)
    with pytest.raises(TruncationExceeded):
        nerve2.s(2, 0)
    with pytest.raises(TruncationExceeded):
        nerve2.boundary(0)


def test_degeneracies_injective_faces_surjective(nerve2):
    for n in range(nerve2.N):
        for s in nerve2.degens[n]:
            assert s.is_injective
    for n in range(1, nerve2.N + 1):
        for d in nerve2.faces[n]:
            assert np.unique(d.images).size == nerve2.levels[n - 1].order


def test_corrupted_face_is_flagged_with_witness(nerve2):
    S3 = nerve2.levels[0]
    faces = {n: list(nerve2.faces[n]) for n in nerve2.faces}
    t = next(i for i in range(S3.order) if S3.element_orders[i] == 2)
    conj = Homomorphism(S3, S3, S3.conj(t, np.arange(S3.order)))
    faces[1][1] = conj.compose(faces[1][1])
    bad = SimplicialGroupTrunc(nerve2.levels, faces, nerve2.degens, name="corrupted")
    rep = verify_simplicial(bad)
    assert not rep.ok
    names = [c.name for c in rep.failures]
    assert any("d1" in n for n in names)
    assert all(c.witness is not None for c in rep.failures)


def test_factorization_in_report(nerve2):
    rep = verify_simplicial(nerve2)
    for n in range(3):
        lhs, rhs = nerve2.order_factorization(n)
        assert lhs == rhs
    assert any("product of Moore orders" in c.name for c in rep.checks)
