"""Named fixtures, including the mutated ones used as negative controls."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .bisimplicial import (
    BisimplicialGroupTrunc, codiagonal, constant_bisimplicial, diagonal, external_product,
    normal_pair_grid,
)
from .crossed import mapping_cone, normal_pair_square
from .fingroup import Homomorphism, dihedral, generate, symmetric
from .simplicial import CrossedModuleData, nerve


@lru_cache(maxsize=None)
def s3():
    return symmetric(3)


@lru_cache(maxsize=None)
def d4():
    """D4 on 4 points with its normal pair ``M = <r>``, ``N = <r^2, s>``."""
    G = dihedral(4)
    r, s = G.generators
    M = generate(G, [r])
    N = generate(G, [G.mul(r, r), s])
    return G, M, N


@lru_cache(maxsize=None)
def c3_in_s3():
    S3 = s3()
    A = generate(S3, [i for i in range(S3.order) if S3.element_orders[i] == 3])
    return CrossedModuleData.by_conjugation(A.group, S3, Homomorphism(A.group, S3, A.indices),
                                            name="C3 -> S3")


@lru_cache(maxsize=None)
def nerve_fixture(N=2):
    return nerve(c3_in_s3(), N)


@lru_cache(maxsize=None)
def constant_grid():
    return constant_bisimplicial(s3(), name="constant S3 grid")


@lru_cache(maxsize=None)
def external_product_grid():
    nv = nerve_fixture(2)
    return external_product(nv, nv, name="nerve(C3 -> S3) x nerve(C3 -> S3)")


@lru_cache(maxsize=None)
def d4_grid():
    G, M, N = d4()
    return normal_pair_grid(G, M, N, name="D4 normal-pair grid")


@lru_cache(maxsize=None)
def d4_diagonal():
    return diagonal(d4_grid(), name="diagonal of the D4 normal-pair grid")


@lru_cache(maxsize=None)
def d4_codiagonal():
    return codiagonal(d4_grid(), name="codiagonal of the D4 normal-pair grid")


@lru_cache(maxsize=None)
def s4_square():
    """Normal pair ``(A4; S4, A4; S4)``; its nonabelian L separates candidate cone liftings."""
    S4 = symmetric(4)
    A4 = generate(S4, [i for i in range(S4.order) if S4.element_orders[i] == 3])
    return normal_pair_square(S4, S4.whole(), A4, name="S4 normal pair (A4; S4, A4; S4)")


@lru_cache(maxsize=None)
def d4_square():
    G, M, N = d4()
    return normal_pair_square(G, M, N, name="D4 normal pair (<r^2>; <r>, <r^2,s>; D4)")


@lru_cache(maxsize=None)
def d4_cone():
    return mapping_cone(d4_square())


GRIDS = {
    "constant": constant_grid,
    "external": external_product_grid,
    "d4": d4_grid,
}

FIXTURES = {
    "c3-s3": c3_in_s3,
    "nerve": nerve_fixture,
    "constant": constant_grid,
    "external": external_product_grid,
    "d4": d4_grid,
    "d4-diagonal": d4_diagonal,
    "d4-codiagonal": d4_codiagonal,
    "s4-square": s4_square,
    "d4-square": d4_square,
    "d4-cone": d4_cone,
}


# -- mutations -------------------------------------------------------------------------------


def broken_face_grid():
    """Constant S3 grid with ``d^h_2`` at (2,2) replaced by conjugation by a transposition."""
    g = constant_grid()
    S3 = s3()
    t = next(i for i in range(S3.order) if S3.element_orders[i] == 2)
    dh = dict(g.dh)
    dh[(2, 2, 2)] = Homomorphism(S3, S3, S3.conj(t, np.arange(S3.order)))
    return BisimplicialGroupTrunc(dict(g.levels), dh, g.sh, g.dv, g.sv, name="broken-face grid")


def trivial_h_square():
    sq = d4_square()
    return sq.with_h(np.zeros_like(sq.h), name="D4 square with trivial h")


def trivial_lifting_cone():
    return mapping_cone(d4_square(), lifting="trivial")


def trivial_action_xmod():
    x = c3_in_s3()
    act = np.tile(np.arange(x.M.order), (x.P.order, 1))
    return CrossedModuleData(x.M, x.P, x.boundary, act, check=False, name="C3 -> S3, trivial action")


def trivial_action_identity_xmod():
    """``id: S3 -> S3`` with the trivial action; both CM1 and CM2 break."""
    S3 = s3()
    act = np.tile(np.arange(S3.order), (S3.order, 1))
    return CrossedModuleData(S3, S3, Homomorphism.identity(S3), act, check=False,
                             name="S3 -> S3, trivial action")


MUTATIONS = {
    "broken-face": broken_face_grid,
    "trivial-h": trivial_h_square,
    "trivial-lifting": trivial_lifting_cone,
    "trivial-action": trivial_action_xmod,
    "trivial-action-identity": trivial_action_identity_xmod,
}
