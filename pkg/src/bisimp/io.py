"""JSON descriptors for every structure the package checks.

Groups are ``{"degree", "generators"}`` with 0-based image arrays; homomorphisms
are ``{"gen_images"}`` parallel to the domain generators.  Every top-level
document carries a ``"kind"`` field.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bisimplicial import BisimplicialGroupTrunc, IdentityViolation, verify_bisimplicial
from .crossed import CrossedSquareData, TwoCrossedModuleData
from .fingroup import DEFAULT_ORDER_CAP, FiniteGroup, GroupError, Homomorphism
from .simplicial import CrossedModuleData, SimplicialGroupTrunc, verify_simplicial
from .surjections import ParseError

KINDS = ("simplicial", "bisimplicial", "crossed_module", "crossed_square", "two_crossed_module")


def _need(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{where}: missing {key!r}")
    return d[key]


def _perm_list(a):
    return [int(v) for v in a]


# -- groups and maps --------------------------------------------------------------------------


def group_to_json(G: FiniteGroup):
    return {"degree": int(G.degree), "generators": [_perm_list(G.perms[g]) for g in G.generators]}


def group_from_json(d, cap=DEFAULT_ORDER_CAP, where="group", name=""):
    degree = _need(d, "degree", where)
    gens = _need(d, "generators", where)
    if not isinstance(degree, int) or degree < 0 or not isinstance(gens, list):
        raise ParseError(f"{where}: malformed group descriptor")
    return FiniteGroup.closure(gens, degree=degree, cap=cap, name=name)


def hom_to_json(f: Homomorphism):
    return {"gen_images": [_perm_list(f.codomain.perms[i]) for i in f.gen_images()]}


def hom_from_json(d, domain, codomain, check=True, where="homomorphism"):
    imgs = _need(d, "gen_images", where)
    if len(imgs) != len(domain.generators):
        raise ParseError(f"{where}: {len(imgs)} images for {len(domain.generators)} generators")
    if not imgs:
        return Homomorphism.trivial(domain, codomain)
    return Homomorphism.from_gen_perms(domain, codomain, imgs, check=check)


def action_table(acting: FiniteGroup, target: FiniteGroup, autos):
    """Full ``(|acting|, |target|)`` table from one automorphism per generator of ``acting``."""
    gens = [np.asarray(a.images if isinstance(a, Homomorphism) else a, dtype=np.int64) for a in autos]
    if len(gens) != len(acting.generators):
        raise GroupError(f"{len(gens)} automorphisms for {len(acting.generators)} generators")
    tree = acting.tree
    action = np.empty((acting.order, target.order), dtype=np.int64)
    action[0] = np.arange(target.order)
    for p in tree.bfs[1:]:
        action[p] = action[tree.parent[p]][gens[tree.via[p]]]
    return action


def action_to_json(acting, target, table):
    return [{"gen_images": [_perm_list(target.perms[table[g][t]]) for t in target.generators]}
            for g in acting.generators]


def action_from_json(lst, acting, target, where="action"):
    if not isinstance(lst, list) or len(lst) != len(acting.generators):
        raise ParseError(f"{where}: need one automorphism per acting generator")
    autos = [hom_from_json(a, target, target, where=f"{where}[{k}]") for k, a in enumerate(lst)]
    return action_table(acting, target, autos)


def _pairs_to_json(A, B, C, table):
    return [[_perm_list(A.perms[i]), _perm_list(B.perms[j]), _perm_list(C.perms[table[i, j]])]
            for i in range(A.order) for j in range(B.order)]


def _pairs_from_json(lst, A, B, C, where):
    table = np.full((A.order, B.order), -1, dtype=np.int64)
    try:
        for a, b, c in lst:
            table[A.index_of(a), B.index_of(b)] = C.index_of(c)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"{where}: bad entry ({exc})") from exc
    if (table < 0).any():
        raise ParseError(f"{where}: table does not cover every pair")
    return table


# -- simplicial and bisimplicial ----------------------------------------------------------------


def simplicial_to_json(s: SimplicialGroupTrunc):
    return {
        "kind": "simplicial",
        "name": s.name,
        "max_n": s.N,
        "levels": {str(n): group_to_json(G) for n, G in enumerate(s.levels)},
        "faces": {f"{n},{i}": hom_to_json(f) for n in range(1, s.N + 1)
                  for i, f in enumerate(s.faces[n])},
        "degens": {f"{n},{i}": hom_to_json(f) for n in range(s.N) for i, f in enumerate(s.degens[n])},
    }


def simplicial_from_json(d, cap=DEFAULT_ORDER_CAP, verify=True):
    N = _need(d, "max_n", "simplicial")
    lv = _need(d, "levels", "simplicial")
    levels = [group_from_json(_need(lv, str(n), "levels"), cap, f"level {n}") for n in range(N + 1)]
    fj, sj = _need(d, "faces", "simplicial"), _need(d, "degens", "simplicial")
    faces = {n: [hom_from_json(_need(fj, f"{n},{i}", "faces"), levels[n], levels[n - 1],
                               where=f"d_{i} at {n}") for i in range(n + 1)] for n in range(1, N + 1)}
    degens = {n: [hom_from_json(_need(sj, f"{n},{i}", "degens"), levels[n], levels[n + 1],
                                where=f"s_{i} at {n}") for i in range(n + 1)] for n in range(N)}
    s = SimplicialGroupTrunc(levels, faces, degens, name=d.get("name", ""))
    if verify:
        rep = verify_simplicial(s)
        if not rep.ok:
            raise IdentityViolation(f"simplicial identities fail: {rep.failures[0].name}", rep)
    return s


def grid_to_json(g: BisimplicialGroupTrunc):
    out = {"kind": "bisimplicial", "name": g.name, "max_p": g.P, "max_q": g.Q,
           "levels": {f"{p},{q}": group_to_json(g.G(p, q)) for p, q in sorted(g.levels)}}
    for key in ("dh", "sh", "dv", "sv"):
        ops = getattr(g, key)
        out[key] = {f"{p},{q},{i}": hom_to_json(ops[(p, q, i)]) for p, q, i in sorted(ops)}
    return out


def grid_from_json(d, cap=DEFAULT_ORDER_CAP, verify=True):
    """Load a grid; with ``verify`` the identities are checked and IdentityViolation raised."""
    P = _need(d, "max_p", "bisimplicial")
    Q = _need(d, "max_q", "bisimplicial")
    lv = _need(d, "levels", "bisimplicial")
    levels = {(p, q): group_from_json(_need(lv, f"{p},{q}", "levels"), cap, f"level {p},{q}")
              for p in range(P + 1) for q in range(Q + 1)}
    ops = {}
    for key, dp, dq, count in (
            ("dh", -1, 0, lambda p, q: p + 1), ("sh", 1, 0, lambda p, q: p + 1),
            ("dv", 0, -1, lambda p, q: q + 1), ("sv", 0, 1, lambda p, q: q + 1)):
        src = _need(d, key, "bisimplicial")
        table = {}
        for (p, q) in sorted(levels):
            tgt = (p + dp, q + dq)
            if tgt not in levels:
                continue
            for i in range(count(p, q)):
                k = f"{p},{q},{i}"
                table[(p, q, i)] = hom_from_json(_need(src, k, key), levels[(p, q)], levels[tgt],
                                                 where=f"{key} {k}")
        ops[key] = table
    g = BisimplicialGroupTrunc(levels, ops["dh"], ops["sh"], ops["dv"], ops["sv"],
                               name=d.get("name", ""))
    if verify:
        rep = verify_bisimplicial(g, check_homs=False)
        if not rep.ok:
            raise IdentityViolation(f"bisimplicial identities fail: {rep.failures[0].name}", rep)
    return g


def from_grid_spec(path, cap=DEFAULT_ORDER_CAP):
    return grid_from_json(_read(path), cap=cap)


# -- crossed structures ------------------------------------------------------------------------


def xmod_to_json(x: CrossedModuleData):
    return {"kind": "crossed_module", "name": x.name, "M": group_to_json(x.M),
            "P": group_to_json(x.P), "boundary": hom_to_json(x.boundary),
            "action": action_to_json(x.P, x.M, x.action)}


def xmod_from_json(d, cap=DEFAULT_ORDER_CAP):
    M = group_from_json(_need(d, "M", "crossed_module"), cap, "M")
    P = group_from_json(_need(d, "P", "crossed_module"), cap, "P")
    bd = hom_from_json(_need(d, "boundary", "crossed_module"), M, P, where="boundary")
    act = action_from_json(_need(d, "action", "crossed_module"), P, M)
    return CrossedModuleData(M, P, bd, act, check=False, name=d.get("name", ""))


def xsq_to_json(x: CrossedSquareData):
    return {"kind": "crossed_square", "name": x.name,
            "L": group_to_json(x.L), "M": group_to_json(x.M),
            "N": group_to_json(x.N), "P": group_to_json(x.P),
            "lambda": hom_to_json(x.lam), "lambda_prime": hom_to_json(x.lam2),
            "mu": hom_to_json(x.mu), "nu": hom_to_json(x.nu),
            "action_L": action_to_json(x.P, x.L, x.act_L),
            "action_M": action_to_json(x.P, x.M, x.act_M),
            "action_N": action_to_json(x.P, x.N, x.act_N),
            "h": _pairs_to_json(x.M, x.N, x.L, x.h)}


def xsq_from_json(d, cap=DEFAULT_ORDER_CAP):
    w = "crossed_square"
    L, M, N, P = (group_from_json(_need(d, k, w), cap, k) for k in "LMNP")
    return CrossedSquareData(
        L, M, N, P,
        hom_from_json(_need(d, "lambda", w), L, M, where="lambda"),
        hom_from_json(_need(d, "lambda_prime", w), L, N, where="lambda_prime"),
        hom_from_json(_need(d, "mu", w), M, P, where="mu"),
        hom_from_json(_need(d, "nu", w), N, P, where="nu"),
        action_from_json(_need(d, "action_L", w), P, L, "action_L"),
        action_from_json(_need(d, "action_M", w), P, M, "action_M"),
        action_from_json(_need(d, "action_N", w), P, N, "action_N"),
        _pairs_from_json(_need(d, "h", w), M, N, L, "h"), name=d.get("name", ""))


def x2mod_to_json(x: TwoCrossedModuleData):
    return {"kind": "two_crossed_module", "name": x.name,
            "L": group_to_json(x.L), "M": group_to_json(x.M), "N": group_to_json(x.N),
            "d2": hom_to_json(x.d2), "d1": hom_to_json(x.d1),
            "action_M": action_to_json(x.N, x.M, x.act_M),
            "action_L": action_to_json(x.N, x.L, x.act_L),
            "lifting": _pairs_to_json(x.M, x.M, x.L, x.lift)}


def x2mod_from_json(d, cap=DEFAULT_ORDER_CAP):
    w = "two_crossed_module"
    L, M, N = (group_from_json(_need(d, k, w), cap, k) for k in "LMN")
    return TwoCrossedModuleData(
        L, M, N,
        hom_from_json(_need(d, "d2", w), L, M, where="d2"),
        hom_from_json(_need(d, "d1", w), M, N, where="d1"),
        action_from_json(_need(d, "action_M", w), N, M, "action_M"),
        action_from_json(_need(d, "action_L", w), N, L, "action_L"),
        _pairs_from_json(_need(d, "lifting", w), M, M, L, "lifting"), name=d.get("name", ""))


# -- dispatch --------------------------------------------------------------------------------------


_WRITERS = (
    (SimplicialGroupTrunc, simplicial_to_json), (BisimplicialGroupTrunc, grid_to_json),
    (CrossedModuleData, xmod_to_json), (CrossedSquareData, xsq_to_json),
    (TwoCrossedModuleData, x2mod_to_json),
)


def to_json(obj):
    for cls, fn in _WRITERS:
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"no serializer for {type(obj).__name__}")


def from_json(d, cap=DEFAULT_ORDER_CAP, verify=True):
    """Dispatch on ``"kind"``; structures of the crossed kinds are loaded unchecked."""
    kind = _need(d, "kind", "document")
    if kind == "simplicial":
        return simplicial_from_json(d, cap, verify)
    if kind == "bisimplicial":
        return grid_from_json(d, cap, verify)
    if kind == "crossed_module":
        return xmod_from_json(d, cap)
    if kind == "crossed_square":
        return xsq_from_json(d, cap)
    if kind == "two_crossed_module":
        return x2mod_from_json(d, cap)
    raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def _read(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def load(path, cap=DEFAULT_ORDER_CAP, verify=True):
    return from_json(_read(path), cap=cap, verify=verify)


def dump(obj, path):
    Path(path).write_text(json.dumps(to_json(obj), sort_keys=True) + "\n")
