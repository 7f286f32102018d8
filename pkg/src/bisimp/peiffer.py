"""Projections onto Moore cells, the pairings F, and the commutator identities they satisfy.

All evaluators are vectorized: elements are index arrays into the level group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain as _chain, combinations

import numpy as np

from .bisimplicial import H, V, TruncationExceeded, IndexOutOfRange
from .fingroup import GroupError, Subgroup, commutator_subgroup, generate, intersect, normal_closure
from .report import FAIL, PASS, VACUOUS, VerificationReport
from .surjections import PairIndex, SurjectionTuple, enumerate_S


class DomainMembership(GroupError, ValueError):
    pass


# -- projections --------------------------------------------------------------------


def proj_step(g, level, direction, j, x):
    """``p_j(x) = x (s_j d_j x)^-1`` in one direction; result lies in ``ker d_j``."""
    n, m = level
    G = g.G(n, m)
    x = np.asarray(x)
    if direction == H:
        if not 0 <= j < n:
            raise IndexOutOfRange(f"p^h_{j} undefined at ({n},{m})")
        back = g.sh[(n - 1, m, j)].images[g.dh[(n, m, j)].images[x]]
    elif direction == V:
        if not 0 <= j < m:
            raise IndexOutOfRange(f"p^v_{j} undefined at ({n},{m})")
        back = g.sv[(n, m - 1, j)].images[g.dv[(n, m, j)].images[x]]
    else:
        raise ValueError(f"direction must be 'h' or 'v', not {direction!r}")
    return G.mul(x, G.inv(back))


def proj_composite(g, level, x):
    """Vertical steps ``p_0 .. p_{m-1}`` first, then horizontal ``p_0 .. p_{n-1}``."""
    n, m = level
    out = np.asarray(x)
    for j in range(m):
        out = proj_step(g, level, V, j, out)
    for i in range(n):
        out = proj_step(g, level, H, i, out)
    return out


def projection_laws_check(g):
    """On every level: p lands in NG, fixes NG, is idempotent, kills degeneracy images."""
    rep = VerificationReport(f"projection laws{': ' + g.name if g.name else ''}")
    for (n, m) in sorted(g.levels):
        G = g.G(n, m)
        allx = np.arange(G.order)
        px = proj_composite(g, (n, m), allx)
        moore = g.moore(n, m)
        inside = moore.mask[px]
        rep.add(f"p lands in NG({n},{m})", bool(inside.all()),
                witness=None if inside.all() else {"element": G.perms[np.flatnonzero(~inside)[0]]})
        fixed = px[moore.indices] == moore.indices
        rep.add(f"p fixes NG({n},{m})", bool(fixed.all()),
                witness=None if fixed.all() else {"element": G.perms[moore.indices[~fixed][0]]})
        idem = px[px] == px
        rep.add(f"p idempotent on G({n},{m})", bool(idem.all()),
                witness=None if idem.all() else {"element": G.perms[np.flatnonzero(~idem)[0]]})
        if (n, m) != (0, 0):
            degen = np.zeros(G.order, dtype=bool)
            if n >= 1:
                for i in range(n):
                    degen[g.sh[(n - 1, m, i)].images] = True
            if m >= 1:
                for j in range(m):
                    degen[g.sv[(n, m - 1, j)].images] = True
            killed = px[degen] == 0
            rep.add(f"p kills degeneracy images in G({n},{m})", bool(killed.all()),
                    witness=None if killed.all()
                    else {"element": G.perms[np.flatnonzero(degen)[~killed][0]]})
    return rep.finish()


# -- pairings -------------------------------------------------------------------------


@dataclass(frozen=True)
class PeifferPairSpec:
    level: tuple
    alpha: PairIndex
    beta: PairIndex
    row: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("a pairing needs distinct indices")
        if self.alpha.level != tuple(self.level) or self.beta.level != tuple(self.level):
            raise ValueError("index levels do not match the target level")

    @property
    def x_level(self):
        return self.alpha.target

    @property
    def y_level(self):
        return self.beta.target

    def __str__(self):
        return f"F_{{{self.alpha},{self.beta}}} at {self.level}"


def pair_spec(n, m, alpha_text, beta_text):
    from .surjections import parse_pair
    return PeifferPairSpec((n, m), parse_pair(alpha_text, n, m), parse_pair(beta_text, n, m))


def _check_member(g, level, elems, what):
    sub = g.moore(*level)
    elems = np.asarray(elems)
    ok = sub.mask[elems]
    if not np.all(ok):
        bad = int(np.asarray(elems).ravel()[np.flatnonzero(~np.asarray(ok).ravel())[0]])
        raise DomainMembership(f"{what} is not in NG{level}: {g.G(*level).perms[bad].tolist()}")


def F_values(g, spec, xs, ys, check=True):
    """Table ``F[a, b] = p[s_alpha xs[a], s_beta ys[b]]`` (level-group indices)."""
    n, m = spec.level
    g._check_level(n, m)
    for lvl in (spec.x_level, spec.y_level):
        g._check_level(*lvl)
    if check:
        _check_member(g, spec.x_level, xs, "x")
        _check_member(g, spec.y_level, ys, "y")
    G = g.G(n, m)
    sx = g.pair_degeneracy(spec.alpha).images[np.asarray(xs)]
    sy = g.pair_degeneracy(spec.beta).images[np.asarray(ys)]
    comm = G.commutator(sx[:, None], sy[None, :])
    return proj_composite(g, (n, m), comm)


def F_eval(g, spec, x, y):
    """Single value of ``F_{alpha,beta}(x, y)``; x, y are element indices."""
    return int(F_values(g, spec, np.array([x]), np.array([y]))[0, 0])


def enumerate_pairs(n, m, ordered=True):
    """Pair specs over ``S(n) x S(m)`` with distinct indices, annotated by table row.

    With ``ordered=False`` one orientation per unordered pair is kept (the
    table's orientation when the pair is listed).
    """
    idx = [PairIndex(a, b) for a in enumerate_S(n) for b in enumerate_S(m)]
    lookup = {(r.level, r.alpha, r.beta): r.number for r in TABLE_ROWS}
    out = []
    seen = set()
    for a in idx:
        for b in idx:
            if a == b:
                continue
            row = lookup.get(((n, m), a, b))
            if not ordered:
                key = frozenset((a, b))
                if key in seen:
                    continue
                rev = lookup.get(((n, m), b, a))
                if row is None and rev is not None:
                    continue
                seen.add(key)
            out.append(PeifferPairSpec((n, m), a, b, row=row))
    return out


def F_image_subgroup_gens(g, n, m):
    """All values of every pairing into level (n, m), as a boolean mask."""
    G = g.G(n, m)
    found = np.zeros(G.order, dtype=bool)
    for spec in enumerate_pairs(n, m):
        dx, dy = g.moore(*spec.x_level), g.moore(*spec.y_level)
        if dx.is_trivial or dy.is_trivial:
            continue
        found[F_values(g, spec, dx.indices, dy.indices, check=False).ravel()] = True
    return found


def N_subgroup(g, n, m):
    """Normal closure in ``G[n, m]`` of all pairing values."""
    G = g.G(n, m)
    vals = np.flatnonzero(F_image_subgroup_gens(g, n, m))
    return normal_closure(G, generate(G, vals))


# -- the closed forms ---------------------------------------------------------------


def _ops(text):
    """``"v0 h1"`` -> ``(("v", 0), ("h", 1))``, applied left to right."""
    return tuple((t[0], int(t[1:])) for t in text.split())


@dataclass(frozen=True)
class Term:
    left_ops: tuple
    left: str
    right_ops: tuple
    right: str


@dataclass(frozen=True)
class TableRow:
    number: int
    level: tuple
    alpha: PairIndex
    beta: PairIndex
    terms: tuple  # product of commutators

    @property
    def spec(self):
        return PeifferPairSpec(self.level, self.alpha, self.beta, row=self.number)

    def formula(self):
        def side(ops, var):
            return "".join(f"s{i}{d} " for d, i in reversed(ops)) + var
        return "".join(f"[{side(t.left_ops, t.left)}, {side(t.right_ops, t.right)}]"
                       for t in self.terms)


def _row(number, level, alpha, beta, *terms):
    from .surjections import parse_pair
    n, m = level
    ts = tuple(Term(_ops(lo), lv, _ops(ro), rv) for lo, lv, ro, rv in terms)
    return TableRow(number, level, parse_pair(alpha, n, m), parse_pair(beta, n, m), ts)


_P = ("v0", "x", "v1", "y"), ("v1", "y", "v1", "x")
_PH = ("h0", "x", "h1", "y"), ("h1", "y", "h1", "x")

# Each commutator side is an operator chain (applied left to right) acting on x or y.
TABLE_ROWS = (
    _row(1, (0, 1), "(∅,∅)", "(∅,(0))", ("", "x", "v0", "y")),
    _row(2, (1, 0), "(∅,∅)", "((0),∅)", ("", "x", "h0", "y")),
    _row(3, (1, 1), "(∅,∅)", "(∅,(0))", ("", "x", "v0", "y")),
    _row(4, (1, 1), "(∅,∅)", "((0),∅)", ("", "x", "h0", "y")),
    _row(5, (1, 1), "(∅,∅)", "((0),(0))", ("", "x", "v0 h0", "y")),
    _row(6, (1, 1), "((0),∅)", "(∅,(0))", ("h0", "x", "v0", "y")),
    _row(7, (0, 2), "(∅,(0))", "(∅,(1))", *_P),
    _row(8, (2, 0), "((0),∅)", "((1),∅)", *_PH),
    _row(9, (1, 2), "(∅,(0))", "(∅,(1))", *_P),
    _row(10, (1, 2), "(∅,(1))", "((0),∅)", ("v1", "x", "h0", "y")),
    _row(11, (1, 2), "(∅,(0))", "((0),∅)", ("v0", "x", "h0", "y")),
    _row(12, (1, 2), "((0),(1))", "(∅,(0))", ("v1 h0", "x", "v0", "y")),
    _row(13, (1, 2), "((0),(0))", "(∅,(1))", ("v0 h0", "x", "v1", "y")),
    _row(14, (2, 1), "((0),∅)", "((1),∅)", *_PH),
    _row(15, (2, 1), "((1),∅)", "(∅,(0))", ("h1", "x", "v0", "y")),
    _row(16, (2, 1), "((0),∅)", "(∅,(0))", ("h0", "x", "v0", "y")),
    _row(17, (2, 1), "((1),(0))", "((0),∅)", ("v0 h1", "x", "h0", "y")),
    _row(18, (2, 1), "((0),(0))", "((1),∅)", ("v0 h0", "x", "h1", "y")),
    _row(19, (2, 2), "((0),∅)", "((1),∅)", *_PH),
    _row(20, (2, 2), "(∅,(0))", "(∅,(1))", *_P),
    _row(21, (2, 2), "((1),∅)", "(∅,(0))", ("h1", "x", "v0", "y")),
    _row(22, (2, 2), "((0),∅)", "(∅,(0))", ("h0", "x", "v0", "y")),
    _row(23, (2, 2), "((1),(0))", "(∅,(0))", ("h1 v0", "x", "v0", "y")),
    _row(24, (2, 2), "((0),(1))", "(∅,(1))", ("h0 v1", "x", "v1", "y")),
)

ROWS_BY_NUMBER = {r.number: r for r in TABLE_ROWS}


def _apply_chain(g, ops, level, elems):
    p, q = level
    out = np.asarray(elems)
    for d, i in ops:
        if d == "h":
            out = g.s_h(p, q, i).images[out]
            p += 1
        else:
            out = g.s_v(p, q, i).images[out]
            q += 1
    return out, (p, q)


def closed_form_values(g, row, xs, ys):
    """The row's closed form on all pairs; raises if an operator chain mis-types."""
    G = g.G(*row.level)
    lv = {"x": row.alpha.target, "y": row.beta.target}
    vals = {"x": np.asarray(xs)[:, None], "y": np.asarray(ys)[None, :]}
    out = np.zeros((len(xs), len(ys)), dtype=np.int64)
    for t in row.terms:
        a, la = _apply_chain(g, t.left_ops, lv[t.left], vals[t.left])
        b, lb = _apply_chain(g, t.right_ops, lv[t.right], vals[t.right])
        if la != tuple(row.level) or lb != tuple(row.level):
            raise TruncationExceeded(f"row {row.number}: operator chain ends at {la}/{lb}")
        a, b = np.broadcast_arrays(a, b)
        out = G.mul(out, G.commutator(a, b))
    return out


def table_check(g, rows=TABLE_ROWS):
    rep = VerificationReport(f"pairing table{': ' + g.name if g.name else ''}")
    nonvac = 0
    for row in rows:
        name = f"row {row.number}: F_{{{row.alpha},{row.beta}}} = {row.formula()}"
        n, m = row.level
        if n > g.P or m > g.Q:
            rep.add(name, "SKIPPED", detail="level outside truncation")
            continue
        dx, dy = g.moore(*row.alpha.target), g.moore(*row.beta.target)
        if dx.is_trivial or dy.is_trivial:
            rep.add(name, VACUOUS,
                    detail=f"trivial domain |NG{row.alpha.target}|={dx.order}, "
                           f"|NG{row.beta.target}|={dy.order}")
            continue
        nonvac += 1
        lhs = F_values(g, row.spec, dx.indices, dy.indices, check=False)
        rhs = closed_form_values(g, row, dx.indices, dy.indices)
        bad = np.argwhere(lhs != rhs)
        G = g.G(n, m)
        if bad.size:
            a, b = bad[0]
            rep.add(name, FAIL, witness={
                "x": g.G(*row.alpha.target).perms[dx.indices[a]],
                "y": g.G(*row.beta.target).perms[dy.indices[b]],
                "F": G.perms[lhs[a, b]], "closed_form": G.perms[rhs[a, b]]},
                detail=f"{len(bad)} of {lhs.size} pairs differ")
        else:
            rep.add(name, PASS, detail=f"{lhs.size} pairs")
    rep.info["non_vacuous_rows"] = nonvac
    return rep.finish()


# -- boundary identities --------------------------------------------------------------


def image_subgroup(f, sub):
    return f.image(sub)


def boundary_image(g, direction, n, m, sub):
    """``d_last(sub)`` for a subgroup of ``G[n, m]``, as a subgroup of the level below."""
    if direction == V:
        return g.dv[(n, m, m)].image(sub)
    return g.dh[(n, m, n)].image(sub)


def K_pair(g, direction, n, m, I, J):
    """The two factors ``K_I cap K_H`` and ``K_J cap K_H`` for the boundary out of ``(n, m)``.

    Vertical: computed in ``G[n, m-1]`` with ``K_H`` the horizontal faces
    ``0..n-1`` there.  Horizontal: in ``G[n-1, m]`` with ``K_V`` the vertical
    faces ``0..m-1``.
    """
    if direction == V:
        lvl = (n, m - 1)
        full = g.kernel_intersection(*lvl, h=range(n))
        kI = g.kernel_intersection(*lvl, v=I)
        kJ = g.kernel_intersection(*lvl, v=J)
    else:
        lvl = (n - 1, m)
        full = g.kernel_intersection(*lvl, v=range(m))
        kI = g.kernel_intersection(*lvl, h=I)
        kJ = g.kernel_intersection(*lvl, h=J)
    return intersect(kI, full), intersect(kJ, full)


def _subsets(k):
    items = range(k)
    return [frozenset(c) for c in _chain.from_iterable(combinations(items, r) for r in range(k + 1))]


def _fmt_set(s):
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _compare(rep, name, lhs, rhs, mode="eq"):
    if mode == "eq":
        ok = lhs == rhs
    else:
        ok = lhs.issubset(rhs)
    witness = None
    if not ok:
        diff = np.flatnonzero(lhs.mask != rhs.mask if mode == "eq" else lhs.mask & ~rhs.mask)
        witness = {"element": lhs.parent.perms[diff[0]], "lhs_order": lhs.order,
                   "rhs_order": rhs.order}
    rep.add(name, ok, witness=witness, detail=f"orders {lhs.order} / {rhs.order}")


EQUALITY_LEVELS = ((V, 0, 2), (V, 1, 2), (V, 2, 2), (H, 2, 0), (H, 2, 1), (H, 2, 2))
INCLUSION_LEVELS = ((V, 1, 2), (V, 2, 2), (H, 2, 1), (H, 2, 2))


def boundary_side(g, direction, n, m, base=None):
    """``d_last(base cap D[n, m])`` with ``base`` defaulting to NG[n, m]."""
    base = g.moore(n, m) if base is None else base
    return boundary_image(g, direction, n, m, intersect(base, g.degenerate_subgroup(n, m)))


def boundary_equalities_check(g, inclusion_sets="all"):
    """The six low-dimensional boundary equalities, the inclusion sweep and the
    pairing-generated versions of the boundary images."""
    rep = VerificationReport(f"boundary equalities{': ' + g.name if g.name else ''}")
    if g.P < 2 or g.Q < 2:
        rep.add("truncation reaches (2,2)", "SKIPPED", detail=f"truncation {g.truncation}")
        return rep.finish()
    for direction, n, m in EQUALITY_LEVELS:
        lhs = boundary_side(g, direction, n, m)
        a, b = K_pair(g, direction, n, m, {0}, {1})
        rhs = commutator_subgroup(a, b)
        d = "v" if direction == V else "h"
        _compare(rep, f"d^{d}(NG({n},{m}) cap D) = [K_0 cap K, K_1 cap K]", lhs, rhs)
    for direction, n, m in INCLUSION_LEVELS:
        k = m if direction == V else n
        lhs_target = boundary_side(g, direction, n, m)
        d = "v" if direction == V else "h"
        for I in _subsets(k):
            for J in _subsets(k):
                if I | J != frozenset(range(k)):
                    continue
                if inclusion_sets == "nonempty" and (not I or not J):
                    continue
                a, b = K_pair(g, direction, n, m, I, J)
                _compare(rep, f"[K_{_fmt_set(I)} cap K, K_{_fmt_set(J)} cap K] in "
                              f"d^{d}(NG({n},{m}) cap D)",
                         commutator_subgroup(a, b), lhs_target, mode="sub")
    for (n, m) in sorted(g.levels):
        if (n, m) == (0, 0):
            continue
        N_nm = N_subgroup(g, n, m)
        outside = N_nm.indices[~g.moore(n, m).mask[N_nm.indices]]
        rep.add(f"N({n},{m}) inside NG({n},{m})", outside.size == 0,
                witness=None if outside.size == 0 else {"element": g.G(n, m).perms[outside[0]]})
        for direction, ok in ((H, n >= 1), (V, m >= 1)):
            if not ok:
                continue
            d = "v" if direction == V else "h"
            _compare(rep, f"d^{d}(NG({n},{m}) cap D) = d^{d}(N({n},{m}) cap D)",
                     boundary_side(g, direction, n, m),
                     boundary_side(g, direction, n, m, base=N_nm))
    return rep.finish()


__all__ = [
    "proj_step", "proj_composite", "projection_laws_check", "PeifferPairSpec", "pair_spec",
    "F_values", "F_eval", "enumerate_pairs", "N_subgroup", "TableRow", "TABLE_ROWS",
    "ROWS_BY_NUMBER", "closed_form_values", "table_check", "boundary_equalities_check",
    "boundary_side", "K_pair", "DomainMembership", "EQUALITY_LEVELS", "INCLUSION_LEVELS",
]
