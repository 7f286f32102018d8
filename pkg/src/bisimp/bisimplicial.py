"""Truncated bisimplicial groups and their Moore bicomplexes.

Level ``(p, q)`` has horizontal operators ``d^h_i, s^h_i`` (changing p) and
vertical operators ``d^v_j, s^v_j`` (changing q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fingroup import (
    DEFAULT_ORDER_CAP, FiniteGroup, GroupError, Homomorphism, OrderCapExceeded,
    Subgroup, direct_product, generate,
)
from .report import VerificationReport
from .simplicial import (
    SimplicialGroupTrunc, TruncationExceeded, chain, check_hom, check_identities, restrict,
    _record,
)
from .surjections import PairIndex, SurjectionTuple, enumerate_S


class IdentityViolation(GroupError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IndexOutOfRange(GroupError, IndexError):
    pass


H, V = "h", "v"


@dataclass
class MooreBicomplexCell:
    level: tuple
    subgroup: Subgroup
    boundary_h: Homomorphism | None
    boundary_v: Homomorphism | None

    @property
    def order(self):
        return self.subgroup.order


class BisimplicialGroupTrunc:
    """Grid of groups ``G[p, q]`` for ``0 <= p <= P``, ``0 <= q <= Q``.

    Operator dictionaries are keyed by ``(p, q, i)`` at the source level:
    ``dh[(p,q,i)]: G[p,q] -> G[p-1,q]``, ``sh[(p,q,i)]: G[p,q] -> G[p+1,q]``,
    and likewise ``dv``/``sv`` in the second index.
    """

    def __init__(self, levels, dh, sh, dv, sv, name=""):
        self.levels = dict(levels)
        self.P = max(p for p, _ in self.levels)
        self.Q = max(q for _, q in self.levels)
        self.dh, self.sh, self.dv, self.sv = dict(dh), dict(sh), dict(dv), dict(sv)
        self.name = name
        for key, msg in self.missing_operators():
            raise GroupError(f"missing {msg} at {key}")
        self._moore = {}
        self._cells = {}
        self._degenerate = {}

    def missing_operators(self):
        out = []
        for p in range(self.P + 1):
            for q in range(self.Q + 1):
                if (p, q) not in self.levels:
                    out.append(((p, q), "level"))
                    continue
                for i in range(p + 1):
                    if p >= 1 and (p, q, i) not in self.dh:
                        out.append(((p, q, i), "horizontal face"))
                    if p < self.P and (p, q, i) not in self.sh:
                        out.append(((p, q, i), "horizontal degeneracy"))
                for j in range(q + 1):
                    if q >= 1 and (p, q, j) not in self.dv:
                        out.append(((p, q, j), "vertical face"))
                    if q < self.Q and (p, q, j) not in self.sv:
                        out.append(((p, q, j), "vertical degeneracy"))
        return out

    @property
    def truncation(self):
        return (self.P, self.Q)

    def truncated(self, P, Q):
        """The sub-grid on levels ``p <= P``, ``q <= Q``."""
        if P > self.P or Q > self.Q or P < 0 or Q < 0:
            raise TruncationExceeded(f"({P},{Q}) is not inside ({self.P},{self.Q})")

        def keep(ops, dp, dq):
            return {(p, q, i): f for (p, q, i), f in ops.items()
                    if p <= P and q <= Q and 0 <= p + dp <= P and 0 <= q + dq <= Q}

        levels = {k: G for k, G in self.levels.items() if k[0] <= P and k[1] <= Q}
        return BisimplicialGroupTrunc(levels, keep(self.dh, -1, 0), keep(self.sh, 1, 0),
                                      keep(self.dv, 0, -1), keep(self.sv, 0, 1), name=self.name)

    def G(self, p, q):
        self._check_level(p, q)
        return self.levels[(p, q)]

    def _check_level(self, p, q):
        if not (0 <= p <= self.P and 0 <= q <= self.Q):
            raise TruncationExceeded(f"level ({p},{q}) outside truncation ({self.P},{self.Q})")

    def _op(self, table, key, what):
        try:
            return table[key]
        except KeyError:
            p, q, i = key
            if not (0 <= p <= self.P and 0 <= q <= self.Q):
                raise TruncationExceeded(f"level ({p},{q}) outside truncation") from None
            raise TruncationExceeded(f"{what}_{i} not available at ({p},{q})") from None

    def d_h(self, p, q, i):
        return self._op(self.dh, (p, q, i), "d^h")

    def s_h(self, p, q, i):
        return self._op(self.sh, (p, q, i), "s^h")

    def d_v(self, p, q, j):
        return self._op(self.dv, (p, q, j), "d^v")

    def s_v(self, p, q, j):
        return self._op(self.sv, (p, q, j), "s^v")

    # -- slices ---------------------------------------------------------------

    def row(self, q):
        """The simplicial group ``p -> G[p, q]`` with horizontal operators."""
        self._check_level(0, q)
        return SimplicialGroupTrunc(
            [self.levels[(p, q)] for p in range(self.P + 1)],
            {p: [self.dh[(p, q, i)] for i in range(p + 1)] for p in range(1, self.P + 1)},
            {p: [self.sh[(p, q, i)] for i in range(p + 1)] for p in range(self.P)},
            name=f"{self.name} row q={q}",
        )

    def column(self, p):
        """The simplicial group ``q -> G[p, q]`` with vertical operators."""
        self._check_level(p, 0)
        return SimplicialGroupTrunc(
            [self.levels[(p, q)] for q in range(self.Q + 1)],
            {q: [self.dv[(p, q, j)] for j in range(q + 1)] for q in range(1, self.Q + 1)},
            {q: [self.sv[(p, q, j)] for j in range(q + 1)] for q in range(self.Q)},
            name=f"{self.name} column p={p}",
        )

    # -- degeneracy composites -----------------------------------------------

    def degeneracy_composite(self, direction, alpha: SurjectionTuple, at):
        """``s_alpha`` in one direction; ``at`` is the fixed index of the other direction."""
        level = alpha.target
        if direction == H:
            G = lambda k: self.G(k, at)  # noqa: E731
            step = lambda k, i: self.s_h(k, at, i)  # noqa: E731
        elif direction == V:
            G = lambda k: self.G(at, k)  # noqa: E731
            step = lambda k, i: self.s_v(at, k, i)  # noqa: E731
        else:
            raise ValueError(f"direction must be 'h' or 'v', not {direction!r}")
        f = Homomorphism.identity(G(level))
        for i in alpha.application_order():
            f = step(level, i).compose(f)
            level += 1
        return f

    def pair_degeneracy(self, alpha: PairIndex):
        """``s^h_{a1} s^v_{a2}: G[n - #a1, m - #a2] -> G[n, m]``."""
        n, m = alpha.level
        self._check_level(n, m)
        p0 = alpha.first.target
        vert = self.degeneracy_composite(V, alpha.second, p0)
        horiz = self.degeneracy_composite(H, alpha.first, m)
        return horiz.compose(vert)

    # -- Moore bicomplex -------------------------------------------------------

    def kernel_intersection(self, n, m, h=(), v=()):
        """``(cap_{i in h} ker d^h_i) cap (cap_{j in v} ker d^v_j)`` inside ``G[n, m]``."""
        self._check_level(n, m)
        mask = np.ones(self.G(n, m).order, dtype=bool)
        for i in h:
            if not 0 <= i <= n or n == 0:
                raise IndexOutOfRange(f"no horizontal face {i} at ({n},{m})")
            mask &= self.dh[(n, m, i)].images == 0
        for j in v:
            if not 0 <= j <= m or m == 0:
                raise IndexOutOfRange(f"no vertical face {j} at ({n},{m})")
            mask &= self.dv[(n, m, j)].images == 0
        return Subgroup(self.G(n, m), mask)

    def moore(self, n, m):
        sub = self._moore.get((n, m))
        if sub is None:
            sub = self.kernel_intersection(n, m, range(n), range(m))
            self._moore[(n, m)] = sub
        return sub

    def moore_cell(self, n, m):
        cell = self._cells.get((n, m))
        if cell is None:
            sub = self.moore(n, m)
            bh = restrict(self.dh[(n, m, n)], sub, self.moore(n - 1, m)) if n >= 1 else None
            bv = restrict(self.dv[(n, m, m)], sub, self.moore(n, m - 1)) if m >= 1 else None
            cell = MooreBicomplexCell((n, m), sub, bh, bv)
            self._cells[(n, m)] = cell
        return cell

    def moore_orders(self):
        return {(p, q): self.moore(p, q).order
                for p in range(self.P + 1) for q in range(self.Q + 1)}

    def degenerate_subgroup(self, n, m):
        """Subgroup of ``G[n, m]`` generated by all degeneracy images into it."""
        self._check_level(n, m)
        if (n, m) == (0, 0):
            raise TruncationExceeded("no degeneracies land in level (0,0)")
        sub = self._degenerate.get((n, m))
        if sub is None:
            gens = []
            if n >= 1:
                src = self.G(n - 1, m)
                for i in range(n):
                    gens.append(self.sh[(n - 1, m, i)].images[list(src.generators)])
            if m >= 1:
                src = self.G(n, m - 1)
                for j in range(m):
                    gens.append(self.sv[(n, m - 1, j)].images[list(src.generators)])
            flat = np.concatenate([np.asarray(g, dtype=np.int64) for g in gens]) if gens else []
            sub = generate(self.G(n, m), flat)
            self._degenerate[(n, m)] = sub
        return sub

    def order_factorization(self, n, m):
        """``(|G[n,m]|, prod over S(n) x S(m) of |NG[b(a1), b(a2)]|, factors)``."""
        factors = []
        prod = 1
        for a in enumerate_S(n):
            for b in enumerate_S(m):
                k = self.moore(a.target, b.target).order
                factors.append(k)
                prod *= k
        return self.G(n, m).order, prod, factors

    def __repr__(self):
        return f"<BisimplicialGroupTrunc {self.name} truncation=({self.P},{self.Q})>"


def verify_bisimplicial(g, check_homs=True):
    rep = VerificationReport(f"bisimplicial identities{': ' + g.name if g.name else ''}")
    rep.info["truncation"] = list(g.truncation)
    rep.info["orders"] = {f"{p},{q}": G.order for (p, q), G in sorted(g.levels.items())}
    if check_homs:
        for name, table in (("d^h", g.dh), ("s^h", g.sh), ("d^v", g.dv), ("s^v", g.sv)):
            for (p, q, i), f in sorted(table.items()):
                check_hom(rep, f"{name}_{i} on G({p},{q}) is a homomorphism", f)
    for q in range(g.Q + 1):
        levels = [g.levels[(p, q)] for p in range(g.P + 1)]
        check_identities(rep, levels, lambda n, i, q=q: g.dh[(n, q, i)],
                         lambda n, i, q=q: g.sh[(n, q, i)], g.P, label=f"horizontal q={q}:")
    for p in range(g.P + 1):
        levels = [g.levels[(p, q)] for q in range(g.Q + 1)]
        check_identities(rep, levels, lambda n, j, p=p: g.dv[(p, n, j)],
                         lambda n, j, p=p: g.sv[(p, n, j)], g.Q, label=f"vertical p={p}:")
    for p in range(g.P + 1):
        for q in range(g.Q + 1):
            G = g.levels[(p, q)]
            for i in range(p + 1):
                for j in range(q + 1):
                    if p >= 1 and q >= 1:
                        _record(rep, f"d^h_{i} d^v_{j} commute on G({p},{q})",
                                chain(g.dv[(p, q, j)], g.dh[(p, q - 1, i)]),
                                chain(g.dh[(p, q, i)], g.dv[(p - 1, q, j)]), G)
                    if p < g.P and q < g.Q:
                        _record(rep, f"s^h_{i} s^v_{j} commute on G({p},{q})",
                                chain(g.sv[(p, q, j)], g.sh[(p, q + 1, i)]),
                                chain(g.sh[(p, q, i)], g.sv[(p + 1, q, j)]), G)
                    if p >= 1 and q < g.Q:
                        _record(rep, f"d^h_{i} s^v_{j} commute on G({p},{q})",
                                chain(g.sv[(p, q, j)], g.dh[(p, q + 1, i)]),
                                chain(g.dh[(p, q, i)], g.sv[(p - 1, q, j)]), G)
                    if p < g.P and q >= 1:
                        _record(rep, f"s^h_{i} d^v_{j} commute on G({p},{q})",
                                chain(g.dv[(p, q, j)], g.sh[(p, q - 1, i)]),
                                chain(g.sh[(p, q, i)], g.dv[(p + 1, q, j)]), G)
    return rep.finish()


def moore_bicomplex_check(g):
    """Boundaries land in Moore cells and square to 1."""
    rep = VerificationReport(f"Moore bicomplex{': ' + g.name if g.name else ''}")

    def add(name, G, idx, ok):
        bad = idx[~ok]
        rep.add(name, bool(ok.all()),
                witness=None if bad.size == 0 else {"element": G.perms[bad[0]]})

    for (n, m) in sorted(g.levels):
        G = g.G(n, m)
        idx = g.moore(n, m).indices
        if n >= 1:
            add(f"d^h_{n} maps NG({n},{m}) into NG({n-1},{m})", G, idx,
                g.moore(n - 1, m).mask[g.dh[(n, m, n)].images[idx]])
        if m >= 1:
            add(f"d^v_{m} maps NG({n},{m}) into NG({n},{m-1})", G, idx,
                g.moore(n, m - 1).mask[g.dv[(n, m, m)].images[idx]])
        if n >= 2:
            add(f"horizontal boundary squares to 1 on NG({n},{m})", G, idx,
                chain(g.dh[(n, m, n)], g.dh[(n - 1, m, n - 1)])[idx] == 0)
        if m >= 2:
            add(f"vertical boundary squares to 1 on NG({n},{m})", G, idx,
                chain(g.dv[(n, m, m)], g.dv[(n, m - 1, m - 1)])[idx] == 0)
    return rep.finish()


def order_factorization_check(g):
    rep = VerificationReport(f"order factorization{': ' + g.name if g.name else ''}")
    for (n, m) in sorted(g.levels):
        order, prod, factors = g.order_factorization(n, m)
        rep.add(f"|G({n},{m})| = {order} = {'·'.join(map(str, factors))}", order == prod,
                witness=None if order == prod else {"order": order, "product": prod},
                detail=f"{order} vs {prod}")
    return rep.finish()


# -- constructors -----------------------------------------------------------------


def _grid_from_functions(P, Q, level, dh, sh, dv, sv, name, check=True):
    levels = {(p, q): level(p, q) for p in range(P + 1) for q in range(Q + 1)}

    def hom(src, dst, images):
        return Homomorphism(levels[src], levels[dst], images, check=check)

    DH, SH, DV, SV = {}, {}, {}, {}
    for (p, q) in levels:
        for i in range(p + 1):
            if p >= 1:
                DH[(p, q, i)] = hom((p, q), (p - 1, q), dh(p, q, i))
            if p < P:
                SH[(p, q, i)] = hom((p, q), (p + 1, q), sh(p, q, i))
        for j in range(q + 1):
            if q >= 1:
                DV[(p, q, j)] = hom((p, q), (p, q - 1), dv(p, q, j))
            if q < Q:
                SV[(p, q, j)] = hom((p, q), (p, q + 1), sv(p, q, j))
    return BisimplicialGroupTrunc(levels, DH, SH, DV, SV, name=name)


def external_product(a, b, P=None, Q=None, cap=DEFAULT_ORDER_CAP, name=""):
    """``G[p, q] = a_p x b_q``; horizontal operators from ``a``, vertical from ``b``."""
    P = a.N if P is None else P
    Q = b.N if Q is None else Q
    if P > a.N or Q > b.N:
        raise TruncationExceeded("requested truncation exceeds a factor")
    prods = {}
    for p in range(P + 1):
        for q in range(Q + 1):
            prods[(p, q)] = direct_product(a.levels[p], b.levels[q], cap=cap)

    def pair(x, y, q):
        return x * b.levels[q].order + y

    def split(p, q):
        n = prods[(p, q)].group.order
        nb = b.levels[q].order
        return np.arange(n) // nb, np.arange(n) % nb

    def dh(p, q, i):
        x, y = split(p, q)
        return pair(a.faces[p][i].images[x], y, q)

    def sh(p, q, i):
        x, y = split(p, q)
        return pair(a.degens[p][i].images[x], y, q)

    def dv(p, q, j):
        x, y = split(p, q)
        return pair(x, b.faces[q][j].images[y], q - 1)

    def sv(p, q, j):
        x, y = split(p, q)
        return pair(x, b.degens[q][j].images[y], q + 1)

    return _grid_from_functions(P, Q, lambda p, q: prods[(p, q)].group, dh, sh, dv, sv,
                                name=name or f"{a.name} x {b.name}")


def from_horizontal(s, Q=2, name=""):
    """``G[p, q] = s_p`` with identity vertical operators."""
    ident = lambda p, q, i: np.arange(s.levels[p].order)  # noqa: E731
    return _grid_from_functions(
        s.N, Q, lambda p, q: s.levels[p],
        lambda p, q, i: s.faces[p][i].images, lambda p, q, i: s.degens[p][i].images,
        ident, ident, name=name or f"horizontal({s.name})", check=False)


def from_vertical(s, P=2, name=""):
    """``G[p, q] = s_q`` with identity horizontal operators."""
    ident = lambda p, q, i: np.arange(s.levels[q].order)  # noqa: E731
    return _grid_from_functions(
        P, s.N, lambda p, q: s.levels[q], ident, ident,
        lambda p, q, j: s.faces[q][j].images, lambda p, q, j: s.degens[q][j].images,
        name=name or f"vertical({s.name})", check=False)


def diagonal(g, N=None, name=""):
    """``G[n, n]`` with ``d_i = d^h_i d^v_i`` and ``s_i = s^h_i s^v_i``."""
    N = min(g.P, g.Q) if N is None else N
    if N > min(g.P, g.Q):
        raise TruncationExceeded(f"diagonal level {N} exceeds the grid")
    levels = [g.G(n, n) for n in range(N + 1)]
    faces = {n: [Homomorphism(levels[n], levels[n - 1],
                              chain(g.dv[(n, n, i)], g.dh[(n, n - 1, i)]), check=False)
                 for i in range(n + 1)] for n in range(1, N + 1)}
    degens = {n: [Homomorphism(levels[n], levels[n + 1],
                               chain(g.sv[(n, n, i)], g.sh[(n, n + 1, i)]), check=False)
                  for i in range(n + 1)] for n in range(N)}
    return SimplicialGroupTrunc(levels, faces, degens, name=name or f"diagonal({g.name})")


def codiagonal(g, N=None, cap=DEFAULT_ORDER_CAP, name=""):
    """Total simplicial group: level n holds ``(x_0, ..., x_n)`` with ``x_p`` in
    ``G[p, n-p]`` and ``d^v_0 x_p = d^h_{p+1} x_{p+1}``.

    ``d_i`` applies ``d^v_{i-p}`` to ``x_p`` for ``p < i``, drops ``x_i`` and applies
    ``d^h_i`` to ``x_p`` for ``p > i``; ``s_i`` applies ``s^v_{i-p}`` for ``p <= i``
    and ``s^h_i`` for ``p >= i``, doubling ``x_i``.
    """
    N = min(g.P, g.Q) if N is None else N
    if N > min(g.P, g.Q):
        raise TruncationExceeded(f"codiagonal level {N} exceeds the grid")
    comps = []  # comps[n]: (order, n+1) component indices
    for n in range(N + 1):
        cur = np.arange(g.G(0, n).order)[:, None]
        for p in range(1, n + 1):
            left = g.dv[(p - 1, n - p + 1, 0)].images[cur[:, -1]]
            right = g.dh[(p, n - p, p)].images
            # join on d^v_0 x_{p-1} = d^h_p x_p
            order = np.argsort(right, kind="stable")
            sr = right[order]
            lo = np.searchsorted(sr, left, side="left")
            hi = np.searchsorted(sr, left, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total > cap:
                raise OrderCapExceeded(f"codiagonal level {n} exceeds cap {cap}")
            rows = np.repeat(np.arange(len(cur)), counts)
            offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            cur = np.column_stack([cur[rows], order[np.repeat(lo, counts) + offs]])
        comps.append(cur)
    levels = []
    for n in range(N + 1):
        parts = []
        shift = 0
        for p in range(n + 1):
            G = g.G(p, n - p)
            parts.append(G.perms[comps[n][:, p]] + shift)
            shift += G.degree
        perms = np.concatenate(parts, axis=1)
        levels.append(FiniteGroup.from_elements(perms, cap=cap, name=f"T{n}"))
    # from_elements may move the identity; realign component rows with group indices
    for n in range(N + 1):
        ident = np.flatnonzero((comps[n] == 0).all(axis=1))[0]
        if ident != 0:
            idx = np.r_[ident, np.delete(np.arange(len(comps[n])), ident)]
            comps[n] = comps[n][idx]

    def locate(n, tup):
        parts = []
        shift = 0
        for p in range(n + 1):
            G = g.G(p, n - p)
            parts.append(G.perms[tup[:, p]] + shift)
            shift += G.degree
        return levels[n].lookup(np.concatenate(parts, axis=1))

    faces, degens = {}, {}
    for n in range(1, N + 1):
        x = comps[n]
        faces[n] = []
        for i in range(n + 1):
            cols = []
            for p in range(n + 1):
                if p < i:
                    cols.append(g.dv[(p, n - p, i - p)].images[x[:, p]])
                elif p > i:
                    cols.append(g.dh[(p, n - p, i)].images[x[:, p]])
            faces[n].append(Homomorphism(levels[n], levels[n - 1],
                                         locate(n - 1, np.column_stack(cols)), check=False))
    for n in range(N):
        x = comps[n]
        degens[n] = []
        for i in range(n + 1):
            cols = []
            for p in range(n + 1):
                if p <= i:
                    cols.append(g.sv[(p, n - p, i - p)].images[x[:, p]])
                if p >= i:
                    cols.append(g.sh[(p, n - p, i)].images[x[:, p]])
            degens[n].append(Homomorphism(levels[n], levels[n + 1],
                                          locate(n + 1, np.column_stack(cols)), check=False))
    return SimplicialGroupTrunc(levels, faces, degens, name=name or f"codiagonal({g.name})")


def constant_bisimplicial(group, P=2, Q=2, name=""):
    ident = lambda p, q, i: np.arange(group.order)  # noqa: E731
    return _grid_from_functions(P, Q, lambda p, q: group, ident, ident, ident, ident,
                                name=name or f"const({group.name or group.order})", check=False)


def _grid_elements(P_group, row_sub, col_sub, p, q):
    """All ``(p+1) x (q+1)`` grids over ``P_group`` with entries congruent
    modulo ``col_sub`` down each column and modulo ``row_sub`` along each row.

    Returned as an int array of element indices, cells in row-major order.
    """
    G = P_group
    n = G.order
    cells = [(i, j) for i in range(p + 1) for j in range(q + 1)]
    # ok[a, b]: a b^-1 lies in the subgroup
    quot = G.mul(np.arange(n)[:, None], G.inv(np.arange(n))[None, :])
    row_ok = row_sub.mask[quot]
    col_ok = col_sub.mask[quot]
    partial = np.zeros((1, 0), dtype=np.int64)
    for k, (i, j) in enumerate(cells):
        cand = np.arange(n)
        rows = np.repeat(partial, n, axis=0)
        vals = np.tile(cand, partial.shape[0])
        keep = np.ones(rows.shape[0], dtype=bool)
        if j > 0:
            keep &= row_ok[vals, rows[:, cells.index((i, 0))]]
        if i > 0:
            keep &= col_ok[vals, rows[:, cells.index((0, j))]]
        partial = np.concatenate([rows[keep], vals[keep][:, None]], axis=1)
    return partial


def normal_pair_grid(P_group, M, N, P=2, Q=2, cap=DEFAULT_ORDER_CAP, name=""):
    """Bisimplicial group of a pair of normal subgroups ``M, N`` of ``P_group``.

    Level ``(p, q)`` is the group of ``(p+1) x (q+1)`` grids of elements with
    every column constant modulo N and every row constant modulo M.
    Horizontal faces/degeneracies delete/repeat a row; vertical ones a column.
    Its Moore bicomplex is ``M cap N -> M, N -> P_group`` in the low corner.
    """
    deg = P_group.degree
    levels = {}
    cell_data = {}
    for p in range(P + 1):
        for q in range(Q + 1):
            grids = _grid_elements(P_group, M, N, p, q)
            if grids.shape[0] > cap:
                raise OrderCapExceeded(f"grid level ({p},{q}) has order {grids.shape[0]} > cap {cap}")
            k = grids.shape[1]
            perms = P_group.perms[grids]  # (count, k, deg)
            perms = (perms + (np.arange(k) * deg)[None, :, None]).reshape(grids.shape[0], k * deg)
            grp = FiniteGroup.from_elements(perms, cap=cap, name=f"grid({p},{q})")
            levels[(p, q)] = grp
            cell_data[(p, q)] = grids

    def reindex(src, dst, cell_map):
        grids = cell_data[src]
        new = grids[:, cell_map]
        qd = dst[1] + 1
        k = new.shape[1]
        perms = P_group.perms[new] + (np.arange(k) * deg)[None, :, None]
        return levels[dst].lookup(perms.reshape(new.shape[0], k * deg))

    def cells(p, q):
        return [(i, j) for i in range(p + 1) for j in range(q + 1)]

    def flat(p, q, i, j):
        return i * (q + 1) + j

    def dh(p, q, r):  # delete row r
        keep = [flat(p, q, i, j) for (i, j) in cells(p, q) if i != r]
        return reindex((p, q), (p - 1, q), keep)

    def sh(p, q, r):  # repeat row r
        src_rows = [i if i <= r else i - 1 for i in range(p + 2)]
        cmap = [flat(p, q, src_rows[i], j) for i in range(p + 2) for j in range(q + 1)]
        return reindex((p, q), (p + 1, q), cmap)

    def dv(p, q, c):  # delete column c
        keep = [flat(p, q, i, j) for (i, j) in cells(p, q) if j != c]
        return reindex((p, q), (p, q - 1), keep)

    def sv(p, q, c):  # repeat column c
        src_cols = [j if j <= c else j - 1 for j in range(q + 2)]
        cmap = [flat(p, q, i, src_cols[j]) for i in range(p + 1) for j in range(q + 2)]
        return reindex((p, q), (p, q + 1), cmap)

    return _grid_from_functions(P, Q, lambda p, q: levels[(p, q)], dh, sh, dv, sv,
                                name=name or "normal-pair grid")


def grid_cell_values(g_level_perms, base_degree):
    """Split grid permutations back into per-cell element permutations."""
    n, d = g_level_perms.shape
    k = d // base_degree
    blocks = g_level_perms.reshape(n, k, base_degree) - (np.arange(k) * base_degree)[None, :, None]
    return blocks


__all__ = [
    "BisimplicialGroupTrunc", "MooreBicomplexCell", "IdentityViolation", "IndexOutOfRange",
    "verify_bisimplicial", "moore_bicomplex_check", "order_factorization_check",
    "external_product", "from_horizontal", "from_vertical", "constant_bisimplicial",
    "normal_pair_grid", "grid_cell_values", "H", "V",
]
