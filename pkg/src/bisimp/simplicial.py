"""Truncated simplicial groups, their Moore complexes, and nerves of crossed modules."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .fingroup import (
    DEFAULT_ORDER_CAP, FiniteGroup, GroupError, Homomorphism, HomomorphismInvalid,
    OrderCapExceeded, Subgroup,
)
from .report import VerificationReport
from .surjections import enumerate_S


class TruncationExceeded(GroupError, IndexError):
    pass


def chain(*homs):
    """Index array of the composite applying ``homs`` left to right."""
    out = homs[0].images
    for h in homs[1:]:
        out = h.images[out]
    return out


def restrict(f, sub, target):
    """``f`` restricted to ``sub`` as a map ``sub.group -> target.group``.

    Raises HomomorphismInvalid if the image leaves ``target``.
    """
    img = f.images[sub.indices]
    inside = target.mask[img]
    if not inside.all():
        bad = sub.indices[np.flatnonzero(~inside)[0]]
        raise HomomorphismInvalid("restriction leaves the target subgroup",
                                  witness=(int(bad),))
    return Homomorphism(sub.group, target.group, target.from_parent(img), check=False)


def _record(report, name, lhs, rhs, group):
    diff = np.flatnonzero(lhs != rhs)
    if diff.size:
        x = int(diff[0])
        report.add(name, False, witness={"element": group.perms[x]},
                   detail=f"{diff.size} of {lhs.size} elements differ")
    else:
        report.add(name, True)


def check_identities(report, levels, face, degen, top, label="", bottom=0):
    """Record every simplicial identity among the given operators.

    ``face(n, i)`` is ``G_n -> G_{n-1}`` and ``degen(n, j)`` is
    ``G_n -> G_{n+1}``; levels run from ``bottom`` to ``top``.  The level
    index ``n`` doubles as the simplicial dimension.
    """
    tag = f"{label} " if label else ""
    for n in range(max(bottom, 2), top + 1):
        for j in range(n + 1):
            for i in range(j):
                lhs = chain(face(n, j), face(n - 1, i))
                rhs = chain(face(n, i), face(n - 1, j - 1))
                _record(report, f"{tag}d{i}d{j}=d{j-1}d{i} on G{n}", lhs, rhs, levels[n])
    for n in range(bottom, top - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                lhs = chain(degen(n, j), degen(n + 1, i))
                rhs = chain(degen(n, i), degen(n + 1, j + 1))
                _record(report, f"{tag}s{i}s{j}=s{j+1}s{i} on G{n}", lhs, rhs, levels[n])
    for n in range(bottom, top):
        ident = np.arange(levels[n].order)
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = chain(degen(n, j), face(n + 1, i))
                if i < j:
                    if n - 1 < bottom:
                        continue
                    rhs = chain(face(n, i), degen(n - 1, j - 1))
                    name = f"{tag}d{i}s{j}=s{j-1}d{i} on G{n}"
                elif i in (j, j + 1):
                    rhs = ident
                    name = f"{tag}d{i}s{j}=id on G{n}"
                else:
                    if n - 1 < bottom:
                        continue
                    rhs = chain(face(n, i - 1), degen(n - 1, j))
                    name = f"{tag}d{i}s{j}=s{j}d{i-1} on G{n}"
                _record(report, name, lhs, rhs, levels[n])


def check_hom(report, name, f):
    w = f.violation()
    if w is None:
        report.add(name, True)
    else:
        a, b = w
        report.add(name, False, witness={"a": f.domain.perms[a], "b": f.domain.perms[b]},
                   detail="f(ab) != f(a)f(b)")


class SimplicialGroupTrunc:
    """Groups ``G_0..G_N`` with faces ``d_i: G_n -> G_{n-1}`` and degeneracies ``s_j: G_n -> G_{n+1}``.

    ``faces[n][i]`` is defined for ``1 <= n <= N``; ``degens[n][j]`` for ``n < N``.
    """

    def __init__(self, levels, faces, degens, name=""):
        self.levels = list(levels)
        self.N = len(self.levels) - 1
        self.faces = {n: list(faces[n]) for n in range(1, self.N + 1)}
        self.degens = {n: list(degens[n]) for n in range(self.N)}
        self.name = name
        for n in range(1, self.N + 1):
            if len(self.faces[n]) != n + 1:
                raise GroupError(f"level {n} needs {n + 1} faces")
        for n in range(self.N):
            if len(self.degens[n]) != n + 1:
                raise GroupError(f"level {n} needs {n + 1} degeneracies")
        self._moore = {}

    @property
    def max_level(self):
        return self.N

    def _level(self, n):
        if not 0 <= n <= self.N:
            raise TruncationExceeded(f"level {n} outside 0..{self.N}")

    def d(self, n, i):
        self._level(n)
        return self.faces[n][i]

    def s(self, n, j):
        if not 0 <= n < self.N:
            raise TruncationExceeded(f"degeneracy out of level {n} exceeds truncation {self.N}")
        return self.degens[n][j]

    def degeneracy_composite(self, alpha):
        """``s_alpha: G_{b(alpha)} -> G_n`` for a SurjectionTuple over ``n``."""
        if alpha.n > self.N:
            raise TruncationExceeded(f"level {alpha.n} exceeds truncation {self.N}")
        level = alpha.target
        f = Homomorphism.identity(self.levels[level])
        for i in alpha.application_order():
            f = self.s(level, i).compose(f)
            level += 1
        return f

    def moore(self, n):
        self._level(n)
        sub = self._moore.get(n)
        if sub is None:
            mask = np.ones(self.levels[n].order, dtype=bool)
            for i in range(n):
                mask &= self.faces[n][i].images == 0
            sub = Subgroup(self.levels[n], mask)
            self._moore[n] = sub
        return sub

    def boundary(self, n):
        """``d_n`` restricted to ``NG_n -> NG_{n-1}``."""
        self._level(n)
        if n == 0:
            raise TruncationExceeded("no boundary out of level 0")
        return restrict(self.faces[n][n], self.moore(n), self.moore(n - 1))

    def moore_orders(self):
        return [self.moore(n).order for n in range(self.N + 1)]

    def order_factorization(self, n):
        """``(|G_n|, prod over S(n) of |NG_{b(a)}|)``."""
        prod = 1
        for a in enumerate_S(n):
            prod *= self.moore(a.target).order
        return self.levels[n].order, prod

    def __repr__(self):
        return f"<SimplicialGroupTrunc {self.name} orders={[g.order for g in self.levels]}>"


def verify_simplicial(g, check_homs=True):
    rep = VerificationReport(f"simplicial identities{': ' + g.name if g.name else ''}")
    rep.info["orders"] = [x.order for x in g.levels]
    if check_homs:
        for n in range(1, g.N + 1):
            for i in range(n + 1):
                check_hom(rep, f"d{i} on G{n} is a homomorphism", g.faces[n][i])
        for n in range(g.N):
            for j in range(n + 1):
                check_hom(rep, f"s{j} on G{n} is a homomorphism", g.degens[n][j])
    check_identities(rep, g.levels, g.d, g.s, g.N)
    for n in range(1, g.N + 1):
        sub = g.moore(n)
        img = g.faces[n][n].images[sub.indices]
        ok = g.moore(n - 1).mask[img]
        rep.add(f"d{n}(NG{n}) inside NG{n-1}", bool(ok.all()),
                witness=None if ok.all() else {"element": g.levels[n].perms[sub.indices[~ok][0]]})
    for n in range(2, g.N + 1):
        sub = g.moore(n)
        two = chain(g.faces[n][n], g.faces[n - 1][n - 1])[sub.indices]
        bad = sub.indices[two != 0]
        rep.add(f"boundary squared trivial on NG{n}", bad.size == 0,
                witness=None if bad.size == 0 else {"element": g.levels[n].perms[bad[0]]})
    for n in range(g.N + 1):
        lhs, rhs = g.order_factorization(n)
        rep.add(f"|G{n}| = product of Moore orders over S({n})", lhs == rhs,
                witness=None if lhs == rhs else {"order": lhs, "product": rhs})
    return rep.finish()


def constant_simplicial(group, N=3, name=""):
    ident = Homomorphism.identity(group)
    return SimplicialGroupTrunc(
        [group] * (N + 1),
        {n: [ident] * (n + 1) for n in range(1, N + 1)},
        {n: [ident] * (n + 1) for n in range(N)},
        name=name or f"const({group.name or group.order})",
    )


class CrossedModuleData:
    """``boundary: M -> P`` with a left action of P on M by automorphisms.

    ``action[p, x]`` is the index of ``p . x``.  Construction checks that
    the action is a homomorphism ``P -> Aut(M)``; the crossed-module axioms
    themselves are checked separately.
    """

    def __init__(self, M, P, boundary, action, check=True, name=""):
        action = np.ascontiguousarray(action, dtype=np.int64)
        if action.shape != (P.order, M.order):
            raise GroupError("action table has the wrong shape")
        action.setflags(write=False)
        self.M, self.P, self.boundary, self.action = M, P, boundary, action
        self.name = name
        if check:
            self.verify_action()

    @classmethod
    def from_gen_actions(cls, M, P, boundary, autos, check=True, name=""):
        """``autos[k]`` is the automorphism (Homomorphism or index array) of generator k of P."""
        gens = [np.asarray(a.images if isinstance(a, Homomorphism) else a, dtype=np.int64)
                for a in autos]
        if len(gens) != len(P.generators):
            raise GroupError(f"{len(gens)} automorphisms for {len(P.generators)} generators")
        tree = P.tree
        action = np.empty((P.order, M.order), dtype=np.int64)
        action[0] = np.arange(M.order)
        for p in tree.bfs[1:]:
            # (q g) . x = q . (g . x)
            action[p] = action[tree.parent[p]][gens[tree.via[p]]]
        return cls(M, P, boundary, action, check=check, name=name)

    @classmethod
    def by_conjugation(cls, M, P, inclusion, name=""):
        """Normal subgroup inclusion with conjugation action."""
        sub_img = inclusion.images
        pos = {int(v): k for k, v in enumerate(sub_img)}
        action = np.empty((P.order, M.order), dtype=np.int64)
        for p in range(P.order):
            conj = P.conj(p, sub_img)
            action[p] = [pos[int(c)] for c in conj]
        return cls(M, P, inclusion, action, name=name)

    def act(self, p, x):
        return self.action[np.asarray(p), np.asarray(x)]

    def automorphism(self, p):
        return Homomorphism(self.M, self.M, self.action[int(p)], check=False)

    def action_violation(self):
        if not np.array_equal(self.action[0], np.arange(self.M.order)):
            return ("identity does not act trivially", 0, None)
        for g in self.P.generators:
            row = self.action[g]
            if np.unique(row).size != self.M.order:
                return ("not a bijection", g, None)
            w = Homomorphism(self.M, self.M, row, check=False).violation()
            if w is not None:
                return ("not an automorphism", g, w)
            lhs = self.action[self.P.right_map(g)]
            rhs = self.action[:, row]
            bad = np.flatnonzero(np.any(lhs != rhs, axis=1))
            if bad.size:
                return ("not a group action", int(bad[0]), g)
        return None

    def verify_action(self):
        v = self.action_violation()
        if v is not None:
            raise HomomorphismInvalid(f"action invalid: {v[0]}", witness=v[1:])

    def __repr__(self):
        return f"<CrossedModuleData |M|={self.M.order} |P|={self.P.order}>"


def _nerve_level(x, n):
    """Elements, chain sources and the multiplication table of level ``n``."""
    M, P = x.M, x.P
    nm, np_ = M.order, P.order
    size = np_ * nm ** n
    codes = np.arange(size)
    p = codes % np_
    ms = np.empty((size, n), dtype=np.int64)
    rest = codes // np_
    for i in range(n):
        ms[:, i] = rest % nm
        rest //= nm
    # src[:, i] = x_i, the source of arrow i+1
    src = np.empty((size, n + 1), dtype=np.int64)
    src[:, 0] = p
    bd = x.boundary.images
    for i in range(n):
        src[:, i + 1] = P.mul(bd[ms[:, i]], src[:, i])
    return p, ms, src


def _encode(p, ms, np_, nm):
    code = np.zeros_like(p)
    for i in reversed(range(ms.shape[1])):
        code = code * nm + ms[:, i]
    return code * np_ + p


def nerve(x, N=3, cap=DEFAULT_ORDER_CAP, name=""):
    """Nerve of a crossed module: level n is the group of composable n-chains.

    An n-chain ``(p; m_1..m_n)`` has vertices ``x_0 = p``,
    ``x_i = d(m_i) x_{i-1}``; multiplication is the semidirect product
    ``(m, x)(m', x') = (m (x.m'), x x')`` arrow by arrow.
    """
    M, P = x.M, x.P
    nm, np_ = M.order, P.order
    for n in range(N + 1):
        if np_ * nm ** n > cap:
            raise OrderCapExceeded(f"nerve level {n} has order {np_ * nm ** n} > cap {cap}")
    levels, data = [], []
    mtab = M.table
    for n in range(N + 1):
        p, ms, src = _nerve_level(x, n)
        size = p.size
        table = np.empty((size, size), dtype=np.int64)
        step = max(1, (1 << 21) // size)
        for a0 in range(0, size, step):
            a = np.arange(a0, min(size, a0 + step))[:, None]
            b = np.arange(size)[None, :]
            pp = P.mul(p[a], p[b])
            code = np.zeros(pp.shape, dtype=np.int64)
            for i in reversed(range(n)):
                moved = x.action[src[a, i], ms[b, i]]
                prod = mtab[ms[a, i], moved] if mtab is not None else M.mul(ms[a, i], moved)
                code = code * nm + prod
            table[a0:a0 + step] = code * np_ + pp
        levels.append(FiniteGroup.from_table(table, cap=cap, name=f"N{n}"))
        data.append((p, ms, src))

    faces = {}
    for n in range(1, N + 1):
        p, ms, src = data[n]
        maps = []
        for i in range(n + 1):
            if i == 0:
                img = _encode(src[:, 1], ms[:, 1:], np_, nm)
            elif i == n:
                img = _encode(p, ms[:, :-1], np_, nm)
            else:
                merged = M.mul(ms[:, i], ms[:, i - 1])
                new = np.concatenate([ms[:, :i - 1], merged[:, None], ms[:, i + 1:]], axis=1)
                img = _encode(p, new, np_, nm)
            maps.append(Homomorphism(levels[n], levels[n - 1], img))
        faces[n] = maps
    degens = {}
    for n in range(N):
        p, ms, src = data[n]
        maps = []
        for j in range(n + 1):
            new = np.concatenate([ms[:, :j], np.zeros((p.size, 1), dtype=np.int64), ms[:, j:]], axis=1)
            maps.append(Homomorphism(levels[n], levels[n + 1], _encode(p, new, np_, nm)))
        degens[n] = maps
    return SimplicialGroupTrunc(levels, faces, degens, name=name or "nerve")


def chain_index(x, p, ms):
    """Element index of the chain ``(p; m_1..m_n)`` in a nerve level."""
    ms = np.asarray(ms, dtype=np.int64).reshape(1, -1)
    return int(_encode(np.array([p]), ms, x.P.order, x.M.order)[0])


__all__ = [
    "SimplicialGroupTrunc", "CrossedModuleData", "TruncationExceeded", "verify_simplicial",
    "constant_simplicial", "nerve", "chain", "restrict", "check_identities", "check_hom",
    "chain_index",
]
