"""Crossed modules, crossed squares and 2-crossed modules: axiom checkers,
extraction from (bi)simplicial groups, and the mapping cone of a square."""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .bisimplicial import BisimplicialGroupTrunc
from .fingroup import (
    GroupError, Homomorphism, SearchBudgetExceeded, direct_product, intersect, isomorphisms,
    semidirect_product,
)
from .peiffer import F_values, PeifferPairSpec
from .report import FAIL, PASS, VerificationReport
from .simplicial import CrossedModuleData, SimplicialGroupTrunc, restrict
from .surjections import parse_pair


class HypothesisViolated(GroupError):
    def __init__(self, message, level=None, witness=None):
        super().__init__(message)
        self.level = level
        self.witness = witness


class AxiomViolation(GroupError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def _add(rep, name, lhs, rhs, labels, groups, target=None):
    """Record ``lhs == rhs`` over a grid of element tuples; witness names each coordinate."""
    lhs, rhs = np.broadcast_arrays(np.asarray(lhs), np.asarray(rhs))
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        rep.add(name, PASS, detail=f"{lhs.size} cases")
        return True
    pos = bad[0]
    witness = {lab: grp.perms[int(i)] for lab, grp, i in zip(labels, groups, pos)}
    if target is not None:
        witness["lhs"] = target.perms[int(lhs[tuple(pos)])]
        witness["rhs"] = target.perms[int(rhs[tuple(pos)])]
    rep.add(name, FAIL, witness=witness, detail=f"{len(bad)} of {lhs.size} cases fail")
    return False


_CHUNK = 1 << 21


def _add_sweep(rep, name, fn, n_first, rest_size, labels, groups, target=None):
    """Like ``_add`` for three-index identities, evaluated in slabs of the first index.

    ``fn(a)`` gets ``a`` of shape ``(k, 1, 1)`` and returns ``(lhs, rhs)``.
    """
    step = max(1, _CHUNK // max(rest_size, 1))
    total = bad_count = 0
    witness = None
    for start in range(0, n_first, step):
        a = np.arange(start, min(n_first, start + step))[:, None, None]
        lhs, rhs = np.broadcast_arrays(*fn(a))
        total += lhs.size
        bad = np.argwhere(lhs != rhs)
        bad_count += len(bad)
        if bad.size and witness is None:
            pos = bad[0]
            coords = (int(pos[0]) + start, *map(int, pos[1:]))
            witness = {lab: grp.perms[i] for lab, grp, i in zip(labels, groups, coords)}
            if target is not None:
                witness["lhs"] = target.perms[int(lhs[tuple(pos)])]
                witness["rhs"] = target.perms[int(rhs[tuple(pos)])]
    if witness is None:
        rep.add(name, PASS, detail=f"{total} cases")
        return True
    rep.add(name, FAIL, witness=witness, detail=f"{bad_count} of {total} cases fail")
    return False


def _action_checks(rep, label, acting, target, action):
    """``action[p]`` is an automorphism of ``target`` and ``p -> action[p]`` a homomorphism."""
    t = np.arange(target.order)
    _add(rep, f"{label}: identity acts trivially", action[0], t, ("x",), (target,), target)
    p = np.arange(acting.order)[:, None]
    for g in acting.generators:
        row = action[g]
        _add(rep, f"{label}: generator {acting.perms[g].tolist()} acts by a homomorphism",
             row[target.mul(t[:, None], t[None, :])], target.mul(row[:, None], row[None, :]),
             ("x", "y"), (target, target), target)
        _add(rep, f"{label}: (p g).x = p.(g.x) for generator {acting.perms[g].tolist()}",
             action[acting.mul(p[:, 0], g)], action[p, row[None, :]], ("p", "x"), (acting, target), target)


# -- crossed modules -----------------------------------------------------------------


def check_crossed_module(x: CrossedModuleData, label=""):
    rep = VerificationReport(f"crossed module{': ' + (label or x.name) if (label or x.name) else ''}")
    M, P, bd, act = x.M, x.P, x.boundary.images, x.action
    rep.info["orders"] = {"M": M.order, "P": P.order}
    w = x.boundary.violation()
    rep.add("boundary is a homomorphism", w is None,
            witness=None if w is None else {"a": M.perms[w[0]], "b": M.perms[w[1]]})
    _action_checks(rep, "action", P, M, act)
    p = np.arange(P.order)[:, None]
    m = np.arange(M.order)
    _add(rep, "CM1: d(p.x) = p d(x) p^-1", bd[act], P.conj(p, bd[None, :]), ("p", "x"), (P, M), P)
    _add(rep, "CM2: d(x).y = x y x^-1", act[bd[:, None], m[None, :]],
         M.conj(m[:, None], m[None, :]), ("x", "y"), (M, M), M)
    return rep.finish()


def product_crossed_module(a: CrossedModuleData, b: CrossedModuleData, name=""):
    """Componentwise product; element ``(i, j)`` has index ``i*|b| + j`` on both sides."""
    pm = direct_product(a.M, b.M)
    pp = direct_product(a.P, b.P)
    i = np.arange(pm.group.order)
    bd = Homomorphism(pm.group, pp.group,
                      pp.pair(a.boundary.images[i // b.M.order], b.boundary.images[i % b.M.order]))
    k = np.arange(pp.group.order)
    pa, pb = k // b.P.order, k % b.P.order
    ma, mb = i // b.M.order, i % b.M.order
    action = a.action[pa[:, None], ma[None, :]] * b.M.order + b.action[pb[:, None], mb[None, :]]
    return CrossedModuleData(pm.group, pp.group, bd, action, name=name or "product")


def conjugation_action(G, sub, emb):
    """``action[a, k]``: conjugate ``sub`` element k by ``emb[a]`` in G, as a sub index."""
    emb = np.asarray(emb)
    conj = G.conj(emb[:, None], sub.indices[None, :])
    inside = sub.mask[conj]
    if not inside.all():
        a, k = np.argwhere(~inside)[0]
        raise GroupError(f"conjugation leaves the subgroup: {G.perms[sub.indices[k]].tolist()}")
    return sub.from_parent(conj)


def _require_trivial(g, levels, what):
    for lvl in levels:
        sub = g.moore(*lvl)
        if not sub.is_trivial:
            w = sub.indices[1]
            raise HypothesisViolated(f"{what}: NG{lvl} has order {sub.order}", level=lvl,
                                     witness=g.G(*lvl).perms[w].tolist())


@dataclass
class ExtractedCrossedModules:
    vertical: CrossedModuleData
    horizontal: CrossedModuleData
    product: CrossedModuleData

    def as_list(self):
        return [self.vertical, self.horizontal, self.product]


def extract_crossed_module(g: BisimplicialGroupTrunc):
    """``d^v_1: NG(0,1) -> NG(0,0)``, ``d^h_1: NG(1,0) -> NG(0,0)`` and their product map.

    Requires ``NG(p,q) = 1`` for all ``p, q >= 1`` inside the truncation.
    """
    _require_trivial(g, [(p, q) for p in range(1, g.P + 1) for q in range(1, g.Q + 1)],
                     "crossed module extraction")
    P_sub = g.moore(0, 0)
    P = P_sub.group
    Mv, Nh = g.moore(0, 1), g.moore(1, 0)
    bv = g.moore_cell(0, 1).boundary_v
    bh = g.moore_cell(1, 0).boundary_h
    emb_v = g.sv[(0, 0, 0)].images[P_sub.indices]
    emb_h = g.sh[(0, 0, 0)].images[P_sub.indices]
    act_v = conjugation_action(g.G(0, 1), Mv, emb_v)
    act_h = conjugation_action(g.G(1, 0), Nh, emb_h)
    vert = CrossedModuleData(Mv.group, P, bv, act_v, name="d^v_1: NG(0,1) -> NG(0,0)")
    horiz = CrossedModuleData(Nh.group, P, bh, act_h, name="d^h_1: NG(1,0) -> NG(0,0)")
    pm = direct_product(Mv.group, Nh.group)
    i = np.arange(pm.group.order)
    x, y = i // Nh.order, i % Nh.order
    bd = Homomorphism(pm.group, P, P.mul(bv.images[x], bh.images[y]))
    action = act_v[:, x] * Nh.order + act_h[:, y]
    prod = CrossedModuleData(pm.group, P, bd, action,
                             name="(x,y) -> d^v_1(x) d^h_1(y): NG(0,1) x NG(1,0) -> NG(0,0)")
    return ExtractedCrossedModules(vert, horiz, prod)


# -- crossed squares ---------------------------------------------------------------------


class CrossedSquareData:
    """``lam: L -> M``, ``lam2: L -> N``, ``mu: M -> P``, ``nu: N -> P``, P-actions on
    L, M, N (tables ``act_X[t, x]``) and ``h[x, y]`` in L for ``x`` in M, ``y`` in N.

    M and N act on L through ``mu`` and ``nu``.
    """

    def __init__(self, L, M, N, P, lam, lam2, mu, nu, act_L, act_M, act_N, h, name=""):
        self.L, self.M, self.N, self.P = L, M, N, P
        self.lam, self.lam2, self.mu, self.nu = lam, lam2, mu, nu
        self.act_L = np.asarray(act_L, dtype=np.int64)
        self.act_M = np.asarray(act_M, dtype=np.int64)
        self.act_N = np.asarray(act_N, dtype=np.int64)
        self.h = np.asarray(h, dtype=np.int64)
        if self.h.shape != (M.order, N.order):
            raise GroupError("h table has the wrong shape")
        for tab, X in ((self.act_L, L), (self.act_M, M), (self.act_N, N)):
            if tab.shape != (P.order, X.order):
                raise GroupError("action table has the wrong shape")
        self.name = name

    @property
    def orders(self):
        return {"L": self.L.order, "M": self.M.order, "N": self.N.order, "P": self.P.order}

    def crossed_modules(self):
        """``mu``, ``nu``, ``mu lam`` and ``nu lam2`` with their P-actions."""
        ml = self.mu.compose(self.lam)
        nl = self.nu.compose(self.lam2)
        return {
            "mu": CrossedModuleData(self.M, self.P, self.mu, self.act_M, check=False),
            "nu": CrossedModuleData(self.N, self.P, self.nu, self.act_N, check=False),
            "mu.lam": CrossedModuleData(self.L, self.P, ml, self.act_L, check=False),
            "nu.lam'": CrossedModuleData(self.L, self.P, nl, self.act_L, check=False),
        }

    def with_h(self, h, name=None):
        return CrossedSquareData(self.L, self.M, self.N, self.P, self.lam, self.lam2, self.mu,
                                 self.nu, self.act_L, self.act_M, self.act_N, h,
                                 name=name or self.name)

    def __repr__(self):
        return f"<CrossedSquareData {self.orders}>"


def check_crossed_square(x: CrossedSquareData):
    rep = VerificationReport(f"crossed square{': ' + x.name if x.name else ''}")
    rep.info["orders"] = x.orders
    L, M, N, P = x.L, x.M, x.N, x.P
    lam, lam2, mu, nu = x.lam.images, x.lam2.images, x.mu.images, x.nu.images
    for nm, f in (("lambda", x.lam), ("lambda'", x.lam2), ("mu", x.mu), ("nu", x.nu)):
        w = f.violation()
        rep.add(f"{nm} is a homomorphism", w is None,
                witness=None if w is None else {"a": f.domain.perms[w[0]], "b": f.domain.perms[w[1]]})
    _add(rep, "square commutes: mu lambda = nu lambda'", mu[lam], nu[lam2], ("z",), (L,), P)
    for label, tab, X in (("P on L", x.act_L, L), ("P on M", x.act_M, M), ("P on N", x.act_N, N)):
        _action_checks(rep, label, P, X, tab)
    t = np.arange(P.order)[:, None]
    z = np.arange(L.order)
    xs = np.arange(M.order)
    ys = np.arange(N.order)
    # 1
    _add(rep, "1: lambda is P-equivariant", lam[x.act_L], x.act_M[t, lam[None, :]], ("t", "z"), (P, L), M)
    _add(rep, "1: lambda' is P-equivariant", lam2[x.act_L], x.act_N[t, lam2[None, :]], ("t", "z"), (P, L), N)
    for nm, cm in x.crossed_modules().items():
        sub = check_crossed_module(cm)
        for c in sub.checks:
            if c.name.startswith("CM"):
                rep.checks.append(type(c)(f"1: {nm} {c.name}", c.status, c.witness, c.detail))
    X, Y = xs[:, None], ys[None, :]
    h = x.h
    # 2
    _add(rep, "2: lambda h(x,y) = x (nu(y).x^-1)", lam[h],
         M.mul(X, x.act_M[nu[Y], M.inv(X)]), ("x", "y"), (M, N), M)
    _add(rep, "2: lambda' h(x,y) = (mu(x).y) y^-1", lam2[h],
         N.mul(x.act_N[mu[X], Y], N.inv(Y)), ("x", "y"), (M, N), N)
    # 3
    Z = z[:, None]
    _add(rep, "3: h(lambda z, y) = z (nu(y).z^-1)", h[lam[Z], Y],
         L.mul(Z, x.act_L[nu[Y], L.inv(Z)]), ("z", "y"), (L, N), L)
    Zr = z[None, :]
    _add(rep, "3: h(x, lambda' z) = (mu(x).z) z^-1", h[X, lam2[Zr]],
         L.mul(x.act_L[mu[X], Zr], L.inv(Zr)), ("x", "z"), (M, L), L)
    # 4
    b, c = xs[None, :, None], ys[None, None, :]
    _add_sweep(rep, "4: h(xx', y) = (mu(x).h(x',y)) h(x,y)",
               lambda a: (h[M.mul(a, b), c], L.mul(x.act_L[mu[a], h[b, c]], h[a, c])),
               M.order, M.order * N.order, ("x", "x'", "y"), (M, M, N), L)
    b, c = ys[None, :, None], ys[None, None, :]
    _add_sweep(rep, "4: h(x, yy') = h(x,y) (nu(y).h(x,y'))",
               lambda a: (h[a, N.mul(b, c)], L.mul(h[a, b], x.act_L[nu[b], h[a, c]])),
               M.order, N.order * N.order, ("x", "y", "y'"), (M, N, N), L)
    # 5
    b, c = xs[None, :, None], ys[None, None, :]
    _add_sweep(rep, "5: h(t.x, t.y) = t.h(x,y)",
               lambda t: (h[x.act_M[t, b], x.act_N[t, c]], x.act_L[t, h[b, c]]),
               P.order, M.order * N.order, ("t", "x", "y"), (P, M, N), L)
    return rep.finish()


def normal_pair_square(P, M_sub, N_sub, name="normal pair"):
    """``(M cap N; M, N; P)`` with inclusions, conjugation actions and ``h(x,y) = [x,y]``."""
    L_sub = intersect(M_sub, N_sub)
    L, M, N = L_sub.group, M_sub.group, N_sub.group

    def incl(sub_from, sub_to, cod):
        return Homomorphism(sub_from.group, cod, sub_to.from_parent(sub_from.indices))

    lam = incl(L_sub, M_sub, M)
    lam2 = incl(L_sub, N_sub, N)
    mu = Homomorphism(M, P, M_sub.indices)
    nu = Homomorphism(N, P, N_sub.indices)
    allp = np.arange(P.order)
    act_L = conjugation_action(P, L_sub, allp)
    act_M = conjugation_action(P, M_sub, allp)
    act_N = conjugation_action(P, N_sub, allp)
    comm = P.commutator(M_sub.indices[:, None], N_sub.indices[None, :])
    if not L_sub.mask[comm].all():
        raise GroupError("commutators leave M cap N; subgroups not normal")
    h = L_sub.from_parent(comm)
    return CrossedSquareData(L, M, N, P, lam, lam2, mu, nu, act_L, act_M, act_N, h, name=name)


H_MAP_SPEC = ("((0),∅)", "(∅,(0))")


def extract_crossed_square(g: BisimplicialGroupTrunc):
    """The low corner of the Moore bicomplex as a crossed square.

    L = NG(1,1), M = NG(0,1), N = NG(1,0), P = NG(0,0); ``lam = d^h_1``,
    ``lam2 = d^v_1``, ``mu = d^v_1``, ``nu = d^h_1``; P acts by conjugation
    through ``s^v_0``, ``s^h_0`` and ``s^h_0 s^v_0``; ``h(x, y) = [s^h_0 x, s^v_0 y]``
    evaluated as the pairing with indices ``((0),∅), (∅,(0))``.
    """
    _require_trivial(g, [(p, q) for p in range(g.P + 1) for q in range(g.Q + 1)
                         if p >= 2 or q >= 2], "crossed square extraction")
    if g.P < 1 or g.Q < 1:
        raise HypothesisViolated("grid must reach level (1,1)")
    Ls, Ms, Ns, Ps = g.moore(1, 1), g.moore(0, 1), g.moore(1, 0), g.moore(0, 0)
    L, M, N, P = Ls.group, Ms.group, Ns.group, Ps.group
    lam = restrict(g.dh[(1, 1, 1)], Ls, Ms)
    lam2 = restrict(g.dv[(1, 1, 1)], Ls, Ns)
    mu = g.moore_cell(0, 1).boundary_v
    nu = g.moore_cell(1, 0).boundary_h
    pidx = Ps.indices
    act_M = conjugation_action(g.G(0, 1), Ms, g.sv[(0, 0, 0)].images[pidx])
    act_N = conjugation_action(g.G(1, 0), Ns, g.sh[(0, 0, 0)].images[pidx])
    to11 = g.sv[(1, 0, 0)].images[g.sh[(0, 0, 0)].images[pidx]]
    act_L = conjugation_action(g.G(1, 1), Ls, to11)
    spec = PeifferPairSpec((1, 1), parse_pair(H_MAP_SPEC[0], 1, 1), parse_pair(H_MAP_SPEC[1], 1, 1))
    vals = F_values(g, spec, Ms.indices, Ns.indices)
    h = Ls.from_parent(vals)
    return CrossedSquareData(L, M, N, P, lam, lam2, mu, nu, act_L, act_M, act_N, h,
                             name=f"Moore square of {g.name}")


# -- 2-crossed modules -------------------------------------------------------------------


class TwoCrossedModuleData:
    """``L --d2--> M --d1--> N`` with N-actions on M and L and a lifting ``lift[y, y']`` in L.

    M acts on L through ``d1`` and the N-action.
    """

    def __init__(self, L, M, N, d2, d1, act_M, act_L, lift, name=""):
        self.L, self.M, self.N = L, M, N
        self.d2, self.d1 = d2, d1
        self.act_M = np.asarray(act_M, dtype=np.int64)
        self.act_L = np.asarray(act_L, dtype=np.int64)
        self.lift = np.asarray(lift, dtype=np.int64)
        if self.lift.shape != (M.order, M.order):
            raise GroupError("lifting table has the wrong shape")
        if self.act_M.shape != (N.order, M.order) or self.act_L.shape != (N.order, L.order):
            raise GroupError("action table has the wrong shape")
        self.name = name

    @property
    def orders(self):
        return {"L": self.L.order, "M": self.M.order, "N": self.N.order}

    def with_lift(self, lift, name=None):
        return TwoCrossedModuleData(self.L, self.M, self.N, self.d2, self.d1, self.act_M,
                                    self.act_L, lift, name=name or self.name)

    def __repr__(self):
        return f"<TwoCrossedModuleData {self.orders}>"


def check_two_crossed_module(x: TwoCrossedModuleData):
    rep = VerificationReport(f"2-crossed module{': ' + x.name if x.name else ''}")
    rep.info["orders"] = x.orders
    L, M, N = x.L, x.M, x.N
    d2, d1, lift = x.d2.images, x.d1.images, x.lift
    aM, aL = x.act_M, x.act_L
    for nm, f in (("d2", x.d2), ("d1", x.d1)):
        w = f.violation()
        rep.add(f"{nm} is a homomorphism", w is None,
                witness=None if w is None else {"a": f.domain.perms[w[0]], "b": f.domain.perms[w[1]]})
    _action_checks(rep, "N on M", N, M, aM)
    _action_checks(rep, "N on L", N, L, aL)
    z = np.arange(L.order)
    y = np.arange(M.order)
    n = np.arange(N.order)[:, None]
    _add(rep, "complex: d1 d2 = 1", d1[d2], np.zeros(L.order, dtype=np.int64), ("z",), (L,), N)
    _add(rep, "d2 is N-equivariant", d2[aL], aM[n, d2[None, :]], ("n", "z"), (N, L), M)
    _add(rep, "d1 is N-equivariant", d1[aM], N.conj(n, d1[None, :]), ("n", "y"), (N, M), N)
    Y, Yp = y[:, None], y[None, :]
    # 1
    _add(rep, "1: d2{y,y'} = y y' y^-1 (d1(y).y')^-1", d2[lift[Y, Yp]],
         M.mul(M.conj(Y, Yp), M.inv(aM[d1[Y], Yp])), ("y", "y'"), (M, M), M)
    # 2
    Z, Zp = z[:, None], z[None, :]
    _add(rep, "2: {d2 z, d2 z'} = z z' z^-1 z'^-1", lift[d2[Z], d2[Zp]],
         L.commutator(Z, Zp), ("z", "z'"), (L, L), L)
    # 3
    Yr = y[None, :]
    _add(rep, "3: {d2 z, y}{y, d2 z} = z (d1(y).z)^-1",
         L.mul(lift[d2[Z], Yr], lift[Yr, d2[Z]]), L.mul(Z, L.inv(aL[d1[Yr], Z])),
         ("z", "y"), (L, M), L)
    # 4
    b, c = y[None, :, None], y[None, None, :]
    mm = M.order * M.order

    def ax4(a):
        inner = lift[M.inv(d2[lift[a, c]]), aM[d1[a], b]]
        return lift[a, M.mul(b, c)], L.product(lift[a, b], lift[a, c], inner)

    _add_sweep(rep, "4: {y, y'y''} = {y,y'}{y,y''}{d2{y,y''}^-1, d1(y).y'}", ax4,
               M.order, mm, ("y", "y'", "y''"), (M, M, M), L)
    # 5
    _add_sweep(rep, "5: {yy', y''} = {y, y'y''y'^-1} d1(y).{y', y''}",
               lambda a: (lift[M.mul(a, b), c],
                          L.mul(lift[a, M.conj(b, c)], aL[d1[a], lift[b, c]])),
               M.order, mm, ("y", "y'", "y''"), (M, M, M), L)
    # 6
    _add_sweep(rep, "6: t.{y,y'} = {t.y, t.y'}",
               lambda t: (aL[t, lift[b, c]], lift[aM[t, b], aM[t, c]]),
               N.order, mm, ("t", "y", "y'"), (N, M, M), L)
    return rep.finish()


def _two_crossed_from_levels(G, subs, d2_map, d1_map, s0, s1, s0_from_0, s10_from_0, lift_fn, name):
    """Shared builder: ``subs = (NG0, NG1, NG2)`` inside level groups ``G = (G0, G1, G2)``."""
    n0, n1, n2 = subs
    d2 = restrict(d2_map, n2, n1)
    d1 = restrict(d1_map, n1, n0)
    act_M = conjugation_action(G[1], n1, s0_from_0[n0.indices])
    act_L = conjugation_action(G[2], n2, s10_from_0[n0.indices])
    ys = n1.indices
    vals = lift_fn(ys[:, None], ys[None, :])
    inside = n2.mask[vals]
    if not inside.all():
        a, b = np.argwhere(~inside)[0]
        raise GroupError(f"lifting leaves NG2 at y={G[1].perms[ys[a]].tolist()}, "
                         f"y'={G[1].perms[ys[b]].tolist()}")
    lift = n2.from_parent(vals)
    return TwoCrossedModuleData(n2.group, n1.group, n0.group, d2, d1, act_M, act_L, lift, name=name)


def two_crossed_from_simplicial(s: SimplicialGroupTrunc):
    """``NG2 -> NG1 -> NG0`` with ``{y,y'} = s1(y y' y^-1) s0(y) s1(y')^-1 s0(y)^-1``."""
    if s.N < 2:
        raise HypothesisViolated("simplicial group must reach level 2")
    for n in range(3, s.N + 1):
        sub = s.moore(n)
        if not sub.is_trivial:
            raise HypothesisViolated(f"NG{n} has order {sub.order}", level=n,
                                     witness=s.levels[n].perms[sub.indices[1]].tolist())
    G1, G2 = s.levels[1], s.levels[2]
    s0, s1 = s.s(1, 0).images, s.s(1, 1).images

    def lift_fn(y, yp):
        return G2.product(s1[G1.conj(y, yp)], s0[y], G2.inv(s1[yp]), G2.inv(s0[y]))

    return _two_crossed_from_levels(
        s.levels, (s.moore(0), s.moore(1), s.moore(2)), s.d(2, 2), s.d(1, 1), s0, s1,
        s.s(0, 0).images, s1[s.s(0, 0).images], lift_fn, name=f"Moore complex of {s.name}")


def _bisimplicial_line(g, direction, k):
    """Levels, Moore subgroups and operators along one direction at fixed index k."""
    if direction == "v":
        lv = [(k, q) for q in range(3)]
        d = lambda lvl, i: g.dv[(lvl[0], lvl[1], i)]  # noqa: E731
        s = lambda lvl, i: g.sv[(lvl[0], lvl[1], i)]  # noqa: E731
    else:
        lv = [(p, k) for p in range(3)]
        d = lambda lvl, i: g.dh[(lvl[0], lvl[1], i)]  # noqa: E731
        s = lambda lvl, i: g.sh[(lvl[0], lvl[1], i)]  # noqa: E731
    return lv, d, s


def _two_crossed_from_line(g, direction, k):
    bound = g.Q if direction == "v" else g.P
    if bound < 2:
        raise HypothesisViolated("grid must reach level 2 in the chosen direction")
    if direction == "v":
        _require_trivial(g, [(k, q) for q in range(3, g.Q + 1)], "row 2-crossed module")
    else:
        _require_trivial(g, [(p, k) for p in range(3, g.P + 1)], "column 2-crossed module")
    lv, d, s = _bisimplicial_line(g, direction, k)
    G = [g.G(*l) for l in lv]
    subs = [g.moore(*l) for l in lv]
    s0, s1 = s(lv[1], 0).images, s(lv[1], 1).images
    s0_from_0 = s(lv[0], 0).images

    def lift_fn(x, y):
        # [s1 x, s1 y][s1 y, s0 x]
        return G[2].mul(G[2].commutator(s1[x], s1[y]), G[2].commutator(s1[y], s0[x]))

    tag = "v" if direction == "v" else "h"
    name = (f"NG({k},2) -> NG({k},1) -> NG({k},0)" if direction == "v"
            else f"NG(2,{k}) -> NG(1,{k}) -> NG(0,{k})")
    return _two_crossed_from_levels(G, subs, d(lv[2], 2), d(lv[1], 1), s0, s1, s0_from_0,
                                    s1[s0_from_0], lift_fn, name=f"{name} [{tag}] of {g.name}")


def two_crossed_from_rows(g, p):
    """Vertical Moore complex at horizontal index ``p``."""
    return _two_crossed_from_line(g, "v", p)


def two_crossed_from_cols(g, q):
    """Horizontal Moore complex at vertical index ``q``."""
    return _two_crossed_from_line(g, "h", q)


def lifting_vs_pairing(g, direction, k, x: TwoCrossedModuleData | None = None):
    """Check ``{x,y} F(x,y) = 1`` for the pairing ``(∅,(0)),(∅,(1))`` (or its horizontal twin)."""
    x = x or _two_crossed_from_line(g, direction, k)
    if direction == "v":
        lvl = (k, 2)
        spec = PeifferPairSpec(lvl, parse_pair("(∅,(0))", *lvl), parse_pair("(∅,(1))", *lvl))
        src = g.moore(k, 1)
    else:
        lvl = (2, k)
        spec = PeifferPairSpec(lvl, parse_pair("((0),∅)", *lvl), parse_pair("((1),∅)", *lvl))
        src = g.moore(1, k)
    G = g.G(*lvl)
    tgt = g.moore(*lvl)
    F = F_values(g, spec, src.indices, src.indices)
    lifted = tgt.indices[x.lift]
    rep = VerificationReport(f"lifting = pairing^-1 ({direction}, index {k})")
    _add(rep, f"{{x,y}} F(x,y) = 1 on NG{src_level(direction, k)}", G.mul(lifted, F),
         np.zeros_like(F), ("x", "y"), (x.M, x.M), G)
    return rep.finish()


def src_level(direction, k):
    return (k, 1) if direction == "v" else (1, k)


def _cone_lifting(kind, x: CrossedSquareData, mx, na, my, nb):
    M, N, L = x.M, x.N, x.L
    h = x.h
    if kind == "h(x,ab)":
        return h[mx, N.mul(na, nb)]
    if kind == "h(x,aba^-1)^-1":
        return L.inv(h[mx, N.conj(na, nb)])
    if kind == "trivial":
        return np.zeros(np.broadcast_shapes(np.shape(mx), np.shape(nb)), dtype=np.int64)
    raise ValueError(f"unknown lifting {kind!r}")


CONE_LIFTING = "h(x,aba^-1)^-1"


def mapping_cone(x: CrossedSquareData, lifting=CONE_LIFTING, check=True):
    """``L -> M x| N -> P`` with ``d2 z = (lam(z)^-1, lam2(z))``, ``d1(m, a) = mu(m) nu(a)``.

    N acts on M through ``nu`` and the P-action.  Element ``(m, a)`` of the
    semidirect product has index ``m*|N| + a``.
    """
    if check:
        rep = check_crossed_square(x)
        if not rep.ok:
            raise AxiomViolation("input is not a crossed square", report=rep)
    L, M, N, P = x.L, x.M, x.N, x.P
    action = x.act_M[x.nu.images]  # (|N|, |M|)
    MN, _, _, _ = semidirect_product(M, N, action, name="M x| N")
    nN = N.order
    idx = np.arange(MN.order)
    m_of, a_of = idx // nN, idx % nN
    z = np.arange(L.order)
    d2 = Homomorphism(L, MN, M.inv(x.lam.images[z]) * nN + x.lam2.images[z])
    d1 = Homomorphism(MN, P, P.mul(x.mu.images[m_of], x.nu.images[a_of]))
    t = np.arange(P.order)[:, None]
    act_MN = x.act_M[t, m_of[None, :]] * nN + x.act_N[t, a_of[None, :]]
    U, W = idx[:, None], idx[None, :]
    lift = _cone_lifting(lifting, x, m_of[U], a_of[U], m_of[W], a_of[W])
    return TwoCrossedModuleData(L, MN, P, d2, d1, act_MN, x.act_L, lift,
                                name=f"mapping cone of {x.name}" if x.name else "mapping cone")


# -- isomorphisms of structures -------------------------------------------------------------


def _search(components, constraints, budget=200_000):
    """Backtrack over component isomorphisms; ``constraints`` are ``(needed, fn)`` pairs
    where ``fn(maps)`` returns True when satisfied once components ``needed`` are set."""
    isos = [list(isomorphisms(a, b)) for a, b in components]
    if any(not lst for lst in isos):
        return None
    order = list(range(len(components)))
    chosen = {}
    nodes = 0

    def rec(k):
        nonlocal nodes
        if k == len(order):
            return dict(chosen)
        comp = order[k]
        for f in isos[comp]:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded("structure isomorphism search exhausted its budget")
            chosen[comp] = f.images
            ok = all(fn(chosen) for needed, fn in constraints
                     if comp in needed and all(c in chosen for c in needed))
            if ok:
                res = rec(k + 1)
                if res is not None:
                    return res
            del chosen[comp]
        return None

    return rec(0)


def _hom_compat(f_a, f_b, src, dst):
    """``phi_dst o f_a = f_b o phi_src``."""
    return lambda m: np.array_equal(m[dst][f_a.images], f_b.images[m[src]])


def _act_compat(act_a, act_b, acting, target):
    return lambda m: np.array_equal(m[target][act_a],
                                    act_b[m[acting]][:, m[target]])


def crossed_module_isomorphism(a: CrossedModuleData, b: CrossedModuleData):
    """Component maps ``{0: M, 1: P}`` of an isomorphism, or None."""
    return _search([(a.P, b.P), (a.M, b.M)],
                   [((0, 1), lambda m: np.array_equal(m[0][a.boundary.images],
                                                      b.boundary.images[m[1]])),
                    ((0, 1), _act_compat(a.action, b.action, 0, 1))])


def crossed_square_isomorphism(a: CrossedSquareData, b: CrossedSquareData):
    """Component maps ``{0: P, 1: M, 2: N, 3: L}`` of an isomorphism, or None."""
    P, Mi, Ni, Li = 0, 1, 2, 3
    return _search(
        [(a.P, b.P), (a.M, b.M), (a.N, b.N), (a.L, b.L)],
        [((P, Mi), _hom_compat(a.mu, b.mu, Mi, P)),
         ((P, Ni), _hom_compat(a.nu, b.nu, Ni, P)),
         ((P, Mi), _act_compat(a.act_M, b.act_M, P, Mi)),
         ((P, Ni), _act_compat(a.act_N, b.act_N, P, Ni)),
         ((Mi, Li), _hom_compat(a.lam, b.lam, Li, Mi)),
         ((Ni, Li), _hom_compat(a.lam2, b.lam2, Li, Ni)),
         ((P, Li), _act_compat(a.act_L, b.act_L, P, Li)),
         ((Mi, Ni, Li), lambda m: np.array_equal(m[Li][a.h], b.h[m[Mi][:, None], m[Ni][None, :]]))])


def two_crossed_isomorphism(a: TwoCrossedModuleData, b: TwoCrossedModuleData):
    """Component maps ``{0: N, 1: M, 2: L}`` of an isomorphism, or None."""
    Nn, Mi, Li = 0, 1, 2
    return _search(
        [(a.N, b.N), (a.M, b.M), (a.L, b.L)],
        [((Nn, Mi), _hom_compat(a.d1, b.d1, Mi, Nn)),
         ((Mi, Li), _hom_compat(a.d2, b.d2, Li, Mi)),
         ((Nn, Mi), _act_compat(a.act_M, b.act_M, Nn, Mi)),
         ((Nn, Li), _act_compat(a.act_L, b.act_L, Nn, Li)),
         ((Mi, Li), lambda m: np.array_equal(m[Li][a.lift], b.lift[m[Mi][:, None], m[Mi][None, :]]))])


__all__ = [
    "HypothesisViolated", "AxiomViolation", "check_crossed_module", "product_crossed_module",
    "extract_crossed_module", "ExtractedCrossedModules", "CrossedSquareData",
    "check_crossed_square", "normal_pair_square", "extract_crossed_square",
    "TwoCrossedModuleData", "check_two_crossed_module", "two_crossed_from_simplicial",
    "two_crossed_from_rows", "two_crossed_from_cols", "lifting_vs_pairing", "mapping_cone",
    "CONE_LIFTING", "crossed_module_isomorphism", "crossed_square_isomorphism",
    "two_crossed_isomorphism", "conjugation_action",
]
