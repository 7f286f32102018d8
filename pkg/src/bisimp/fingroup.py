"""Finite permutation groups with exhaustive element enumeration.

Every group is stored as the full list of its elements (rows of an int32
array of images, 0-based).  Elements are referred to by their row index;
row 0 is always the identity.  Products compose as functions,
``(a*b)[i] = a[b[i]]``, and the commutator is ``[x, y] = x y x^-1 y^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels

DEFAULT_ORDER_CAP = 65536
TABLE_LIMIT = 3000
DEFAULT_SEARCH_BUDGET = 200_000


class GroupError(Exception):
    pass


class OrderCapExceeded(GroupError):
    pass


class BadPermutation(GroupError, ValueError):
    pass


class SearchBudgetExceeded(GroupError):
    pass


class HomomorphismInvalid(GroupError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def check_perm(images, degree=None):
    """Return ``images`` as an int32 array, raising if it is not a bijection."""
    arr = np.asarray(images, dtype=np.int64).ravel()
    if degree is not None and arr.size != degree:
        raise BadPermutation(f"expected {degree} images, got {arr.size}")
    if arr.size and (arr.min() < 0 or arr.max() >= arr.size):
        raise BadPermutation(f"image out of range in {arr.tolist()}")
    if np.unique(arr).size != arr.size:
        raise BadPermutation(f"not a bijection: {arr.tolist()}")
    return arr.astype(np.int32)


def perm_from_cycles(degree, *cycles):
    """Permutation of ``degree`` points from disjoint cycles, e.g. ``(0, 1, 2)``."""
    images = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return check_perm(images, degree)


def _compose(a, b):
    # rows of a applied after rows of b
    return np.take_along_axis(a, b, axis=1)


_WEIGHTS = {}


def _weights(degree):
    w = _WEIGHTS.get(degree)
    if w is None:
        rng = np.random.default_rng(0x5EED + degree)
        w = rng.integers(1, 2**63 - 1, size=degree, dtype=np.uint64) | np.uint64(1)
        _WEIGHTS[degree] = w
    return w


class FiniteGroup:
    """A fully enumerated permutation group.

    Construct with :meth:`closure` (from generators), :meth:`from_elements`
    or :meth:`from_table`.  Instances are immutable.
    """

    def __init__(self, perms, generators=None, *, tree=None, name=""):
        perms = np.ascontiguousarray(perms, dtype=np.int32)
        if perms.ndim != 2 or perms.shape[0] == 0:
            raise GroupError("a group needs at least the identity")
        if not np.array_equal(perms[0], np.arange(perms.shape[1])):
            raise GroupError("row 0 must be the identity")
        perms.setflags(write=False)
        self.perms = perms
        self.name = name
        self._right_maps = {}
        keys = self._keys(perms)
        order = np.argsort(keys, kind="stable")
        skeys = keys[order]
        if skeys.size > 1 and np.any(skeys[1:] == skeys[:-1]):
            dup = np.flatnonzero(skeys[1:] == skeys[:-1])[0]
            a, b = order[dup], order[dup + 1]
            if np.array_equal(perms[a], perms[b]):
                raise GroupError("duplicate elements")
            raise GroupError("element hash collision")  # pragma: no cover
        self._sorted_keys = skeys
        self._key_order = order
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(int(g) for g in generators)
        if tree is not None:
            self.__dict__["tree"] = tree

    # -- construction ------------------------------------------------------

    @classmethod
    def closure(cls, gens, degree=None, cap=DEFAULT_ORDER_CAP, name=""):
        gens = [check_perm(g, degree) for g in gens]
        if degree is None:
            if not gens:
                raise GroupError("degree required for an empty generating set")
            degree = gens[0].size
        if any(g.size != degree for g in gens):
            raise BadPermutation("generators of mixed degree")
        gen_arr = np.array(gens, dtype=np.int32).reshape(len(gens), degree)
        result = kernels.enumerate_perms(gen_arr, cap)
        if result is None:
            raise OrderCapExceeded(f"group order exceeds cap {cap}")
        perms, parent, via = result
        g = cls(perms, generators=None, name=name,
                tree=_Tree(np.arange(len(perms)), parent, via))
        # generators as element indices, in the order given
        g.generators = tuple(int(i) for i in g.lookup(gen_arr)) if len(gens) else ()
        return g

    @classmethod
    def from_elements(cls, perms, cap=DEFAULT_ORDER_CAP, name=""):
        """Group whose element list is ``perms`` (order kept, identity moved first).

        Closure is verified: a greedy generating set is extracted and its
        closure must reproduce exactly the given set.
        """
        perms = np.ascontiguousarray(perms, dtype=np.int32)
        if perms.shape[0] > cap:
            raise OrderCapExceeded(f"group order {perms.shape[0]} exceeds cap {cap}")
        ident = np.arange(perms.shape[1])
        where = np.flatnonzero(np.all(perms == ident, axis=1))
        if where.size != 1:
            raise GroupError("element list must contain the identity exactly once")
        if where[0] != 0:
            idx = np.r_[where[0], np.delete(np.arange(len(perms)), where[0])]
            perms = perms[idx]
        return cls(perms, name=name)

    @classmethod
    def from_table(cls, table, cap=DEFAULT_ORDER_CAP, name=""):
        """Left-regular permutation representation of a multiplication table.

        ``table[a, b]`` is the index of ``a*b``; index 0 must be the identity.
        """
        table = np.asarray(table, dtype=np.int32)
        n = table.shape[0]
        if n > cap:
            raise OrderCapExceeded(f"group order {n} exceeds cap {cap}")
        if not np.array_equal(table[0], np.arange(n)):
            raise GroupError("index 0 of the table is not the identity")
        return cls.from_elements(table, cap=cap, name=name)

    # -- basic data ----------------------------------------------------------

    @property
    def order(self):
        return self.perms.shape[0]

    def __len__(self):
        return self.order

    @property
    def degree(self):
        return self.perms.shape[1]

    identity = 0

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{label} order={self.order} degree={self.degree}>"

    def _keys(self, perms):
        return (perms.astype(np.uint64) * _weights(perms.shape[1])).sum(axis=1, dtype=np.uint64)

    def lookup(self, perms):
        """Indices of the given permutations (any leading shape)."""
        perms = np.asarray(perms, dtype=np.int32)
        shape = perms.shape[:-1]
        flat = perms.reshape(-1, self.degree)
        keys = self._keys(flat)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        idx = self._key_order[pos]
        ok = np.all(self.perms[idx] == flat, axis=1)
        if not ok.all():
            bad = flat[np.flatnonzero(~ok)[0]]
            raise KeyError(f"permutation {bad.tolist()} is not an element")
        return idx.reshape(shape)

    def index_of(self, perm):
        return int(self.lookup(np.asarray(perm)[None, :])[0])

    def contains_perm(self, perm):
        try:
            self.index_of(perm)
        except KeyError:
            return False
        return True

    # -- arithmetic (vectorized over index arrays) ----------------------------

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        if "table" in self.__dict__ and self.__dict__["table"] is not None:
            return self.__dict__["table"][a, b].astype(np.int64)
        pa = self.perms[a.ravel()]
        pb = self.perms[b.ravel()]
        return self.lookup(_compose(pa, pb)).reshape(a.shape)

    def inv(self, a):
        return self.inverse[np.asarray(a)]

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def product(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    @cached_property
    def inverse(self):
        inv_perms = np.argsort(self.perms, axis=1).astype(np.int32)
        out = self.lookup(inv_perms)
        out.setflags(write=False)
        return out

    def right_map(self, h):
        """Index array ``x -> x*h`` over all elements."""
        h = int(h)
        m = self._right_maps.get(h)
        if m is None:
            tab = self.__dict__.get("table")
            if tab is not None:
                m = np.ascontiguousarray(tab[:, h], dtype=np.int32)
            else:
                m = self.lookup(self.perms[:, self.perms[h]]).astype(np.int32)
            m.setflags(write=False)
            if len(self._right_maps) > 512:
                self._right_maps.clear()
            self._right_maps[h] = m
        return m

    @cached_property
    def element_orders(self):
        return _cheap_orders(self.perms)

    @cached_property
    def table(self):
        """Full Cayley table when the order is at most ``TABLE_LIMIT``, else None."""
        n = self.order
        if n > TABLE_LIMIT:
            return None
        tree = self.tree
        gmaps = [self.right_map(self.generators[j]) for j in range(len(self.generators))]
        tab = np.empty((n, n), dtype=np.int32)
        tab[:, 0] = np.arange(n)
        for x in tree.bfs[1:]:
            tab[:, x] = gmaps[tree.via[x]][tab[:, tree.parent[x]]]
        tab.setflags(write=False)
        return tab

    @cached_property
    def tree(self):
        return spanning_tree(self, self.generators)

    @cached_property
    def is_abelian(self):
        g = np.array(self.generators, dtype=np.int64)
        if g.size == 0:
            return True
        return bool(np.all(self.mul(g[:, None], g[None, :]) == self.mul(g[None, :], g[:, None])))

    # -- subgroups ------------------------------------------------------------

    def whole(self):
        return Subgroup(self, np.ones(self.order, dtype=bool))

    def trivial(self):
        m = np.zeros(self.order, dtype=bool)
        m[0] = True
        return Subgroup(self, m)

    def subgroup(self, gens):
        return generate(self, gens)

    def _greedy_generators(self):
        n = self.order
        if n == 1:
            return ()
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        gens = []
        maps = []
        # prefer high-order elements for short generating sets
        orders = _cheap_orders(self.perms)
        ranking = np.lexsort((np.arange(n), -orders))
        self.generators = ()
        for cand in ranking:
            if mask[cand]:
                continue
            gens.append(int(cand))
            maps.append(self.right_map(cand))
            kernels.bfs_closure(np.array(maps), mask)
            if mask.all():
                break
        return tuple(gens)


def _cheap_orders(perms):
    """Element orders from cycle structure (lcm of cycle lengths)."""
    n, d = perms.shape
    orders = np.ones(n, dtype=np.int64)
    cur = perms.copy()
    ident = np.arange(d)
    fixed_at = np.zeros((n, d), dtype=np.int64)
    k = 1
    pending = np.ones((n, d), dtype=bool)
    while pending.any():
        hit = (cur == ident) & pending
        fixed_at[hit] = k
        pending &= ~hit
        if not pending.any():
            break
        cur = np.take_along_axis(perms, cur, axis=1)
        k += 1
    orders[:] = np.lcm.reduce(fixed_at, axis=1)
    return orders


@dataclass(frozen=True)
class _Tree:
    bfs: np.ndarray
    parent: np.ndarray
    via: np.ndarray

    @cached_property
    def depth(self):
        depth = np.zeros(len(self.parent), dtype=np.int64)
        for x in self.bfs[1:]:
            depth[x] = depth[self.parent[x]] + 1
        return depth


def spanning_tree(group, gens):
    """BFS tree over right multiplication by ``gens``; must reach every element."""
    n = group.order
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    bfs = [np.array([0])]
    frontier = np.array([0])
    maps = [group.right_map(g) for g in gens]
    while frontier.size:
        new_all = []
        for j, m in enumerate(maps):
            tgt = m[frontier]
            fresh = ~seen[tgt]
            tgt_f, src_f = tgt[fresh], frontier[fresh]
            tgt_u, first = np.unique(tgt_f, return_index=True)
            seen[tgt_u] = True
            parent[tgt_u] = src_f[first]
            via[tgt_u] = j
            new_all.append(tgt_u)
        frontier = np.concatenate(new_all) if new_all else np.array([], dtype=np.int64)
        if frontier.size:
            bfs.append(frontier)
    if not seen.all():
        raise GroupError("generators do not generate the group")
    return _Tree(np.concatenate(bfs), parent, via)


class Subgroup:
    """A subset of a parent group's elements, closed under the group operations."""

    def __init__(self, parent, mask):
        mask = np.asarray(mask, dtype=bool).copy()
        mask.setflags(write=False)
        self.parent = parent
        self.mask = mask

    @cached_property
    def indices(self):
        return np.flatnonzero(self.mask)

    @property
    def order(self):
        return int(self.indices.size)

    def __len__(self):
        return self.order

    def __contains__(self, x):
        return bool(self.mask[int(x)])

    def contains(self, xs):
        return self.mask[np.asarray(xs)]

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((id(self.parent), self.mask.tobytes()))

    def __le__(self, other):
        return self.issubset(other)

    def issubset(self, other):
        return self.parent is other.parent and not np.any(self.mask & ~other.mask)

    @property
    def is_trivial(self):
        return self.order == 1

    def is_normal(self):
        g = self.parent
        gens = np.array(g.generators, dtype=np.int64)
        h = self.indices
        if gens.size == 0:
            return True
        return bool(self.mask[g.conj(gens[:, None], h[None, :])].all())

    def is_closed(self):
        h = self.indices
        return bool(self.mask[self.parent.mul(h[:, None], h[None, :])].all()
                    and self.mask[self.parent.inv(h)].all() and self.mask[0])

    @cached_property
    def group(self):
        """The subgroup as a standalone group; element ``k`` is parent element ``indices[k]``."""
        return FiniteGroup.from_elements(self.parent.perms[self.indices],
                                         cap=max(self.order, 1))

    def to_parent(self, k):
        return self.indices[np.asarray(k)]

    def from_parent(self, x):
        return np.searchsorted(self.indices, np.asarray(x))

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent!r}>"


def generate(group, gens, start=None):
    """Subgroup of ``group`` generated by element indices ``gens`` (and ``start``)."""
    n = group.order
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    maps = []
    if start is not None:
        mask |= start.mask
        maps = [group.right_map(g) for g in _subgroup_gens(start)]
    for g in np.unique(np.asarray(gens, dtype=np.int64).ravel()):
        if mask[g]:
            continue
        maps.append(group.right_map(g))
        kernels.bfs_closure(np.array(maps), mask)
    return Subgroup(group, mask)


def _subgroup_gens(sub):
    gens = sub.__dict__.get("_gens")
    if gens is None:
        gens = []
        mask = np.zeros(sub.parent.order, dtype=bool)
        mask[0] = True
        maps = []
        for x in sub.indices:
            if mask[x]:
                continue
            gens.append(int(x))
            maps.append(sub.parent.right_map(x))
            kernels.bfs_closure(np.array(maps), mask)
            if mask.sum() == sub.order:
                break
        sub.__dict__["_gens"] = gens
    return gens


def subgroup_generators(sub):
    """A short generating set (parent indices) of ``sub``."""
    return list(_subgroup_gens(sub))


def intersect(a, b):
    if a.parent is not b.parent:
        raise GroupError("subgroups of different groups")
    return Subgroup(a.parent, a.mask & b.mask)


def normal_closure(group, seed):
    """Smallest normal subgroup of ``group`` containing ``seed``."""
    if isinstance(seed, Subgroup):
        cur = seed
    else:
        cur = generate(group, seed)
    ggens = np.array(group.generators, dtype=np.int64)
    if ggens.size == 0:
        return cur
    ggens = np.unique(np.r_[ggens, group.inv(ggens)])
    while True:
        hgens = np.array(subgroup_generators(cur), dtype=np.int64)
        if hgens.size == 0:
            return cur
        conj = group.conj(ggens[:, None], hgens[None, :]).ravel()
        new = conj[~cur.mask[conj]]
        if new.size == 0:
            return cur
        cur = generate(group, new, start=cur)


def commutator_subgroup(a, b, chunk=1 << 18):
    """Subgroup generated by all ``[x, y]`` with ``x`` in ``a`` and ``y`` in ``b``."""
    if a.parent is not b.parent:
        raise GroupError("subgroups of different groups")
    g = a.parent
    xs, ys = a.indices, b.indices
    found = np.zeros(g.order, dtype=bool)
    step = max(1, chunk // max(ys.size, 1))
    for s in range(0, xs.size, step):
        block = xs[s:s + step]
        found[g.commutator(block[:, None], ys[None, :]).ravel()] = True
    return generate(g, np.flatnonzero(found))


class Homomorphism:
    """A group homomorphism stored as a full element-to-element index map."""

    def __init__(self, domain, codomain, images, check=True):
        images = np.ascontiguousarray(images, dtype=np.int64)
        if images.shape != (domain.order,):
            raise HomomorphismInvalid("image array does not cover the domain")
        if images.size and (images.min() < 0 or images.max() >= codomain.order):
            raise HomomorphismInvalid("image index out of range")
        images.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.images = images
        if check:
            self.verify()

    @classmethod
    def from_gen_images(cls, domain, codomain, gen_images, check=True):
        """Extend generator images (codomain indices) along the domain's spanning tree."""
        gen_images = np.asarray(gen_images, dtype=np.int64).ravel()
        if gen_images.size != len(domain.generators):
            raise HomomorphismInvalid(
                f"{gen_images.size} generator images for {len(domain.generators)} generators")
        images = _propagate(domain, domain.tree, codomain, gen_images)
        return cls(domain, codomain, images, check=check)

    @classmethod
    def from_gen_perms(cls, domain, codomain, perms, check=True):
        try:
            idx = codomain.lookup(np.asarray(perms, dtype=np.int32).reshape(-1, codomain.degree))
        except (KeyError, ValueError) as exc:
            raise HomomorphismInvalid(f"generator image not in codomain: {exc}") from exc
        return cls.from_gen_images(domain, codomain, idx, check=check)

    @classmethod
    def identity(cls, group):
        return cls(group, group, np.arange(group.order), check=False)

    @classmethod
    def trivial(cls, domain, codomain):
        return cls(domain, codomain, np.zeros(domain.order, dtype=np.int64), check=False)

    def __call__(self, x):
        return self.images[np.asarray(x)]

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (self.domain is other.domain and self.codomain is other.codomain
                and np.array_equal(self.images, other.images))

    def __hash__(self):
        return hash((id(self.domain), id(self.codomain), self.images.tobytes()))

    def compose(self, inner):
        """``self o inner``."""
        if inner.codomain is not self.domain:
            raise GroupError("maps are not composable")
        return Homomorphism(inner.domain, self.codomain, self.images[inner.images], check=False)

    def violation(self):
        """A witness pair ``(a, b)`` with ``f(ab) != f(a) f(b)``, or None."""
        dom, cod = self.domain, self.codomain
        if self.images[0] != 0:
            return (0, 0)
        if dom.order <= TABLE_LIMIT and cod.order <= TABLE_LIMIT:
            a, b = kernels.hom_violation(dom.table, cod.table, self.images)
            return None if a < 0 else (int(a), int(b))
        # f(x g) = f(x) f(g) for every element x and generator g forces f to be
        # multiplicative on all pairs (induction on word length)
        everything = np.arange(dom.order)
        for g in dom.generators:
            lhs = self.images[dom.right_map(g)]
            rhs = cod.mul(self.images, self.images[g])
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                return (int(everything[bad[0]]), int(g))
        return None

    def verify(self):
        w = self.violation()
        if w is not None:
            a, b = w
            raise HomomorphismInvalid(
                f"f(ab) != f(a)f(b) for a={self.domain.perms[a].tolist()}, "
                f"b={self.domain.perms[b].tolist()}", witness=w)

    def kernel(self):
        return kernel(self)

    def image(self, sub=None):
        mask = np.zeros(self.codomain.order, dtype=bool)
        src = np.arange(self.domain.order) if sub is None else sub.indices
        mask[self.images[src]] = True
        return Subgroup(self.codomain, mask)

    @property
    def is_injective(self):
        return np.unique(self.images).size == self.domain.order

    @property
    def is_surjective(self):
        return np.unique(self.images).size == self.codomain.order

    def gen_images(self):
        return self.images[list(self.domain.generators)]


def _propagate(domain, tree, codomain, gen_images):
    images = np.zeros(domain.order, dtype=np.int64)
    depth = tree.depth
    order = tree.bfs[1:]
    if order.size == 0:
        return images
    levels = depth[order]
    for lvl in range(1, int(levels.max()) + 1):
        xs = order[levels == lvl]
        images[xs] = codomain.mul(images[tree.parent[xs]], gen_images[tree.via[xs]])
    return images


def kernel(f):
    return Subgroup(f.domain, f.images == 0)


@dataclass(frozen=True)
class ProductGroup:
    group: FiniteGroup
    inj1: Homomorphism
    inj2: Homomorphism
    pr1: Homomorphism
    pr2: Homomorphism

    def pair(self, i, j):
        """Index of ``(i, j)``."""
        return np.asarray(i) * self.pr2.codomain.order + np.asarray(j)


def direct_product(a, b, cap=DEFAULT_ORDER_CAP):
    """``a x b`` acting on disjoint point sets; element ``(i, j)`` has index ``i*|b| + j``."""
    na, nb = a.order, b.order
    if na * nb > cap:
        raise OrderCapExceeded(f"product order {na * nb} exceeds cap {cap}")
    left = np.repeat(a.perms, nb, axis=0)
    right = np.tile(b.perms, (na, 1)) + a.degree
    perms = np.concatenate([left, right], axis=1)
    gens = [int(g) * nb for g in a.generators] + [int(g) for g in b.generators]
    g = FiniteGroup(perms, generators=gens or None,
                    name=f"({a.name or 'A'} x {b.name or 'B'})")
    i = np.arange(na * nb)
    pr1 = Homomorphism(g, a, i // nb, check=False)
    pr2 = Homomorphism(g, b, i % nb, check=False)
    inj1 = Homomorphism(a, g, np.arange(na) * nb, check=False)
    inj2 = Homomorphism(b, g, np.arange(nb), check=False)
    return ProductGroup(g, inj1, inj2, pr1, pr2)


def semidirect_product(n, h, action, cap=DEFAULT_ORDER_CAP, name=""):
    """``n x| h`` with ``action[k, x]`` the index of ``k . x`` (``k`` in h, ``x`` in n).

    Element ``(x, k)`` has index ``x*|h| + k`` and multiplies as
    ``(x, k)(y, l) = (x (k.y), k l)``; realized in its regular representation.
    """
    action = np.asarray(action, dtype=np.int64)
    nn, nh = n.order, h.order
    if nn * nh > cap:
        raise OrderCapExceeded(f"semidirect product order {nn * nh} exceeds cap {cap}")
    x = np.repeat(np.arange(nn), nh)
    k = np.tile(np.arange(nh), nn)
    # table[a, b]
    xa, ka = x[:, None], k[:, None]
    xb, kb = x[None, :], k[None, :]
    tx = n.mul(xa, action[ka, xb])
    tk = h.mul(ka, kb)
    table = (tx * nh + tk).astype(np.int32)
    g = FiniteGroup.from_table(table, cap=cap, name=name)
    inj_n = Homomorphism(n, g, np.arange(nn) * nh, check=False)
    inj_h = Homomorphism(h, g, np.arange(nh), check=False)
    proj_h = Homomorphism(g, h, np.arange(nn * nh) % nh, check=False)
    return g, inj_n, inj_h, proj_h


# -- isomorphism search --------------------------------------------------------


def small_generating_set(group):
    return list(group.generators)


def isomorphisms(a, b, budget=DEFAULT_SEARCH_BUDGET):
    """Yield every isomorphism ``a -> b`` (as Homomorphisms).

    Backtracks over images of a short generating set of ``a``, pruning by
    element order and by the orders of partially generated subgroups.
    """
    if a.order != b.order:
        return
    if not np.array_equal(np.sort(a.element_orders), np.sort(b.element_orders)):
        return
    gens = small_generating_set(a)
    if not gens:
        yield Homomorphism(a, b, np.zeros(1, dtype=np.int64), check=False)
        return
    tree = spanning_tree(a, gens)
    a_orders = a.element_orders
    b_orders = b.element_orders
    prefix_orders = [generate(a, gens[:k + 1]).order for k in range(len(gens))]
    cands = [np.flatnonzero(b_orders == a_orders[g]) for g in gens]
    nodes = 0
    chosen = []
    def extend(level, sub):
        nonlocal nodes
        for c in cands[level]:
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"isomorphism search exceeded {budget} nodes")
            if level > 0 and sub.mask[c]:
                continue
            nxt = generate(b, [c], start=sub)
            if nxt.order != prefix_orders[level]:
                continue
            chosen.append(int(c))
            if level + 1 == len(gens):
                images = _propagate(a, tree, b, np.array(chosen))
                if np.unique(images).size == a.order:
                    ok = True
                    for j, g in enumerate(gens):
                        if not np.array_equal(images[a.right_map(g)],
                                              b.mul(images, images[g])):
                            ok = False
                            break
                    if ok:
                        yield Homomorphism(a, b, images, check=False)
            else:
                yield from extend(level + 1, nxt)
            chosen.pop()

    yield from extend(0, b.trivial())


def find_isomorphism(a, b, budget=DEFAULT_SEARCH_BUDGET):
    return next(isomorphisms(a, b, budget), None)


def is_isomorphic(a, b, budget=DEFAULT_SEARCH_BUDGET):
    return find_isomorphism(a, b, budget) is not None


# -- named groups ----------------------------------------------------------------


def cyclic(n, name=None):
    return FiniteGroup.closure([np.roll(np.arange(n), -1)] if n > 1 else [],
                               degree=max(n, 1), name=name or f"C{n}")


def symmetric(n, name=None):
    gens = []
    if n > 1:
        gens.append(perm_from_cycles(n, tuple(range(n))))
        gens.append(perm_from_cycles(n, (0, 1)))
    return FiniteGroup.closure(gens, degree=n, name=name or f"S{n}")


def dihedral(n, name=None):
    """Symmetries of an ``n``-gon on points ``0..n-1`` (order ``2n``)."""
    r = perm_from_cycles(n, tuple(range(n)))
    s = check_perm([(-i) % n for i in range(n)])
    return FiniteGroup.closure([r, s], degree=n, name=name or f"D{n}")


def trivial_group(degree=1):
    return FiniteGroup.closure([], degree=degree, name="1")


def all_elements_product(group, xs):
    """Product of a sequence of element indices, left to right."""
    out = 0
    for x in xs:
        out = int(group.mul(out, x))
    return out


__all__ = [
    "DEFAULT_ORDER_CAP", "FiniteGroup", "Subgroup", "Homomorphism", "ProductGroup",
    "GroupError", "OrderCapExceeded", "BadPermutation", "SearchBudgetExceeded",
    "HomomorphismInvalid", "check_perm", "perm_from_cycles", "generate", "kernel",
    "intersect", "normal_closure", "commutator_subgroup", "direct_product",
    "semidirect_product", "isomorphisms", "find_isomorphism", "is_isomorphic",
    "cyclic", "symmetric", "dihedral", "trivial_group", "subgroup_generators",
    "spanning_tree",
]
