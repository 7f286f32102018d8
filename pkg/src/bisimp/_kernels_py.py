"""Pure-Python/numpy implementations of the hot loops.

These are the reference versions; ``bisimp._ckernels`` provides compiled
equivalents with identical signatures and results.
"""

import numpy as np


def enumerate_perms(gens, cap):
    """Breadth-first enumeration of the group generated by ``gens``.

    ``gens`` is an ``(k, d)`` int32 array of permutations.  Returns
    ``(perms, parent, via)`` where row ``x`` of ``perms`` equals
    ``perms[parent[x]] * gens[via[x]]`` (composition ``a*b = a[b]``), and
    row 0 is the identity.  Returns ``None`` when more than ``cap``
    elements turn up.
    """
    gens = np.ascontiguousarray(gens, dtype=np.int32)
    k, d = gens.shape
    identity = np.arange(d, dtype=np.int32)
    rows = [identity]
    parent = [-1]
    via = [-1]
    seen = {identity.tobytes(): 0}
    head = 0
    while head < len(rows):
        cur = rows[head]
        for j in range(k):
            new = cur[gens[j]]
            key = new.tobytes()
            if key not in seen:
                if len(rows) >= cap:
                    return None
                seen[key] = len(rows)
                rows.append(new)
                parent.append(head)
                via.append(j)
        head += 1
    return (np.array(rows, dtype=np.int32).reshape(len(rows), d),
            np.array(parent, dtype=np.int32), np.array(via, dtype=np.int32))


def bfs_closure(maps, mask):
    """Close the boolean ``mask`` under every index map in ``maps``.

    ``maps`` is ``(k, n)``; ``mask`` is modified in place and returned.
    """
    frontier = np.flatnonzero(mask)
    while frontier.size:
        found = np.unique(maps[:, frontier].ravel())
        found = found[~mask[found]]
        mask[found] = True
        frontier = found
    return mask


def hom_violation(table_dom, table_cod, images):
    """First pair ``(a, b)`` with ``f(ab) != f(a)f(b)``, or ``(-1, -1)``."""
    n = table_dom.shape[0]
    block = max(1, (1 << 22) // max(n, 1))
    for start in range(0, n, block):
        rows = slice(start, min(n, start + block))
        lhs = images[table_dom[rows]]
        rhs = table_cod[images[rows][:, None], images[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b = bad[0]
            return int(a) + start, int(b)
    return -1, -1
