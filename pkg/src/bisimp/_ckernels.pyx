# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t
from libc.string cimport memcmp

cnp.import_array()


cdef inline uint64_t _row_hash(const int32_t* row, Py_ssize_t d) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef Py_ssize_t i
    for i in range(d):
        h ^= <uint64_t>(row[i] + 1)
        h *= 1099511628211ULL
    return h


def enumerate_perms(gens, Py_ssize_t cap):
    cdef const int32_t[:, ::1] g = np.ascontiguousarray(gens, dtype=np.int32)
    cdef Py_ssize_t k = g.shape[0], d = g.shape[1]
    cdef Py_ssize_t size = 1
    while size < 2 * (cap + 1):
        size <<= 1
    cdef Py_ssize_t mask_bits = size - 1
    cdef cnp.ndarray[int32_t, ndim=1] slots_arr = np.full(size, -1, dtype=np.int32)
    cdef int32_t[::1] slots = slots_arr
    cdef Py_ssize_t capacity = 64
    rows_arr = np.empty((capacity, d), dtype=np.int32)
    parent_arr = np.empty(capacity, dtype=np.int32)
    via_arr = np.empty(capacity, dtype=np.int32)
    cdef int32_t[:, ::1] rows = rows_arr
    cdef int32_t[::1] parent = parent_arr
    cdef int32_t[::1] via = via_arr
    cdef int32_t[::1] tmp = np.empty(d, dtype=np.int32)
    cdef Py_ssize_t count = 1, head = 0, i, j, s
    cdef uint64_t h
    cdef bint found
    for i in range(d):
        rows[0, i] = i
    parent[0] = -1
    via[0] = -1
    h = _row_hash(&rows[0, 0], d)
    slots[h & mask_bits] = 0
    while head < count:
        for j in range(k):
            for i in range(d):
                tmp[i] = rows[head, g[j, i]]
            h = _row_hash(&tmp[0], d)
            s = h & mask_bits
            found = False
            while slots[s] != -1:
                if memcmp(&rows[slots[s], 0], &tmp[0], d * sizeof(int32_t)) == 0:
                    found = True
                    break
                s = (s + 1) & mask_bits
            if found:
                continue
            if count >= cap:
                return None
            if count >= capacity:
                capacity *= 2
                rows_arr = np.resize(rows_arr, (capacity, d))
                parent_arr = np.resize(parent_arr, capacity)
                via_arr = np.resize(via_arr, capacity)
                rows = rows_arr
                parent = parent_arr
                via = via_arr
            for i in range(d):
                rows[count, i] = tmp[i]
            parent[count] = head
            via[count] = j
            slots[s] = count
            count += 1
        head += 1
    return (np.ascontiguousarray(rows_arr[:count]),
            np.ascontiguousarray(parent_arr[:count]),
            np.ascontiguousarray(via_arr[:count]))


def bfs_closure(maps, mask):
    cdef cnp.ndarray m_arr = np.ascontiguousarray(maps, dtype=np.int32)
    cdef const int32_t[:, ::1] m = m_arr
    cdef cnp.ndarray mk_arr = mask.view(np.uint8)
    cdef unsigned char[::1] mk = mk_arr
    cdef Py_ssize_t k = m.shape[0], n = m.shape[1]
    cdef cnp.ndarray q_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] queue = q_arr
    cdef Py_ssize_t head = 0, tail = 0, x, y, j
    for x in range(n):
        if mk[x]:
            queue[tail] = x
            tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        for j in range(k):
            y = m[j, x]
            if not mk[y]:
                mk[y] = 1
                queue[tail] = y
                tail += 1
    return mask


def hom_violation(table_dom, table_cod, images):
    cdef cnp.ndarray td_arr = np.ascontiguousarray(table_dom, dtype=np.int32)
    cdef cnp.ndarray tc_arr = np.ascontiguousarray(table_cod, dtype=np.int32)
    cdef cnp.ndarray im_arr = np.ascontiguousarray(images, dtype=np.int32)
    cdef const int32_t[:, ::1] td = td_arr
    cdef const int32_t[:, ::1] tc = tc_arr
    cdef const int32_t[::1] im = im_arr
    cdef Py_ssize_t n = td.shape[0], a, b
    for a in range(n):
        for b in range(n):
            if im[td[a, b]] != tc[im[a], im[b]]:
                return a, b
    return -1, -1
