# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled subset-query kernel.

Mirrors `_kernel_py.FamilyIndex`. Planted sets are stored flattened in
CSR form, grouped by minimum member (small sets first within a group);
a query marks its nodes in a scratch bitmap and scans only the groups
whose minimum is present. The scratch bitmap is allocated per call, so
instances are safe to share between threads.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from libc.string cimport memset


cdef class FamilyIndex:
    """Subset-containment index over a family of small node sets."""

    cdef readonly int universe_size
    cdef readonly int n_sets
    cdef int *grp_off      # universe_size+1: set-group offsets, by min member
    cdef int *set_off      # n_sets+1: member offsets per set, group order
    cdef int *members      # flattened ascending members

    def __cinit__(self, int universe_size, planted):
        cdef list sets
        cdef tuple p
        cdef int n_sets, total, i, j, v, prev, pos
        if universe_size < 0:
            raise ValueError("universe_size must be nonnegative")
        sets = []
        total = 0
        for raw in planted:
            p = tuple(raw)
            prev = -1
            for obj in p:
                v = obj
                if v <= prev:
                    raise ValueError("planted sets must be strictly ascending")
                prev = v
            if prev < 0:
                raise ValueError("planted sets must be nonempty")
            if prev >= universe_size:
                raise ValueError("planted set member out of range")
            sets.append(p)
            total += len(p)
        # Group by minimum member; small sets first so positive queries
        # exit early.
        sets.sort(key=_min_then_size)
        n_sets = len(sets)
        self.universe_size = universe_size
        self.n_sets = n_sets
        self.grp_off = <int *> PyMem_Malloc((universe_size + 1) * sizeof(int))
        self.set_off = <int *> PyMem_Malloc((n_sets + 1) * sizeof(int))
        self.members = <int *> PyMem_Malloc(max(total, 1) * sizeof(int))
        if self.grp_off is NULL or self.set_off is NULL or self.members is NULL:
            raise MemoryError()
        pos = 0
        i = 0
        for v in range(universe_size + 1):
            self.grp_off[v] = 0
        for i in range(n_sets):
            p = <tuple> sets[i]
            self.grp_off[<int> p[0] + 1] += 1
            self.set_off[i] = pos
            for obj in p:
                self.members[pos] = <int> obj
                pos += 1
        self.set_off[n_sets] = pos
        for v in range(universe_size):
            self.grp_off[v + 1] += self.grp_off[v]

    def __dealloc__(self):
        PyMem_Free(self.grp_off)
        PyMem_Free(self.set_off)
        PyMem_Free(self.members)

    def contains_defective(self, nodes) -> bool:
        """True iff some planted set is a subset of `nodes`."""
        cdef int n = len(nodes)
        cdef unsigned char *mark
        cdef int *buf
        cdef int m, i, v, si, mi, lo, hi
        cdef bint ok, hit
        mark = <unsigned char *> PyMem_Malloc(max(self.universe_size, 1))
        buf = <int *> PyMem_Malloc(max(n, 1) * sizeof(int))
        if mark is NULL or buf is NULL:
            PyMem_Free(mark)
            PyMem_Free(buf)
            raise MemoryError()
        memset(mark, 0, max(self.universe_size, 1))
        m = 0
        hit = False
        try:
            for obj in nodes:
                v = obj
                if v < 0 or v >= self.universe_size:
                    raise ValueError("node out of range")
                if not mark[v]:
                    mark[v] = 1
                    buf[m] = v
                    m += 1
            for i in range(m):
                v = buf[i]
                lo = self.grp_off[v]
                hi = self.grp_off[v + 1]
                for si in range(lo, hi):
                    ok = True
                    # First member equals the group key; already marked.
                    for mi in range(self.set_off[si] + 1, self.set_off[si + 1]):
                        if not mark[self.members[mi]]:
                            ok = False
                            break
                    if ok:
                        hit = True
                        break
                if hit:
                    break
        finally:
            PyMem_Free(mark)
            PyMem_Free(buf)
        return hit

    def count_contained(self, nodes, int k) -> int:
        """Number of planted k-sets lying fully inside `nodes`."""
        cdef int n = len(nodes)
        cdef unsigned char *mark
        cdef int *buf
        cdef int m, i, v, si, mi, lo, hi, count
        cdef bint ok
        mark = <unsigned char *> PyMem_Malloc(max(self.universe_size, 1))
        buf = <int *> PyMem_Malloc(max(n, 1) * sizeof(int))
        if mark is NULL or buf is NULL:
            PyMem_Free(mark)
            PyMem_Free(buf)
            raise MemoryError()
        memset(mark, 0, max(self.universe_size, 1))
        m = 0
        count = 0
        try:
            for obj in nodes:
                v = obj
                if v < 0 or v >= self.universe_size:
                    raise ValueError("node out of range")
                if not mark[v]:
                    mark[v] = 1
                    buf[m] = v
                    m += 1
            for i in range(m):
                v = buf[i]
                lo = self.grp_off[v]
                hi = self.grp_off[v + 1]
                for si in range(lo, hi):
                    if self.set_off[si + 1] - self.set_off[si] != k:
                        continue
                    ok = True
                    for mi in range(self.set_off[si] + 1, self.set_off[si + 1]):
                        if not mark[self.members[mi]]:
                            ok = False
                            break
                    if ok:
                        count += 1
        finally:
            PyMem_Free(mark)
            PyMem_Free(buf)
        return count


def _min_then_size(p):
    return (p[0], len(p))
