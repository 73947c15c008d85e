# cython: language_level=3
"""Sparse integer elimination, compiled twin of _intelim_py.

Same algorithm and same deterministic pivot rule as the pure Python
kernel.  Matrix values stay Python ints (arbitrary precision); the
speedup comes from typed index bookkeeping in the inner loops.
"""

from heapq import heappop, heappush
from math import gcd

IMPLEMENTATION = "cython"


cdef tuple _key(list rows, list cols, Py_ssize_t i, Py_ssize_t j):
    v = (<dict > rows[i])[j]
    a = v if v > 0 else -v
    cdef Py_ssize_t fill = (len(< dict > rows[i]) - 1) * (len(< set > cols[j]) - 1)
    return (0 if a == 1 else 1, a, fill, i, j)


def sparse_elementary_divisors(entries, Py_ssize_t nrows, Py_ssize_t ncols):
    """Elementary divisors of the matrix given as (row, col, value) triples.

    Returns the ascending chain d1 | d2 | ... of positive divisors; its
    length is the rank of the matrix.
    """
    cdef list rows = [dict() for _ in range(nrows)]
    cdef list cols = [set() for _ in range(ncols)]
    cdef Py_ssize_t i, j, r, c, pi, pj, bad_row, bad_col
    cdef Py_ssize_t live = 0
    cdef dict row_i, row_dst
    cdef set col_j

    for i, j, v in entries:
        if v == 0:
            continue
        row_i = <dict > rows[i]
        w = row_i.get(j, 0) + v
        if w == 0:
            del row_i[j]
            (<set > cols[j]).discard(i)
        else:
            row_i[j] = w
            (<set > cols[j]).add(i)
    for i in range(nrows):
        live += len(<dict > rows[i])

    heap = []
    for i in range(nrows):
        for j in (<dict > rows[i]):
            heappush(heap, _key(rows, cols, i, j))

    diagonal = []
    while live:
        pi = -1
        pj = -1
        while heap:
            key = heappop(heap)
            i = key[3]
            j = key[4]
            if j not in (<dict > rows[i]):
                continue
            cur = _key(rows, cols, i, j)
            if cur == key:
                pi = i
                pj = j
                break
            heappush(heap, cur)
        if pi < 0:
            for i in range(nrows):
                for j in (<dict > rows[i]):
                    heappush(heap, _key(rows, cols, i, j))
            continue

        # shrink the pivot until it divides its whole row and column
        while True:
            v = (<dict > rows[pi])[pj]
            bad_row = -1
            for r in sorted(<set > cols[pj]):
                if r != pi and (<dict > rows[r])[pj] % v != 0:
                    bad_row = r
                    break
            if bad_row >= 0:
                u = (<dict > rows[bad_row])[pj]
                q = -(u // v)
                live = _axpy_row(rows, cols, heap, bad_row, pi, q, pj, live)
                (<dict > rows[bad_row])[pj] = u + q * v
                heappush(heap, _key(rows, cols, bad_row, pj))
                pi = bad_row
                continue
            bad_col = -1
            for c in sorted(<dict > rows[pi]):
                if c != pj and (<dict > rows[pi])[c] % v != 0:
                    bad_col = c
                    break
            if bad_col >= 0:
                u = (<dict > rows[pi])[bad_col]
                q = -(u // v)
                live = _axpy_col(rows, cols, heap, bad_col, pj, q, pi, live)
                (<dict > rows[pi])[bad_col] = u + q * v
                heappush(heap, _key(rows, cols, pi, bad_col))
                pj = bad_col
                continue
            break

        # clear the pivot column by row operations, then the row
        v = (<dict > rows[pi])[pj]
        for r in sorted(<set > cols[pj]):
            if r == pi:
                continue
            q = -((<dict > rows[r])[pj] // v)
            live = _axpy_row(rows, cols, heap, r, pi, q, pj, live)
            live = _drop(rows, cols, r, pj, live)
        for c in sorted(<dict > rows[pi]):
            if c == pj:
                continue
            q = -((<dict > rows[pi])[c] // v)
            live = _axpy_col(rows, cols, heap, c, pj, q, pi, live)
            live = _drop(rows, cols, pi, c, live)
        diagonal.append(v if v > 0 else -v)
        live = _drop(rows, cols, pi, pj, live)

    return normalize_divisor_chain(diagonal)


cdef Py_ssize_t _axpy_row(list rows, list cols, list heap, Py_ssize_t dst,
                          Py_ssize_t src, object q, Py_ssize_t skip_col,
                          Py_ssize_t live):
    cdef dict row_dst = <dict > rows[dst]
    cdef Py_ssize_t c
    for c, v in (<dict > rows[src]).items():
        if c == skip_col:
            continue
        w = row_dst.get(c, 0) + q * v
        if w == 0:
            if c in row_dst:
                del row_dst[c]
                (<set > cols[c]).discard(dst)
                live -= 1
        else:
            if c not in row_dst:
                (<set > cols[c]).add(dst)
                live += 1
            row_dst[c] = w
            heappush(heap, _key(rows, cols, dst, c))
    return live


cdef Py_ssize_t _axpy_col(list rows, list cols, list heap, Py_ssize_t dst,
                          Py_ssize_t src, object q, Py_ssize_t skip_row,
                          Py_ssize_t live):
    cdef Py_ssize_t r
    cdef dict row_r
    for r in list(<set > cols[src]):
        if r == skip_row:
            continue
        row_r = <dict > rows[r]
        w = row_r.get(dst, 0) + q * row_r[src]
        if w == 0:
            if dst in row_r:
                del row_r[dst]
                (<set > cols[dst]).discard(r)
                live -= 1
        else:
            if dst not in row_r:
                (<set > cols[dst]).add(r)
                live += 1
            row_r[dst] = w
            heappush(heap, _key(rows, cols, r, dst))
    return live


cdef Py_ssize_t _drop(list rows, list cols, Py_ssize_t i, Py_ssize_t j,
                      Py_ssize_t live):
    cdef dict row_i = <dict > rows[i]
    if j in row_i:
        del row_i[j]
        (<set > cols[j]).discard(i)
        live -= 1
    return live


def normalize_divisor_chain(values):
    """gcd/lcm closure turning a diagonal multiset into a divisor chain."""
    d = [v if v > 0 else -v for v in values if v]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
    for i in range(len(d) - 1):
        assert d[i + 1] % d[i] == 0
    return d
