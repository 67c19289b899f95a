# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twins of the pure-Python kernels in `_kernels_py`.

Same search order, same budget accounting, same results.  The dispatcher
in `_kernels` verifies that every intermediate value fits in int64 before
calling in here; states are packed into a single int64 code (bit in the
lowest position, residues in mixed radix above it).
"""

from libc.stdint cimport int64_t, int32_t, int8_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

REACHED = "reached"
EXHAUSTED = "exhausted"
BUDGET = "budget"


def automaton_reach(columns, bvec, bounds, max_states):
    """See `_kernels_py.automaton_reach`."""
    cdef int n = len(columns)
    cdef int m = len(bvec)
    cdef int64_t budget = max_states

    cdef vector[int64_t] cols
    cdef vector[int64_t] bneg
    cdef vector[int64_t] bnd
    cdef vector[int64_t] radix
    cdef vector[int64_t] stride
    cdef int i, j, sym

    cols.resize(n * m)
    for i in range(n):
        col = columns[i]
        for j in range(m):
            cols[i * m + j] = col[j]
    bneg.resize(m)
    bnd.resize(m)
    radix.resize(m)
    stride.resize(m)
    cdef int64_t acc = 1
    for j in range(m):
        bneg[j] = -bvec[j]
        bnd[j] = bounds[j]
        radix[j] = 2 * bnd[j] + 1
        stride[j] = acc
        acc *= radix[j]

    # code = bit + 2 * sum_j (r_j + bnd_j) * stride_j
    cdef int64_t zero_part = 0
    for j in range(m):
        zero_part += bnd[j] * stride[j]
    cdef int64_t start = 2 * zero_part
    cdef int64_t target = 2 * zero_part + 1

    cdef vector[int64_t] codes
    cdef vector[int32_t] parent
    cdef vector[int8_t] psym
    cdef unordered_map[int64_t, int32_t] seen

    codes.push_back(start)
    parent.push_back(-1)
    psym.push_back(-1)
    seen[start] = 0
    cdef int64_t discovered = 1

    cdef vector[int64_t] r
    r.resize(m)
    cdef size_t head = 0
    cdef int64_t code, rest, value, ncode, part
    cdef int32_t cur, idx
    cdef int bit, nbit
    cdef bint ok

    while head < codes.size():
        cur = <int32_t> head
        code = codes[head]
        head += 1
        bit = <int> (code & 1)
        rest = code >> 1
        for j in range(m):
            r[j] = rest % radix[j] - bnd[j]
            rest //= radix[j]
        for sym in range(n + 1):
            if sym == n and bit:
                continue
            nbit = 1 if sym == n else bit
            ok = True
            part = 0
            for j in range(m):
                if sym == n:
                    value = r[j] + bneg[j]
                else:
                    value = r[j] + cols[sym * m + j]
                if value > bnd[j] or value < -bnd[j]:
                    ok = False
                    break
                part += (value + bnd[j]) * stride[j]
            if not ok:
                continue
            ncode = 2 * part + nbit
            if seen.count(ncode):
                continue
            idx = <int32_t> codes.size()
            seen[ncode] = idx
            codes.push_back(ncode)
            parent.push_back(cur)
            psym.push_back(<int8_t> sym)
            discovered += 1
            if ncode == target:
                path = []
                while idx != -1 and parent[idx] != -1:
                    path.append(psym[idx])
                    idx = parent[idx]
                path.reverse()
                return REACHED, path, discovered
            if discovered > budget:
                return BUDGET, None, discovered

    return EXHAUSTED, None, discovered


def enumerate_box(rows, bvec, box, max_nodes, first_only):
    """See `_kernels_py.enumerate_box`."""
    cdef int m = len(rows)
    cdef int n = len(rows[0])
    cdef int64_t limit = max_nodes
    cdef int64_t boxv = box
    cdef bint stop_first = bool(first_only)

    cdef vector[int64_t] a
    cdef vector[int64_t] b
    cdef int i, j, k
    a.resize(m * n)
    b.resize(m)
    for j in range(m):
        row = rows[j]
        for i in range(n):
            a[j * n + i] = row[i]
        b[j] = bvec[j]

    # suffix[k*m + j] bounds what variables k..n-1 can still contribute
    cdef vector[int64_t] lo
    cdef vector[int64_t] hi
    lo.resize((n + 1) * m)
    hi.resize((n + 1) * m)
    for j in range(m):
        lo[n * m + j] = 0
        hi[n * m + j] = 0
    for k in range(n - 1, -1, -1):
        for j in range(m):
            lo[k * m + j] = lo[(k + 1) * m + j]
            hi[k * m + j] = hi[(k + 1) * m + j]
            if a[j * n + k] > 0:
                hi[k * m + j] += a[j * n + k] * boxv
            elif a[j * n + k] < 0:
                lo[k * m + j] += a[j * n + k] * boxv

    cdef vector[int64_t] x
    cdef vector[int64_t] part  # part[k*m + j]: partial sums before level k
    x.resize(n)
    part.resize((n + 1) * m)
    for j in range(m):
        part[j] = 0

    solutions = []
    cdef int64_t nodes = 0
    cdef bint complete = True
    cdef bint admissible
    cdef int64_t v
    cdef int depth = 0

    x[0] = -1
    while depth >= 0:
        x[depth] += 1
        if x[depth] > boxv:
            depth -= 1
            continue
        nodes += 1
        if nodes > limit:
            complete = False
            break
        v = x[depth]
        admissible = True
        for j in range(m):
            part[(depth + 1) * m + j] = part[depth * m + j] + a[j * n + depth] * v
        for j in range(m):
            if part[(depth + 1) * m + j] + lo[(depth + 1) * m + j] > b[j]:
                admissible = False
                break
            if part[(depth + 1) * m + j] + hi[(depth + 1) * m + j] < b[j]:
                admissible = False
                break
        if not admissible:
            continue
        if depth == n - 1:
            solutions.append(tuple([x[i] for i in range(n)]))
            if stop_first:
                complete = False
                break
        else:
            depth += 1
            x[depth] = -1

    return complete, nodes, solutions
