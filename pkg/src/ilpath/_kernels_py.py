"""Pure-Python reference kernels.

These are the fallback implementations of the two hot loops; the compiled
module `ilpath._speedups` mirrors them exactly (same search order, same
budget accounting, same results).  Keep the two in sync.
"""

from __future__ import annotations

from collections import deque

REACHED = "reached"
EXHAUSTED = "exhausted"
BUDGET = "budget"


def automaton_reach(columns, bvec, bounds, max_states):
    """Breadth-first search over bounded residue states.

    States are pairs ``(used, r)`` with ``used`` a bit and ``r`` an m-vector
    with ``|r_j| <= bounds[j]``.  Symbol ``i < n`` adds ``columns[i]`` to
    ``r``; symbol ``n`` requires ``used == 0``, subtracts ``bvec`` and sets
    the bit.  The target is ``(1, 0)``.

    Returns ``(status, path, discovered)`` where ``path`` is the symbol
    sequence of a shortest target word (ties broken by symbol order), or
    None.  ``status`` is "reached", "exhausted" (no target within bounds)
    or "budget" (more than ``max_states`` states discovered).
    """
    n = len(columns)
    m = len(bvec)
    zero = (0,) * m
    start = (0, zero)
    target = (1, zero)
    parent: dict = {start: None}
    queue = deque([start])
    discovered = 1

    while queue:
        state = queue.popleft()
        used, r = state
        for sym in range(n + 1):
            if sym < n:
                col = columns[sym]
                nxt_used = used
            else:
                if used:
                    continue
                col = [-b for b in bvec]
                nxt_used = 1
            ok = True
            nr = []
            for j in range(m):
                v = r[j] + col[j]
                if v > bounds[j] or v < -bounds[j]:
                    ok = False
                    break
                nr.append(v)
            if not ok:
                continue
            succ = (nxt_used, tuple(nr))
            if succ in parent:
                continue
            parent[succ] = (state, sym)
            discovered += 1
            if succ == target:
                path = []
                cur = succ
                while parent[cur] is not None:
                    prev, sym_ = parent[cur]
                    path.append(sym_)
                    cur = prev
                path.reverse()
                return REACHED, path, discovered
            if discovered > max_states:
                return BUDGET, None, discovered
            queue.append(succ)

    return EXHAUSTED, None, discovered


def enumerate_box(rows, bvec, box, max_nodes, first_only):
    """Depth-first enumeration of ``[0, box]^n`` with per-constraint pruning.

    Returns ``(complete, nodes, solutions)``; ``solutions`` come out in
    lexicographic order.  ``complete`` is False when the node budget ran out
    (or, with ``first_only``, when the search stopped at the first hit).
    """
    n = len(rows[0])
    m = len(rows)

    # suffix[k][j] = (lowest, highest) contribution variables k..n-1 can add
    suffix = [[(0, 0)] * m]
    for k in range(n - 1, -1, -1):
        prev = suffix[0]
        cur = []
        for j in range(m):
            a = rows[j][k]
            lo, hi = prev[j]
            cur.append((lo + min(0, a * box), hi + max(0, a * box)))
        suffix.insert(0, cur)

    solutions = []
    x = [0] * n
    nodes = 0

    def admissible(k, partial):
        for j in range(m):
            lo, hi = suffix[k][j]
            if not partial[j] + lo <= bvec[j] <= partial[j] + hi:
                return False
        return True

    def descend(k, partial):
        nonlocal nodes
        for v in range(box + 1):
            nodes += 1
            if nodes > max_nodes:
                return False
            x[k] = v
            nxt = [partial[j] + rows[j][k] * v for j in range(m)]
            if not admissible(k + 1, nxt):
                continue
            if k == n - 1:
                solutions.append(tuple(x))
                if first_only:
                    return False
            else:
                if not descend(k + 1, nxt):
                    return False
        return True

    complete = descend(0, [0] * m)
    return complete, nodes, solutions
