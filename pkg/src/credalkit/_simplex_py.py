"""Pure-Python exact simplex kernel.

Reference implementation of the pivot loop. The compiled extension
(credalkit._simplex_ext) follows the identical pivot sequence; because
every comparison is exact rational arithmetic, the two kernels return
bit-identical results and are interchangeable.

The kernel works on the equality-form problem

    minimize c.x   subject to   a.x = b,  x >= 0,

with b >= 0 entrywise (the caller pre-scales rows). Phase 1 minimizes
the sum of one artificial variable per row; phase 2 optimizes c over the
feasible basis. Pivoting uses Bland's rule (lowest eligible index) in
both phases, which guarantees termination.
"""

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def simplex_solve(m, n, a, b, c):
    """Solve min c.x over {a.x = b, x >= 0}, b >= 0 entrywise.

    `a` is a list of m rows (each a sequence of n Fractions), `b` a list
    of m nonnegative Fractions, `c` a list of n Fractions.

    Returns (status, x, y):
      ("optimal", x, None)      x is a basic optimal point, length n
      ("infeasible", None, y)   y has y.a_j <= 0 for every column j and
                                y.b > 0 (an exact infeasibility witness)
      ("unbounded", None, None)
    """
    ntot = n + m
    rhs = ntot
    rows = []
    for i in range(m):
        row = [_ZERO] * (ntot + 1)
        ai = a[i]
        for j in range(n):
            row[j] = ai[j]
        row[n + i] = _ONE
        row[rhs] = b[i]
        rows.append(row)
    basis = list(range(n, ntot))

    # Phase-1 reduced costs for the all-artificial basis.
    cost = [_ZERO] * (ntot + 1)
    for j in range(n):
        s = _ZERO
        for i in range(m):
            s += rows[i][j]
        cost[j] = -s
    total = _ZERO
    for i in range(m):
        total += rows[i][rhs]
    cost[rhs] = -total

    # Artificial columns never re-enter: entering index stays below n.
    _bland(rows, cost, basis, rhs, n)
    if cost[rhs] < 0:
        # Positive phase-1 optimum: extract the dual witness from the
        # artificial columns (reduced cost of artificial i is 1 - y_i).
        y = [_ONE - cost[n + i] for i in range(m)]
        return ("infeasible", None, y)

    # Drive leftover artificials out of the basis (degenerate pivots);
    # rows with no structural entry are redundant and get dropped.
    drop = []
    for i in range(m):
        if basis[i] >= n:
            piv = -1
            ri = rows[i]
            for j in range(n):
                if ri[j] != 0:
                    piv = j
                    break
            if piv < 0:
                drop.append(i)
            else:
                _pivot(rows, cost, basis, i, piv, rhs)
    for i in reversed(drop):
        del rows[i]
        del basis[i]

    # Phase 2 on the structural columns only.
    rows = [row[:n] + [row[rhs]] for row in rows]
    rhs = n
    cost = [c[j] for j in range(n)] + [_ZERO]
    for i, ri in enumerate(rows):
        cb = c[basis[i]]
        if cb != 0:
            for j in range(n + 1):
                if ri[j]:
                    cost[j] -= cb * ri[j]

    if not _bland(rows, cost, basis, rhs, n):
        return ("unbounded", None, None)

    x = [_ZERO] * n
    for i, ri in enumerate(rows):
        x[basis[i]] = ri[rhs]
    return ("optimal", x, None)


def _bland(rows, cost, basis, rhs, n_enter):
    """Pivot until optimal (True) or unbounded (False)."""
    m = len(rows)
    while True:
        enter = -1
        for j in range(n_enter):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        leave = -1
        best = None
        for i in range(m):
            aij = rows[i][enter]
            if aij > 0:
                theta = rows[i][rhs] / aij
                if (
                    leave < 0
                    or theta < best
                    or (theta == best and basis[i] < basis[leave])
                ):
                    leave = i
                    best = theta
        if leave < 0:
            return False
        _pivot(rows, cost, basis, leave, enter, rhs)


def _pivot(rows, cost, basis, r, jc, rhs):
    row = rows[r]
    piv = row[jc]
    if piv != 1:
        for j in range(rhs + 1):
            if row[j]:
                row[j] /= piv
    support = [j for j in range(rhs + 1) if row[j]]
    for ri in rows:
        if ri is row:
            continue
        f = ri[jc]
        if f != 0:
            for j in support:
                ri[j] -= f * row[j]
    f = cost[jc]
    if f != 0:
        for j in support:
            cost[j] -= f * row[j]
    basis[r] = jc
