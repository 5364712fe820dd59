# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact simplex kernel.

Same contract and pivot sequence as credalkit._simplex_py, so results are
bit-identical. Rows are kept as integer vectors sharing one positive
denominator each, which removes the per-entry Fraction overhead of the
pure kernel (see benchmarks/bench_kernel.py for the comparison).
"""

from fractions import Fraction
from math import gcd


cdef object _row_reduce(list nums, object den, Py_ssize_t width):
    """Divide the content out of an integer row; returns the new denominator."""
    cdef Py_ssize_t j
    g = 0
    for j in range(width):
        v = nums[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return den
    if g == 0:
        return 1
    g = gcd(g, den)
    if g == 1:
        return den
    for j in range(width):
        v = nums[j]
        if v:
            nums[j] = v // g
    return den // g


cdef void _pivot(list rnum, list rden, list cnum, list cden_box, list basis,
                 Py_ssize_t r, Py_ssize_t jc, Py_ssize_t width):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t m = len(rnum)
    prow = <list> rnum[r]
    p = prow[jc]
    if p < 0:
        for j in range(width):
            v = prow[j]
            if v:
                prow[j] = -v
        p = -p
    # normalized pivot row keeps its numerators; denominator becomes the
    # (now positive) pivot numerator
    dr = _row_reduce(prow, p, width)
    rden[r] = dr
    for i in range(m):
        if i == r:
            continue
        row = <list> rnum[i]
        f = row[jc]
        if f == 0:
            continue
        di = rden[i]
        for j in range(width):
            pj = prow[j]
            if pj:
                row[j] = row[j] * dr - f * pj
            elif dr != 1:
                row[j] = row[j] * dr
        rden[i] = _row_reduce(row, di * dr, width)
    f = cnum[jc]
    if f != 0:
        di = cden_box[0]
        for j in range(width):
            pj = prow[j]
            if pj:
                cnum[j] = cnum[j] * dr - f * pj
            elif dr != 1:
                cnum[j] = cnum[j] * dr
        cden_box[0] = _row_reduce(cnum, di * dr, width)
    basis[r] = jc


cdef bint _bland(list rnum, list rden, list cnum, list cden_box, list basis,
                 Py_ssize_t rhs, Py_ssize_t n_enter):
    """Pivot until optimal (True) or unbounded (False)."""
    cdef Py_ssize_t m = len(rnum)
    cdef Py_ssize_t i, j, enter, leave
    cdef Py_ssize_t width = rhs + 1
    while True:
        enter = -1
        for j in range(n_enter):
            if cnum[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        leave = -1
        best_n = None
        best_d = None
        for i in range(m):
            row = <list> rnum[i]
            aij = row[enter]
            if aij > 0:
                # theta_i = rhs_i / aij; the row denominator cancels
                ti_n = row[rhs]
                if leave < 0:
                    leave = i
                    best_n = ti_n
                    best_d = aij
                else:
                    lhs = ti_n * best_d
                    rhs_cmp = best_n * aij
                    if lhs < rhs_cmp or (
                        lhs == rhs_cmp and basis[i] < basis[leave]
                    ):
                        leave = i
                        best_n = ti_n
                        best_d = aij
        if leave < 0:
            return False
        _pivot(rnum, rden, cnum, cden_box, basis, leave, enter, rhs + 1)


cdef object _lcm(object a, object b):
    return a * (b // gcd(a, b))


def simplex_solve(m, n, a, b, c):
    """Solve min c.x over {a.x = b, x >= 0}, b >= 0 entrywise.

    Identical contract to credalkit._simplex_py.simplex_solve.
    """
    cdef Py_ssize_t mm = m
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t ntot = nn + mm
    cdef Py_ssize_t rhs = ntot
    cdef Py_ssize_t width = ntot + 1
    cdef Py_ssize_t i, j

    rnum = []
    rden = []
    for i in range(mm):
        ai = a[i]
        fb = Fraction(b[i])
        den = fb.denominator
        for j in range(nn):
            den = _lcm(den, ai[j].denominator)
        nums = [0] * width
        for j in range(nn):
            f = ai[j]
            v = f.numerator
            if v:
                nums[j] = v * (den // f.denominator)
        nums[nn + i] = den
        nums[rhs] = fb.numerator * (den // fb.denominator)
        rnum.append(nums)
        rden.append(den)
    basis = list(range(nn, ntot))

    # Phase-1 reduced costs: -(column sums) on structural columns, zero on
    # artificial ones.
    cden = 1
    for i in range(mm):
        cden = _lcm(cden, rden[i])
    cnum = [0] * width
    for i in range(mm):
        row = <list> rnum[i]
        mult = cden // rden[i]
        for j in range(nn):
            v = row[j]
            if v:
                cnum[j] = cnum[j] - v * mult
        cnum[rhs] = cnum[rhs] - row[rhs] * mult
    cden_box = [cden]
    cden_box[0] = _row_reduce(cnum, cden, width)

    _bland(rnum, rden, cnum, cden_box, basis, rhs, nn)
    if cnum[rhs] < 0:
        cden = cden_box[0]
        y = [Fraction(cden - cnum[nn + i], cden) for i in range(mm)]
        return ("infeasible", None, y)

    drop = []
    for i in range(mm):
        if basis[i] >= nn:
            row = <list> rnum[i]
            piv = -1
            for j in range(nn):
                if row[j] != 0:
                    piv = j
                    break
            if piv < 0:
                drop.append(i)
            else:
                _pivot(rnum, rden, cnum, cden_box, basis, i, piv, width)
    for i in reversed(drop):
        del rnum[i]
        del rden[i]
        del basis[i]
    mm = len(rnum)

    # Phase 2 on structural columns only.
    for i in range(mm):
        row = <list> rnum[i]
        nums = row[:nn]
        nums.append(row[rhs])
        rden[i] = _row_reduce(nums, rden[i], nn + 1)
        rnum[i] = nums
    rhs = nn
    width = nn + 1

    cost = [Fraction(c[j]) for j in range(nn)]
    cost.append(Fraction(0))
    for i in range(mm):
        cb = c[basis[i]]
        if cb != 0:
            row = <list> rnum[i]
            di = rden[i]
            for j in range(width):
                v = row[j]
                if v:
                    cost[j] = cost[j] - cb * Fraction(v, di)
    cden = 1
    for j in range(width):
        cden = _lcm(cden, cost[j].denominator)
    cnum = [0] * width
    for j in range(width):
        f = cost[j]
        v = f.numerator
        if v:
            cnum[j] = v * (cden // f.denominator)
    cden_box = [cden]
    cden_box[0] = _row_reduce(cnum, cden, width)

    if not _bland(rnum, rden, cnum, cden_box, basis, rhs, nn):
        return ("unbounded", None, None)

    x = [Fraction(0)] * nn
    for i in range(mm):
        row = <list> rnum[i]
        x[basis[i]] = Fraction(row[rhs], rden[i])
    return ("optimal", x, None)
