"""Exact rational arithmetic, linear algebra, and linear programming.

Everything in this package funnels through here: rationals are
`fractions.Fraction` (always canonical: positive denominator, reduced),
vectors are tuples of Fractions, matrices are immutable row-major grids,
and `lp_solve` is an exact two-phase simplex that returns either an
optimal point, an unbounded flag, or a Farkas-style infeasibility
certificate that can be re-verified by direct substitution. There are
no tolerances anywhere; every comparison is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from credalkit import _backend

ZERO = Fraction(0)
ONE = Fraction(1)

LE = "<="
EQ = "="
GE = ">="
SENSES = (LE, EQ, GE)


class DimensionError(ValueError):
    """Structurally malformed input (mismatched dimensions, bad senses)."""


class RationalParseError(ValueError):
    """Text does not match the rational grammar."""


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse the text form: optional sign, integer, optional "/" positive int.

    Accepts "2", "-3/7", "+1/12". Rejects floats, exponents, and zero
    denominators.
    """
    if not isinstance(text, str):
        raise RationalParseError(f"expected a rational string, got {text!r}")
    match = _RATIONAL_RE.match(text.strip())
    if not match:
        raise RationalParseError(f"not a rational: {text!r}")
    if match.group(1) == "0":
        raise RationalParseError(f"zero denominator: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def qvec(values) -> tuple:
    """Coerce a sequence to a tuple of Fractions."""
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"dot: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


class QMatrix:
    """Immutable dense rational matrix, row-major."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows):
        rows = tuple(qvec(r) for r in rows)
        if not rows:
            raise DimensionError("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged matrix rows")
        self_set = super().__setattr__
        self_set("rows", rows)
        self_set("nrows", len(rows))
        self_set("ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def apply(self, vec: Sequence[Fraction]) -> tuple:
        if len(vec) != self.ncols:
            raise DimensionError(f"apply: {self.ncols} cols vs {len(vec)} vector")
        return tuple(dot(row, vec) for row in self.rows)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"matmul: {self.ncols} vs {other.nrows}")
        cols = list(zip(*other.rows))
        return QMatrix([[dot(row, col) for col in cols] for row in self.rows])

    def transpose(self) -> "QMatrix":
        return QMatrix(list(zip(*self.rows)))

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"QMatrix({self.nrows}x{self.ncols})"


# ---------------------------------------------------------------------------
# Gaussian elimination


@dataclass(frozen=True)
class LinearSolveResult:
    """Outcome of exact Gaussian elimination on A x = b.

    status is "unique", "underdetermined", or "inconsistent". When the
    system is consistent, `solution` is a particular solution and
    `nullspace` a basis of {x : A x = 0} (empty for unique solutions),
    so the full solution set is solution + span(nullspace).
    """

    status: str
    rank: int
    solution: Optional[tuple]
    nullspace: tuple


def solve_linear_system(a: QMatrix, b: Sequence[Fraction]) -> LinearSolveResult:
    """Exact solve of A x = b with rank reporting.

    Deterministic: reduced row echelon form with first-nonzero pivoting.
    """
    if a.nrows != len(b):
        raise DimensionError(f"solve: {a.nrows} rows vs {len(b)} rhs")
    b = qvec(b)
    aug = [list(row) + [rhs] for row, rhs in zip(a.rows, b)]
    n = a.ncols
    pivots = _rref(aug, n)
    rank = len(pivots)
    for row in aug[rank:]:
        if row[n] != 0:
            return LinearSolveResult("inconsistent", rank, None, ())
    solution = [ZERO] * n
    for r, col in enumerate(pivots):
        solution[col] = aug[r][n]
    pivot_set = set(pivots)
    free_cols = [j for j in range(n) if j not in pivot_set]
    nullspace = []
    for free in free_cols:
        vec = [ZERO] * n
        vec[free] = ONE
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][free]
        nullspace.append(tuple(vec))
    status = "unique" if not free_cols else "underdetermined"
    return LinearSolveResult(status, rank, tuple(solution), tuple(nullspace))


def _rref(aug, n):
    """In-place reduced row echelon form over columns 0..n-1.

    Returns the pivot column list; rows beyond the rank hold only the
    (possibly nonzero) augmented entries.
    """
    pivots = []
    r = 0
    for col in range(n):
        sel = -1
        for i in range(r, len(aug)):
            if aug[i][col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        piv = aug[r][col]
        if piv != 1:
            aug[r] = [v / piv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    return pivots


def matrix_rank(a: QMatrix) -> int:
    aug = [list(row) + [ZERO] for row in a.rows]
    return len(_rref(aug, a.ncols))


def nullspace_basis(a: QMatrix) -> tuple:
    """Basis of {x : A x = 0}."""
    return solve_linear_system(a, [ZERO] * a.nrows).nullspace


# ---------------------------------------------------------------------------
# Linear programming


@dataclass(frozen=True)
class LpProblem:
    """min/max objective.x subject to rows (coeffs, sense, rhs).

    `nonneg[j]` is True when x_j >= 0 and False when x_j is free.
    """

    direction: str
    objective: tuple
    rows: tuple  # of (coeffs, sense, rhs)
    nonneg: tuple

    def __post_init__(self):
        if self.direction not in ("min", "max"):
            raise DimensionError(f"direction must be min or max: {self.direction}")
        n = len(self.objective)
        if n == 0:
            raise DimensionError("objective is empty")
        if len(self.nonneg) != n:
            raise DimensionError("bounds length differs from objective")
        for coeffs, sense, _rhs in self.rows:
            if len(coeffs) != n:
                raise DimensionError(
                    f"row has {len(coeffs)} coefficients, expected {n}"
                )
            if sense not in SENSES:
                raise DimensionError(f"unknown sense {sense!r}")


def lp_problem(direction, objective, rows, nonneg=None) -> LpProblem:
    """Convenience constructor coercing entries to Fractions."""
    objective = qvec(objective)
    if nonneg is None:
        nonneg = (True,) * len(objective)
    rows = tuple(
        (qvec(coeffs), sense, Fraction(rhs)) for coeffs, sense, rhs in rows
    )
    return LpProblem(direction, objective, rows, tuple(bool(f) for f in nonneg))


@dataclass(frozen=True)
class LpOutcome:
    """Exact LP outcome.

    status "optimal": `value` and `solution` are exact and satisfy every
    constraint by direct substitution. status "infeasible": `certificate`
    holds one multiplier per row; multipliers are nonnegative on
    inequality rows (with >= rows read in negated, <= form), the combined
    row vanishes on free variables and is nonnegative on sign-constrained
    ones, and the combined rhs equals -1. status "unbounded": flags only.
    """

    status: str
    value: Optional[Fraction] = None
    solution: Optional[tuple] = None
    certificate: Optional[tuple] = None


def lp_solve(problem: LpProblem) -> LpOutcome:
    """Exact simplex with Bland's rule; deterministic for fixed input."""
    n = len(problem.objective)
    # Column expansion: sign-constrained variables map to one column,
    # free variables split into a positive and a negative part.
    col_var = []
    col_sign = []
    for j in range(n):
        col_var.append(j)
        col_sign.append(ONE)
        if not problem.nonneg[j]:
            col_var.append(j)
            col_sign.append(-ONE)
    ncols = len(col_var)

    arows = []
    brhs = []
    sigma = []
    slack_cols = 0
    for coeffs, sense, _rhs in problem.rows:
        if sense != EQ:
            slack_cols += 1
    width = ncols + slack_cols
    slack_at = ncols
    for coeffs, sense, rhs in problem.rows:
        row = [ZERO] * width
        for k in range(ncols):
            row[k] = coeffs[col_var[k]] * col_sign[k]
        if sense != EQ:
            row[slack_at] = ONE if sense == LE else -ONE
            slack_at += 1
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            sigma.append(-ONE)
        else:
            sigma.append(ONE)
        arows.append(row)
        brhs.append(rhs)

    sign = ONE if problem.direction == "min" else -ONE
    cvec = [ZERO] * width
    for k in range(ncols):
        cvec[k] = sign * problem.objective[col_var[k]] * col_sign[k]

    status, xcols, y = _backend.simplex_solve(
        len(arows), width, arows, brhs, cvec
    )

    if status == "unbounded":
        return LpOutcome("unbounded")

    if status == "infeasible":
        certificate = _farkas_from_dual(problem, sigma, y)
        outcome = LpOutcome("infeasible", certificate=certificate)
        _check_infeasible(problem, certificate)
        return outcome

    x = [ZERO] * n
    for k in range(ncols):
        x[col_var[k]] += col_sign[k] * xcols[k]
    solution = tuple(x)
    value = dot(problem.objective, solution)
    outcome = LpOutcome("optimal", value=value, solution=solution)
    _check_optimal(problem, outcome)
    return outcome


def _farkas_from_dual(problem, sigma, y):
    """Map the phase-1 dual onto per-row multipliers, <= normalized.

    Scaled so the combined rhs is exactly -1.
    """
    mult = []
    for (coeffs, sense, _rhs), sg, yi in zip(problem.rows, sigma, y):
        mu = -sg * yi
        mult.append(-mu if sense == GE else mu)
    gap = ZERO
    for (coeffs, sense, rhs), cm in zip(problem.rows, mult):
        gap += cm * (-rhs if sense == GE else rhs)
    if gap >= 0:
        raise RuntimeError("kernel returned an invalid infeasibility witness")
    scale = -ONE / gap
    return tuple(cm * scale for cm in mult)


def _check_infeasible(problem, certificate):
    n = len(problem.objective)
    combined = [ZERO] * n
    combined_rhs = ZERO
    for (coeffs, sense, rhs), cm in zip(problem.rows, certificate):
        if sense != EQ and cm < 0:
            raise RuntimeError("negative multiplier on an inequality row")
        flip = -ONE if sense == GE else ONE
        for j in range(n):
            combined[j] += cm * flip * coeffs[j]
        combined_rhs += cm * flip * rhs
    for j in range(n):
        if problem.nonneg[j]:
            if combined[j] < 0:
                raise RuntimeError("combined row negative on a nonneg variable")
        elif combined[j] != 0:
            raise RuntimeError("combined row nonzero on a free variable")
    if combined_rhs >= 0:
        raise RuntimeError("combined rhs not violated")


def _check_optimal(problem, outcome):
    x = outcome.solution
    for j, flag in enumerate(problem.nonneg):
        if flag and x[j] < 0:
            raise RuntimeError("negative value for a sign-constrained variable")
    for coeffs, sense, rhs in problem.rows:
        lhs = dot(coeffs, x)
        ok = lhs <= rhs if sense == LE else lhs >= rhs if sense == GE else lhs == rhs
        if not ok:
            raise RuntimeError("reported solution violates a constraint")
    if dot(problem.objective, x) != outcome.value:
        raise RuntimeError("reported value differs from objective at solution")
