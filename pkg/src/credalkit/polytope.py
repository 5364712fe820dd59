"""Exact convex polytopes over the rationals.

Dual-representation polytopes (inequality form and generator form) with
the geometric predicates the credal machinery needs: membership,
containment with separating certificates, set equality, linear images
and preimages, and intersection with redundancy elimination.
Representation conversion is the double description method run on the
homogenization cone, with the combinatorial adjacency test; everything
is exact.

Only bounded sets are supported. Constructors either receive finitely
many points, or an inequality system that is expected to bound the set
(the credal layer always includes probability-simplex constraints);
asking for the generators of an unbounded system raises UnboundedError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from credalkit.exactq import (
    EQ,
    LE,
    ONE,
    ZERO,
    DimensionError,
    LpProblem,
    QMatrix,
    dot,
    lp_solve,
    qvec,
    solve_linear_system,
)


class UnboundedError(ValueError):
    """The inequality system describes an unbounded set."""


class NotSeparableError(ValueError):
    """Separation was requested for a point that belongs to the set."""


# ---------------------------------------------------------------------------
# canonical rows

def _canon_ineq(coeffs, rhs):
    """Primitive-integer form of a row  coeffs.x <= rhs.

    Returns None when the row is trivially true; all-zero coefficient
    rows with negative rhs normalize to the canonical empty marker
    (0,...,0) <= -1.
    """
    coeffs = qvec(coeffs)
    rhs = Fraction(rhs)
    den = rhs.denominator
    for v in coeffs:
        den = den * (v.denominator // gcd(den, v.denominator))
    ints = [int(v * den) for v in coeffs]
    r = int(rhs * den)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        if r >= 0:
            return None
        return (tuple(Fraction(0) for _ in coeffs), Fraction(-1))
    g = gcd(g, r)
    return (tuple(Fraction(v // g) for v in ints), Fraction(r // g))


def _canon_eq(coeffs, rhs):
    """Primitive-integer form of  coeffs.x = rhs, first nonzero positive.

    Returns None when trivially true; all-zero rows with nonzero rhs
    normalize to (0,...,0) = 1 (the canonical inconsistent marker).
    """
    coeffs = qvec(coeffs)
    rhs = Fraction(rhs)
    den = rhs.denominator
    for v in coeffs:
        den = den * (v.denominator // gcd(den, v.denominator))
    ints = [int(v * den) for v in coeffs]
    r = int(rhs * den)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        if r == 0:
            return None
        return (tuple(Fraction(0) for _ in coeffs), Fraction(1))
    g = gcd(g, r)
    sign = 1
    for v in ints:
        if v != 0:
            sign = 1 if v > 0 else -1
            break
    g *= sign
    return (tuple(Fraction(v // g) for v in ints), Fraction(r // g))


@dataclass(frozen=True)
class HRep:
    """Inequality description: ineqs rows a.x <= b, eqs rows e.x = f."""

    dim: int
    ineqs: tuple
    eqs: tuple

    @classmethod
    def make(cls, dim, ineqs=(), eqs=()):
        can_ineqs = []
        for coeffs, rhs in ineqs:
            if len(coeffs) != dim:
                raise DimensionError("inequality row has wrong dimension")
            row = _canon_ineq(coeffs, rhs)
            if row is not None:
                can_ineqs.append(row)
        can_eqs = []
        for coeffs, rhs in eqs:
            if len(coeffs) != dim:
                raise DimensionError("equality row has wrong dimension")
            row = _canon_eq(coeffs, rhs)
            if row is not None:
                can_eqs.append(row)
        return cls(dim, tuple(can_ineqs), tuple(can_eqs))


@dataclass(frozen=True)
class SeparationCertificate:
    """A functional strictly separating `point` from a set.

    Witnesses  functional.point - functional.v >= gap  for every member v
    of the separated set, with gap > 0.
    """

    functional: tuple
    gap: Fraction
    point: tuple


def verify_separation(cert: SeparationCertificate, p: "Polytope") -> bool:
    """Exact re-check of a certificate against the separated set."""
    if cert.gap <= 0:
        return False
    target = dot(cert.functional, cert.point) - cert.gap
    if p._points is not None:
        return all(dot(cert.functional, v) <= target for v in p._points)
    status, value, _ = _maximize(p, cert.functional)
    return status == "optimal" and value <= target


class Polytope:
    """A bounded convex rational polytope with lazily linked reps.

    At least one of the two representations is present. The generator
    form lists hull generators; after `dd_convert` (and for anything
    produced by representation conversion) the generators are exactly
    the extreme points and the inequality form has no redundant rows.
    Instances are immutable apart from idempotent caching, so concurrent
    readers are safe.
    """

    __slots__ = ("dim", "_hrep", "_points", "_empty", "_canonical")

    def __init__(self, dim, hrep=None, points=None, empty=None, canonical=False):
        if hrep is None and points is None:
            raise DimensionError("polytope needs an H-rep or generators")
        if dim < 1:
            raise DimensionError("dimension must be >= 1")
        self.dim = dim
        self._hrep = hrep
        self._points = None if points is None else tuple(points)
        if empty is None and points is not None:
            empty = len(self._points) == 0
        self._empty = empty
        self._canonical = canonical

    @classmethod
    def from_hrep(cls, dim, ineqs=(), eqs=()):
        return cls(dim, hrep=HRep.make(dim, ineqs, eqs))

    @classmethod
    def from_points(cls, points, dim=None):
        pts = sorted(set(qvec(p) for p in points))
        if dim is None:
            if not pts:
                raise DimensionError("cannot infer dimension of an empty set")
            dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionError("generator dimensions differ")
        return cls(dim, points=tuple(pts))

    @classmethod
    def simplex(cls, dim):
        """The probability simplex {x >= 0, sum x = 1} in dimension dim."""
        ineqs = []
        for j in range(dim):
            row = [ZERO] * dim
            row[j] = -ONE
            ineqs.append((row, ZERO))
        return cls.from_hrep(dim, ineqs, [([ONE] * dim, ONE)])

    # -- lazy representations ------------------------------------------------

    @property
    def hrep(self) -> HRep:
        if self._hrep is None:
            self._hrep = _hrep_from_points(self._points, self.dim)
        return self._hrep

    @property
    def points(self) -> tuple:
        """Hull generators (exactly the vertices once converted)."""
        if self._points is None:
            pts = _points_from_hrep(self._hrep)
            self._empty = len(pts) == 0
            self._points = pts
        return self._points

    def is_empty(self) -> bool:
        if self._empty is None:
            if self._points is not None:
                self._empty = len(self._points) == 0
            else:
                status, _, _ = _feasible_point(self)
                self._empty = status != "optimal"
        return self._empty

    def __repr__(self):
        reps = []
        if self._hrep is not None:
            reps.append(f"{len(self._hrep.ineqs)} ineqs/{len(self._hrep.eqs)} eqs")
        if self._points is not None:
            reps.append(f"{len(self._points)} points")
        return f"Polytope(dim={self.dim}, {', '.join(reps)})"


# ---------------------------------------------------------------------------
# LP plumbing over H-reps

def _lp_rows(hrep, drop_nonneg=True):
    """LP rows from an H-rep; unit nonnegativity rows become var bounds."""
    nonneg = [False] * hrep.dim
    rows = []
    for coeffs, rhs in hrep.ineqs:
        j = _unit_nonneg(coeffs, rhs, hrep.dim)
        if drop_nonneg and j is not None:
            nonneg[j] = True
            continue
        rows.append((coeffs, LE, rhs))
    for coeffs, rhs in hrep.eqs:
        rows.append((coeffs, EQ, rhs))
    return rows, tuple(nonneg)


def _unit_nonneg(coeffs, rhs, dim):
    """Index j when the row is exactly -x_j <= 0, else None."""
    if rhs != 0:
        return None
    found = None
    for j in range(dim):
        v = coeffs[j]
        if v == 0:
            continue
        if v > 0 or found is not None:
            return None
        found = j
    return found


def _maximize(p: Polytope, f):
    """Exact max of f over p via LP. Returns (status, value, argmax)."""
    rows, nonneg = _lp_rows(p.hrep)
    outcome = lp_solve(LpProblem("max", qvec(f), tuple(rows), nonneg))
    return outcome.status, outcome.value, outcome.solution


def _feasible_point(p: Polytope):
    """Feasibility of p's H-rep; returns (status, x, certificate)."""
    rows, nonneg = _lp_rows(p.hrep)
    zero = tuple([ZERO] * p.dim)
    outcome = lp_solve(LpProblem("min", zero, tuple(rows), nonneg))
    return outcome.status, outcome.solution, outcome.certificate


# ---------------------------------------------------------------------------
# double description on homogenization cones

def _primitive_int(vec) -> tuple:
    """Scale a rational vector to a primitive integer tuple."""
    den = 1
    for v in vec:
        f = Fraction(v)
        den = den * (f.denominator // gcd(den, f.denominator))
    ints = [int(Fraction(v) * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def _independent_rows(rows, dim):
    """Greedy maximal linearly independent subset, in input order."""
    basis = []  # (pivot_col, reduced_row)
    chosen = []
    for idx, row in enumerate(rows):
        vec = [Fraction(v) for v in row]
        for col, red in basis:
            f = vec[col]
            if f != 0:
                vec = [a - f * b for a, b in zip(vec, red)]
        piv = next((j for j, v in enumerate(vec) if v != 0), None)
        if piv is None:
            continue
        pv = vec[piv]
        vec = [v / pv for v in vec]
        basis.append((piv, vec))
        chosen.append(idx)
        if len(chosen) == dim:
            break
    return chosen


def _extreme_rays(rows, dim):
    """Extreme rays of the pointed cone {z : r.z <= 0 for r in rows}.

    `rows` are integer tuples. Raises UnboundedError when the cone has a
    lineality space (rank below dim). Returns primitive integer rays.
    """
    init = _independent_rows(rows, dim)
    if len(init) < dim:
        raise UnboundedError("cone is not pointed")
    m0 = QMatrix([rows[i] for i in init])
    inv = _inverse(m0)
    cols = list(zip(*inv.rows))
    rays = [_primitive_int([-v for v in col]) for col in cols]
    # zero set bit t <-> the t-th processed row; ray j is tight on every
    # initial row except the j-th
    full = (1 << dim) - 1
    zmask = [full & ~(1 << j) for j in range(dim)]

    order = list(init) + [i for i in range(len(rows)) if i not in set(init)]
    for t in range(dim, len(order)):
        row = rows[order[t]]
        bit = 1 << t
        vals = [sum(a * b for a, b in zip(row, ray)) for ray in rays]
        keep_rays = []
        keep_mask = []
        pos = []
        neg = []
        for i, s in enumerate(vals):
            if s > 0:
                pos.append(i)
            else:
                if s == 0:
                    keep_rays.append(rays[i])
                    keep_mask.append(zmask[i] | bit)
                else:
                    keep_rays.append(rays[i])
                    keep_mask.append(zmask[i])
                if s < 0:
                    neg.append(i)
        new_rays = []
        new_mask = []
        for ip in pos:
            for im in neg:
                zpn = zmask[ip] & zmask[im]
                adjacent = True
                for k in range(len(rays)):
                    if k != ip and k != im and (zmask[k] & zpn) == zpn:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sn = vals[ip], vals[im]
                combo = [
                    (-sn) * a + sp * b for a, b in zip(rays[ip], rays[im])
                ]
                new_rays.append(_primitive_int(combo))
                new_mask.append(zpn | bit)
        rays = keep_rays + new_rays
        zmask = keep_mask + new_mask
    return rays


def _inverse(m: QMatrix) -> QMatrix:
    n = m.nrows
    if m.ncols != n:
        raise DimensionError("inverse of a non-square matrix")
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(m.rows)]
    for col in range(n):
        sel = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if sel is None:
            raise DimensionError("singular matrix")
        aug[col], aug[sel] = aug[sel], aug[col]
        piv = aug[col][col]
        if piv != 1:
            aug[col] = [v / piv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
    return QMatrix([row[n:] for row in aug])


def _points_from_hrep(hrep: HRep) -> tuple:
    """Vertices of a bounded H-rep polytope, sorted; () when empty."""
    dim = hrep.dim
    if hrep.eqs:
        e_mat = QMatrix([row for row, _ in hrep.eqs])
        res = solve_linear_system(e_mat, [rhs for _, rhs in hrep.eqs])
        if res.status == "inconsistent":
            return ()
        x0 = res.solution
        basis = res.nullspace
    else:
        x0 = tuple([ZERO] * dim)
        basis = tuple(
            tuple(ONE if i == j else ZERO for j in range(dim))
            for i in range(dim)
        )
    d2 = len(basis)
    if d2 == 0:
        ok = all(dot(a, x0) <= b for a, b in hrep.ineqs)
        return (tuple(x0),) if ok else ()

    # reduced inequality system a'.u <= b' with x = x0 + u.basis
    red = []
    for a, b in hrep.ineqs:
        arow = tuple(dot(a, nb) for nb in basis)
        brhs = b - dot(a, x0)
        if all(v == 0 for v in arow):
            if brhs < 0:
                return ()
            continue
        red.append((arow, brhs))

    cone_rows = [_primitive_int(list(a) + [-b]) for a, b in red]
    cone_rows.append(tuple([0] * d2 + [-1]))
    try:
        rays = _extreme_rays(cone_rows, d2 + 1)
    except UnboundedError:
        # rank deficiency also occurs for some empty systems: decide by LP
        probe = Polytope(dim, hrep=hrep)
        status, _, _ = _feasible_point(probe)
        if status != "optimal":
            return ()
        raise
    verts = []
    for ray in rays:
        t = ray[d2]
        if t == 0:
            raise UnboundedError("H-representation describes an unbounded set")
        u = [Fraction(v, t) for v in ray[:d2]]
        x = list(x0)
        for uk, nb in zip(u, basis):
            if uk != 0:
                for j in range(dim):
                    x[j] += uk * nb[j]
        verts.append(tuple(x))
    return tuple(sorted(set(verts)))


def _hrep_from_points(points, dim) -> HRep:
    """Irredundant H-rep of the hull of finitely many points."""
    if not points:
        zero = tuple([ZERO] * dim)
        return HRep.make(dim, ineqs=[(zero, Fraction(-1))])
    pts = sorted(set(points))
    v0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in pts[1:]]

    # row basis of the difference space; each new row is reduced by the
    # earlier ones, then back-substitution makes pivot columns unit
    basis = []  # (pivot_col, row)
    for d in diffs:
        vec = list(d)
        for col, red in basis:
            f = vec[col]
            if f != 0:
                vec = [a - f * b for a, b in zip(vec, red)]
        piv = next((j for j, v in enumerate(vec) if v != 0), None)
        if piv is None:
            continue
        pv = vec[piv]
        vec = [v / pv for v in vec]
        basis.append((piv, vec))
    for i in range(len(basis) - 1, 0, -1):
        piv_i, row_i = basis[i]
        for k in range(i):
            piv_k, row_k = basis[k]
            f = row_k[piv_i]
            if f != 0:
                basis[k] = (piv_k, [a - f * b for a, b in zip(row_k, row_i)])

    r = len(basis)
    pivots = [piv for piv, _ in basis]
    rows_b = [row for _, row in basis]

    # affine-hull equalities: w.x = w.v0 for w spanning the complement
    if r < dim:
        null = solve_linear_system(
            QMatrix(rows_b) if rows_b else QMatrix([[ZERO] * dim]),
            [ZERO] * max(1, r),
        ).nullspace
        eqs = [(w, dot(w, v0)) for w in null]
    else:
        eqs = []

    if r == 0:
        return HRep.make(dim, ineqs=(), eqs=eqs)

    # coordinates: u_k = (x - v0)[pivots[k]]  (valid on the affine hull)
    upts = [tuple(v[pk] - v0[pk] for pk in pivots) for v in pts]

    gens = [_primitive_int(list(u) + [1]) for u in upts]
    facets = _extreme_rays(gens, r + 1)

    ineqs = []
    for y in facets:
        gu = y[:r]
        c = -Fraction(y[r])
        coeffs = [ZERO] * dim
        for k, pk in enumerate(pivots):
            coeffs[pk] = Fraction(gu[k])
        rhs = c + sum(
            (Fraction(gu[k]) * v0[pk] for k, pk in enumerate(pivots)), ZERO
        )
        ineqs.append((tuple(coeffs), rhs))
    ineqs.sort()
    return HRep.make(dim, ineqs=ineqs, eqs=sorted(eqs))


# ---------------------------------------------------------------------------
# public operations

def dd_convert(p: Polytope) -> Polytope:
    """Both representations, canonical: extreme points, irredundant rows."""
    if p._canonical:
        return p
    if p._points is None:
        pts = p.points  # double description output: exactly the vertices
    else:
        pts = _extreme_subset(p._points, p.dim)
    if not pts:
        return Polytope(
            p.dim, hrep=_hrep_from_points((), p.dim), points=(), canonical=True
        )
    hrep = _hrep_from_points(pts, p.dim)
    return Polytope(
        p.dim, hrep=hrep, points=tuple(sorted(pts)), canonical=True
    )


def _extreme_subset(points, dim):
    """Drop every generator that is a convex combination of the others."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return tuple(pts)
    keep = list(pts)
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        if _in_hull(keep[i], others):
            del keep[i]
        else:
            i += 1
    return tuple(keep)


def _in_hull(x, points) -> bool:
    if not points:
        return False
    status, _ = _hull_membership(x, points)
    return status == "optimal"


def _hull_membership(x, points):
    """Feasibility LP for x in conv(points).

    Returns (status, certificate); the certificate rows are ordered as
    [normalization row, coordinate rows...].
    """
    dim = len(x)
    npts = len(points)
    rows = [(tuple([ONE] * npts), EQ, ONE)]
    for j in range(dim):
        rows.append((tuple(pt[j] for pt in points), EQ, x[j]))
    problem = LpProblem(
        "min", tuple([ZERO] * npts), tuple(rows), (True,) * npts
    )
    outcome = lp_solve(problem)
    return outcome.status, outcome.certificate


def contains_point(p: Polytope, x) -> bool:
    """Exact membership via H-rep substitution or a hull-weight LP."""
    x = qvec(x)
    if len(x) != p.dim:
        raise DimensionError("point dimension differs from polytope")
    if p._hrep is not None:
        h = p._hrep
        return all(dot(a, x) <= b for a, b in h.ineqs) and all(
            dot(e, x) == f for e, f in h.eqs
        )
    return _in_hull(x, p.points)


def separate(p: Polytope, x) -> SeparationCertificate:
    """A functional g and gap e > 0 with g.x - g.v >= e for all v in p."""
    x = qvec(x)
    if p.is_empty():
        raise NotSeparableError("cannot separate from an empty set")
    if contains_point(p, x):
        raise NotSeparableError("point belongs to the set")
    if p._hrep is not None:
        h = p._hrep
        for a, b in h.ineqs:
            val = dot(a, x)
            if val > b:
                status, mx, _ = _maximize(p, a)
                assert status == "optimal"
                return SeparationCertificate(a, val - mx, x)
        for e, f in h.eqs:
            val = dot(e, x)
            if val != f:
                g = e if val > f else tuple(-c for c in e)
                gap = abs(val - f)
                return SeparationCertificate(g, gap, x)
        raise NotSeparableError("point satisfies every row")  # unreachable
    status, cert = _hull_membership(x, p.points)
    assert status == "infeasible"
    mu = cert[1:]
    g = tuple(-m for m in mu)
    gap = min(dot(g, x) - dot(g, v) for v in p.points)
    assert gap > 0
    return SeparationCertificate(g, gap, x)


def is_subset(p: Polytope, q: Polytope):
    """Whether p is contained in q; on failure also a certificate.

    Returns (holds, certificate). The certificate separates some point
    of p from q; it is None when q is empty (no functional can have a
    finite supremum over the empty set).
    """
    if p.dim != q.dim:
        raise DimensionError("dimension mismatch")
    if p.is_empty():
        return True, None
    if q.is_empty():
        return False, None
    if p._points is not None:
        for v in p.points:
            if not contains_point(q, v):
                return False, separate(q, v)
        return True, None
    # facet route: maximize every row of q over p
    h = q.hrep
    for a, b in h.ineqs:
        status, val, arg = _maximize(p, a)
        if status != "optimal":
            raise UnboundedError("containment query over an unbounded set")
        if val > b:
            return False, SeparationCertificate(a, val - _sup(q, a), arg)
    for e, f in h.eqs:
        for g, bound in ((e, f), (tuple(-c for c in e), -f)):
            status, val, arg = _maximize(p, g)
            if status != "optimal":
                raise UnboundedError("containment query over an unbounded set")
            if val > bound:
                return False, SeparationCertificate(g, val - _sup(q, g), arg)
    return True, None


def _sup(q: Polytope, f) -> Fraction:
    if q._points is not None:
        return max(dot(f, v) for v in q.points)
    status, val, _ = _maximize(q, f)
    assert status == "optimal"
    return val


def equals(p: Polytope, q: Polytope) -> bool:
    a, _ = is_subset(p, q)
    if not a:
        return False
    b, _ = is_subset(q, p)
    return b


def linear_image(m: QMatrix, p: Polytope) -> Polytope:
    """Image {M.x : x in p}: mapped generators reduced to extreme points."""
    if m.ncols != p.dim:
        raise DimensionError(f"map has {m.ncols} columns, polytope dim {p.dim}")
    pts = [m.apply(v) for v in p.points]
    return Polytope.from_points(_extreme_subset(pts, m.nrows), dim=m.nrows)


def linear_preimage(m: QMatrix, q: Polytope, ambient: Polytope) -> Polytope:
    """{x in ambient : M.x in q}, assembled purely on H-reps."""
    if m.ncols != ambient.dim:
        raise DimensionError("map columns differ from ambient dimension")
    if m.nrows != q.dim:
        raise DimensionError("map rows differ from target dimension")
    qh = q.hrep
    ah = ambient.hrep
    cols = list(zip(*m.rows))
    ineqs = list(ah.ineqs)
    eqs = list(ah.eqs)
    for a, b in qh.ineqs:
        ineqs.append((tuple(dot(a, col) for col in cols), b))
    for e, f in qh.eqs:
        eqs.append((tuple(dot(e, col) for col in cols), f))
    return Polytope.from_hrep(ambient.dim, ineqs, eqs)


def intersect(ps: Sequence[Polytope]) -> Polytope:
    """Intersection of H-rep polytopes with redundant rows removed."""
    if not ps:
        raise DimensionError("nothing to intersect")
    dim = ps[0].dim
    if any(p.dim != dim for p in ps):
        raise DimensionError("dimension mismatch in intersection")
    ineqs = []
    eqs = []
    seen_i = set()
    seen_e = set()
    for p in ps:
        h = p.hrep
        for row in h.ineqs:
            if row not in seen_i:
                seen_i.add(row)
                ineqs.append(row)
        for row in h.eqs:
            if row not in seen_e:
                seen_e.add(row)
                eqs.append(row)
    out = Polytope.from_hrep(dim, ineqs, eqs)
    if out.is_empty():
        return out
    keep = remove_redundant_ineqs(dim, out.hrep.ineqs, out.hrep.eqs)
    reduced = HRep(dim, tuple(out.hrep.ineqs[i] for i in keep), out.hrep.eqs)
    slim = Polytope(dim, hrep=reduced, empty=False)
    return slim


def remove_redundant_ineqs(dim, ineqs, eqs):
    """Indices of the irredundant inequality rows of a feasible system.

    A row is dropped iff maximizing it over the remaining rows stays
    within its bound; rows are probed in order, so the result is
    deterministic.
    """
    alive = list(range(len(ineqs)))
    for idx in range(len(ineqs)):
        rest = [i for i in alive if i != idx]
        if len(rest) == len(alive):
            continue
        trial = HRep(dim, tuple(ineqs[i] for i in rest), tuple(eqs))
        probe = Polytope(dim, hrep=trial)
        a, b = ineqs[idx]
        status, val, _ = _maximize(probe, a)
        if status == "optimal" and val <= b:
            alive = rest
    return alive
