"""The joint set over the full path space.

Given a consistent collection of credal sets, the largest set P of path
laws whose pushforwards land in every prescribed set is the
intersection of the pullback constraint systems, one per index subset.
This module builds P (as one polytope, or as enumerated cells when the
collection is finite), verifies that its pushforwards reproduce every
prescribed set exactly, and exposes the per-tuple preimage polytopes and
their containment structure as a checkable report. Its main diagnostic
value: when P comes out empty, the Farkas multipliers of a minimal
infeasible core are mapped back to the offending tuples.

Everything over the path simplex stays in inequality form: membership,
containment, and verification all run through exact LPs; vertices of P
are only ever enumerated on explicit request (pushforwards).

The path space is finite, so every law on it is countably additive;
restricting P to countably additive laws is the identity and needs no
separate construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Optional

from credalkit import polytope as pt
from credalkit import spaces as sp
from credalkit.credal import (
    FINITE,
    POLYTOPE,
    CredalCollection,
    CredalSet,
    _pushforward_set,
    _separation_from,
    _tuple_sort_key,
)
from credalkit.exactq import (
    EQ,
    LE,
    ZERO,
    DimensionError,
    LpProblem,
    dot,
    lp_solve,
    qvec,
)

SIMPLEX_ORIGIN = "simplex"

DEFAULT_CELL_CAP = 10000


class EmptyJointError(ValueError):
    """An operation that needs a nonempty joint set got an empty one."""


class ResourceCapError(RuntimeError):
    """Finite-mode selection enumeration exceeded the configured cap."""

    def __init__(self, count, cap):
        super().__init__(
            f"selection enumeration needs {count} cells, over the cap of {cap}"
        )
        self.count = count
        self.cap = cap


class ModeError(ValueError):
    """Operation not defined for this credal-set mode."""


@dataclass(frozen=True)
class InfeasibilityDiagnosis:
    """Why the joint set is empty.

    `rows` is the minimal infeasible core (coeffs, sense, rhs, origin),
    `multipliers` the exact Farkas certificate over those rows, and
    `offending_tuples` the credal-set origins carrying nonzero weight.
    """

    rows: tuple
    multipliers: tuple
    offending_tuples: tuple


@dataclass(frozen=True)
class JointCell:
    """One selection of members in finite mode and its preimage."""

    selection: tuple  # of (index_tuple, member)
    body: pt.Polytope
    point: tuple  # one exact measure inside the cell


@dataclass(frozen=True)
class SelectionDiagnosis:
    """Infeasibility diagnosis for one finite-mode selection."""

    selection: tuple
    diagnosis: InfeasibilityDiagnosis


@dataclass(frozen=True)
class JointModel:
    space: sp.ProcessSpace
    mode: str
    body: Optional[pt.Polytope]  # polytope mode
    ineq_origins: tuple
    eq_origins: tuple
    cells: tuple  # finite mode
    diagnosis: Optional[object] = None

    def is_empty(self) -> bool:
        if self.mode == POLYTOPE:
            return self.body.is_empty()
        return not self.cells

    @property
    def dim(self) -> int:
        return self.space.path_count


def representative_tuples(coll: CredalCollection) -> tuple:
    """One supplied tuple per index subset, smallest in canonical order."""
    best = {}
    key = _tuple_sort_key(coll.space)
    for tup in coll.sets:
        s = frozenset(tup)
        if s not in best or key(tup) < key(best[s]):
            best[s] = tup
    missing = [
        t for t in sp.all_canonical_tuples(coll.space) if frozenset(t) not in best
    ]
    if missing:
        raise DimensionError(
            f"collection does not cover every index subset; missing {missing[0]!r}"
        )
    return tuple(sorted(best.values(), key=key))


def preimage_set(coll: CredalCollection, alpha) -> pt.Polytope:
    """All path laws whose pushforward onto alpha lands in V_alpha."""
    alpha = sp.validate_index_tuple(coll.space, alpha)
    return _preimage_of(coll.credal_set(alpha))


def _preimage_of(cset: CredalSet) -> pt.Polytope:
    if cset.mode != POLYTOPE:
        raise ModeError(
            "preimage polytopes need polytope mode; finite collections "
            "use cell construction"
        )
    matrix = sp.pushforward_matrix(cset.space, cset.index_tuple)
    ambient = pt.Polytope.simplex(cset.space.path_count)
    target = pt.dd_convert(cset.body)
    return pt.linear_preimage(matrix, target, ambient)


def _pullback_rows(space, alpha, hrep):
    """Pull an H-rep on the alpha-space back through the pushforward map.

    Rows implied by the path simplex alone are filtered out: an
    inequality g.p <= c holds on the whole simplex iff max_j g_j <= c,
    and a constant-coefficient equality reduces to the normalization row.
    """
    matrix = sp.pushforward_matrix(space, alpha)
    cols = list(zip(*matrix.rows))
    ineqs = []
    eqs = []
    for a, b in hrep.ineqs:
        row = tuple(dot(a, col) for col in cols)
        if max(row) <= b:
            continue
        ineqs.append((row, b))
    for e, f in hrep.eqs:
        row = tuple(dot(e, col) for col in cols)
        if len(set(row)) == 1:
            continue  # constant on the simplex: either trivial or caught by LP
        eqs.append((row, f))
    return ineqs, eqs


def build_joint(
    coll: CredalCollection, cell_cap: int = DEFAULT_CELL_CAP
) -> JointModel:
    """Intersect the per-tuple preimages over the path simplex.

    One representative tuple per index subset enters the system (under
    permutation consistency the others are redundant); each constraint
    row keeps the tuple it came from, so an empty intersection is
    reported with the offending tuples named by its Farkas certificate.
    """
    reps = representative_tuples(coll)
    modes = {coll.sets[t].mode for t in reps}
    if modes == {FINITE}:
        return _build_cells(coll, reps, cell_cap)
    if FINITE in modes:
        raise ModeError(
            "joint construction needs all sets in one mode; "
            "mix of finite and polytope sets is not supported"
        )
    return _build_polytope(coll, reps)


def _ambient_rows(dim):
    simplex = pt.Polytope.simplex(dim).hrep
    ineqs = [(row, SIMPLEX_ORIGIN) for row in simplex.ineqs]
    eqs = [(row, SIMPLEX_ORIGIN) for row in simplex.eqs]
    return ineqs, eqs


def _assemble(coll, reps, selections=None):
    """Constraint system with provenance.

    Returns (ineq rows, eq rows) as ((coeffs, rhs), origin) lists;
    `selections` optionally maps a tuple to a single member measure whose
    point-preimage replaces the whole set.
    """
    dim = coll.space.path_count
    ineqs, eqs = _ambient_rows(dim)
    seen_i = {row for row, _ in ineqs}
    seen_e = {row for row, _ in eqs}
    for alpha in reps:
        cset = coll.sets[alpha]
        if selections is not None and alpha in selections:
            member = selections[alpha]
            target = pt.HRep.make(
                len(member),
                eqs=[(sp.point_mass(len(member), j), member[j])
                     for j in range(len(member))],
            )
        else:
            target = pt.dd_convert(cset.body).hrep
        add_i, add_e = _pullback_rows(coll.space, alpha, target)
        for row in add_i:
            row = pt._canon_ineq(*row)
            if row is not None and row not in seen_i:
                seen_i.add(row)
                ineqs.append((row, alpha))
        for row in add_e:
            row = pt._canon_eq(*row)
            if row is not None and row not in seen_e:
                seen_e.add(row)
                eqs.append((row, alpha))
    return ineqs, eqs


def _system_polytope(dim, ineqs, eqs):
    hrep = pt.HRep(
        dim,
        tuple(row for row, _ in ineqs),
        tuple(row for row, _ in eqs),
    )
    return pt.Polytope(dim, hrep=hrep)


def _build_polytope(coll, reps) -> JointModel:
    dim = coll.space.path_count
    ineqs, eqs = _assemble(coll, reps)
    body = _system_polytope(dim, ineqs, eqs)
    status, _, _ = pt._feasible_point(body)
    if status != "optimal":
        diagnosis = _diagnose(dim, ineqs, eqs)
        return JointModel(
            coll.space,
            POLYTOPE,
            pt.Polytope(dim, hrep=body.hrep, empty=True),
            tuple(origin for _, origin in ineqs),
            tuple(origin for _, origin in eqs),
            (),
            diagnosis,
        )
    keep = pt.remove_redundant_ineqs(
        dim, body.hrep.ineqs, body.hrep.eqs
    )
    ineqs = [ineqs[i] for i in keep]
    body = _system_polytope(dim, ineqs, eqs)
    body._empty = False
    return JointModel(
        coll.space,
        POLYTOPE,
        body,
        tuple(origin for _, origin in ineqs),
        tuple(origin for _, origin in eqs),
        (),
        None,
    )


def _diagnose(dim, ineqs, eqs) -> InfeasibilityDiagnosis:
    """Minimal infeasible core plus its Farkas certificate.

    Simplex rows always stay in the system; credal-origin rows are
    dropped one by one (deletion filter) whenever the rest remains
    infeasible, so every surviving row is necessary.
    """
    rows = [(coeffs, rhs, LE, origin) for (coeffs, rhs), origin in ineqs]
    rows += [(coeffs, rhs, EQ, origin) for (coeffs, rhs), origin in eqs]

    def infeasible(active):
        lp_rows = tuple(
            (coeffs, sense, rhs) for coeffs, rhs, sense, _ in active
        )
        outcome = lp_solve(
            LpProblem("min", tuple([ZERO] * dim), lp_rows, (False,) * dim)
        )
        return outcome.status == "infeasible", outcome.certificate

    active = list(rows)
    for row in rows:
        if row[3] == SIMPLEX_ORIGIN or row not in active:
            continue
        trial = [r for r in active if r is not row]
        bad, _ = infeasible(trial)
        if bad:
            active = trial
    bad, certificate = infeasible(active)
    assert bad and certificate is not None
    offending = []
    for row, mult in zip(active, certificate):
        origin = row[3]
        if mult != 0 and origin != SIMPLEX_ORIGIN and origin not in offending:
            offending.append(origin)
    return InfeasibilityDiagnosis(
        tuple((coeffs, sense, rhs, origin) for coeffs, rhs, sense, origin in active),
        tuple(certificate),
        tuple(offending),
    )


def _build_cells(coll, reps, cell_cap) -> JointModel:
    sizes = [len(coll.sets[t].members()) for t in reps]
    count = 1
    for s in sizes:
        count *= s
    if count > cell_cap:
        raise ResourceCapError(count, cell_cap)
    dim = coll.space.path_count
    cells = []
    empty_selections = []
    for choice in product(*(coll.sets[t].members() for t in reps)):
        selections = dict(zip(reps, choice))
        ineqs, eqs = _assemble(coll, reps, selections=selections)
        body = _system_polytope(dim, ineqs, eqs)
        status, point, _ = pt._feasible_point(body)
        if status == "optimal":
            body._empty = False
            cells.append(
                JointCell(tuple(selections.items()), body, tuple(point))
            )
        else:
            empty_selections.append((tuple(selections.items()), ineqs, eqs))
    diagnosis = None
    if not cells:
        # empty joint: certify the first few dead selections
        diagnosis = tuple(
            SelectionDiagnosis(selection, _diagnose(dim, ineqs, eqs))
            for selection, ineqs, eqs in empty_selections[:20]
        )
    return JointModel(
        coll.space, FINITE, None, (), (), tuple(cells), diagnosis
    )


def pushforward_joint(joint: JointModel, alpha) -> CredalSet:
    """The joint set's image on a tuple of coordinates.

    Polytope mode enumerates the vertices of the joint set (exponential
    in the worst case; fine at desk scale). Finite mode maps each cell's
    point.
    """
    alpha = sp.validate_index_tuple(joint.space, alpha)
    if joint.is_empty():
        raise EmptyJointError("empty joint set has no pushforwards")
    matrix = sp.pushforward_matrix(joint.space, alpha)
    if joint.mode == POLYTOPE:
        image = pt.linear_image(matrix, joint.body)
        return CredalSet(joint.space, alpha, POLYTOPE, image)
    points = sorted(set(matrix.apply(cell.point) for cell in joint.cells))
    return CredalSet(joint.space, alpha, FINITE, tuple(points))


# ---------------------------------------------------------------------------
# representation verification

@dataclass(frozen=True)
class RepresentationRecord:
    alpha: tuple
    direction: str  # "prescribed within pushforward" | "pushforward within prescribed"
    status: str
    witness: Optional[tuple] = None
    certificate: Optional[pt.SeparationCertificate] = None
    lifted_functional: Optional[tuple] = None
    note: str = ""


@dataclass(frozen=True)
class RepresentationReport:
    records: tuple

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.records)

    def failures(self) -> tuple:
        return tuple(r for r in self.records if r.status != "pass")


def _joint_lp_rows(joint):
    rows, nonneg = pt._lp_rows(joint.body.hrep)
    return list(rows), nonneg


def _max_over_joint(joint, objective):
    rows, nonneg = _joint_lp_rows(joint)
    return lp_solve(LpProblem("max", qvec(objective), tuple(rows), nonneg))


def _member_reachable(joint, matrix, v):
    """Feasibility of {p in P : pushforward(p) = v} with certificate."""
    rows, nonneg = _joint_lp_rows(joint)
    n_base = len(rows)
    for mrow, target in zip(matrix.rows, v):
        rows.append((mrow, EQ, target))
    outcome = lp_solve(
        LpProblem(
            "min", tuple([ZERO] * joint.dim), tuple(rows), nonneg
        )
    )
    if outcome.status == "optimal":
        return True, None
    # lift the Farkas multipliers on the pushforward rows into a
    # separating functional on the image space
    mu = outcome.certificate[n_base:]
    g = tuple(-m for m in mu)
    return False, g


def verify_representation(
    coll: CredalCollection, joint: Optional[JointModel] = None
) -> RepresentationReport:
    """Check, tuple by tuple, that the joint set's pushforward equals the
    prescribed credal set; exact, certificate-producing in both
    directions.

    The prescribed-within-pushforward direction solves one feasibility
    LP per generator of the prescribed set; the reverse direction
    maximizes every facet functional of the prescribed set, composed
    with the pushforward map, over the joint polytope. Neither
    direction enumerates vertices of the joint set.
    """
    if joint is None:
        joint = build_joint(coll)
    representative_tuples(coll)  # enforce coverage
    records = []
    if joint.is_empty():
        return RepresentationReport(
            (
                RepresentationRecord(
                    (),
                    "joint set nonempty",
                    "fail",
                    note="joint set is empty; see the infeasibility diagnosis",
                ),
            )
        )
    # every supplied tuple is checked, permuted variants included
    for alpha in coll.supplied_tuples():
        cset = coll.sets[alpha]
        if joint.mode == FINITE:
            records.extend(_verify_tuple_finite(joint, alpha, cset))
        else:
            records.extend(_verify_tuple_polytope(joint, alpha, cset))
    return RepresentationReport(tuple(records))


def _verify_tuple_polytope(joint, alpha, cset):
    space = joint.space
    matrix = sp.pushforward_matrix(space, alpha)
    cols = list(zip(*matrix.rows))
    target = pt.dd_convert(cset.body)
    records = []

    # prescribed set within the pushforward of the joint set
    failure = None
    for v in target.points:
        ok, g = _member_reachable(joint, matrix, v)
        if not ok:
            lifted = tuple(dot(g, col) for col in cols)
            sup = _max_over_joint(joint, lifted)
            assert sup.status == "optimal"
            gap = dot(g, v) - sup.value
            failure = RepresentationRecord(
                alpha,
                "prescribed within pushforward",
                "fail",
                witness=v,
                certificate=pt.SeparationCertificate(g, gap, v),
                lifted_functional=lifted,
            )
            break
    records.append(
        failure
        or RepresentationRecord(alpha, "prescribed within pushforward", "pass")
    )

    # pushforward of the joint set within the prescribed set
    failure = None
    hrep = target.hrep
    probes = [(a, b) for a, b in hrep.ineqs]
    for e, f in hrep.eqs:
        probes.append((e, f))
        probes.append((tuple(-c for c in e), -f))
    for g, bound in probes:
        lifted = tuple(dot(g, col) for col in cols)
        outcome = _max_over_joint(joint, lifted)
        assert outcome.status == "optimal"
        if outcome.value > bound:
            image_point = matrix.apply(outcome.solution)
            sup = max(dot(g, w) for w in target.points)
            failure = RepresentationRecord(
                alpha,
                "pushforward within prescribed",
                "fail",
                witness=image_point,
                certificate=pt.SeparationCertificate(
                    g, dot(g, image_point) - sup, image_point
                ),
                lifted_functional=lifted,
            )
            break
    records.append(
        failure
        or RepresentationRecord(alpha, "pushforward within prescribed", "pass")
    )
    return records


def _verify_tuple_finite(joint, alpha, cset):
    space = joint.space
    matrix = sp.pushforward_matrix(space, alpha)
    members = set(cset.members())
    images = sorted(set(matrix.apply(cell.point) for cell in joint.cells))
    records = []

    missing = next((v for v in sorted(members) if v not in set(images)), None)
    records.append(
        RepresentationRecord(
            alpha,
            "prescribed within pushforward",
            "pass" if missing is None else "fail",
            witness=missing,
        )
    )
    stray = next((v for v in images if v not in members), None)
    cert = None
    if stray is not None:
        cert = _separation_from(stray, cset)
    records.append(
        RepresentationRecord(
            alpha,
            "pushforward within prescribed",
            "pass" if stray is None else "fail",
            witness=stray,
            certificate=cert if isinstance(cert, pt.SeparationCertificate) else None,
            note="" if stray is None else "image point outside the prescribed set",
        )
    )
    return records


# ---------------------------------------------------------------------------
# structural property suite (preimage containments)

@dataclass(frozen=True)
class PropertyRecord:
    name: str
    alpha: tuple
    beta: tuple
    status: str
    note: str = ""


@dataclass(frozen=True)
class PropertyReport:
    records: tuple

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.records)


def property_suite(
    coll: CredalCollection,
    joint: Optional[JointModel] = None,
    max_permutations: int = 6,
) -> PropertyReport:
    """Structural facts that hold for consistent polytope collections.

    - permuting a tuple leaves its preimage polytope unchanged;
    - a tuple covering another has a smaller (contained) preimage;
    - every prescribed set is reachable (the inclusion half of the
      representation check);
    - the preimage of the full tuple already equals the joint set.
    """
    if joint is None:
        joint = build_joint(coll)
    if joint.mode != POLYTOPE:
        raise ModeError("the property suite runs on polytope collections")
    reps = representative_tuples(coll)
    records = []

    pre = {alpha: preimage_set(coll, alpha) for alpha in reps}

    for alpha in reps:
        if len(alpha) < 2:
            continue
        count = 0
        for perm in permutations(range(len(alpha))):
            if perm == tuple(range(len(alpha))):
                continue
            if count >= max_permutations:
                break
            count += 1
            shuffled = sp.permute_tuple(alpha, perm)
            try:
                shuffled_set = coll.credal_set(shuffled)
            except KeyError:
                matrix = sp.permutation_matrix(coll.space, len(alpha), perm)
                shuffled_set = _pushforward_set(coll.sets[alpha], matrix, shuffled)
            same = pt.equals(pre[alpha], _preimage_of(shuffled_set))
            records.append(
                PropertyRecord(
                    "permutation-invariant preimage",
                    alpha,
                    shuffled,
                    "pass" if same else "fail",
                )
            )

    for alpha in reps:
        for beta in reps:
            if alpha == beta or not sp.tuple_covers(alpha, beta):
                continue
            holds, _ = pt.is_subset(pre[alpha], pre[beta])
            strict = holds and not pt.is_subset(pre[beta], pre[alpha])[0]
            records.append(
                PropertyRecord(
                    "covering tuple has smaller preimage",
                    alpha,
                    beta,
                    "pass" if holds else "fail",
                    note="strict" if strict else "",
                )
            )

    rep_half = verify_representation(coll, joint)
    for r in rep_half.records:
        if r.direction == "prescribed within pushforward":
            records.append(
                PropertyRecord(
                    "prescribed set reachable", r.alpha, (), r.status
                )
            )

    gamma = joint.space.full_tuple()
    rep_gamma = next(t for t in reps if set(t) == set(gamma))
    shortcut = pt.equals(joint.body, pre[rep_gamma])
    records.append(
        PropertyRecord(
            "full-tuple preimage equals joint set",
            rep_gamma,
            (),
            "pass" if shortcut else "fail",
        )
    )
    return PropertyReport(tuple(records))
