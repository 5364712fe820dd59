"""Finite process spaces and the exact matrices acting on their simplices.

A process space fixes an ordered set of index labels (the coordinates of
the process) and an ordered set of outcome labels. Joint distributions
over n coordinates are vectors indexed row-major over outcome tuples,
first coordinate most significant; the same convention drives every
matrix built here and every serialized measure vector, so nothing can
silently misalign.

The matrix factories produce the three linear maps the consistency
machinery needs: the pushforward from the full path space onto a tuple
of coordinates, coordinate permutations, and marginalization of trailing
coordinates. All are 0/1 column-stochastic matrices, so they carry
probability vectors to probability vectors exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from credalkit.exactq import ONE, ZERO, DimensionError, QMatrix, qvec


@dataclass(frozen=True)
class ProcessSpace:
    """Ordered index labels (coordinates) and outcome labels."""

    indices: tuple
    outcomes: tuple

    def __post_init__(self):
        if len(self.outcomes) < 2:
            raise DimensionError("need at least two outcomes")
        if len(self.indices) < 1:
            raise DimensionError("need at least one index")
        if len(set(self.indices)) != len(self.indices):
            raise DimensionError("duplicate index labels")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise DimensionError("duplicate outcome labels")

    @property
    def n_indices(self) -> int:
        return len(self.indices)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def path_count(self) -> int:
        """Size of the full path space: one point per map indices -> outcomes."""
        return self.n_outcomes ** self.n_indices

    def index_pos(self, label) -> int:
        try:
            return self.indices.index(label)
        except ValueError:
            raise DimensionError(f"unknown index label {label!r}") from None

    def outcome_pos(self, label) -> int:
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise DimensionError(f"unknown outcome label {label!r}") from None

    def full_tuple(self) -> tuple:
        """The canonical tuple enumerating every index in order."""
        return self.indices


def make_space(indices, outcomes) -> ProcessSpace:
    return ProcessSpace(tuple(indices), tuple(outcomes))


def validate_index_tuple(space: ProcessSpace, tup) -> tuple:
    tup = tuple(tup)
    if not tup:
        raise DimensionError("index tuple is empty")
    if len(set(tup)) != len(tup):
        raise DimensionError(f"repeated index in tuple {tup!r}")
    for label in tup:
        space.index_pos(label)
    return tup


def canonical_tuple(space: ProcessSpace, labels) -> tuple:
    """The ascending-order tuple over the given set of index labels."""
    labels = set(labels)
    return tuple(t for t in space.indices if t in labels)


def all_canonical_tuples(space: ProcessSpace):
    """Every nonempty subset of the indices, ascending order, by size."""
    k = space.n_indices
    for n in range(1, k + 1):
        for pos in combinations(range(k), n):
            yield tuple(space.indices[i] for i in pos)


def tuple_covers(alpha, beta) -> bool:
    """Order relation: alpha majorizes beta iff beta's labels all occur."""
    return set(beta) <= set(alpha)


def product_index(space: ProcessSpace, outcomes_seq) -> int:
    """Row-major index of an outcome tuple, first coordinate most significant."""
    m = space.n_outcomes
    idx = 0
    for label in outcomes_seq:
        idx = idx * m + space.outcome_pos(label)
    return idx


def index_to_outcomes(space: ProcessSpace, idx: int, n: int) -> tuple:
    """Inverse of product_index for n-tuples."""
    m = space.n_outcomes
    if not 0 <= idx < m ** n:
        raise DimensionError(f"index {idx} out of range for {n} coordinates")
    out = []
    for _ in range(n):
        idx, r = divmod(idx, m)
        out.append(space.outcomes[r])
    return tuple(reversed(out))


def all_outcome_tuples(space: ProcessSpace, n: int):
    """All n-tuples of outcomes in row-major order."""
    return product(space.outcomes, repeat=n)


@lru_cache(maxsize=None)
def pushforward_matrix(space: ProcessSpace, alpha: tuple) -> QMatrix:
    """Matrix of the map sending a path law to the joint law of alpha.

    Shape m^|alpha| x m^k. Entry [x][w] is 1 iff the path w agrees with
    the outcome tuple x on every coordinate of alpha.
    """
    alpha = validate_index_tuple(space, alpha)
    positions = [space.index_pos(t) for t in alpha]
    nrows = space.n_outcomes ** len(alpha)
    rows = [[ZERO] * space.path_count for _ in range(nrows)]
    for col, path in enumerate(all_outcome_tuples(space, space.n_indices)):
        x = tuple(path[p] for p in positions)
        rows[product_index(space, x)][col] = ONE
    return QMatrix(rows)


@lru_cache(maxsize=None)
def permutation_matrix(space: ProcessSpace, n: int, perm: tuple) -> QMatrix:
    """Matrix of the coordinate shuffle y -> (y[perm[0]], ..., y[perm[n-1]]).

    A 0/1 permutation matrix on the m^n-dimensional simplex: the mass a
    law puts on y moves to the shuffled tuple.
    """
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"not a permutation of 0..{n - 1}: {perm!r}")
    d = space.n_outcomes ** n
    rows = [[ZERO] * d for _ in range(d)]
    for col, y in enumerate(all_outcome_tuples(space, n)):
        x = tuple(y[p] for p in perm)
        rows[product_index(space, x)][col] = ONE
    return QMatrix(rows)


@lru_cache(maxsize=None)
def marginal_matrix(space: ProcessSpace, n_total: int, n_keep: int) -> QMatrix:
    """Sum out the trailing n_total - n_keep coordinates (row-major order)."""
    if not 1 <= n_keep <= n_total:
        raise DimensionError(f"bad arities: keep {n_keep} of {n_total}")
    m = space.n_outcomes
    block = m ** (n_total - n_keep)
    nrows = m ** n_keep
    rows = [[ZERO] * (nrows * block) for _ in range(nrows)]
    for i in range(nrows):
        for r in range(block):
            rows[i][i * block + r] = ONE
    return QMatrix(rows)


def alignment_permutation(alpha: tuple, beta: tuple) -> tuple:
    """Positions rearranging alpha so beta's labels come first, in order.

    Requires every label of beta to occur in alpha; remaining positions
    follow in their original order. Shuffling alpha by the result yields
    a tuple whose first len(beta) entries equal beta.
    """
    if not tuple_covers(alpha, beta):
        raise DimensionError(f"{beta!r} is not part of {alpha!r}")
    head = [alpha.index(b) for b in beta]
    used = set(head)
    tail = [i for i in range(len(alpha)) if i not in used]
    return tuple(head + tail)


def permute_tuple(alpha: tuple, perm: tuple) -> tuple:
    return tuple(alpha[p] for p in perm)


@lru_cache(maxsize=None)
def restriction_matrix(space: ProcessSpace, alpha: tuple, beta: tuple) -> QMatrix:
    """Map the joint law of alpha's coordinates to the joint law of beta's.

    Defined whenever beta's labels are a subset of alpha's: shuffle
    beta's coordinates to the front, then sum out the rest.
    """
    perm = alignment_permutation(alpha, beta)
    shuffle = permutation_matrix(space, len(alpha), perm)
    margin = marginal_matrix(space, len(alpha), len(beta))
    return margin @ shuffle


# ---------------------------------------------------------------------------
# measure vectors

def validate_measure(vec, dim=None) -> tuple:
    """Check nonnegativity and exact normalization; returns the tuple."""
    vec = qvec(vec)
    if dim is not None and len(vec) != dim:
        raise DimensionError(f"measure has {len(vec)} entries, expected {dim}")
    if any(v < 0 for v in vec):
        raise DimensionError("measure has a negative entry")
    if sum(vec) != 1:
        raise DimensionError("measure entries do not sum to 1")
    return vec


def uniform_measure(dim: int) -> tuple:
    return tuple(Fraction(1, dim) for _ in range(dim))


def point_mass(dim: int, at: int) -> tuple:
    if not 0 <= at < dim:
        raise DimensionError(f"point mass index {at} out of range")
    return tuple(ONE if j == at else ZERO for j in range(dim))
