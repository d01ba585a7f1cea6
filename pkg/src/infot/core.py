"""Domain types, input validation and the deterministic edge ordering.

Indices are 0-based throughout. Costs are stored as a read-only float64
array; weights are kept as exact :class:`fractions.Fraction` values together
with the least common denominator ``scale`` so that feasibility questions can
be answered in integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_SCALE_CAP = 10**12

WeightLike = Union[str, int, Fraction, float, tuple]


class ValidationError(ValueError):
    """Base class for rejected problem instances."""


class NonFinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonPositiveWeight(ValidationError):
    pass


class MassMismatch(ValidationError):
    pass


class ScaleOverflow(ValidationError):
    pass


class NotSquare(ValidationError):
    pass


class NegativeCost(ValidationError):
    pass


class TooLarge(ValidationError):
    """Raised by the brute-force oracles when an instance exceeds their guard."""


# alias used by the relaxed solver's error table
NonSquare = NotSquare


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """An ``n x m`` matrix of finite transport costs."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(
                f"cost matrix must be a non-empty 2-d array, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFinite("cost matrix contains NaN or infinite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, idx):
        return self.values[idx]

    def __eq__(self, other):
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.values, other.values))

    __hash__ = None


def as_cost_matrix(C) -> CostMatrix:
    if isinstance(C, CostMatrix):
        return C
    return CostMatrix(C)


@dataclass(frozen=True)
class Marginals:
    """Exact source/target weights with a common integer scale."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    scale: int

    @property
    def scaled_a(self) -> list[int]:
        return [int(x * self.scale) for x in self.a]

    @property
    def scaled_b(self) -> list[int]:
        return [int(x * self.scale) for x in self.b]

    @property
    def total(self) -> Fraction:
        return sum(self.a, Fraction(0))


@dataclass(frozen=True)
class SortedEdgeList:
    """All index pairs of a cost matrix, non-decreasing by cost."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, idx):
        return self.pairs[idx]

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class Permutation:
    """``sigma[i]`` is the column assigned to row ``i``."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"not a permutation: {self.sigma}")

    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.sigma)]

    def triples(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, Fraction(1)) for i, j in enumerate(self.sigma)]


@dataclass(frozen=True)
class Coupling:
    """Sparse transport plan with exact positive masses."""

    entries: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        for i, j, mass in self.entries:
            if mass <= 0:
                raise ValueError(f"non-positive mass {mass} at ({i}, {j})")

    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.entries]

    def triples(self) -> list[tuple[int, int, Fraction]]:
        return list(self.entries)

    def row_sums(self, n: int) -> list[Fraction]:
        sums = [Fraction(0)] * n
        for i, _, mass in self.entries:
            sums[i] += mass
        return sums

    def col_sums(self, m: int) -> list[Fraction]:
        sums = [Fraction(0)] * m
        for _, j, mass in self.entries:
            sums[j] += mass
        return sums

    def as_dense(self, shape: tuple[int, int]) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * shape[1] for _ in range(shape[0])]
        for i, j, mass in self.entries:
            dense[i][j] = mass
        return dense


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a bottleneck solve.

    ``iterations`` is the 1-based position of ``witness_edge`` in the sorted
    edge list for the sweep solvers, and the number of feasibility probes for
    :func:`infot.solvers.solve_bisect`.
    """

    value: float
    witness_edge: tuple[int, int]
    plan: Union[Permutation, Coupling]
    iterations: int


def parse_weight(w: WeightLike) -> Fraction:
    """Parse one weight into an exact rational.

    Strings are decimal or ``p/q`` text, tuples are ``(numerator,
    denominator)``; floats go through their shortest decimal repr so that
    ``0.3`` means ``3/10``.
    """
    if isinstance(w, bool):
        raise ValidationError("booleans are not weights")
    if isinstance(w, Fraction):
        return w
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, tuple):
        num, den = w
        return Fraction(int(num), int(den))
    if isinstance(w, float):
        if not math.isfinite(w):
            raise NonFinite(f"weight {w!r} is not finite")
        return Fraction(repr(w))
    if isinstance(w, str):
        text = w.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            if text.lower() in {"nan", "inf", "+inf", "-inf", "infinity", "-infinity"}:
                raise NonFinite(f"weight {w!r} is not finite") from exc
            raise ValidationError(f"cannot parse weight {w!r}") from exc
    raise ValidationError(f"unsupported weight type {type(w).__name__}")


def validate_problem(
    C,
    a: Sequence[WeightLike],
    b: Sequence[WeightLike],
    scale_cap: int = DEFAULT_SCALE_CAP,
) -> Marginals:
    """Check a problem instance and return its exact marginals."""
    C = as_cost_matrix(C)
    n, m = C.shape
    if len(a) != n:
        raise DimensionMismatch(f"len(a) = {len(a)} but the cost matrix has {n} rows")
    if len(b) != m:
        raise DimensionMismatch(f"len(b) = {len(b)} but the cost matrix has {m} columns")
    fa = tuple(parse_weight(x) for x in a)
    fb = tuple(parse_weight(x) for x in b)
    for name, vec in (("a", fa), ("b", fb)):
        for idx, x in enumerate(vec):
            if x <= 0:
                raise NonPositiveWeight(f"{name}[{idx}] = {x} is not positive")
    sa, sb = sum(fa, Fraction(0)), sum(fb, Fraction(0))
    if sa != sb:
        raise MassMismatch(f"total masses differ: sum(a) = {sa}, sum(b) = {sb}")
    scale = math.lcm(*(x.denominator for x in fa + fb))
    if scale > scale_cap:
        raise ScaleOverflow(
            f"common denominator {scale} exceeds the cap {scale_cap}; "
            "use coarser weights or raise scale_cap"
        )
    return Marginals(fa, fb, scale)


def uniform_marginals(n: int, m: int) -> Marginals:
    """Weights ``1/n`` on every row and ``1/m`` on every column."""
    return Marginals(
        tuple([Fraction(1, n)] * n), tuple([Fraction(1, m)] * m), math.lcm(n, m)
    )


def argsort_edges(C) -> SortedEdgeList:
    """Sort all index pairs by cost, ties in row-major order."""
    C = as_cost_matrix(C)
    n, m = C.shape
    # stable sort over the row-major flattening gives (value, row, col) order
    order = np.argsort(C.values.ravel(), kind="stable")
    rows, cols = np.divmod(order, m)
    return SortedEdgeList(tuple(zip(rows.tolist(), cols.tolist())))


def empty_support(shape: tuple[int, int]) -> np.ndarray:
    return np.zeros(shape, dtype=bool)


def support_from_pairs(shape: tuple[int, int], pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    """Boolean support mask with exactly ``pairs`` admitted."""
    mask = empty_support(shape)
    for i, j in pairs:
        mask[i, j] = True
    return mask


def format_mass(x: Fraction) -> str:
    """Render a rational as exact decimal text, or ``p/q`` when it does not terminate."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    assert scaled.denominator == 1
    q = abs(scaled.numerator)
    sign = "-" if x < 0 else ""
    if digits == 0:
        return f"{sign}{q}"
    whole, frac = divmod(q, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"
