"""Finite cost spaces, scalar modes, paths and brute-force oracles.

A cost space is a finite set of ``n`` labelled points together with an
``n x n`` matrix where ``cost[y][x]`` is the cost of the step ``y -> x``.
That orientation is used everywhere in the package: the Lax-Oleinik
operator reads ``T(u)(x) = min_y u(y) + cost[y][x]``, and a path
``(x_{-k}, ..., x_{-1}, x_0)`` is walked left to right.

Two arithmetic modes are supported.  ``"rational"`` stores every quantity
as a :class:`fractions.Fraction` so that equality-defined objects (Aubry
set, critical graph) come out exact; ``"float64"`` uses Python floats and
explicit tolerances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Sequence, Tuple, Union

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float64"
MODES = (RATIONAL, FLOAT)

BRUTE_CN_MAX_POINTS = 6
BRUTE_CN_MAX_STEPS = 12
BRUTE_CYCLE_MAX_POINTS = 8


class InstanceError(ValueError):
    """Raised when raw instance data violates a CostSpace invariant."""


class OracleLimitError(ValueError):
    """Raised when a brute-force oracle is asked to enumerate too much."""


def parse_scalar(value, mode: str) -> Scalar:
    """Convert ``value`` (int, float, Fraction or ``"p/q"`` string) to ``mode``.

    Floats converted to rational mode keep their exact binary value.
    """
    if mode == RATIONAL:
        if isinstance(value, bool):
            raise InstanceError(f"booleans are not scalars: {value!r}")
        if isinstance(value, Fraction):
            out = value
        elif isinstance(value, (int, Rational)):
            out = Fraction(value)
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise InstanceError(f"non-finite entry {value!r}")
            out = Fraction(value)
        elif isinstance(value, str):
            text = value.strip()
            if text.lower() in ("nan", "inf", "+inf", "-inf", "infinity", "-infinity"):
                raise InstanceError(f"non-finite entry {value!r}")
            try:
                out = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise InstanceError(f"cannot parse rational {value!r}") from exc
        else:
            raise InstanceError(f"cannot interpret {value!r} as a scalar")
        return out
    if mode == FLOAT:
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                try:
                    value = float(value)
                except ValueError as exc:
                    raise InstanceError(f"cannot parse number {value!r}") from exc
        if not isinstance(value, Real) or isinstance(value, bool):
            raise InstanceError(f"cannot interpret {value!r} as a scalar")
        out = float(value)
        if not math.isfinite(out):
            raise InstanceError(f"non-finite entry {value!r}")
        return out
    raise InstanceError(f"unknown mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class CostSpace:
    """A finite point set with an everywhere-finite cost matrix.

    ``cost[y][x]`` is the cost of moving from ``y`` to ``x``.  Build
    instances through :func:`validate_space` rather than directly.
    """

    labels: Tuple[str, ...]
    cost: Tuple[Tuple[Scalar, ...], ...]
    mode: str = RATIONAL

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def exact(self) -> bool:
        return self.mode == RATIONAL

    def scalar(self, value) -> Scalar:
        return parse_scalar(value, self.mode)

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def max_abs_cost(self) -> Scalar:
        return max(abs(c) for row in self.cost for c in row)

    def with_mode(self, mode: str) -> "CostSpace":
        if mode == self.mode:
            return self
        return validate_space(self.labels, self.cost, mode)


def validate_space(labels, cost, mode: str = RATIONAL) -> CostSpace:
    """Build a :class:`CostSpace`, rejecting malformed input.

    ``labels`` may be ``None``, in which case points are labelled ``"0"``,
    ``"1"``, ...  Raises :class:`InstanceError` with a distinct message for
    zero points, a non-square matrix, a non-finite entry and a duplicate
    label.
    """
    if mode not in MODES:
        raise InstanceError(f"unknown mode {mode!r}; expected one of {MODES}")
    rows = [list(r) for r in cost]
    n = len(rows)
    if n == 0:
        raise InstanceError("zero points: the cost matrix is empty")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InstanceError(
                f"non-square cost matrix: row {i} has {len(row)} entries, expected {n}"
            )
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = tuple(str(lab) for lab in labels)
    if len(labels) != n:
        raise InstanceError(f"label count {len(labels)} does not match {n} points")
    seen = set()
    for lab in labels:
        if lab in seen:
            raise InstanceError(f"duplicate label {lab!r}")
        seen.add(lab)
    table = tuple(tuple(parse_scalar(v, mode) for v in row) for row in rows)
    return CostSpace(labels=labels, cost=table, mode=mode)


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings shared by the solvers.

    ``tol`` only matters in float mode.  ``aubry_eps=None`` selects the
    default ``1e-6 * (1 + max|c|)`` in float mode and 0 in rational mode.
    """

    tol: float = 1e-12
    max_iterations: int = 100_000
    aubry_eps: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.aubry_eps is not None and self.aubry_eps < 0:
            raise ValueError("aubry_eps must be nonnegative")

    def slack(self, space: CostSpace) -> Scalar:
        """Tolerance for pointwise inequality checks (0 in rational mode)."""
        return Fraction(0) if space.exact else self.tol

    def eps_for(self, space: CostSpace) -> Scalar:
        """Aubry membership threshold for ``space``."""
        if space.exact:
            if self.aubry_eps not in (None, 0):
                raise ValueError("aubry_eps must be 0 in rational mode")
            return Fraction(0)
        if self.aubry_eps is not None:
            return float(self.aubry_eps)
        return 1e-6 * (1.0 + float(space.max_abs_cost()))


def sup_norm(values: Sequence[Scalar]) -> Scalar:
    return max(abs(v) for v in values)


def sup_distance(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return max(abs(a - b) for a, b in zip(u, v))


def _check_points(space: CostSpace, path: Sequence[int]) -> None:
    for p in path:
        if not 0 <= p < space.n:
            raise IndexError(f"point index {p} out of range for n={space.n}")


def path_cost(space: CostSpace, path: Sequence[int]) -> Scalar:
    """Sum of the step costs along ``path`` (read left to right)."""
    if len(path) < 2:
        raise ValueError("a path needs at least one step (two points)")
    _check_points(space, path)
    c = space.cost
    return sum((c[a][b] for a, b in zip(path, path[1:])), space.zero())


def brute_cn(
    space: CostSpace,
    x: int,
    y: int,
    steps: int,
    max_points: int = BRUTE_CN_MAX_POINTS,
    max_steps: int = BRUTE_CN_MAX_STEPS,
) -> Scalar:
    """Minimal cost over all ``steps``-step paths from ``x`` to ``y``.

    Every one of the ``n**(steps-1)`` paths is enumerated; this is an
    oracle, not a solver.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if space.n > max_points or steps > max_steps:
        raise OracleLimitError(
            f"brute force capped at n<={max_points}, steps<={max_steps}; "
            "use critical.min_plus_power instead"
        )
    _check_points(space, (x, y))
    best = None
    for middle in itertools.product(range(space.n), repeat=steps - 1):
        value = path_cost(space, (x, *middle, y))
        if best is None or value < best:
            best = value
    return best


def elementary_cycles(n: int):
    """Yield every elementary cycle of the complete digraph with loops.

    Each cycle is a tuple of distinct nodes starting at its smallest node,
    without the closing repetition.
    """
    def extend(path, used):
        yield tuple(path)
        for nxt in range(path[0] + 1, n):
            if nxt not in used:
                path.append(nxt)
                used.add(nxt)
                yield from extend(path, used)
                used.discard(nxt)
                path.pop()

    for start in range(n):
        yield from extend([start], {start})


def brute_min_mean_cycle(space: CostSpace, max_points: int = BRUTE_CYCLE_MAX_POINTS):
    """Minimum mean elementary cycle by exhaustive enumeration.

    Returns ``(mean, cycle)`` where ``cycle`` is a closed path such as
    ``(0, 1, 0)``.  Ties go to the shorter cycle, then to the
    lexicographically smaller node sequence.
    """
    if space.n > max_points:
        raise OracleLimitError(f"cycle enumeration capped at n<={max_points}")
    c = space.cost
    best_key = None
    best = None
    for cyc in elementary_cycles(space.n):
        total = sum((c[a][b] for a, b in zip(cyc, cyc[1:] + cyc[:1])), space.zero())
        mean = total / len(cyc)
        key = (mean, len(cyc), cyc)
        if best_key is None or key < best_key:
            best_key = key
            best = (mean, cyc + cyc[:1])
    return best
