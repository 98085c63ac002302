"""Closed measures, the minimizing LP, Mather measures and occupation measures.

An edge measure is an ``n x n`` nonnegative matrix of total mass 1 where
``weights[y][x]`` is the mass of the step ``y -> x``.  Its first
projection is the row sums (the source point), its second the column
sums.  A measure is closed when both projections agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from .core import CostSpace, Scalar
from .critical import BarrierData, critical_value_karp
from .lax_oleinik import DiscountedSolution
from .simplex import simplex

CLOSED_FLOAT_TOL = 1e-12
LP_MAX_POINTS = 32
CIRCUIT_CAP = 100_000


class MatherError(ValueError):
    """A measure failed the closedness or minimal-cost test."""


class CircuitCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class EdgeMeasure:
    weights: Tuple[Tuple[Scalar, ...], ...]
    closed: bool

    @property
    def n(self) -> int:
        return len(self.weights)

    def support(self) -> List[Tuple[int, int]]:
        return [(y, x) for y, row in enumerate(self.weights) for x, w in enumerate(row) if w > 0]


@dataclass(frozen=True)
class CycleMeasure:
    """Uniform measure on the edges of an elementary cycle like ``(0, 1, 0)``."""

    cycle: Tuple[int, ...]
    measure: EdgeMeasure

    def edges(self) -> List[Tuple[int, int]]:
        return list(zip(self.cycle, self.cycle[1:]))


def _exact(weights) -> bool:
    return all(isinstance(w, (int, Fraction)) for row in weights for w in row)


def balance_defect(weights) -> Scalar:
    n = len(weights)
    rows = [sum(weights[z]) for z in range(n)]
    cols = [sum(weights[y][z] for y in range(n)) for z in range(n)]
    return max(abs(r - c) for r, c in zip(rows, cols))


def edge_measure(weights) -> EdgeMeasure:
    """Wrap ``weights`` and compute the closed flag."""
    table = tuple(tuple(row) for row in weights)
    return EdgeMeasure(table, check_closed_weights(table)[0])


def check_closed_weights(weights):
    defect = balance_defect(weights)
    tol = 0 if _exact(weights) else CLOSED_FLOAT_TOL
    return defect <= tol, defect


def check_closed(mu: EdgeMeasure):
    """``(closed, defect)`` with ``defect = max_z |rowsum(z) - colsum(z)|``."""
    return check_closed_weights(mu.weights)


def project(mu: EdgeMeasure, factor: int) -> List[Scalar]:
    """Marginal on the source (``factor=1``) or target (``factor=2``) point."""
    w = mu.weights
    n = len(w)
    if factor == 1:
        return [sum(w[z]) for z in range(n)]
    if factor == 2:
        return [sum(w[y][z] for y in range(n)) for z in range(n)]
    raise ValueError("factor must be 1 or 2")


def integrate_edges(space: CostSpace, mu: EdgeMeasure, shift=0) -> Scalar:
    """``sum (c(y, x) + shift) * mu(y, x)``."""
    shift = space.scalar(shift)
    total = space.zero()
    for y, row in enumerate(mu.weights):
        for x, w in enumerate(row):
            if w:
                total += w * (space.cost[y][x] + shift)
    return total


def integrate_node(f: Sequence[Scalar], mu: Sequence[Scalar]) -> Scalar:
    """``sum_z f(z) mu(z)``."""
    total = 0
    for a, b in zip(f, mu):
        total += a * b
    return total


def cycle_measure(space: CostSpace, cycle: Sequence[int]) -> CycleMeasure:
    """Mass ``1/len`` on each edge of the closed path ``cycle``."""
    cycle = tuple(cycle)
    if len(cycle) < 2 or cycle[0] != cycle[-1]:
        raise ValueError("cycle must be a closed path such as (0, 1, 0)")
    n = space.n
    k = len(cycle) - 1
    share = Fraction(1, k) if space.exact else 1.0 / k
    w = [[space.zero()] * n for _ in range(n)]
    for a, b in zip(cycle, cycle[1:]):
        w[a][b] += share
    return CycleMeasure(cycle, edge_measure(w))


def minimize_cost_lp(space: CostSpace):
    """Minimize ``sum c(y, x) mu(y, x)`` over closed probability measures.

    Returns ``(value, mu)``; ``value`` equals minus the critical value.  The
    LP is solved by exact simplex for ``n <= 32`` (floats are converted to
    their exact binary fractions and back).  Larger instances fall back to
    the uniform measure on a Karp-optimal cycle.
    """
    n = space.n
    if n > LP_MAX_POINTS:
        return _karp_fallback(space)
    costs = [Fraction(space.cost[y][x]) for y in range(n) for x in range(n)]
    a = [[Fraction(1)] * (n * n)]
    # one balance row is implied by the others; drop the last
    for z in range(n - 1):
        row = [Fraction(0)] * (n * n)
        for x in range(n):
            row[z * n + x] += 1
        for y in range(n):
            row[y * n + z] -= 1
        a.append(row)
    b = [Fraction(1)] + [Fraction(0)] * (n - 1)
    value, sol = simplex(costs, a, b)
    grid = [[sol[y * n + x] for x in range(n)] for y in range(n)]
    if not space.exact:
        value = float(value)
        grid = [[float(v) for v in row] for row in grid]
    return value, edge_measure(grid)


def _karp_fallback(space: CostSpace):
    alpha = critical_value_karp(space)
    cycle = _karp_cycle(space, alpha)
    return -alpha, cycle_measure(space, cycle).measure


def _karp_cycle(space: CostSpace, alpha) -> Tuple[int, ...]:
    from .critical import critical_graph, mane_potential

    phi = mane_potential(space, alpha)
    edges = critical_graph(space, alpha, phi)
    cycles = critical_cycles(space.n, edges, cap=1)
    return cycles[0]


def _canonical(cycle: Sequence[int]) -> Tuple[int, ...]:
    k = cycle.index(min(cycle))
    body = tuple(cycle[k:]) + tuple(cycle[:k])
    return body + body[:1]


def critical_cycles(n: int, edges, cap: int = CIRCUIT_CAP) -> List[Tuple[int, ...]]:
    """Elementary circuits of the graph on ``edges``, canonically rotated and sorted.

    Stops early once ``cap`` circuits are found when ``cap == 1``;
    otherwise exceeding ``cap`` raises :class:`CircuitCapError`.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(sorted(edges))
    found = set()
    for circuit in nx.simple_cycles(graph):
        found.add(_canonical(circuit))
        if len(found) >= cap:
            if cap == 1:
                break
            raise CircuitCapError(
                f"more than {cap} critical circuits; enumerate a sample instead"
            )
    return sorted(found, key=lambda c: (len(c), c))


def extreme_mather_measures(space: CostSpace, barrier: BarrierData, cap: int = CIRCUIT_CAP) -> List[CycleMeasure]:
    """Uniform measures on the elementary circuits of the critical graph."""
    cycles = critical_cycles(space.n, barrier.critical_edges, cap)
    if not cycles:
        raise MatherError("critical graph has no circuit; the barrier data is inconsistent")
    return [cycle_measure(space, cyc) for cyc in cycles]


def mather_defects(space: CostSpace, mu: EdgeMeasure, alpha, tol=None):
    """``(closed_ok, cost_ok, defect, cost)`` for the Mather property."""
    closed, defect = check_closed(mu)
    cost = integrate_edges(space, mu)
    if tol is None:
        tol = 0 if space.exact else 1e-9 * (1 + abs(float(alpha)))
    return closed, abs(cost + alpha) <= tol, defect, cost


def support_in_aubry(space: CostSpace, mu: EdgeMeasure, barrier: BarrierData) -> bool:
    """Whether every charged edge of the Mather measure ``mu`` has both ends in the Aubry set."""
    closed, cost_ok, defect, cost = mather_defects(space, mu, barrier.alpha)
    if not closed:
        raise MatherError(f"not a Mather measure: not closed (balance defect {defect})")
    if not cost_ok:
        raise MatherError(
            f"not a Mather measure: cost {cost} differs from the minimum {-barrier.alpha}"
        )
    return all(y in barrier.aubry and x in barrier.aubry for y, x in mu.support())


@dataclass(frozen=True)
class Occupation:
    """Discounted occupation measure of a minimizing backward chain.

    ``defect`` is the balance defect of ``measure``; ``cost_integral`` is
    ``sum (c + beta) dmu`` with the solution's ``beta``; ``target`` is
    ``(1-lam) * u(x)``.  ``tail_mass`` is ``lam**horizon`` (0 for the exact
    infinite-horizon measure).
    """

    measure: EdgeMeasure
    chain: Tuple[int, ...]
    defect: Scalar
    cost_integral: Scalar
    target: Scalar
    tail_mass: Scalar


def backward_chain(solution: DiscountedSolution, x: int, length: int) -> List[int]:
    """``[x_0, x_{-1}, ..., x_{-length}]`` following the argmin map."""
    chain = [x]
    for _ in range(length):
        chain.append(solution.argmin_map[chain[-1]])
    return chain


def discounted_occupation(
    space: CostSpace,
    lam,
    solution: DiscountedSolution,
    x: int,
    horizon: Optional[int] = None,
) -> Occupation:
    """Occupation measure with mass ``(1-lam) lam**k`` on ``(x_{-k-1}, x_{-k})``.

    The backward chain follows ``solution.argmin_map``.  With an integer
    ``horizon`` the series is cut after ``horizon`` terms and the leftover
    mass ``lam**horizon`` is put on the next chain edge.  With
    ``horizon=None`` the exact infinite series is summed in closed form,
    using that the chain becomes periodic after at most ``n`` steps.
    """
    lam = space.scalar(lam)
    if horizon is not None and horizon < 1:
        raise ValueError("horizon must be at least 1")
    n = space.n
    one = space.zero() + 1
    w = [[space.zero()] * n for _ in range(n)]
    if horizon is not None:
        chain = backward_chain(solution, x, horizon + 1)
        disc = one
        for k in range(horizon):
            w[chain[k + 1]][chain[k]] += (1 - lam) * disc
            disc *= lam
        w[chain[horizon + 1]][chain[horizon]] += disc
        tail = disc
    else:
        chain = [x]
        seen = {x: 0}
        while True:
            nxt = solution.argmin_map[chain[-1]]
            if nxt in seen:
                break
            seen[nxt] = len(chain)
            chain.append(nxt)
        # edge k is (chain[k+1], chain[k]); chain[-1] steps back to chain[start]
        start = seen[solution.argmin_map[chain[-1]]]
        period = len(chain) - start
        edges = [(chain[k + 1], chain[k]) for k in range(len(chain) - 1)]
        edges.append((chain[start], chain[-1]))
        disc = one
        for k, (a, b) in enumerate(edges):
            mass = (1 - lam) * disc
            if k >= start:
                mass = mass / (1 - lam ** period)
            w[a][b] += mass
            disc *= lam
        tail = space.zero()
        chain = tuple(chain)
    measure = edge_measure(w)
    _, defect = check_closed(measure)
    beta = space.scalar(solution.beta)
    return Occupation(
        measure=measure,
        chain=tuple(chain),
        defect=defect,
        cost_integral=integrate_edges(space, measure, beta),
        target=(1 - lam) * solution.u[x],
        tail_mass=tail,
    )


def total_mass(mu: EdgeMeasure) -> Scalar:
    return sum(sum(row) for row in mu.weights)


def is_probability(mu: EdgeMeasure) -> bool:
    if any(v < 0 for row in mu.weights for v in row):
        return False
    mass = total_mass(mu)
    if _exact(mu.weights):
        return mass == 1
    return math.isclose(float(mass), 1.0, abs_tol=CLOSED_FLOAT_TOL)
