"""The selected solution u0 and the vanishing-discount experiment.

``u0(x) = min_mu sum_y mu(y) h(y, x)`` over projected Mather measures; the
minimum of this linear function over the Mather polytope is attained at
an extreme point, so only uniform measures on critical circuits are
visited.  :func:`convergence_sweep` solves ``u = T_lam(u) + alpha`` for a
schedule of ``lam -> 1`` and records the distance to ``u0``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import CostSpace, Scalar, SolverConfig, sup_distance
from .critical import BarrierData, barrier_data, critical_value_discounted_estimate
from .lax_oleinik import (
    ComparisonError,
    check_subsolution,
    check_supersolution,
    solve_discounted,
)
from .mather import CycleMeasure, discounted_occupation, extreme_mather_measures, integrate_node, project


def h_mu(barrier: BarrierData, mu: Sequence[Scalar]) -> List[Scalar]:
    """``x -> sum_y mu(y) h(y, x)``."""
    n = len(barrier.h)
    out = []
    for x in range(n):
        total = 0
        for y in range(n):
            if mu[y]:
                total += mu[y] * barrier.h[y][x]
        out.append(total)
    return out


@dataclass(frozen=True)
class SelectionResult:
    u0: Tuple[Scalar, ...]
    per_measure: Tuple[Tuple[CycleMeasure, Tuple[Scalar, ...]], ...]
    argmin_measure: Tuple[int, ...]


def compute_u0(space: CostSpace, barrier: BarrierData, extremes: Sequence[CycleMeasure]) -> SelectionResult:
    if not extremes:
        raise ValueError("need at least one extreme Mather measure")
    rows = []
    for cm in extremes:
        rows.append((cm, tuple(h_mu(barrier, project(cm.measure, 1)))))
    u0, arg = [], []
    for x in range(space.n):
        k = min(range(len(rows)), key=lambda i: (rows[i][1][x], i))
        arg.append(k)
        u0.append(rows[k][1][x])
    return SelectionResult(tuple(u0), tuple(rows), tuple(arg))


def select(space: CostSpace, cfg: SolverConfig | None = None):
    """Barrier data, extreme Mather measures and u0 in one call."""
    barrier = barrier_data(space, cfg)
    extremes = extreme_mather_measures(space, barrier)
    return barrier, extremes, compute_u0(space, barrier, extremes)


@dataclass(frozen=True)
class Membership:
    ok: bool
    reason: str = ""
    worst: Optional[Scalar] = None
    where: Optional[int] = None


def f_minus_member(space: CostSpace, alpha, u, extremes: Sequence[CycleMeasure], tol=0) -> Membership:
    """Critical subsolution with nonpositive integral against every projected Mather measure."""
    u = [space.scalar(v) for v in u]
    sub = check_subsolution(space, u, None, alpha, tol)
    if not sub.ok:
        return Membership(False, "not a subsolution", sub.worst, sub.point)
    integrals = [integrate_node(u, project(cm.measure, 1)) for cm in extremes]
    k = max(range(len(integrals)), key=lambda i: (integrals[i], -i))
    if integrals[k] > tol:
        return Membership(False, "positive integral against a Mather measure", integrals[k], k)
    return Membership(True, "", integrals[k], k)


def key_inequality_check(space: CostSpace, barrier: BarrierData, u_limit, w, extremes, tol=0) -> bool:
    """``u_limit >= w - max_mu int w dmu`` pointwise, for a critical subsolution ``w``."""
    w = [space.scalar(v) for v in w]
    sub = check_subsolution(space, w, None, barrier.alpha, tol)
    if not sub.ok:
        raise ComparisonError(f"w is not a subsolution (violation {sub.worst} at {sub.point})")
    top = max(integrate_node(w, project(cm.measure, 1)) for cm in extremes)
    return all(space.scalar(a) >= b - top - tol for a, b in zip(u_limit, w))


def max_principle_check(space: CostSpace, alpha, barrier: BarrierData, v, w, tol=0) -> bool:
    """Subsolution ``v`` below supersolution ``w`` on the Aubry set stays below everywhere."""
    v = [space.scalar(a) for a in v]
    w = [space.scalar(a) for a in w]
    sub = check_subsolution(space, v, None, alpha, tol)
    if not sub.ok:
        raise ComparisonError(f"v is not a subsolution (violation {sub.worst} at {sub.point})")
    sup = check_supersolution(space, w, None, alpha, tol)
    if not sup.ok:
        raise ComparisonError(f"w is not a supersolution (violation {sup.worst} at {sup.point})")
    bad = [z for z in sorted(barrier.aubry) if v[z] > w[z] + tol]
    if bad:
        raise ComparisonError(f"v > w on Aubry set at points {bad}")
    return all(a <= b + tol for a, b in zip(v, w))


def default_schedule(space: CostSpace, k_max: int = 20) -> List[Scalar]:
    """``1 - 2**-k`` for ``k = 1..k_max``."""
    if space.exact:
        return [1 - Fraction(1, 2 ** k) for k in range(1, k_max + 1)]
    return [1 - 2.0 ** -k for k in range(1, k_max + 1)]


@dataclass(frozen=True)
class SweepRow:
    lam: Scalar
    sup_error: Optional[Scalar] = None
    residual: Optional[Scalar] = None
    iterations: Optional[int] = None
    alpha_hat: Optional[Scalar] = None
    alpha_bound: Optional[Scalar] = None
    occupation_defect: Optional[Scalar] = None
    occupation_cost_gap: Optional[Scalar] = None
    u: Optional[Tuple[Scalar, ...]] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class SweepReport:
    schedule: Tuple[Scalar, ...]
    rows: Tuple[SweepRow, ...]
    u0: Tuple[Scalar, ...]
    alpha: Scalar = field(default=0)

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.rows)

    def errors(self) -> List[Scalar]:
        return [r.sup_error for r in self.rows]

    def tail_non_increasing(self, last: int = 5) -> bool:
        errs = self.errors()[-last:]
        return all(b <= a for a, b in zip(errs, errs[1:]))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WEAKKAM_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_row(space, cfg, lam, barrier, u0, x0) -> SweepRow:
    try:
        sol = solve_discounted(space, lam, barrier.alpha, cfg)
        alpha_hat, bound = critical_value_discounted_estimate(space, lam, cfg, barrier.alpha)
        occ = discounted_occupation(space, lam, sol, x0)
        return SweepRow(
            lam=lam,
            sup_error=sup_distance(sol.u, u0),
            residual=sol.residual,
            iterations=sol.iterations,
            alpha_hat=alpha_hat,
            alpha_bound=bound,
            occupation_defect=occ.defect,
            occupation_cost_gap=abs(occ.cost_integral - occ.target),
            u=sol.u,
        )
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        return SweepRow(lam=lam, error=f"{type(exc).__name__}: {exc}")


def convergence_sweep(space: CostSpace, cfg: SolverConfig | None = None, schedule=None, x0: int = 0) -> SweepReport:
    """Solve the critically shifted discounted equation along ``schedule``.

    A failing row is recorded with its error message and the sweep moves on.
    """
    cfg = cfg or SolverConfig()
    schedule = default_schedule(space) if schedule is None else [space.scalar(l) for l in schedule]
    if any(not 0 < l < 1 for l in schedule):
        raise ValueError("schedule values must lie in (0, 1)")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    barrier, _, sel = select(space, cfg)
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda l: _sweep_row(space, cfg, l, barrier, sel.u0, x0), schedule))
    else:
        rows = [_sweep_row(space, cfg, l, barrier, sel.u0, x0) for l in schedule]
    return SweepReport(tuple(schedule), tuple(rows), sel.u0, barrier.alpha)


def _unit(space: CostSpace, rng, q: int = 16):
    """Random number in [0, 1]; a multiple of ``1/q`` in rational mode."""
    if space.exact:
        return Fraction(rng.randint(0, q), q)
    return rng.random()


def sample_subsolutions(space: CostSpace, barrier: BarrierData, count: int, rng) -> List[List[Scalar]]:
    """Critical subsolutions built from barrier columns ``-h(., y)``.

    Shifted columns, convex combinations of two and pointwise minima of two
    earlier samples; all are subsolutions of ``u = T(u) + alpha``.
    """
    n = space.n
    scale = 1 + abs(space.max_abs_cost())
    pool: List[List[Scalar]] = []
    while len(pool) < count:
        kind = rng.randrange(3) if len(pool) >= 2 else 0
        if kind == 0:
            y = rng.randrange(n)
            k = (2 * _unit(space, rng) - 1) * scale
            pool.append([-barrier.h[x][y] + k for x in range(n)])
        elif kind == 1:
            a, b = rng.sample(pool, 2)
            t = _unit(space, rng)
            pool.append([t * p + (1 - t) * q for p, q in zip(a, b)])
        else:
            a, b = rng.sample(pool, 2)
            pool.append([min(p, q) for p, q in zip(a, b)])
    return pool


def sample_f_minus(space: CostSpace, barrier: BarrierData, extremes, count: int, rng) -> List[List[Scalar]]:
    """Subsolutions shifted down so every projected Mather integral is <= 0."""
    out = []
    for w in sample_subsolutions(space, barrier, count, rng):
        top = max(integrate_node(w, project(cm.measure, 1)) for cm in extremes)
        slack = _unit(space, rng) if rng.random() < 0.5 else 0
        out.append([v - top - slack for v in w])
    return out


def sample_supersolutions(space: CostSpace, barrier: BarrierData, count: int, rng) -> List[List[Scalar]]:
    """Pointwise minima of shifted solutions ``h(y, .) + k`` with ``y`` in the Aubry set."""
    aubry = sorted(barrier.aubry)
    scale = 1 + abs(space.max_abs_cost())
    out = []
    for _ in range(count):
        picks = [rng.choice(aubry) for _ in range(rng.randint(1, 3))]
        rows = []
        for y in picks:
            k = (2 * _unit(space, rng) - 1) * scale
            rows.append([v + k for v in barrier.h[y]])
        out.append([min(col) for col in zip(*rows)])
    return out
