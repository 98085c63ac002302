"""Critical value, Mane potential, Peierls barrier and Aubry set.

Everything here works on the min-plus algebra of the cost matrix.  With
``alpha`` the critical value, the shifted weights ``c + alpha`` have
minimum cycle mean exactly 0, so shortest walks are well defined and

* ``phi[x][y]`` is the cheapest shifted walk of at least one step,
* the Aubry set is ``{z : phi[z][z] == 0}``,
* ``h[x][y] = min_{z in Aubry} phi[x][z] + phi[z][y]``.

The last identity replaces the liminf in the definition of the barrier;
:func:`peierls_liminf_oracle` evaluates the liminf directly and is used to
cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

from .core import CostSpace, Scalar, SolverConfig, sup_norm
from .lax_oleinik import solve_discounted

Matrix = List[List[Scalar]]


class NegativeCycleError(ValueError):
    """The supplied critical value is too large: some shifted cycle is negative."""


class AubryError(RuntimeError):
    """Raised when the Aubry set comes out empty or a point is off it."""


def min_plus_product(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    """``(a * b)[i][j] = min_k a[i][k] + b[k][j]``."""
    n, m = len(a), len(b[0])
    inner = len(b)
    out = []
    for i in range(n):
        ai = a[i]
        out.append([min(ai[k] + b[k][j] for k in range(inner)) for j in range(m)])
    return out


def min_plus_power(space: CostSpace, n_steps: int) -> Matrix:
    """``c_n(x, y)``: cheapest ``n_steps``-step path from ``x`` to ``y``."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    base = [list(row) for row in space.cost]
    result = None
    power = base
    k = n_steps
    # square-and-multiply; min-plus products are associative
    while k:
        if k & 1:
            result = power if result is None else min_plus_product(result, power)
        k >>= 1
        if k:
            power = min_plus_product(power, power)
    return [list(row) for row in result]


def critical_value_karp(space: CostSpace, root: int = 0) -> Scalar:
    """Critical value as minus the minimum cycle mean (Karp's recurrence).

    ``D_k(v)`` is the cheapest ``k``-step walk from ``root`` to ``v``; the
    minimum cycle mean is ``min_v max_{k<n} (D_n(v) - D_k(v)) / (n - k)``.
    The cost graph is complete, so every ``D_k`` is finite.
    """
    n = space.n
    c = space.cost
    d = [[None] * n for _ in range(n + 1)]
    d[0] = [None] * n
    d[0][root] = space.zero()
    for k in range(1, n + 1):
        prev = d[k - 1]
        for v in range(n):
            best = None
            for u in range(n):
                if prev[u] is None:
                    continue
                cand = prev[u] + c[u][v]
                if best is None or cand < best:
                    best = cand
            d[k][v] = best
    best_mean = None
    for v in range(n):
        worst = None
        for k in range(n):
            if d[k][v] is None:
                continue
            ratio = (d[n][v] - d[k][v]) / (n - k)
            if worst is None or ratio > worst:
                worst = ratio
        if best_mean is None or worst < best_mean:
            best_mean = worst
    return -best_mean


def critical_value_discounted_estimate(space: CostSpace, lam, cfg: SolverConfig | None = None, alpha=None):
    """Estimate ``alpha`` as ``-(1-lam) * u_lam(0)`` where ``u_lam`` solves with ``beta=0``.

    Returns ``(alpha_hat, error_bound)`` with
    ``error_bound = (1-lam) * |u_lam^alpha|_inf`` computed from the exact
    critical value (Karp's unless ``alpha`` is given).
    """
    cfg = cfg or SolverConfig()
    lam = space.scalar(lam)
    if alpha is None:
        alpha = critical_value_karp(space)
    u0 = solve_discounted(space, lam, 0, cfg).u
    alpha_hat = -(1 - lam) * u0[0]
    ua = solve_discounted(space, lam, alpha, cfg).u
    return alpha_hat, (1 - lam) * sup_norm(ua)


def _default_eps(space: CostSpace, eps):
    if eps is not None:
        return space.scalar(eps)
    return SolverConfig().eps_for(space)


def mane_potential(space: CostSpace, alpha, eps=None) -> Matrix:
    """``phi[x][y] = min_{k>=1} c_k(x, y) + k*alpha``.

    Floyd-Warshall over the shifted weights gives walks of length >= 0;
    one more step in front enforces the at-least-one-step constraint.
    Raises :class:`NegativeCycleError` if ``alpha`` exceeds the critical
    value (beyond ``eps`` in float mode).
    """
    alpha = space.scalar(alpha)
    eps = _default_eps(space, eps)
    n = space.n
    w = [[cv + alpha for cv in row] for row in space.cost]
    d = [row[:] for row in w]
    for i in range(n):
        if d[i][i] > 0:
            d[i][i] = space.zero()
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                cand = dik + dk[j]
                if cand < di[j]:
                    di[j] = cand
    for i in range(n):
        if d[i][i] < -eps:
            raise NegativeCycleError(
                f"negative shifted cycle through point {i}: alpha={alpha} is above the critical value"
            )
        if d[i][i] < 0:
            d[i][i] = space.zero()
    return min_plus_product(w, d)


def aubry_set(space: CostSpace, alpha, phi: Sequence[Sequence[Scalar]], eps=None) -> FrozenSet[int]:
    """Points lying on a zero-mean shifted cycle, i.e. ``phi[z][z] == 0``."""
    eps = _default_eps(space, eps)
    pts = frozenset(z for z in range(space.n) if abs(phi[z][z]) <= eps)
    if not pts:
        raise AubryError("empty Aubry set: the critical value is wrong")
    return pts


def peierls_barrier(space: CostSpace, alpha, phi, aubry) -> Matrix:
    """``h[x][y] = min_{z in aubry} phi[x][z] + phi[z][y]``."""
    zs = sorted(aubry)
    n = space.n
    return [[min(phi[x][z] + phi[z][y] for z in zs) for y in range(n)] for x in range(n)]


def peierls_liminf_oracle(space: CostSpace, kappa, horizon: int, window: int) -> Matrix:
    """Entrywise ``min_{horizon-window <= k <= horizon} c_k + k*kappa``.

    Once ``horizon - window`` is past the transient and ``window`` covers a
    full period of the shifted powers, this equals the liminf defining the
    barrier.  For ``kappa`` other than the critical value the entries drift
    to +/- infinity as ``horizon`` grows.
    """
    if window < 0 or horizon < 1 or window >= horizon:
        raise ValueError("need 0 <= window < horizon")
    kappa = space.scalar(kappa)
    shifted = [[cv + kappa for cv in row] for row in space.cost]
    start = horizon - window
    # power by squaring up to the window start, then step once at a time
    power = None
    base = shifted
    k = start
    while k:
        if k & 1:
            power = base if power is None else min_plus_product(power, base)
        k >>= 1
        if k:
            base = min_plus_product(base, base)
    best = [row[:] for row in power]
    for _ in range(window):
        power = min_plus_product(power, shifted)
        for i, row in enumerate(power):
            bi = best[i]
            for j, v in enumerate(row):
                if v < bi[j]:
                    bi[j] = v
    return best


def critical_graph(space: CostSpace, alpha, phi, eps=None) -> FrozenSet[Tuple[int, int]]:
    """Edges ``(y, x)`` with ``c(y, x) + alpha + phi[x][y] == 0``."""
    alpha = space.scalar(alpha)
    eps = _default_eps(space, eps)
    n = space.n
    c = space.cost
    return frozenset(
        (y, x) for y in range(n) for x in range(n) if abs(c[y][x] + alpha + phi[x][y]) <= eps
    )


@dataclass(frozen=True)
class BarrierData:
    alpha: Scalar
    phi: Tuple[Tuple[Scalar, ...], ...]
    h: Tuple[Tuple[Scalar, ...], ...]
    aubry: FrozenSet[int]
    critical_edges: FrozenSet[Tuple[int, int]]


def barrier_data(space: CostSpace, cfg: SolverConfig | None = None, alpha=None) -> BarrierData:
    """Run the whole critical pipeline: alpha, phi, Aubry set, h, critical graph."""
    cfg = cfg or SolverConfig()
    eps = cfg.eps_for(space)
    if alpha is None:
        alpha = critical_value_karp(space)
    phi = mane_potential(space, alpha, eps)
    aubry = aubry_set(space, alpha, phi, eps)
    h = peierls_barrier(space, alpha, phi, aubry)
    edges = critical_graph(space, alpha, phi, eps)
    return BarrierData(
        alpha=alpha,
        phi=tuple(map(tuple, phi)),
        h=tuple(map(tuple, h)),
        aubry=aubry,
        critical_edges=edges,
    )


def weak_kam_solution(space: CostSpace, barrier: BarrierData, y: int) -> List[Scalar]:
    """The barrier row ``h(y, .)``, a solution of ``u = T(u) + alpha`` for ``y`` in the Aubry set."""
    if y not in barrier.aubry:
        raise AubryError(f"point {y} is not in the Aubry set {sorted(barrier.aubry)}")
    return list(barrier.h[y])
