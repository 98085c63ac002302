"""Lax-Oleinik operators, the discounted equation and comparison checks.

``T(u)(x) = min_y u(y) + c(y, x)`` and its discounted version
``T_lam(u)(x) = min_y lam*u(y) + c(y, x)``.  The discounted equation
``u = T_lam(u) + beta`` has a unique solution because ``T_lam`` is a
``lam``-contraction in the sup norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .core import CostSpace, Scalar, SolverConfig, sup_distance, sup_norm

# value iteration rounds used to pick a starting policy in rational mode
LOCALIZE_ITERATIONS = 200


class SolverError(RuntimeError):
    """The discounted solver ran out of iterations.

    ``last`` holds the last iterate and ``residual`` its sup-norm residual.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class ComparisonError(ValueError):
    """A precondition of a comparison/maximum principle check failed."""


class Check(NamedTuple):
    """Outcome of a pointwise inequality check.

    ``worst`` is the largest violation found (<= 0 means satisfied with
    that much room) and ``point`` is where it occurs.
    """

    ok: bool
    worst: Scalar
    point: int


def _as_lambda(space: CostSpace, lam) -> Scalar:
    lam = space.scalar(lam)
    if not 0 < lam < 1:
        raise ValueError(f"discount factor must lie in (0, 1), got {lam}")
    return lam


def min_plus_step(space: CostSpace, u: Sequence[Scalar], lam=None) -> Tuple[List[Scalar], List[int]]:
    """One application of ``T`` (``lam=None``) or ``T_lam``, with argmins.

    The argmin for each ``x`` is the lowest index ``y`` attaining the
    minimum.
    """
    c = space.cost
    n = space.n
    if len(u) != n:
        raise ValueError(f"value function has {len(u)} entries, expected {n}")
    scaled = list(u) if lam is None else [lam * v for v in u]
    values, argmin = [], []
    for x in range(n):
        best_y = 0
        best = scaled[0] + c[0][x]
        for y in range(1, n):
            cand = scaled[y] + c[y][x]
            if cand < best:
                best, best_y = cand, y
        values.append(best)
        argmin.append(best_y)
    return values, argmin


def apply_T(space: CostSpace, u: Sequence[Scalar]) -> List[Scalar]:
    """The Lax-Oleinik operator ``x -> min_y u(y) + c(y, x)``."""
    return min_plus_step(space, [space.scalar(v) for v in u])[0]


def apply_T_argmin(space: CostSpace, u: Sequence[Scalar]) -> List[int]:
    return min_plus_step(space, [space.scalar(v) for v in u])[1]


def apply_T_discounted(space: CostSpace, u: Sequence[Scalar], lam) -> List[Scalar]:
    """The discounted operator ``x -> min_y lam*u(y) + c(y, x)``."""
    lam = _as_lambda(space, lam)
    return min_plus_step(space, [space.scalar(v) for v in u], lam)[0]


@dataclass(frozen=True)
class DiscountedSolution:
    """Fixed point of ``u = T_lam(u) + beta``.

    ``argmin_map[x]`` is the lowest-index predecessor realizing the
    minimum at ``x``; following it backwards yields a minimizing sequence.
    """

    u: Tuple[Scalar, ...]
    iterations: int
    residual: Scalar
    argmin_map: Tuple[int, ...]
    lam: Scalar
    beta: Scalar


def discounted_residual(space: CostSpace, u, lam, beta) -> Scalar:
    tu = min_plus_step(space, u, lam)[0]
    return max(abs(a - (b + beta)) for a, b in zip(u, tu))


def residual_limit(cfg: SolverConfig, u) -> float:
    """Float-mode residual allowance: ``tol`` relative to ``max(1, |u|_inf)``.

    Values of size ``1/(1-lam)`` carry rounding far above any absolute
    ``tol`` once ``lam`` is close to 1.
    """
    return cfg.tol * max(1.0, float(sup_norm(u)))


def _evaluate_policy(space: CostSpace, sigma: Sequence[int], lam, beta) -> List[Scalar]:
    """Solve ``u(x) = lam*u(sigma(x)) + c(sigma(x), x) + beta`` for ``u``.

    The system is triangular along the functional graph of ``sigma``: on a
    cycle of length k the value is a discounted cycle sum over
    ``1 - lam**k``, everything else follows by back-substitution.
    """
    n = space.n
    c = space.cost
    step = [c[sigma[x]][x] + beta for x in range(n)]
    u: List[Optional[Scalar]] = [None] * n
    for start in range(n):
        if u[start] is not None:
            continue
        # walk predecessors until we hit a known value or close a cycle
        order = []
        pos = {}
        x = start
        while u[x] is None and x not in pos:
            pos[x] = len(order)
            order.append(x)
            x = sigma[x]
        if u[x] is None:
            cycle = order[pos[x]:]
            total = space.zero()
            disc = space.zero() + 1
            for z in cycle:
                total += disc * step[z]
                disc *= lam
            u[cycle[0]] = total / (1 - disc)
            # cycle[i+1] = sigma(cycle[i]); fill backwards around the cycle
            for z in reversed(cycle[1:]):
                u[z] = lam * u[sigma[z]] + step[z]
            order = order[: pos[x]]
        for z in reversed(order):
            u[z] = lam * u[sigma[z]] + step[z]
    return u


def _policy_iteration(space: CostSpace, sigma, lam, beta, budget: int):
    """Howard's policy iteration; switches only on strict improvement."""
    sigma = list(sigma)
    n = space.n
    c = space.cost
    for it in range(1, budget + 1):
        u = _evaluate_policy(space, sigma, lam, beta)
        changed = False
        for x in range(n):
            current = lam * u[sigma[x]] + c[sigma[x]][x]
            best_y, best = sigma[x], current
            for y in range(n):
                cand = lam * u[y] + c[y][x]
                if cand < best:
                    best, best_y = cand, y
            if best_y != sigma[x] and (space.exact or current - best > 1e-14 * (1 + abs(current))):
                sigma[x] = best_y
                changed = True
        if not changed:
            return u, it
    raise SolverError(
        "policy iteration did not stabilize",
        last=u,
        residual=discounted_residual(space, u, lam, beta),
    )


def solve_discounted(space: CostSpace, lam, beta=0, cfg: SolverConfig | None = None) -> DiscountedSolution:
    """Solve ``u = T_lam(u) + beta``.

    Float mode runs value iteration from the zero function and stops once
    ``|u_{k+1} - u_k| <= tol*(1-lam)/lam``, which puts the iterate within
    ``tol`` of the fixed point.  When ``lam`` is so close to 1 that this
    cannot happen within ``max_iterations`` (or at float resolution), the
    iterate seeds a policy iteration that is accepted once its residual is
    within :func:`residual_limit`.  Rational mode localizes with float value iteration and
    then runs exact policy iteration, so the residual is exactly 0.
    """
    cfg = cfg or SolverConfig()
    lam = _as_lambda(space, lam)
    beta = space.scalar(beta)

    if space.exact:
        fspace = space.with_mode("float64")
        flam, fbeta = float(lam), float(beta)
        u = [0.0] * space.n
        localized = 0
        for _ in range(min(LOCALIZE_ITERATIONS, cfg.max_iterations)):
            nxt = [v + fbeta for v in min_plus_step(fspace, u, flam)[0]]
            localized += 1
            settled = sup_distance(nxt, u) == 0.0
            u = nxt
            if settled:
                break
        sigma = min_plus_step(fspace, u, flam)[1]
        u, it = _policy_iteration(space, sigma, lam, beta, cfg.max_iterations)
        iterations = localized + it
    else:
        threshold = cfg.tol * (1 - lam) / lam
        u = [0.0] * space.n
        iterations = 0
        converged = False
        # successive differences stall near machine precision; past this
        # many rounds policy iteration finishes the job
        stall_limit = min(cfg.max_iterations, 10_000)
        while iterations < stall_limit:
            nxt = [v + beta for v in min_plus_step(space, u, lam)[0]]
            iterations += 1
            delta = sup_distance(nxt, u)
            u = nxt
            if delta <= threshold:
                converged = True
                break
        if not converged:
            sigma = min_plus_step(space, u, lam)[1]
            budget = cfg.max_iterations - iterations
            if budget < 1:
                raise SolverError(
                    f"no convergence within {cfg.max_iterations} iterations",
                    last=u,
                    residual=discounted_residual(space, u, lam, beta),
                )
            u, it = _policy_iteration(space, sigma, lam, beta, budget)
            iterations += it
            res = discounted_residual(space, u, lam, beta)
            if res > residual_limit(cfg, u):
                raise SolverError(
                    f"residual {res} above tolerance {cfg.tol}", last=u, residual=res
                )

    residual = discounted_residual(space, u, lam, beta)
    argmin = min_plus_step(space, u, lam)[1]
    return DiscountedSolution(
        u=tuple(u),
        iterations=iterations,
        residual=residual,
        argmin_map=tuple(argmin),
        lam=lam,
        beta=beta,
    )


def discounted_series_value(space: CostSpace, lam, beta, x: int, horizon: int):
    """Truncated minimal discounted series at ``x`` by backward dynamic programming.

    Returns ``(value, tail_bound)`` where ``value`` is the minimum over
    backward sequences of ``sum_{k<horizon} lam**k (c(x_{-k-1}, x_{-k}) + beta)``
    and ``|value - u(x)| <= tail_bound`` for the true discounted solution.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    lam = _as_lambda(space, lam)
    beta = space.scalar(beta)
    v = [space.zero()] * space.n
    for _ in range(horizon):
        v = [a + beta for a in min_plus_step(space, v, lam)[0]]
    shifted = max(abs(cv + beta) for row in space.cost for cv in row)
    tail = lam ** horizon * shifted / (1 - lam)
    return v[x], tail


def _operator(space: CostSpace, u, lam):
    return min_plus_step(space, u, None if lam is None else _as_lambda(space, lam))[0]


def check_subsolution(space: CostSpace, u, lam=None, beta=0, tol=0) -> Check:
    """Whether ``u <= T(u) + beta`` (or ``T_lam``) holds pointwise up to ``tol``."""
    u = [space.scalar(v) for v in u]
    beta = space.scalar(beta)
    tu = _operator(space, u, lam)
    gaps = [a - (b + beta) for a, b in zip(u, tu)]
    point = max(range(space.n), key=lambda i: (gaps[i], -i))
    return Check(gaps[point] <= tol, gaps[point], point)


def check_supersolution(space: CostSpace, u, lam=None, beta=0, tol=0) -> Check:
    """Whether ``u >= T(u) + beta`` (or ``T_lam``) holds pointwise up to ``tol``."""
    u = [space.scalar(v) for v in u]
    beta = space.scalar(beta)
    tu = _operator(space, u, lam)
    gaps = [(b + beta) - a for a, b in zip(u, tu)]
    point = max(range(space.n), key=lambda i: (gaps[i], -i))
    return Check(gaps[point] <= tol, gaps[point], point)


def comparison_sandwich(space: CostSpace, lam, beta, v, w, cfg: SolverConfig | None = None) -> bool:
    """Check ``v <= u_lam <= w`` for a subsolution ``v`` and supersolution ``w``."""
    cfg = cfg or SolverConfig()
    tol = cfg.slack(space)
    sub = check_subsolution(space, v, lam, beta, tol)
    if not sub.ok:
        raise ComparisonError(f"v is not a subsolution (violation {sub.worst} at {sub.point})")
    sup = check_supersolution(space, w, lam, beta, tol)
    if not sup.ok:
        raise ComparisonError(f"w is not a supersolution (violation {sup.worst} at {sup.point})")
    u = solve_discounted(space, lam, beta, cfg).u
    v = [space.scalar(a) for a in v]
    w = [space.scalar(a) for a in w]
    return all(a <= m + tol and m <= b + tol for a, m, b in zip(v, u, w))


def beta_shift_identity(space: CostSpace, lam, beta1, beta2, cfg: SolverConfig | None = None) -> Scalar:
    """Sup-norm deviation of ``u^{b1} - u^{b2}`` from the constant ``(b1-b2)/(1-lam)``."""
    cfg = cfg or SolverConfig()
    lam = _as_lambda(space, lam)
    beta1, beta2 = space.scalar(beta1), space.scalar(beta2)
    u1 = solve_discounted(space, lam, beta1, cfg).u
    u2 = solve_discounted(space, lam, beta2, cfg).u
    shift = (beta1 - beta2) / (1 - lam)
    return sup_norm([a - b - shift for a, b in zip(u1, u2)])
