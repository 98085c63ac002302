"""Property suite run by ``weakkam check``.

Every invariant of the library is evaluated on one instance and reported
as a :class:`Result`.  Random probes are driven by ``cfg.seed``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from . import core, critical, lax_oleinik as lo, mather, selection
from .core import CostSpace, SolverConfig, sup_distance

SWEEP_FINAL_TOL = 1e-6
PEIERLS_HORIZON = 200


@dataclass(frozen=True)
class Result:
    name: str
    ok: bool
    detail: str = ""


class _Suite:
    def __init__(self):
        self.results: List[Result] = []

    def run(self, name: str, fn: Callable[[], object]) -> None:
        try:
            out = fn()
        except Exception as exc:  # a crashing property is a failing property
            self.results.append(Result(name, False, f"{type(exc).__name__}: {exc}"))
            return
        if isinstance(out, tuple):
            ok, detail = out
        else:
            ok, detail = bool(out), ""
        self.results.append(Result(name, bool(ok), str(detail)))


def _tol(space: CostSpace):
    if space.exact:
        return Fraction(0)
    return 1e-9 * (1 + float(space.max_abs_cost()))


def _random_vector(space: CostSpace, rng, scale=10):
    if space.exact:
        return [Fraction(rng.randint(-16 * scale, 16 * scale), 16) for _ in range(space.n)]
    return [rng.uniform(-scale, scale) for _ in range(space.n)]


def run_checks(space: CostSpace, cfg: SolverConfig | None = None) -> List[Result]:
    cfg = cfg or SolverConfig()
    rng = random.Random(cfg.seed)
    tol = _tol(space)
    n = space.n
    one = space.zero() + 1
    half = one / 2
    suite = _Suite()

    # core
    def additivity():
        for _ in range(20):
            a = [rng.randrange(n) for _ in range(rng.randint(2, 5))]
            b = [a[-1]] + [rng.randrange(n) for _ in range(rng.randint(1, 4))]
            lhs = core.path_cost(space, a + b[1:])
            rhs = core.path_cost(space, a) + core.path_cost(space, b)
            if abs(lhs - rhs) > tol:
                return False, f"paths {a} {b}"
        return True

    suite.run("core.path_cost additive under concatenation", additivity)

    if n <= 4:
        def subadditive():
            for x in range(n):
                for z in range(n):
                    for s in (1, 2):
                        for t in (1, 2):
                            lhs = core.brute_cn(space, x, z, s + t)
                            rhs = min(core.brute_cn(space, x, y, s) + core.brute_cn(space, y, z, t) for y in range(n))
                            if lhs > rhs + tol:
                                return False, f"x={x} z={z} n={s} m={t}"
            return True

        suite.run("core.brute_cn subadditive", subadditive)

    if n <= core.BRUTE_CN_MAX_POINTS:
        def power_vs_brute():
            for k in range(1, 4 if n > 4 else 5):
                cn = critical.min_plus_power(space, k)
                for x in range(n):
                    for y in range(n):
                        if abs(cn[x][y] - core.brute_cn(space, x, y, k)) > tol:
                            return False, f"k={k} ({x},{y})"
            return True

        suite.run("critical.min_plus_power matches brute_cn", power_vs_brute)

    # critical value, three ways
    alpha = critical.critical_value_karp(space)
    lp_value, lp_mu = mather.minimize_cost_lp(space)
    suite.run("critical.alpha karp == -LP value", lambda: (abs(alpha + lp_value) <= tol, f"{alpha} vs {-lp_value}"))
    if n <= core.BRUTE_CYCLE_MAX_POINTS:
        mean, cyc = core.brute_min_mean_cycle(space)
        suite.run("critical.alpha karp == -brute cycle mean", lambda: (abs(alpha + mean) <= tol, f"{alpha} vs {-mean} on {cyc}"))
    suite.run("mather.LP optimum is a closed probability measure",
              lambda: mather.is_probability(lp_mu) and mather.check_closed(lp_mu)[0])

    barrier = critical.barrier_data(space, cfg, alpha)
    phi, h, aubry = barrier.phi, barrier.h, barrier.aubry
    ca = [[cv + alpha for cv in row] for row in space.cost]

    def phi_props():
        for z in range(n):
            if phi[z][z] < -tol:
                return False, f"phi({z},{z}) < 0"
        for x in range(n):
            for y in range(n):
                if phi[x][y] > ca[x][y] + tol:
                    return False, f"phi({x},{y}) > c+alpha"
                for z in range(n):
                    if phi[x][z] > phi[x][y] + phi[y][z] + tol:
                        return False, f"phi triangle at {x},{y},{z}"
        return True

    suite.run("critical.mane potential: diagonal >= 0, below c+alpha, triangle", phi_props)

    def barrier_props():
        for x in range(n):
            for y in range(n):
                if h[x][y] < phi[x][y] - tol:
                    return False, f"h < phi at ({x},{y})"
                if (x in aubry or y in aubry) and abs(h[x][y] - phi[x][y]) > tol:
                    return False, f"h != phi at ({x},{y}) with an endpoint in A"
                for z in range(n):
                    if h[x][z] > h[x][y] + h[y][z] + tol:
                        return False, f"h triangle at {x},{y},{z}"
        for y in range(n):
            if y in aubry and abs(h[y][y]) > tol:
                return False, f"h({y},{y}) != 0 on A"
            if space.exact and y not in aubry and not h[y][y] > 0:
                return False, f"h({y},{y}) <= 0 off A"
        return bool(aubry), f"A={sorted(aubry)}"

    suite.run("critical.peierls barrier: triangle, h>=phi, diagonal zero exactly on A", barrier_props)

    def h_n_triangle():
        powers = {k: critical.min_plus_power(space, k) for k in range(1, 5)}
        for a in range(1, 3):
            for b in range(1, 3):
                for x in range(n):
                    for z in range(n):
                        lhs = powers[a + b][x][z] + (a + b) * alpha
                        rhs = min(powers[a][x][y] + a * alpha + powers[b][y][z] + b * alpha for y in range(n))
                        if lhs > rhs + tol:
                            return False, f"h_{a + b}({x},{z})"
        return True

    suite.run("critical.h_{n+m} <= h_n + h_m", h_n_triangle)

    def graph_props():
        nodes = set()
        for y, x in barrier.critical_edges:
            if abs(ca[y][x] + phi[x][y]) > tol:
                return False, f"edge ({y},{x}) not critical"
            if y not in aubry or x not in aubry:
                return False, f"edge ({y},{x}) leaves A"
            nodes.update((y, x))
        return nodes == set(aubry), f"nodes {sorted(nodes)} vs A {sorted(aubry)}"

    suite.run("critical.critical graph: zero weight edges spanning A", graph_props)

    if n <= 6:
        window = min(math.factorial(n), PEIERLS_HORIZON // 2)

        def liminf():
            oracle = critical.peierls_liminf_oracle(space, alpha, PEIERLS_HORIZON, window)
            gap = max(abs(oracle[x][y] - h[x][y]) for x in range(n) for y in range(n))
            return gap <= tol, f"max gap {gap} (window {window})"

        suite.run("critical.peierls barrier matches liminf oracle", liminf)

    def kam_rows():
        for y in sorted(aubry):
            u = critical.weak_kam_solution(space, barrier, y)
            if not (lo.check_subsolution(space, u, None, alpha, tol).ok and lo.check_supersolution(space, u, None, alpha, tol).ok):
                return False, f"h({y},.) is not a solution"
        return True

    suite.run("critical.h(y,.) solves u = T(u)+alpha for y in A", kam_rows)

    def minus_h_columns():
        bound = 0
        for y in range(n):
            col = [-h[x][y] for x in range(n)]
            if not lo.check_subsolution(space, col, None, alpha, tol).ok:
                return False, f"-h(.,{y}) not a subsolution"
            bound = max(bound, core.sup_norm(col))
        return True, f"equibound {bound}"

    suite.run("critical.-h(.,y) are equibounded subsolutions", minus_h_columns)

    for lam in (half, one * 3 / 4, one * 15 / 16):
        def estimate(lam=lam):
            hat, bound = critical.critical_value_discounted_estimate(space, lam, cfg, alpha)
            return abs(hat - alpha) <= bound + tol, f"lambda={lam} hat={hat} bound={bound}"

        suite.run(f"critical.discounted alpha estimate within bound (lambda={lam})", estimate)

    # Lax-Oleinik operators
    lam = one * 3 / 4

    def monotone():
        for _ in range(20):
            u = _random_vector(space, rng)
            v = [a + abs(b) for a, b in zip(u, _random_vector(space, rng))]
            if any(a > b + tol for a, b in zip(lo.apply_T(space, u), lo.apply_T(space, v))):
                return False
            if any(a > b + tol for a, b in zip(lo.apply_T_discounted(space, u, lam), lo.apply_T_discounted(space, v, lam))):
                return False
        return True

    suite.run("lax_oleinik.monotonicity of T and T_lambda", monotone)

    def contraction():
        for _ in range(20):
            f, g = _random_vector(space, rng), _random_vector(space, rng)
            d = sup_distance(f, g)
            if sup_distance(lo.apply_T(space, f), lo.apply_T(space, g)) > d + tol:
                return False, "T expands"
            if sup_distance(lo.apply_T_discounted(space, f, lam), lo.apply_T_discounted(space, g, lam)) > lam * d + tol:
                return False, "T_lambda not a lambda-contraction"
        return True

    suite.run("lax_oleinik.T non-expansive, T_lambda lambda-contraction", contraction)

    def constants():
        for _ in range(10):
            u = _random_vector(space, rng)
            k = _random_vector(space, rng)[0]
            shifted = [a + k for a in u]
            if sup_distance(lo.apply_T(space, shifted), [a + k for a in lo.apply_T(space, u)]) > tol:
                return False
            if sup_distance(lo.apply_T_discounted(space, shifted, lam),
                            [a + lam * k for a in lo.apply_T_discounted(space, u, lam)]) > tol:
                return False
        return True

    suite.run("lax_oleinik.constants commute with T and T_lambda", constants)

    for beta in (space.zero(), alpha):
        def series(beta=beta):
            sol = lo.solve_discounted(space, half, beta, cfg)
            for x in range(n):
                value, tail = lo.discounted_series_value(space, half, beta, x, 40)
                if abs(value - sol.u[x]) > tail + tol:
                    return False, f"x={x}"
            return True

        suite.run(f"lax_oleinik.solution matches truncated series (beta={beta})", series)

    def sandwich():
        sol = lo.solve_discounted(space, lam, alpha, cfg)
        u = list(sol.u)
        if not lo.check_subsolution(space, u, lam, alpha, tol).ok or not lo.check_supersolution(space, u, lam, alpha, tol).ok:
            return False, "solution is not both sub and super"
        if not lo.comparison_sandwich(space, lam, alpha, u, u, cfg):
            return False, "equality sandwich"
        for _ in range(10):
            k1, k2 = abs(_random_vector(space, rng)[0]) + one, abs(_random_vector(space, rng)[0]) + one
            if not lo.comparison_sandwich(space, lam, alpha, [a - k1 for a in u], [a + k2 for a in u], cfg):
                return False, "sandwich"
        return True

    suite.run("lax_oleinik.comparison principle", sandwich)

    def beta_shift():
        worst = 0
        for _ in range(5):
            l = Fraction(rng.randint(1, 15), 16) if space.exact else rng.uniform(0.05, 0.95)
            b1, b2 = _random_vector(space, rng)[0], _random_vector(space, rng)[0]
            worst = max(worst, lo.beta_shift_identity(space, l, b1, b2, cfg))
        limit = 0 if space.exact else 2 * cfg.tol / (1 - 0.95) + tol
        return worst <= limit, f"deviation {worst}"

    suite.run("lax_oleinik.beta shift identity", beta_shift)

    subs = selection.sample_subsolutions(space, barrier, 12, rng)

    def sub_closure():
        for _ in range(10):
            a, b = rng.sample(subs, 2) if len(subs) > 1 else (subs[0], subs[0])
            t = Fraction(rng.randint(0, 8), 8) if space.exact else rng.random()
            for cand in ([t * p + (1 - t) * q for p, q in zip(a, b)],
                         [min(p, q) for p, q in zip(a, b)],
                         [max(p, q) for p, q in zip(a, b)]):
                if not lo.check_subsolution(space, cand, None, alpha, tol).ok:
                    return False
        sols = [[v + k for v in h[y]] for y in sorted(aubry) for k in (space.zero(), one)]
        low = [min(col) for col in zip(*sols)]
        return lo.check_supersolution(space, low, None, alpha, tol).ok

    suite.run("lax_oleinik.subsolutions closed under convex combinations, min, max", sub_closure)

    def t_of_subsolution():
        for w in subs:
            tw = [v + alpha for v in lo.apply_T(space, w)]
            if not lo.check_subsolution(space, tw, None, alpha, tol).ok:
                return False, "T(w)+alpha not a subsolution"
            if any(a < b - tol for a, b in zip(tw, w)):
                return False, "T(w)+alpha < w"
            if any(abs(tw[z] - w[z]) > tol for z in aubry):
                return False, "T(w)+alpha != w on A"
        return True

    suite.run("lax_oleinik.T(w)+alpha >= w with equality on A", t_of_subsolution)

    def below_barrier():
        for w in subs:
            for x in range(n):
                for y in range(n):
                    if w[x] - w[y] > h[y][x] + tol:
                        return False, f"u({x})-u({y}) > h({y},{x})"
        return True

    suite.run("critical.subsolutions satisfy u(x)-u(y) <= h(y,x)", below_barrier)

    # Mather measures
    extremes = mather.extreme_mather_measures(space, barrier)

    def extremes_ok():
        for cm in extremes:
            if not mather.check_closed(cm.measure)[0]:
                return False, f"{cm.cycle} not closed"
            if abs(mather.integrate_edges(space, cm.measure) + alpha) > tol:
                return False, f"{cm.cycle} cost != -alpha"
            if not mather.support_in_aubry(space, cm.measure, barrier):
                return False, f"{cm.cycle} leaves A"
            if any(e not in barrier.critical_edges for e in cm.edges()):
                return False, f"{cm.cycle} leaves the critical graph"
            p1, p2 = mather.project(cm.measure, 1), mather.project(cm.measure, 2)
            if sup_distance(p1, p2) > tol:
                return False, "projections differ"
        return True, f"{len(extremes)} extreme measures"

    suite.run("mather.extreme measures: closed, minimizing, supported in A", extremes_ok)

    def integrals_on_aubry():
        for w in subs:
            tw = [v + alpha for v in lo.apply_T(space, w)]
            for cm in extremes:
                mu = mather.project(cm.measure, 1)
                if abs(mather.integrate_node(tw, mu) - mather.integrate_node(w, mu)) > tol:
                    return False
        return True

    suite.run("mather.integral of T(w)+alpha equals integral of w", integrals_on_aubry)

    for lam in (half, one * 15 / 16, one - one / 1024):
        def occupation(lam=lam):
            sol = lo.solve_discounted(space, lam, alpha, cfg)
            for cm in extremes:
                if mather.integrate_node(sol.u, mather.project(cm.measure, 1)) > tol:
                    return False, "integral of u_lambda positive"
            for x in range(n):
                occ = mather.discounted_occupation(space, lam, sol, x)
                if not mather.is_probability(occ.measure):
                    return False, "not a probability"
                if occ.defect > 2 * (1 - lam) + tol:
                    return False, f"defect {occ.defect}"
                if abs(occ.cost_integral - occ.target) > tol:
                    return False, f"cost integral {occ.cost_integral} vs {occ.target}"
                p1 = mather.project(occ.measure, 1)
                for w in subs[:4]:
                    if sol.u[x] < w[x] - mather.integrate_node(w, p1) - tol:
                        return False, "finite-lambda key inequality"
            return True

        suite.run(f"mather.occupation measures and finite-lambda bounds (lambda={lam})", occupation)

    # selection
    sel = selection.compute_u0(space, barrier, extremes)
    u0 = list(sel.u0)

    suite.run("selection.u0 solves u = T(u)+alpha",
              lambda: (lo.discounted_residual(space, u0, None, alpha) <= tol,
                       f"residual {lo.discounted_residual(space, u0, None, alpha)}"))
    suite.run("selection.u0 in F_-", lambda: selection.f_minus_member(space, alpha, u0, extremes, tol).ok)

    def chain():
        for cm, hm in sel.per_measure:
            if not lo.check_subsolution(space, hm, None, alpha, tol).ok:
                return False, f"h_mu for {cm.cycle} not a subsolution"
            if any(a > b + tol for a, b in zip(u0, hm)):
                return False, "u0 > h_mu"
        return lo.check_subsolution(space, u0, None, alpha, tol).ok

    suite.run("selection.h_mu subsolutions bounding u0", chain)

    def sup_characterization():
        for w in selection.sample_f_minus(space, barrier, extremes, 50, rng):
            if not selection.f_minus_member(space, alpha, w, extremes, tol).ok:
                return False, "sample outside F_-"
            if any(a > b + tol for a, b in zip(w, u0)):
                return False, "member above u0"
        return True

    suite.run("selection.F_- members lie below u0", sup_characterization)

    def saturation():
        for y in sorted(aubry):
            if abs(u0[y] - min(hm[y] for _, hm in sel.per_measure)) > tol:
                return False
            w = [-h[x][y] + u0[y] for x in range(n)]
            if any(a > b + tol for a, b in zip(w, u0)) or abs(w[y] - u0[y]) > tol:
                return False
        return True

    suite.run("selection.Aubry saturation", saturation)

    def principles():
        sups = selection.sample_supersolutions(space, barrier, 20, rng)
        for v, w in zip(selection.sample_subsolutions(space, barrier, 20, rng), sups):
            gap = max(v[z] - w[z] for z in aubry)
            v = [a - gap for a in v]
            if not selection.max_principle_check(space, alpha, barrier, v, w, tol):
                return False, "maximum principle"
            if not selection.key_inequality_check(space, barrier, u0, v, extremes, tol):
                return False, "key inequality"
        return True

    suite.run("selection.maximum principle and key inequality", principles)

    report = selection.convergence_sweep(space, cfg)

    def sweep():
        if not report.ok:
            return False, "; ".join(r.error for r in report.rows if r.failed)
        last = report.rows[-1]
        return (last.sup_error <= SWEEP_FINAL_TOL and report.tail_non_increasing(),
                f"final sup error {float(last.sup_error):.3e}")

    suite.run("selection.vanishing discount sweep converges to u0", sweep)

    def sweep_rows():
        for r in report.rows:
            if r.failed:
                continue
            if r.residual > (0 if space.exact else lo.residual_limit(cfg, r.u)):
                return False, f"residual at lambda={r.lam}"
            if r.occupation_defect > 2 * (1 - r.lam) + tol:
                return False, f"defect at lambda={r.lam}"
            if r.occupation_cost_gap > tol:
                return False, f"occupation cost at lambda={r.lam}"
            if abs(r.alpha_hat - alpha) > r.alpha_bound + tol:
                return False, f"alpha estimate at lambda={r.lam}"
        return True

    suite.run("selection.sweep rows within solver and occupation contracts", sweep_rows)
    return suite.results
