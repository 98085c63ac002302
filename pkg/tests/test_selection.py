import random
from fractions import Fraction as F

import pytest

from weakkam import (
    FLOAT,
    SolverConfig,
    barrier_data,
    compute_u0,
    convergence_sweep,
    extreme_mather_measures,
    f_minus_member,
    validate_space,
)
from weakkam.instances import GeneratorSpec, gen_random
from weakkam.lax_oleinik import (
    ComparisonError,
    check_subsolution,
    check_supersolution,
    discounted_residual,
)
from weakkam.selection import (
    default_schedule,
    h_mu,
    key_inequality_check,
    max_principle_check,
    sample_f_minus,
    sample_subsolutions,
    sample_supersolutions,
    select,
)


@pytest.mark.parametrize(
    "name, u0", [("I1", (0,)), ("I2", (0, 0)), ("I3", (0, 2))]
)
def test_u0_examples(name, u0, request):
    space = request.getfixturevalue(name)
    _, _, sel = select(space)
    assert sel.u0 == u0


def test_h_mu_I3(I3):
    b = barrier_data(I3)
    assert h_mu(b, [1, 0]) == [0, 2]
    assert h_mu(b, [F(1, 2), F(1, 2)]) == [F(3, 2), F(7, 2)]


def test_u0_is_min_over_measures():
    # two disjoint zero loops: u0 takes the pointwise minimum of both h_mu
    space = validate_space(None, [[0, 1, 4], [1, 0, 4], [2, 2, 3]])
    b = barrier_data(space)
    ext = extreme_mather_measures(space, b)
    assert [cm.cycle for cm in ext] == [(0, 0), (1, 1)]
    sel = compute_u0(space, b, ext)
    rows = [hm for _, hm in sel.per_measure]
    assert sel.u0 == tuple(min(a, c) for a, c in zip(*rows))
    assert sel.u0 == (0, 0, 4)


def test_compute_u0_needs_measures(I3):
    with pytest.raises(ValueError):
        compute_u0(I3, barrier_data(I3), [])


def test_u0_is_critical_solution_in_f_minus_random():
    for seed in range(30):
        space = gen_random(GeneratorSpec(n=2 + seed % 6, seed=seed))
        b, ext, sel = select(space)
        assert discounted_residual(space, sel.u0, None, b.alpha) == 0
        assert f_minus_member(space, b.alpha, sel.u0, ext).ok


def test_f_minus_rejections(I3):
    b, ext, _ = select(I3)
    above = f_minus_member(I3, 0, [1, 3], ext)
    assert not above.ok and "integral" in above.reason
    bad = f_minus_member(I3, 0, [0, 10], ext)
    assert not bad.ok and bad.reason == "not a subsolution"


def test_samplers_produce_members():
    rng = random.Random(5)
    space = gen_random(GeneratorSpec(n=5, seed=3))
    b, ext, sel = select(space)
    for w in sample_subsolutions(space, b, 30, rng):
        assert check_subsolution(space, w, None, b.alpha).ok
    for w in sample_f_minus(space, b, ext, 30, rng):
        assert f_minus_member(space, b.alpha, w, ext).ok
        assert all(a <= c for a, c in zip(w, sel.u0))
    for w in sample_supersolutions(space, b, 30, rng):
        assert check_supersolution(space, w, None, b.alpha).ok


def test_key_inequality(I3):
    b, ext, sel = select(I3)
    assert key_inequality_check(I3, b, sel.u0, [-3, -1], ext)
    with pytest.raises(ComparisonError):
        key_inequality_check(I3, b, sel.u0, [0, 10], ext)


def test_max_principle(I3):
    b = barrier_data(I3)
    assert max_principle_check(I3, 0, b, [-1, 1], [0, 2])
    with pytest.raises(ComparisonError, match="Aubry"):
        max_principle_check(I3, 0, b, [1, 3], [0, 2])


def test_default_schedule(I3):
    sched = default_schedule(I3)
    assert len(sched) == 20 and sched[0] == F(1, 2) and sched[-1] == 1 - F(1, 2 ** 20)
    assert default_schedule(I3.with_mode(FLOAT))[1] == 0.75


@pytest.mark.parametrize("name", ["I1", "I2", "I3"])
def test_sweep_exact_on_canonical(name, request):
    space = request.getfixturevalue(name)
    report = convergence_sweep(space)
    assert report.ok
    assert all(e == 0 for e in report.errors())
    assert all(r.residual == 0 for r in report.rows)


def test_sweep_validates_schedule(I3):
    with pytest.raises(ValueError):
        convergence_sweep(I3, schedule=[F(1, 2), F(1, 4)])
    with pytest.raises(ValueError):
        convergence_sweep(I3, schedule=[F(1, 2), 1])


def test_sweep_threads_match_serial(monkeypatch):
    space = gen_random(GeneratorSpec(n=4, seed=2))
    sched = [F(1, 2), F(3, 4), F(7, 8)]
    serial = convergence_sweep(space, schedule=sched)
    monkeypatch.setenv("WEAKKAM_THREADS", "3")
    threaded = convergence_sweep(space, schedule=sched)
    assert serial.rows == threaded.rows


def test_sweep_error_decays_linearly():
    space = gen_random(GeneratorSpec(n=4, seed=1))
    report = convergence_sweep(space)
    errs = report.errors()
    assert report.tail_non_increasing()
    # error ~ C (1 - lam): halves with every schedule step once past the transient
    nonzero = [e for e in errs[-5:] if e]
    assert all(b <= a for a, b in zip(nonzero, nonzero[1:]))


def test_sweep_float_mode():
    space = gen_random(GeneratorSpec(n=3, seed=4)).with_mode(FLOAT)
    report = convergence_sweep(space, SolverConfig(), schedule=[0.5, 0.75, 0.875])
    assert report.ok and all(r.residual <= 1e-9 for r in report.rows)
