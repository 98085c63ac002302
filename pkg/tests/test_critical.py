from fractions import Fraction as F

import pytest

from weakkam import (
    FLOAT,
    SolverConfig,
    aubry_set,
    barrier_data,
    brute_cn,
    brute_min_mean_cycle,
    critical_graph,
    critical_value_discounted_estimate,
    critical_value_karp,
    mane_potential,
    min_plus_power,
    peierls_barrier,
    peierls_liminf_oracle,
    validate_space,
    weak_kam_solution,
)
from weakkam.critical import AubryError, NegativeCycleError, min_plus_product
from weakkam.instances import GeneratorSpec, gen_random
from weakkam.lax_oleinik import discounted_residual


def random_space(seed, n=None):
    return gen_random(GeneratorSpec(n=n or 2 + seed % 5, seed=seed))


def test_min_plus_product():
    assert min_plus_product([[0, 2], [3, 1]], [[0, 2], [3, 1]]) == [[0, 2], [3, 2]]


@pytest.mark.parametrize("steps", [1, 2, 3, 5])
def test_min_plus_power_matches_brute(I3, steps):
    power = min_plus_power(I3, steps)
    for x in range(2):
        for y in range(2):
            assert power[x][y] == brute_cn(I3, x, y, steps)


def test_min_plus_power_random_against_brute():
    for seed in range(10):
        space = random_space(seed, n=3)
        power = min_plus_power(space, 4)
        assert all(power[x][y] == brute_cn(space, x, y, 4) for x in range(3) for y in range(3))


def test_karp_examples(I1, I2, I3):
    assert critical_value_karp(I1) == -5
    assert critical_value_karp(I2) == 0
    assert critical_value_karp(I3) == 0


def test_karp_matches_brute_on_random():
    for seed in range(30):
        space = random_space(seed)
        assert critical_value_karp(space) == -brute_min_mean_cycle(space)[0]


def test_karp_independent_of_root():
    space = random_space(7, n=5)
    values = {critical_value_karp(space, root=r) for r in range(5)}
    assert len(values) == 1


def test_discounted_estimate_brackets_alpha(I3):
    for k in (2, 6, 10):
        lam = 1 - F(1, 2 ** k)
        hat, bound = critical_value_discounted_estimate(I3, lam)
        assert abs(hat - 0) <= bound
    hat, _ = critical_value_discounted_estimate(I1 := validate_space(None, [[5]]), F(1, 2))
    assert hat == -5 and I1.n == 1


def test_mane_potential_I3(I3):
    assert mane_potential(I3, 0) == [[0, 2], [3, 1]]


def test_mane_potential_rejects_alpha_below_critical(I3):
    with pytest.raises(NegativeCycleError):
        mane_potential(I3, F(-1, 10))


def test_aubry_and_barrier_I3(I3):
    phi = mane_potential(I3, 0)
    aubry = aubry_set(I3, 0, phi)
    assert aubry == {0}
    assert peierls_barrier(I3, 0, phi, aubry) == [[0, 2], [3, 5]]
    assert critical_graph(I3, 0, phi) == {(0, 0)}


def test_aubry_wrong_alpha_is_reported(I3):
    # above the critical value every shifted cycle is positive
    phi = mane_potential(I3, 1)
    with pytest.raises(AubryError):
        aubry_set(I3, 1, phi)


def test_barrier_data_I1_I2(I1, I2):
    b1 = barrier_data(I1)
    assert b1.alpha == -5 and b1.h == ((0,),) and b1.aubry == {0}
    b2 = barrier_data(I2)
    assert b2.aubry == {0, 1}
    assert b2.h == ((0, 0), (0, 0))
    assert b2.critical_edges == {(0, 1), (1, 0)}


@pytest.mark.parametrize("name", ["I1", "I2", "I3"])
def test_liminf_oracle_matches_barrier(name, request):
    space = request.getfixturevalue(name)
    b = barrier_data(space)
    assert peierls_liminf_oracle(space, b.alpha, 60, 4) == [list(r) for r in b.h]


def test_liminf_oracle_off_critical_drifts(I3):
    low = peierls_liminf_oracle(I3, F(-1, 2), 60, 2)
    assert low[0][0] <= -29
    with pytest.raises(ValueError):
        peierls_liminf_oracle(I3, 0, 5, 5)


def test_weak_kam_solution_is_fixed_point(I3):
    b = barrier_data(I3)
    u = weak_kam_solution(I3, b, 0)
    assert u == [0, 2]
    assert apply_T_zero_residual(I3, u, b.alpha)
    with pytest.raises(AubryError):
        weak_kam_solution(I3, b, 1)


def apply_T_zero_residual(space, u, alpha):
    from weakkam import apply_T

    return apply_T(space, u) == [a - alpha for a in u] or all(
        a == t + alpha for a, t in zip(u, apply_T(space, u))
    )


def test_barrier_invariants_random():
    for seed in range(25):
        space = random_space(seed)
        b = barrier_data(space)
        n = space.n
        for z in b.aubry:
            assert b.h[z][z] == 0
            assert discounted_residual(space, b.h[z], None, b.alpha) == 0
        for x in range(n):
            for y in range(n):
                assert b.h[x][y] >= b.phi[x][y]
                for z in range(n):
                    assert b.h[x][y] <= b.h[x][z] + b.phi[z][y]
        # every critical edge joins Aubry points
        assert all(y in b.aubry and x in b.aubry for y, x in b.critical_edges)


def test_float_barrier_close_to_exact():
    space = random_space(3, n=5)
    exact = barrier_data(space)
    approx = barrier_data(space.with_mode(FLOAT), SolverConfig())
    assert approx.aubry == exact.aubry
    assert approx.critical_edges == exact.critical_edges
    assert max(abs(float(a) - b) for ra, rb in zip(exact.h, approx.h) for a, b in zip(ra, rb)) < 1e-9
