import math
from fractions import Fraction

import pytest

from weakkam import brute_cn, brute_min_mean_cycle, path_cost, validate_space
from weakkam.core import (
    FLOAT,
    CostSpace,
    InstanceError,
    OracleLimitError,
    SolverConfig,
    elementary_cycles,
    parse_scalar,
)


def test_validate_single_point(I1):
    assert I1.n == 1
    assert I1.cost == ((Fraction(5),),)
    assert I1.labels == ("0",)


def test_validate_two_points(I3):
    assert I3.n == 2
    assert I3.cost[1][0] == 3


@pytest.mark.parametrize(
    "labels, cost, message",
    [
        (None, [[1, 2, 3], [4, 5, 6]], "non-square"),
        (None, [], "zero points"),
        (None, [[1, float("nan")], [0, 0]], "non-finite"),
        (None, [[1, "inf"], [0, 0]], "non-finite"),
        (["a", "a"], [[1, 2], [3, 4]], "duplicate label"),
    ],
)
def test_validate_rejects(labels, cost, message):
    with pytest.raises(InstanceError, match=message):
        validate_space(labels, cost)


def test_validate_float_mode_rejects_inf():
    with pytest.raises(InstanceError, match="non-finite"):
        validate_space(None, [[math.inf]], FLOAT)


def test_parse_scalar_modes():
    assert parse_scalar("3/6", "rational") == Fraction(1, 2)
    assert parse_scalar(0.5, "rational") == Fraction(1, 2)
    assert parse_scalar("1/4", FLOAT) == 0.25
    assert isinstance(parse_scalar(2, FLOAT), float)
    with pytest.raises(InstanceError):
        parse_scalar("1/0", "rational")


def test_mode_round_trip_is_exact(I3):
    back = I3.with_mode(FLOAT).with_mode("rational")
    assert back == I3


@pytest.mark.parametrize("path, expected", [((0, 1), 2), ((1, 0, 1), 5)])
def test_path_cost_I3(I3, path, expected):
    assert path_cost(I3, path) == expected


def test_path_cost_I1(I1):
    assert path_cost(I1, (0, 0, 0)) == 10


def test_path_cost_needs_a_step(I1):
    with pytest.raises(ValueError):
        path_cost(I1, (0,))


def test_brute_cn_examples(I1, I2, I3):
    # two-step loops at 1 in I3: 1->0->1 costs 5, 1->1->1 costs 2
    assert brute_cn(I3, 1, 1, 2) == 2
    assert brute_cn(I2, 0, 0, 2) == 0
    assert brute_cn(I1, 0, 0, 3) == 15


def test_brute_cn_cap():
    big = validate_space(None, [[0] * 7 for _ in range(7)])
    with pytest.raises(OracleLimitError, match="min_plus_power"):
        brute_cn(big, 0, 0, 2)


@pytest.mark.parametrize("name", ["I2", "I3"])
def test_brute_cn_subadditive_exhaustive(name, request):
    space = request.getfixturevalue(name)
    n = space.n
    for x in range(n):
        for z in range(n):
            for s in range(1, 4):
                for t in range(1, 4):
                    lhs = brute_cn(space, x, z, s + t)
                    for y in range(n):
                        assert lhs <= brute_cn(space, x, y, s) + brute_cn(space, y, z, t)


def test_path_cost_additive(I3):
    a, b = (0, 1, 1, 0), (0, 0, 1)
    assert path_cost(I3, a + b[1:]) == path_cost(I3, a) + path_cost(I3, b)


def test_brute_min_mean_cycle_examples(I1, I2, I3):
    assert brute_min_mean_cycle(I1) == (5, (0, 0))
    assert brute_min_mean_cycle(I2) == (0, (0, 1, 0))
    assert brute_min_mean_cycle(I3) == (0, (0, 0))


def test_brute_min_mean_cycle_tie_breaks_shortest_then_lexicographic():
    # loop at 1 and the 2-cycle both have mean 0; the loop is shorter
    space = validate_space(None, [[3, 0], [0, 0]])
    assert brute_min_mean_cycle(space) == (0, (1, 1))
    flat = validate_space(None, [[0, 0], [0, 0]])
    assert brute_min_mean_cycle(flat) == (0, (0, 0))


def test_elementary_cycle_count():
    # sum_k C(n,k) (k-1)! elementary cycles in the complete digraph with loops
    for n in range(1, 7):
        expected = sum(math.comb(n, k) * math.factorial(k - 1) for k in range(1, n + 1))
        assert len(list(elementary_cycles(n))) == expected


def test_brute_min_mean_cycle_cap():
    with pytest.raises(OracleLimitError):
        brute_min_mean_cycle(validate_space(None, [[0] * 9 for _ in range(9)]))


def test_rational_operations_are_reproducible(I3):
    assert brute_cn(I3, 1, 0, 4) == brute_cn(I3, 1, 0, 4)
    assert repr(brute_min_mean_cycle(I3)) == repr(brute_min_mean_cycle(I3))


def test_solver_config():
    cfg = SolverConfig()
    rat = validate_space(None, [[1]])
    flt = validate_space(None, [[-3.0]], FLOAT)
    assert cfg.eps_for(rat) == 0
    assert cfg.eps_for(flt) == pytest.approx(4e-6)
    with pytest.raises(ValueError):
        SolverConfig(aubry_eps=1e-3).eps_for(rat)
    with pytest.raises(ValueError):
        SolverConfig(tol=0)


def test_cost_space_is_immutable(I1):
    with pytest.raises(Exception):
        I1.mode = FLOAT
    assert isinstance(I1, CostSpace)
