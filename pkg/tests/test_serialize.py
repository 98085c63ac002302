import json
from fractions import Fraction as F

from weakkam import FLOAT, GeneratorSpec, barrier_data, gen_random, solve_discounted
from weakkam import serialize as s
from weakkam.selection import convergence_sweep, select


def roundtrip(data):
    return json.loads(s.dumps(data))


def test_encode():
    assert s.encode(F(3, 4)) == "3/4"
    assert s.encode(F(5)) == "5"
    assert s.encode(0.5) == 0.5


def test_exact_decimal():
    assert s.exact_decimal(F(1, 8)) == "0.125"
    assert s.exact_decimal(F(-3, 20)) == "-0.15"
    assert s.exact_decimal(F(7)) == "7"
    assert s.exact_decimal(F(1, 3)) is None
    assert s.csv_scalar(F(1, 3)) == "1/3"
    assert s.csv_scalar(F(1, 4), "fraction") == "1/4"


def test_space_round_trip():
    space = gen_random(GeneratorSpec(n=4, seed=9))
    assert s.space_from_dict(roundtrip(s.space_to_dict(space))) == space
    flt = space.with_mode(FLOAT)
    assert s.space_from_dict(roundtrip(s.space_to_dict(flt))) == flt


def test_solution_round_trip(I3):
    sol = solve_discounted(I3, F(1, 4), 0)
    assert s.solution_from_dict(roundtrip(s.solution_to_dict(sol)), "rational") == sol


def test_barrier_and_selection_round_trip():
    space = gen_random(GeneratorSpec(n=5, seed=4))
    b, ext, sel = select(space)
    assert s.barrier_from_dict(roundtrip(s.barrier_to_dict(b)), "rational") == b
    for cm in ext:
        assert s.measure_from_dict(roundtrip(s.measure_to_dict(cm)), "rational") == cm
    assert s.selection_from_dict(roundtrip(s.selection_to_dict(sel)), "rational") == sel


def test_sweep_csv_round_trip(I3):
    report = convergence_sweep(I3, schedule=[F(1, 2), F(3, 4), F(9, 10)])
    text = s.sweep_to_csv(report)
    assert text.splitlines()[0] == ",".join(s.SWEEP_COLUMNS)
    rows = s.sweep_from_csv(text, "rational")
    assert [r["lambda"] for r in rows] == [F(1, 2), F(3, 4), F(9, 10)]
    assert all(r["sup_error"] == 0 for r in rows)


def test_write_atomic(tmp_path):
    path = tmp_path / "out.json"
    s.write_atomic(str(path), "x\n")
    s.write_atomic(str(path), "y\n")
    assert path.read_text() == "y\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
