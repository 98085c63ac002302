"""JSON and CSV encodings for instances, solutions, barriers, measures and sweeps.

Rationals are written as ``"p/q"`` strings (``"5"`` when integral) so a
round trip through JSON is exact; floats are written as JSON numbers.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, List

from .core import FLOAT, RATIONAL, CostSpace, InstanceError, parse_scalar, validate_space
from .critical import BarrierData
from .lax_oleinik import DiscountedSolution
from .mather import CycleMeasure, EdgeMeasure, edge_measure
from .selection import SelectionResult, SweepReport


def encode(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    raise TypeError(f"cannot encode {value!r}")


def encode_vector(values) -> List:
    return [encode(v) for v in values]


def encode_matrix(rows) -> List[List]:
    return [encode_vector(r) for r in rows]


def decode_vector(values, mode: str) -> List:
    return [parse_scalar(v, mode) for v in values]


def decode_matrix(rows, mode: str) -> List[List]:
    return [decode_vector(r, mode) for r in rows]


def exact_decimal(value: Fraction) -> str | None:
    """Terminating decimal expansion of ``value``, or None if it does not terminate."""
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    digits = max(twos, fives)
    scaled = abs(value.numerator) * 10 ** digits // value.denominator
    sign = "-" if value < 0 else ""
    if digits == 0:
        return f"{sign}{scaled}"
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def csv_scalar(value, rational: str = "decimal") -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        if rational == "decimal":
            dec = exact_decimal(value)
            if dec is not None:
                return dec
        return str(value)
    return repr(value)


# instances

def space_to_dict(space: CostSpace) -> Dict[str, Any]:
    return {"labels": list(space.labels), "mode": space.mode, "cost": encode_matrix(space.cost)}


def space_from_dict(data: Dict[str, Any], mode: str | None = None) -> CostSpace:
    if "cost" not in data:
        raise InstanceError("instance JSON needs a 'cost' field")
    stored = data.get("mode", RATIONAL)
    space = validate_space(data.get("labels"), data["cost"], stored)
    return space.with_mode(mode) if mode else space


def load_space(path: str, mode: str | None = None) -> CostSpace:
    with open(path) as fh:
        return space_from_dict(json.load(fh), mode)


# value functions and solutions

def values_to_dict(values) -> Dict[str, Any]:
    return {"values": encode_vector(values)}


def values_from_dict(data, mode: str) -> List:
    return decode_vector(data["values"], mode)


def solution_to_dict(sol: DiscountedSolution) -> Dict[str, Any]:
    return {
        "values": encode_vector(sol.u),
        "iterations": sol.iterations,
        "residual": encode(sol.residual),
        "argmin_map": list(sol.argmin_map),
        "lambda": encode(sol.lam),
        "beta": encode(sol.beta),
    }


def solution_from_dict(data, mode: str) -> DiscountedSolution:
    return DiscountedSolution(
        u=tuple(decode_vector(data["values"], mode)),
        iterations=int(data["iterations"]),
        residual=parse_scalar(data["residual"], mode),
        argmin_map=tuple(int(i) for i in data["argmin_map"]),
        lam=parse_scalar(data["lambda"], mode),
        beta=parse_scalar(data["beta"], mode),
    )


# barrier data

def barrier_to_dict(b: BarrierData) -> Dict[str, Any]:
    return {
        "alpha": encode(b.alpha),
        "phi": encode_matrix(b.phi),
        "h": encode_matrix(b.h),
        "aubry": sorted(b.aubry),
        "critical_edges": [list(e) for e in sorted(b.critical_edges)],
    }


def barrier_from_dict(data, mode: str) -> BarrierData:
    return BarrierData(
        alpha=parse_scalar(data["alpha"], mode),
        phi=tuple(map(tuple, decode_matrix(data["phi"], mode))),
        h=tuple(map(tuple, decode_matrix(data["h"], mode))),
        aubry=frozenset(int(z) for z in data["aubry"]),
        critical_edges=frozenset((int(y), int(x)) for y, x in data["critical_edges"]),
    )


# measures

def measure_to_dict(mu) -> Dict[str, Any]:
    if isinstance(mu, CycleMeasure):
        out = measure_to_dict(mu.measure)
        out["cycle"] = list(mu.cycle)
        return out
    return {"weights": encode_matrix(mu.weights), "closed": mu.closed}


def measure_from_dict(data, mode: str):
    mu = edge_measure(decode_matrix(data["weights"], mode))
    if "closed" in data and bool(data["closed"]) != mu.closed:
        raise ValueError("stored 'closed' flag disagrees with the weights")
    if "cycle" in data:
        return CycleMeasure(tuple(int(i) for i in data["cycle"]), mu)
    return mu


def selection_to_dict(sel: SelectionResult) -> Dict[str, Any]:
    return {
        "u0": encode_vector(sel.u0),
        "per_measure": [
            dict(measure_to_dict(cm), h_mu=encode_vector(hm)) for cm, hm in sel.per_measure
        ],
        "argmin_measure": list(sel.argmin_measure),
    }


def selection_from_dict(data, mode: str) -> SelectionResult:
    rows = []
    for item in data["per_measure"]:
        rows.append((measure_from_dict(item, mode), tuple(decode_vector(item["h_mu"], mode))))
    return SelectionResult(
        u0=tuple(decode_vector(data["u0"], mode)),
        per_measure=tuple(rows),
        argmin_measure=tuple(int(i) for i in data["argmin_measure"]),
    )


# sweep

SWEEP_COLUMNS = ("lambda", "sup_error", "residual", "iterations", "alpha_hat", "occupation_defect")


def sweep_to_csv(report: SweepReport, rational: str = "decimal") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in report.rows:
        writer.writerow([
            csv_scalar(row.lam, rational),
            csv_scalar(row.sup_error, rational),
            csv_scalar(row.residual, rational),
            "" if row.iterations is None else str(row.iterations),
            csv_scalar(row.alpha_hat, rational),
            csv_scalar(row.occupation_defect, rational),
        ])
    return buf.getvalue()


def sweep_from_csv(text: str, mode: str) -> List[Dict[str, Any]]:
    """Parse a sweep CSV back into dicts of scalars (empty cells become None)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for key in SWEEP_COLUMNS:
            cell = rec[key]
            if cell == "":
                row[key] = None
            elif key == "iterations":
                row[key] = int(cell)
            else:
                row[key] = parse_scalar(cell, mode)
        out.append(row)
    return out


def dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".weakkam-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
