"""Deterministic JSON and CSV serialization.

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly, so re-reading an artifact reproduces bit-identical
numbers and identical inputs produce byte-identical files. Complex
matrices are stored row-major as [re, im] pairs.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .channels import ChoiMatrix, CptpReport, QuantumChannel, kraus_from_choi
from .minimum import MinEstimate, StateNet
from .sampling import ConcentrationBound, FidelityStats, RngSpec


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"  # keep the token a float on re-parse
    return s


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _emit(value, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: fixed float format, insertion-ordered keys."""
    out: list = []
    _emit(obj, out)
    return "".join(out)


def canonical_hash(obj) -> str:
    """sha256 over the canonical serialization, as a hex digest."""
    return hashlib.sha256(dumps_canonical(obj).encode("utf-8")).hexdigest()


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"malformed JSON in {path}: {err}") from None


def matrix_to_pairs(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(rows, field: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValueError(f"field {field!r}: expected a non-empty list of rows")
    width = None
    data = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or (width is not None and len(row) != width):
            raise ValueError(f"field {field!r}: row {i} is not a list of width {width}")
        width = len(row)
        line = []
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ValueError(
                    f"field {field!r}: entry ({i},{j}) is not an [re, im] pair"
                )
            line.append(complex(float(entry[0]), float(entry[1])))
        data.append(line)
    return np.asarray(data, dtype=complex)


def vector_to_pairs(v) -> list:
    v = np.asarray(v, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in v]


def pairs_to_vector(entries, field: str) -> np.ndarray:
    matrix = pairs_to_matrix([entries], field)
    return matrix[0]


def _require(data: dict, field: str):
    if not isinstance(data, dict):
        raise ValueError(f"expected a JSON object, got {type(data).__name__}")
    if field not in data:
        raise ValueError(f"missing field {field!r}")
    return data[field]


def _positive_int(data: dict, field: str) -> int:
    value = _require(data, field)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"field {field!r}: expected a positive integer, got {value!r}")
    return value


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_pairs(op) for op in ch.kraus],
    }


def channel_from_dict(data: dict) -> QuantumChannel:
    dim_in = _positive_int(data, "dim_in")
    dim_out = _positive_int(data, "dim_out")
    raw = _require(data, "kraus")
    if not isinstance(raw, list) or not raw:
        raise ValueError("field 'kraus': expected a non-empty list of matrices")
    ops = []
    for i, entry in enumerate(raw):
        op = pairs_to_matrix(entry, f"kraus[{i}]")
        if op.shape != (dim_out, dim_in):
            raise ValueError(
                f"field 'kraus[{i}]': expected shape {dim_out}x{dim_in}, got "
                f"{op.shape[0]}x{op.shape[1]}"
            )
        ops.append(op)
    return QuantumChannel(dim_in=dim_in, dim_out=dim_out, kraus=tuple(ops))


def choi_to_dict(choi: ChoiMatrix) -> dict:
    return {
        "dim_in": choi.dim_in,
        "dim_out": choi.dim_out,
        "choi": matrix_to_pairs(choi.matrix),
    }


def choi_from_dict(data: dict) -> ChoiMatrix:
    dim_in = _positive_int(data, "dim_in")
    dim_out = _positive_int(data, "dim_out")
    matrix = pairs_to_matrix(_require(data, "choi"), "choi")
    n = dim_in * dim_out
    if matrix.shape != (n, n):
        raise ValueError(
            f"field 'choi': expected shape {n}x{n}, got {matrix.shape[0]}x{matrix.shape[1]}"
        )
    return ChoiMatrix(dim_in=dim_in, dim_out=dim_out, matrix=matrix)


def load_operator(path):
    """Read a channel file in either Kraus or Choi form."""
    data = read_json(path)
    if isinstance(data, dict) and "kraus" in data:
        return channel_from_dict(data)
    if isinstance(data, dict) and "choi" in data:
        return choi_from_dict(data)
    raise ValueError(f"{path}: neither 'kraus' nor 'choi' field present")


def load_channel(path) -> QuantumChannel:
    """Read a channel file, extracting Kraus operators if stored as Choi."""
    obj = load_operator(path)
    if isinstance(obj, ChoiMatrix):
        return kraus_from_choi(obj)
    return obj


def unitary_to_dict(u) -> dict:
    return {"unitary": matrix_to_pairs(u)}


def unitary_from_dict(data: dict) -> np.ndarray:
    m = pairs_to_matrix(_require(data, "unitary"), "unitary")
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"field 'unitary': expected a square matrix, got {m.shape}")
    return m


def state_to_dict(v) -> dict:
    return {"state": vector_to_pairs(v)}


def state_from_dict(data: dict) -> np.ndarray:
    v = pairs_to_vector(_require(data, "state"), "state")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"field 'state': norm {norm:.12g} is not 1")
    return v


def net_to_dict(net: StateNet) -> dict:
    return {
        "d": net.d,
        "epsilon": net.epsilon,
        "metric_id": net.metric_id,
        "states": [vector_to_pairs(s) for s in net.states],
        "coverage_confidence": net.coverage_confidence,
        "seed": net.seed,
    }


def net_from_dict(data: dict) -> StateNet:
    d = _positive_int(data, "d")
    epsilon = float(_require(data, "epsilon"))
    metric_id = _require(data, "metric_id")
    if metric_id != "euclidean":
        raise ValueError(f"field 'metric_id': unknown metric {metric_id!r}")
    raw = _require(data, "states")
    if not isinstance(raw, list) or not raw:
        raise ValueError("field 'states': expected a non-empty list")
    states = []
    for i, entry in enumerate(raw):
        v = pairs_to_vector(entry, f"states[{i}]")
        if len(v) != d:
            raise ValueError(f"field 'states[{i}]': expected length {d}, got {len(v)}")
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-12:
            raise ValueError(f"field 'states[{i}]': not a unit vector")
        states.append(v)
    return StateNet(
        d=d,
        epsilon=epsilon,
        metric_id=metric_id,
        states=np.asarray(states),
        coverage_confidence=float(_require(data, "coverage_confidence")),
        seed=int(_require(data, "seed")),
    )


def rng_spec_to_dict(spec: RngSpec) -> dict:
    return {"seed": spec.seed, "algorithm_id": spec.algorithm_id}


def stats_to_dict(stats: FidelityStats) -> dict:
    return {
        "n": stats.n,
        "mean": stats.mean,
        "variance": stats.variance,
        "min": stats.min,
        "max": stats.max,
        "stderr": stats.stderr,
        "seed": rng_spec_to_dict(stats.seed),
    }


def cptp_report_to_dict(report: CptpReport) -> dict:
    return {
        "is_cp": report.is_cp,
        "is_tp": report.is_tp,
        "min_eigenvalue": report.min_eigenvalue,
        "tp_residual": report.tp_residual,
        "hermiticity_gap": report.hermiticity_gap,
        "tolerance": report.tolerance,
    }


def concentration_to_dict(bound: ConcentrationBound) -> dict:
    return {
        "d": bound.d,
        "epsilon": bound.epsilon,
        "K": bound.K,
        "two_sided_bound": bound.two_sided_bound,
        "one_sided_bound": bound.one_sided_bound,
    }


def min_estimate_to_dict(est: MinEstimate) -> dict:
    return {
        "net_min": est.net_min,
        "lipschitz_lower_bound": est.lipschitz_lower_bound,
        "argmin_state": vector_to_pairs(est.argmin_state),
        "method": est.method,
    }


def write_csv(path, rows, columns) -> None:
    """Write dict rows in a fixed column order with deterministic floats."""
    def cell(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return _fmt_float(float(value))
        return str(value)

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(cell(row[c]) for c in columns) + "\n")
