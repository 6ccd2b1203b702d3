"""JSON wire formats.

Every complex matrix travels as ``{"rows", "cols", "data": [[re, im], ...]}``
in row-major order. Subspaces, channels, codes, search configurations and
reports are built from that one form.
"""

import json

import numpy as np

from .channel import QuantumChannel
from .subspace import span
from .unext import ExtendibilityReport, RankOneWitness, SearchConfig

__all__ = [
    "channel_from_json",
    "channel_to_json",
    "code_from_json",
    "code_to_json",
    "config_from_json",
    "dump",
    "load",
    "matrix_from_json",
    "matrix_to_json",
    "report_from_json",
    "report_to_json",
    "subspace_from_json",
    "subspace_to_json",
    "vector_from_json",
    "vector_to_json",
]


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj):
    try:
        r, c = int(obj["rows"]), int(obj["cols"])
        data = np.asarray(obj["data"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if data.shape != (r * c, 2):
        raise ValueError(f"matrix JSON holds {data.shape[0]} entries, expected {r * c}")
    return (data[:, 0] + 1j * data[:, 1]).reshape(r, c)


def vector_to_json(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def vector_from_json(obj):
    data = np.asarray(obj, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("vector JSON must be a list of [re, im] pairs")
    return data[:, 0] + 1j * data[:, 1]


def subspace_to_json(s):
    return {"ambient_dim": s.ambient_dim, "basis": [matrix_to_json(b) for b in s.basis]}


def subspace_from_json(obj):
    """Returns ``(subspace, numerical_rank)``; the basis is re-orthonormalized."""
    try:
        d = int(obj["ambient_dim"])
        gens = [matrix_from_json(b) for b in obj["basis"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed subspace JSON: {exc}") from exc
    s = span(gens, d)
    return s, s.dim


def channel_to_json(c):
    return {
        "dim_in": c.dim_in,
        "dim_out": c.dim_out,
        "kraus": [matrix_to_json(k) for k in c.kraus],
        "trace_preserving": bool(c.trace_preserving),
    }


def channel_from_json(obj):
    try:
        kraus = np.stack([matrix_from_json(k) for k in obj["kraus"]])
        din, dout = int(obj["dim_in"]), int(obj["dim_out"])
        tp = bool(obj.get("trace_preserving", True))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed channel JSON: {exc}") from exc
    if kraus.shape[1:] != (dout, din):
        raise ValueError(f"Kraus shape {kraus.shape[1:]} disagrees with ({dout}, {din})")
    return QuantumChannel(kraus, trace_preserving=tp)


def code_to_json(codewords, uses):
    return {"uses": int(uses), "codewords": [vector_to_json(w) for w in codewords]}


def code_from_json(obj):
    try:
        return [vector_from_json(w) for w in obj["codewords"]], int(obj.get("uses", 1))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed code JSON: {exc}") from exc


def report_to_json(r):
    return r.to_dict()


def report_from_json(obj):
    w = obj.get("witness")
    witness = None
    if w is not None:
        witness = RankOneWitness(
            vector_from_json(w["psi"]), vector_from_json(w["phi"]), float(w["residual"])
        )
    return ExtendibilityReport(
        verdict=obj["verdict"],
        witness=witness,
        min_residual=obj.get("min_residual"),
        restarts=obj.get("restarts", 0),
        seed=obj.get("seed", 0),
        structural_rule=obj.get("structural_rule"),
        max_iters=obj.get("max_iters", 0),
        max_increase=obj.get("max_increase", 0.0),
        notes=list(obj.get("notes", [])),
    )


def config_from_json(obj):
    return SearchConfig.from_dict(obj)


def dump(obj, path):
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def load(path):
    with open(path) as fh:
        return json.load(fh)
