"""JSON encoding of matrices and channels.

Matrix documents are {"dim": n, "entries": [[re, im], ...]} with entries
row-major, length n*n.  Rectangular blocks (Kraus operators of a
dim-changing channel) replace "dim" with "rows"/"cols".  Channels are
{"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}.  Files written by
the CLI wrap these in a document carrying "schema": 1.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

SCHEMA_VERSION = 1


def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim {a.ndim}")
    entries = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    rows, cols = a.shape
    if rows == cols:
        return {"dim": rows, "entries": entries}
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValidationError(f"matrix document must be an object, got {type(obj).__name__}")
    if "dim" in obj:
        rows = cols = _as_dim(obj["dim"], "dim")
    elif "rows" in obj and "cols" in obj:
        rows = _as_dim(obj["rows"], "rows")
        cols = _as_dim(obj["cols"], "cols")
    else:
        raise ValidationError("matrix document needs 'dim' or 'rows'/'cols'")
    entries = obj.get("entries")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise ValidationError(f"'entries' must be a list of {rows * cols} [re, im] pairs")
    flat = np.empty(rows * cols, dtype=complex)
    for k, pair in enumerate(entries):
        if (not isinstance(pair, (list, tuple))) or len(pair) != 2:
            raise ValidationError(f"entry {k} is not an [re, im] pair: {pair!r}")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    return flat.reshape(rows, cols)


def channel_to_json(kraus: list[np.ndarray]) -> dict:
    if not kraus:
        raise ValidationError("a channel needs at least one Kraus operator")
    dim_out, dim_in = np.asarray(kraus[0]).shape
    return {
        "dim_in": int(dim_in),
        "dim_out": int(dim_out),
        "kraus": [matrix_to_json(a) for a in kraus],
    }


def channel_from_json(obj: dict) -> list[np.ndarray]:
    if not isinstance(obj, dict):
        raise ValidationError("channel document must be an object")
    dim_in = _as_dim(obj.get("dim_in"), "dim_in")
    dim_out = _as_dim(obj.get("dim_out"), "dim_out")
    kraus_docs = obj.get("kraus")
    if not isinstance(kraus_docs, list) or not kraus_docs:
        raise ValidationError("'kraus' must be a non-empty list of matrices")
    kraus = []
    for k, doc in enumerate(kraus_docs):
        a = matrix_from_json(doc)
        if a.shape != (dim_out, dim_in):
            raise ValidationError(f"kraus[{k}] has shape {a.shape}, "
                                  f"expected ({dim_out}, {dim_in})")
        kraus.append(a)
    return kraus


def vector_to_json(v: np.ndarray) -> list[float]:
    return [float(x) for x in np.asarray(v, dtype=float).reshape(-1)]


def vector_from_json(obj, name: str = "vector") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValidationError(f"'{name}' must be a non-empty list of reals")
    try:
        return np.asarray([float(x) for x in obj], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"'{name}' has a non-numeric entry: {exc}") from exc


def _as_dim(value, field: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ValidationError(f"'{field}' must be a positive integer, got {value!r}")
    return value
