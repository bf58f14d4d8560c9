"""Plain-text LP matrix format.

Grammar (one item per line, ``#`` starts a comment, blank lines ignored)::

    vars <n> constraints <m> sense min|max
    obj j:coeff j:coeff ...
    <i>: j:coeff j:coeff ... <rel> <rhs>        (m lines, rel in <= >= =)
    bound j <lower> <upper>                     (only non-default bounds)

Indices are 0-based.  Default bounds are ``[0, inf)``; ``inf``/``-inf``
are written literally.  Floats are written with ``repr`` so every value
round-trips exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .lp import LinearProgram


class LPFormatError(ValueError):
    pass


def _terms(idx, vals) -> str:
    return " ".join(f"{int(j)}:{float(v)!r}" for j, v in zip(idx, vals))


def dumps(lp: LinearProgram) -> str:
    lines = [f"vars {lp.num_vars} constraints {lp.num_rows} sense {lp.sense}"]
    c = lp.objective
    nz = np.flatnonzero(c)
    lines.append(("obj " + _terms(nz, c[nz])).rstrip())
    A = lp.A.tocsr()
    for i in range(lp.num_rows):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        body = _terms(A.indices[lo:hi], A.data[lo:hi])
        lines.append(f"{i}: {body} {lp.relations[i]} {float(lp.rhs[i])!r}".replace("  ", " "))
    for j in range(lp.num_vars):
        lo, hi = float(lp.lower[j]), float(lp.upper[j])
        if lo != 0.0 or hi != np.inf:
            lines.append(f"bound {j} {lo!r} {hi!r}")
    return "\n".join(lines) + "\n"


def _term(tok: str, n: int, lineno: int) -> tuple[int, float]:
    try:
        j, v = tok.split(":")
        j, v = int(j), float(v)
    except ValueError as exc:
        raise LPFormatError(f"line {lineno}: bad term {tok!r}") from exc
    if not 0 <= j < n:
        raise LPFormatError(f"line {lineno}: index {j} out of range")
    return j, v


def loads(text: str) -> LinearProgram:
    lines = [(k + 1, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise LPFormatError("empty LP file")
    k, head = lines[0]
    tok = head.split()
    if len(tok) != 6 or tok[0] != "vars" or tok[2] != "constraints" or tok[4] != "sense":
        raise LPFormatError(f"line {k}: expected 'vars n constraints m sense min|max'")
    n, m, sense = int(tok[1]), int(tok[3]), tok[5]
    if len(lines) < 2 + m:
        raise LPFormatError("file ends before all constraints were read")
    k, obj = lines[1]
    otok = obj.split()
    if not otok or otok[0] != "obj":
        raise LPFormatError(f"line {k}: expected objective line starting with 'obj'")
    c = np.zeros(n)
    for t in otok[1:]:
        j, v = _term(t, n, k)
        c[j] = v
    rows, cols, vals, rel, rhs = [], [], [], [], []
    for i in range(m):
        k, ln = lines[2 + i]
        label, _, rest = ln.partition(":")
        if label.strip() != str(i):
            raise LPFormatError(f"line {k}: expected constraint {i}")
        parts = rest.split()
        if len(parts) < 2 or parts[-2] not in ("<=", ">=", "="):
            raise LPFormatError(f"line {k}: constraint must end with '<rel> <rhs>'")
        for t in parts[:-2]:
            j, v = _term(t, n, k)
            rows.append(i); cols.append(j); vals.append(v)
        rel.append(parts[-2])
        rhs.append(float(parts[-1]))
    lower, upper = np.zeros(n), np.full(n, np.inf)
    for k, ln in lines[2 + m:]:
        parts = ln.split()
        if len(parts) != 4 or parts[0] != "bound":
            raise LPFormatError(f"line {k}: expected 'bound j lower upper'")
        j = int(parts[1])
        if not 0 <= j < n:
            raise LPFormatError(f"line {k}: index {j} out of range")
        lower[j], upper[j] = float(parts[2]), float(parts[3])
    A = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
    return LinearProgram(n, c, A, tuple(rel), np.array(rhs), lower, upper, sense)


def write_lp(lp: LinearProgram, path) -> None:
    Path(path).write_text(dumps(lp))


def read_lp(path) -> LinearProgram:
    return loads(Path(path).read_text())
