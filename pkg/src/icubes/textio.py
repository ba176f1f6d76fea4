"""Text and JSON serialization for ring elements, quaternions and matrices.

Text grammar: entries separated by ``,``, rows by ``;``; Gaussian entries
as ``a+bi``.  JSON uses decimal strings so values are bit-exact.
"""

from __future__ import annotations

import json
import re

from .quat import Quat, format_quat
from .ring import GaussInt, Ring, coerce, format_gauss

_TERM = re.compile(r"([+-]?)(\d*)([ijk]?)")


def _terms(text: str, allowed: str) -> dict:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty element")
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, digits, unit = m.groups()
        if m.end() == pos or (not digits and not unit):
            raise ValueError(f"cannot parse {text!r}")
        if pos > 0 and not sign:
            raise ValueError(f"missing sign in {text!r}")
        if unit and unit not in allowed:
            raise ValueError(f"unexpected {unit!r} in {text!r}")
        if unit in out:
            raise ValueError(f"repeated {unit or 'real'} part in {text!r}")
        value = int(digits) if digits else 1
        out[unit] = -value if sign == "-" else value
        pos = m.end()
    return out


def parse_gauss(text: str) -> GaussInt:
    t = _terms(text, "i")
    return GaussInt(t.get("", 0), t.get("i", 0))


def parse_elem(text: str, ring: Ring):
    if ring is Ring.ZI:
        return parse_gauss(text)
    t = _terms(text, "")
    return t[""]


def parse_quat(text: str) -> Quat:
    t = _terms(text, "ijk")
    return Quat(t.get("", 0), t.get("i", 0), t.get("j", 0), t.get("k", 0))


def format_elem(x) -> str:
    return format_gauss(x)


def parse_matrix(text: str, ring: Ring) -> list:
    """Rows separated by ``;`` (or newlines), entries by ``,``."""
    rows = [r for r in re.split(r"[;\n]", text.strip()) if r.strip()]
    if not rows:
        raise ValueError("empty matrix")
    out = [[parse_elem(e, ring) for e in r.split(",")] for r in rows]
    if len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def parse_vector(text: str, ring: Ring) -> list:
    """A single row ``x1,...,xn`` or a column ``x1;...;xn``."""
    m = parse_matrix(text, ring)
    if len(m) == 1:
        return m[0]
    if all(len(r) == 1 for r in m):
        return [r[0] for r in m]
    raise ValueError("expected a vector")


def format_matrix(A) -> str:
    return "; ".join(", ".join(format_gauss(x) for x in row) for row in A)


def format_matrix_pretty(A) -> str:
    cells = [[format_gauss(x) for x in row] for row in A]
    width = max((len(c) for row in cells for c in row), default=0)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


# ---------------------------------------------------------------------------
# JSON


def elem_to_json(x):
    if isinstance(x, GaussInt):
        return {"re": str(x.re), "im": str(x.im)}
    return str(x)


def elem_from_json(obj, ring: Ring):
    if isinstance(obj, dict):
        return coerce(GaussInt(int(obj["re"]), int(obj.get("im", "0"))), ring)
    if isinstance(obj, str):
        return parse_elem(obj, ring)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return coerce(obj, ring)
    raise ValueError(f"bad entry {obj!r}")


def quat_to_json(q: Quat) -> dict:
    return {"a": str(q.a), "b": str(q.b), "c": str(q.c), "d": str(q.d)}


def quat_from_json(obj) -> Quat:
    return Quat(*(int(obj[key]) for key in "abcd"))


def matrix_to_json(A) -> list:
    return [[elem_to_json(x) for x in row] for row in A]


def matrix_from_json(obj, ring: Ring) -> list:
    if isinstance(obj, dict):
        obj = obj["entries"]
    return [[elem_from_json(x, ring) for x in row] for row in obj]


def icube_to_json(ic) -> dict:
    return {
        "ring": ic.ring.value,
        "lambda": str(ic.lam),
        "n": ic.n,
        "k": ic.k,
        "entries": matrix_to_json(ic.entries),
    }


def icube_from_json(obj):
    from .icube import verify

    ring = Ring.parse(obj["ring"])
    ic = verify(matrix_from_json(obj["entries"], ring), ring)
    if "lambda" in obj and int(obj["lambda"]) != ic.lam:
        raise ValueError(f"lambda {obj['lambda']} does not match {ic.lam}")
    return ic


def load_matrix(text: str, ring: Ring) -> list:
    """Auto-detect JSON (first byte ``[`` or ``{``) or the text grammar."""
    s = text.lstrip()
    if s[:1] in ("[", "{"):
        obj = json.loads(s)
        if isinstance(obj, dict) and "ring" in obj:
            ring = Ring.parse(obj["ring"])
        rows = obj["entries"] if isinstance(obj, dict) else obj
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ValueError("expected a matrix")
        return matrix_from_json(rows, ring)
    return parse_matrix(s, ring)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


__all__ = [
    "dumps",
    "elem_from_json",
    "elem_to_json",
    "format_elem",
    "format_matrix",
    "format_matrix_pretty",
    "format_quat",
    "icube_from_json",
    "icube_to_json",
    "load_matrix",
    "matrix_from_json",
    "matrix_to_json",
    "parse_elem",
    "parse_gauss",
    "parse_matrix",
    "parse_quat",
    "parse_vector",
    "quat_from_json",
    "quat_to_json",
]
