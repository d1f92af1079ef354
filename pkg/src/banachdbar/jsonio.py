"""JSON helpers shared by every module.

Exact rationals are written as ``"p/q"`` strings so files round-trip without
loss; floats use Python's shortest round-trip repr.
"""
from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np


def encode_real(x) -> float | int | str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x.numerator)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    return float(x)


def decode_real(v) -> float | int | Fraction:
    if isinstance(v, str):
        return Fraction(v)
    return v


def split_complex(c) -> tuple[Any, Any]:
    """(re, im) in JSON-ready form, preserving Fractions and ints."""
    if isinstance(c, (Fraction, int, np.integer)):
        return encode_real(c), 0
    c = complex(c)
    return encode_real(c.real), encode_real(c.imag)


def join_complex(re, im):
    re, im = decode_real(re), decode_real(im)
    if im == 0 and isinstance(re, (int, Fraction)):
        return re
    return complex(float(re), float(im))


def split_array(a: np.ndarray) -> tuple[list, list]:
    a = np.asarray(a, dtype=complex)
    return a.real.tolist(), a.imag.tolist()


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str | os.PathLike) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
