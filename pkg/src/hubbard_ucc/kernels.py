"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
implementation is picked up transparently. ``use_backend`` switches at
runtime for benchmarks and tests.
"""
from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def backend_name() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name: str) -> None:
    global _active
    try:
        _active = BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def apply_rotations(psi, partners, weights, cosines, sines) -> np.ndarray:
    return _active.apply_rotations(
        np.ascontiguousarray(psi, dtype=np.complex128),
        np.ascontiguousarray(partners, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(cosines, dtype=np.float64),
        np.ascontiguousarray(sines, dtype=np.float64),
    )


def expectation(h, psi) -> float:
    return _active.expectation(
        np.ascontiguousarray(h, dtype=np.complex128),
        np.ascontiguousarray(psi, dtype=np.complex128),
    )
