"""Four-site Hubbard ring in the half-filled, Sz=0 sector.

Energies are in units of the hopping ``t``. The momentum-space builder has two
labelling conventions for the down spins:

* ``mirror_down=True`` (default): down-spin label ``k`` carries crystal
  momentum ``-k``, i.e. the down-spin Fourier transform uses ``exp(+ikj)``.
  The interaction becomes ``U/4 sum c+_{i+q,up} c_{i,up} c+_{j+q,dn} c_{j,dn}``
  and the conserved quantity is ``sum(k_up) - sum(k_dn) mod 4``. This is the
  labelling in which ``|01;03>`` and ``|03;01>`` carry the ground state.
* ``mirror_down=False``: both spins transform with ``exp(-ikj)``, giving
  ``c+_{j-q,dn} c_{j,dn}`` and conserved ``sum(k_up) + sum(k_dn) mod 4``.

Both are unitarily equivalent to the real-space model and share its spectrum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .fock import (
    N_MOMENTA,
    SectorBasis,
    SpinOrbital,
    apply_string,
    dn,
    half_filled_basis,
    particle_count,
    sz_twice,
    up,
)

Term = tuple[float, Sequence[tuple[bool, SpinOrbital]]]


@dataclass(frozen=True)
class HubbardParams:
    u: float = 0.0
    t: float = 1.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"hopping t must be positive, got {self.t}")


def band_energy(momentum_index: int, params: HubbardParams = HubbardParams()) -> float:
    """Tight-binding band energy -2 t cos(pi k / 2)."""
    if not 0 <= momentum_index < N_MOMENTA:
        raise ValueError(f"momentum index {momentum_index} outside [0, {N_MOMENTA - 1}]")
    # cos(pi k / 2) is an integer here; rounding keeps k = 1, 3 exactly zero
    return -2.0 * params.t * round(math.cos(math.pi * momentum_index / 2))


def ring_bonds(n_sites: int = N_MOMENTA) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n_sites) for i in range(n_sites)]


def real_space_terms(params: HubbardParams) -> list[Term]:
    terms: list[Term] = []
    for i, j in ring_bonds():
        for orb in (up, dn):
            terms.append((-params.t, [(True, orb(i)), (False, orb(j))]))
            terms.append((-params.t, [(True, orb(j)), (False, orb(i))]))
    for i in range(N_MOMENTA):
        terms.append((params.u, [(True, up(i)), (False, up(i)), (True, dn(i)), (False, dn(i))]))
    return terms


def kinetic_terms(params: HubbardParams) -> list[Term]:
    terms: list[Term] = []
    for k in range(N_MOMENTA):
        eps = band_energy(k, params)
        terms.append((eps, [(True, up(k)), (False, up(k))]))
        terms.append((eps, [(True, dn(k)), (False, dn(k))]))
    return terms


def interaction_terms(params: HubbardParams, mirror_down: bool = True) -> list[Term]:
    """The quartic momentum-space term, one entry per (i, j, q) triple."""
    sign = 1 if mirror_down else -1
    terms: list[Term] = []
    for i, j, q in product(range(N_MOMENTA), repeat=3):
        ops = [
            (True, up((i + q) % N_MOMENTA)),
            (False, up(i)),
            (True, dn((j + sign * q) % N_MOMENTA)),
            (False, dn(j)),
        ]
        terms.append((params.u / 4.0, ops))
    return terms


def momentum_space_terms(params: HubbardParams, mirror_down: bool = True) -> list[Term]:
    return kinetic_terms(params) + interaction_terms(params, mirror_down)


def operator_matrix(states: Sequence[int], terms: Iterable[Term]) -> np.ndarray:
    """Dense matrix of a sum of operator strings on the span of ``states``.

    Images that leave the span raise ``KeyError``; use the full Fock space
    (``range(256)``) to look for leakage.
    """
    index = {s: i for i, s in enumerate(states)}
    m = np.zeros((len(states), len(states)), dtype=complex)
    for coeff, ops in terms:
        if coeff == 0:
            continue
        for col, s in enumerate(states):
            res = apply_string(s, ops)
            if res is not None:
                m[index[res[0]], col] += coeff * res[1]
    return m


def _check_sector(basis: SectorBasis) -> None:
    bad = [s for s in basis.states if particle_count(s) != 4 or sz_twice(s) != 0]
    if bad or not basis.states:
        raise ValueError("basis must be the N=4, Sz=0 sector")


@lru_cache(maxsize=8)
def _unit_matrices(states: tuple[int, ...], kind: str) -> np.ndarray:
    unit = HubbardParams(u=1.0, t=1.0)
    if kind == "real_hop":
        terms = [tm for tm in real_space_terms(unit) if len(tm[1]) == 2]
    elif kind == "real_u":
        terms = [tm for tm in real_space_terms(unit) if len(tm[1]) == 4]
    elif kind == "kinetic":
        terms = kinetic_terms(unit)
    elif kind == "mirrored":
        terms = interaction_terms(unit, mirror_down=True)
    elif kind == "literal":
        terms = interaction_terms(unit, mirror_down=False)
    else:
        raise ValueError(kind)
    m = operator_matrix(states, terms)
    m.setflags(write=False)
    return m


def clear_caches() -> None:
    _unit_matrices.cache_clear()


def build_real_space(params: HubbardParams, basis: SectorBasis | None = None) -> np.ndarray:
    """-t sum_<ij>,s (c+_is c_js + h.c.) + U sum_i n_i,up n_i,dn on the 1-2-3-4-1 ring.

    Site ``i`` reuses the bit of momentum index ``i``.
    """
    basis = basis or half_filled_basis()
    _check_sector(basis)
    return params.t * _unit_matrices(basis.states, "real_hop") + params.u * _unit_matrices(basis.states, "real_u")


def build_momentum_space(
    params: HubbardParams, basis: SectorBasis | None = None, *, mirror_down: bool = True
) -> np.ndarray:
    basis = basis or half_filled_basis()
    _check_sector(basis)
    kind = "mirrored" if mirror_down else "literal"
    return params.t * _unit_matrices(basis.states, "kinetic") + params.u * _unit_matrices(basis.states, kind)


def crystal_momentum(state: int, mirror_down: bool = True) -> int:
    """Total crystal momentum index (mod 4) of a basis state."""
    k_up = sum(k for k in range(N_MOMENTA) if state >> k & 1)
    k_dn = sum(k for k in range(N_MOMENTA) if state >> (k + N_MOMENTA) & 1)
    return (k_up - k_dn if mirror_down else k_up + k_dn) % N_MOMENTA


def momentum_operator(basis: SectorBasis | None = None, mirror_down: bool = True) -> np.ndarray:
    """Diagonal total-momentum operator, eigenvalues in {0, 1, 2, 3}."""
    basis = basis or half_filled_basis()
    return np.diag([float(crystal_momentum(s, mirror_down)) for s in basis.states])


def momentum_blocks(basis: SectorBasis | None = None, mirror_down: bool = True) -> dict[int, np.ndarray]:
    """Basis indices grouped by total momentum."""
    basis = basis or half_filled_basis()
    ks = np.array([crystal_momentum(s, mirror_down) for s in basis.states])
    return {k: np.flatnonzero(ks == k) for k in range(N_MOMENTA)}


def momentum_label_energy(state: int, params: HubbardParams = HubbardParams()) -> float:
    """Non-interacting energy of a momentum basis state."""
    return sum(band_energy(b % N_MOMENTA, params) for b in range(2 * N_MOMENTA) if state >> b & 1)
