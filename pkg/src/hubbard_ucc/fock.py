"""Fermionic Fock space for eight spin-orbitals (four momenta x two spins).

Basis states are plain integers used as occupation bitmasks. Bit ``b`` is set
iff canonical spin-orbital ``b`` is occupied, where up-spin momenta 0-3 sit on
bits 0-3 and down-spin momenta 0-3 on bits 4-7. A basis state is understood as
the product of creation operators applied in canonical order (up spins first,
ascending momentum, then down spins) to the vacuum, so every operator sign is
the parity of the occupied orbitals below the one being acted on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

N_MOMENTA = 4
N_ORBITALS = 2 * N_MOMENTA


class Spin(enum.IntEnum):
    UP = 0
    DOWN = 1

    @property
    def arrow(self) -> str:
        return "↑" if self is Spin.UP else "↓"


@dataclass(frozen=True, order=True)
class SpinOrbital:
    """A single fermionic mode labelled by momentum index and spin."""

    momentum_index: int
    spin: Spin

    def __post_init__(self):
        if not 0 <= self.momentum_index < N_MOMENTA:
            raise ValueError(f"momentum index {self.momentum_index} outside [0, {N_MOMENTA - 1}]")
        object.__setattr__(self, "spin", Spin(self.spin))

    @property
    def index(self) -> int:
        return self.momentum_index + N_MOMENTA * int(self.spin)

    @classmethod
    def from_index(cls, index: int) -> "SpinOrbital":
        if not 0 <= index < N_ORBITALS:
            raise ValueError(f"spin-orbital index {index} outside [0, {N_ORBITALS - 1}]")
        return cls(index % N_MOMENTA, Spin(index // N_MOMENTA))

    def __str__(self) -> str:
        return f"{self.momentum_index}{self.spin.arrow}"


def up(k: int) -> SpinOrbital:
    return SpinOrbital(k, Spin.UP)


def dn(k: int) -> SpinOrbital:
    return SpinOrbital(k, Spin.DOWN)


def _bit(orb: SpinOrbital | int) -> int:
    return orb.index if isinstance(orb, SpinOrbital) else int(orb)


def _parity_below(state: int, bit: int) -> int:
    return -1 if (state & ((1 << bit) - 1)).bit_count() & 1 else 1


def apply_creation(state: int, orb: SpinOrbital | int) -> tuple[int, int] | None:
    """Apply c^dagger_orb. Returns ``(new_state, sign)`` or ``None`` if it vanishes."""
    b = _bit(orb)
    if state >> b & 1:
        return None
    return state | (1 << b), _parity_below(state, b)


def apply_annihilation(state: int, orb: SpinOrbital | int) -> tuple[int, int] | None:
    """Apply c_orb. Returns ``(new_state, sign)`` or ``None`` if it vanishes."""
    b = _bit(orb)
    if not state >> b & 1:
        return None
    return state & ~(1 << b), _parity_below(state, b)


def apply_string(state: int, ops: Sequence[tuple[bool, SpinOrbital | int]]) -> tuple[int, int] | None:
    """Apply an operator product written left to right as ``ops``.

    Each entry is ``(dagger, orbital)``. As in the written product, the
    rightmost operator acts first.
    """
    sign = 1
    for dagger, orb in reversed(ops):
        res = apply_creation(state, orb) if dagger else apply_annihilation(state, orb)
        if res is None:
            return None
        state, s = res
        sign *= s
    return state, sign


def number_operator_value(state: int, orb: SpinOrbital | int) -> int:
    return state >> _bit(orb) & 1


def particle_count(state: int) -> int:
    return state.bit_count()


def up_count(state: int) -> int:
    return (state & 0x0F).bit_count()


def down_count(state: int) -> int:
    return (state >> N_MOMENTA).bit_count()


def sz_twice(state: int) -> int:
    return up_count(state) - down_count(state)


def total_momentum(state: int) -> int:
    """Sum of occupied momentum indices, mod 4."""
    return sum(b % N_MOMENTA for b in range(N_ORBITALS) if state >> b & 1) % N_MOMENTA


def basis_state(ups: Iterable[int] = (), downs: Iterable[int] = ()) -> int:
    """Bitmask of ``|ups ; downs>`` given occupied momentum indices per spin."""
    mask = 0
    for k in ups:
        mask |= 1 << up(k).index
    for k in downs:
        mask |= 1 << dn(k).index
    return mask


def occupied(state: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ups = tuple(k for k in range(N_MOMENTA) if state >> k & 1)
    downs = tuple(k for k in range(N_MOMENTA) if state >> (k + N_MOMENTA) & 1)
    return ups, downs


def label(state: int) -> str:
    """Compact label, e.g. ``|01;03>`` for up momenta {0,1} and down momenta {0,3}."""
    ups, downs = occupied(state)
    return "|" + "".join(map(str, ups)) + ";" + "".join(map(str, downs)) + ">"


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of a fixed (particle number, 2*Sz) sector, ascending bitmask."""

    n_particles: int
    sz_twice: int
    states: tuple[int, ...]
    index_of: dict[int, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, state: int) -> bool:
        return state in self.index_of

    def index(self, state: int) -> int:
        return self.index_of[state]

    def basis_vector(self, state: int) -> np.ndarray:
        v = np.zeros(len(self.states), dtype=complex)
        v[self.index_of[state]] = 1.0
        return v

    def amplitude(self, vec: np.ndarray, state: int) -> complex:
        return vec[self.index_of[state]]


def enumerate_sector(n_particles: int, sz_twice: int) -> SectorBasis:
    if not 0 <= n_particles <= N_ORBITALS:
        raise ValueError(f"particle number {n_particles} outside [0, {N_ORBITALS}]")
    if (n_particles + sz_twice) % 2:
        raise ValueError("particle number and 2*Sz must have equal parity")
    n_up = (n_particles + sz_twice) // 2
    n_dn = n_particles - n_up
    states = []
    if 0 <= n_up <= N_MOMENTA and 0 <= n_dn <= N_MOMENTA:
        states = sorted(
            basis_state(u, d)
            for u in combinations(range(N_MOMENTA), n_up)
            for d in combinations(range(N_MOMENTA), n_dn)
        )
    return SectorBasis(n_particles, sz_twice, tuple(states), {s: i for i, s in enumerate(states)})


_HALF_FILLED: SectorBasis | None = None


def half_filled_basis() -> SectorBasis:
    """The 36-state N=4, Sz=0 sector (cached)."""
    global _HALF_FILLED
    if _HALF_FILLED is None:
        _HALF_FILLED = enumerate_sector(4, 0)
    return _HALF_FILLED


def normalize(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)
