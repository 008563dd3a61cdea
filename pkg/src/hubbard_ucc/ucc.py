"""Factorized unitary coupled-cluster factors acting on sector state vectors.

An excitation operator moves electrons from ``sources`` to ``targets``::

    A = -i c+_{a1} c+_{a2} ... c+_{an} c_{in} ... c_{i2} c_{i1}

and a factor is ``exp[i theta (A + A^dagger)]``. Because ``(A + A^dagger)^3``
equals ``A + A^dagger`` the exponential collapses to

    I + i sin(theta) (A + A^dagger) + (cos(theta) - 1) P

with ``P`` the projector onto states that ``A`` or ``A^dagger`` can excite.
That closed form is what :func:`apply_factor` evaluates; the dense matrix
exponential is kept only as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from . import kernels
from .fock import SectorBasis, SpinOrbital, Spin, apply_string, half_filled_basis

Orbitals = tuple[SpinOrbital, ...]


@dataclass(frozen=True)
class ExcitationFactor:
    targets: Orbitals
    sources: Orbitals
    theta: float = 0.0

    def __post_init__(self):
        targets, sources = tuple(self.targets), tuple(self.sources)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "theta", float(self.theta))
        if len(targets) != len(sources):
            raise ValueError("targets and sources must have equal length")
        if len(targets) not in (1, 2, 4):
            raise ValueError(f"excitation rank {len(targets)} not in {{1, 2, 4}}")
        if len(set(targets)) != len(targets) or len(set(sources)) != len(sources):
            raise ValueError("repeated spin-orbital in excitation")
        if set(targets) & set(sources):
            raise ValueError("targets and sources must be disjoint")
        n_up = lambda orbs: sum(o.spin is Spin.UP for o in orbs)  # noqa: E731
        if n_up(targets) != n_up(sources):
            raise ValueError("excitation does not conserve Sz")

    @property
    def rank(self) -> int:
        return len(self.targets)

    def with_theta(self, theta: float) -> "ExcitationFactor":
        return replace(self, theta=theta)

    def __str__(self) -> str:
        tgt = "".join(map(str, self.targets))
        src = "".join(map(str, self.sources))
        return f"{self.theta:+.6g} A[{src} -> {tgt}]"


def excitation(targets: Iterable[SpinOrbital], sources: Iterable[SpinOrbital], theta: float = 0.0) -> ExcitationFactor:
    return ExcitationFactor(tuple(targets), tuple(sources), theta)


@dataclass(frozen=True)
class AnsatzSequence:
    """Ordered factors; the first one acts on the state first."""

    factors: tuple[ExcitationFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return AnsatzSequence(self.factors[item])
        return self.factors[item]

    @property
    def angles(self) -> np.ndarray:
        return np.array([f.theta for f in self.factors])

    def with_angles(self, angles: Sequence[float]) -> "AnsatzSequence":
        if len(angles) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} angles, got {len(angles)}")
        return AnsatzSequence(tuple(f.with_theta(a) for f, a in zip(self.factors, angles)))


def _excitation_string(targets: Orbitals, sources: Orbitals) -> list[tuple[bool, SpinOrbital]]:
    # c+_{a1} ... c+_{an} c_{in} ... c_{i1}
    return [(True, a) for a in targets] + [(False, i) for i in reversed(sources)]


def _excite(state: int, targets: Orbitals, sources: Orbitals) -> tuple[int, int] | None:
    return apply_string(state, _excitation_string(targets, sources))


def apply_excitation(psi: np.ndarray, factor: ExcitationFactor, basis: SectorBasis | None = None) -> np.ndarray:
    """A|psi> for the excitation part of ``factor`` (its angle is ignored)."""
    basis = basis or half_filled_basis()
    out = np.zeros(len(basis), dtype=complex)
    for i, s in enumerate(basis.states):
        if psi[i] == 0:
            continue
        res = _excite(s, factor.targets, factor.sources)
        if res is not None:
            t, sign = res
            out[basis.index(t)] += -1j * sign * psi[i]
    return out


def apply_deexcitation(psi: np.ndarray, factor: ExcitationFactor, basis: SectorBasis | None = None) -> np.ndarray:
    """A^dagger|psi> = +i c+_{i1} ... c+_{in} c_{an} ... c_{a1} |psi>."""
    basis = basis or half_filled_basis()
    out = np.zeros(len(basis), dtype=complex)
    for i, s in enumerate(basis.states):
        if psi[i] == 0:
            continue
        res = _excite(s, factor.sources, factor.targets)
        if res is not None:
            t, sign = res
            out[basis.index(t)] += 1j * sign * psi[i]
    return out


def excitation_matrix(factor: ExcitationFactor, basis: SectorBasis | None = None) -> np.ndarray:
    """Dense matrix of A in the sector basis."""
    basis = basis or half_filled_basis()
    n = len(basis)
    m = np.zeros((n, n), dtype=complex)
    for j, s in enumerate(basis.states):
        res = _excite(s, factor.targets, factor.sources)
        if res is not None:
            t, sign = res
            m[basis.index(t), j] = -1j * sign
    return m


def generator_matrix(factor: ExcitationFactor, basis: SectorBasis | None = None) -> np.ndarray:
    """Hermitian A + A^dagger."""
    a = excitation_matrix(factor, basis)
    return a + a.conj().T


def projector_diagonal(factor: ExcitationFactor, basis: SectorBasis | None = None) -> np.ndarray:
    """Diagonal of n_a...(1-n_i)... + (1-n_a)...n_i..., evaluated from occupations."""
    basis = basis or half_filled_basis()
    tmask = sum(1 << o.index for o in factor.targets)
    smask = sum(1 << o.index for o in factor.sources)
    diag = np.zeros(len(basis))
    for i, s in enumerate(basis.states):
        forward = (s & tmask) == tmask and not s & smask
        backward = (s & smask) == smask and not s & tmask
        diag[i] = float(forward) + float(backward)
    return diag


@lru_cache(maxsize=4096)
def _pairing(targets: Orbitals, sources: Orbitals) -> tuple[np.ndarray, np.ndarray]:
    """Gather table for one factor on the half-filled sector.

    ``partner[i]`` is the basis index that (A + A^dagger) couples into ``i``
    (-1 when ``i`` lies outside the projector), and ``weight[i]`` is the real
    number ``i * <i|A + A^dagger|partner>`` so that the rotated amplitude is
    ``cos * psi[i] + sin * weight[i] * psi[partner[i]]``.
    """
    basis = half_filled_basis()
    factor = ExcitationFactor(targets, sources)
    n = len(basis)
    partner = np.full(n, -1, dtype=np.int64)
    weight = np.zeros(n)
    active = projector_diagonal(factor, basis)
    for j, s in enumerate(basis.states):
        if not active[j]:
            continue
        fwd = _excite(s, targets, sources)
        if fwd is not None:
            t, sign = fwd
            coupling = -1j * sign
        else:
            t, sign = _excite(s, sources, targets)
            coupling = 1j * sign
        i = basis.index(t)
        partner[i] = j
        weight[i] = (1j * coupling).real
    partner.setflags(write=False)
    weight.setflags(write=False)
    return partner, weight


def _tables(factors: Sequence[ExcitationFactor]) -> tuple[np.ndarray, np.ndarray]:
    n = len(half_filled_basis())
    partners = np.empty((len(factors), n), dtype=np.int64)
    weights = np.empty((len(factors), n))
    for f, factor in enumerate(factors):
        partners[f], weights[f] = _pairing(factor.targets, factor.sources)
    return partners, weights


def apply_factor(psi: np.ndarray, factor: ExcitationFactor) -> np.ndarray:
    """exp[i theta (A + A^dagger)] |psi> via the closed-form identity."""
    partners, weights = _tables([factor])
    th = np.array([factor.theta])
    return kernels.apply_rotations(psi, partners, weights, np.cos(th), np.sin(th))


class CompiledSequence:
    """Precomputed gather tables for a fixed list of factors.

    Angles are supplied at call time, which is what the variational loop
    needs: the tables are built once and reused for every evaluation.
    """

    def __init__(self, factors: Sequence[ExcitationFactor]):
        self.factors = tuple(factors)
        self.partners, self.weights = _tables(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def apply(self, psi: np.ndarray, angles: Sequence[float] | None = None) -> np.ndarray:
        th = np.asarray([f.theta for f in self.factors] if angles is None else angles, dtype=float)
        if th.shape != (len(self.factors),):
            raise ValueError(f"expected {len(self.factors)} angles, got shape {th.shape}")
        if not len(self.factors):
            return np.array(psi, dtype=complex, copy=True)
        return kernels.apply_rotations(psi, self.partners, self.weights, np.cos(th), np.sin(th))


def apply_sequence(psi: np.ndarray, seq: AnsatzSequence | Sequence[ExcitationFactor]) -> np.ndarray:
    factors = seq.factors if isinstance(seq, AnsatzSequence) else tuple(seq)
    return CompiledSequence(factors).apply(psi)


def factor_matrix(factor: ExcitationFactor) -> np.ndarray:
    """Matrix of the closed-form factor, one basis column at a time."""
    n = len(half_filled_basis())
    return np.column_stack([apply_factor(np.eye(n, dtype=complex)[:, j], factor) for j in range(n)])


def hermitian_expm(generator: np.ndarray, scale: complex = 1j) -> np.ndarray:
    """exp(scale * generator) for Hermitian ``generator`` via eigendecomposition."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(scale * w)) @ v.conj().T


def build_full_exponential(factors: Sequence[ExcitationFactor]) -> np.ndarray:
    """exp[i sum_k theta_k (A_k + A_k^dagger)] as a dense unitary."""
    n = len(half_filled_basis())
    gen = np.zeros((n, n), dtype=complex)
    for f in factors:
        gen += f.theta * generator_matrix(f)
    return hermitian_expm(gen)


def dense_factor_exponential(factor: ExcitationFactor) -> np.ndarray:
    """Reference factor built with scipy's Pade ``expm``; used for cross-checks only."""
    return expm(1j * factor.theta * generator_matrix(factor))


def verify_cube_identity(factor: ExcitationFactor) -> float:
    """Spectral norm of (A + A^dagger)^3 - (A + A^dagger)."""
    m = generator_matrix(factor)
    return float(np.linalg.norm(m @ m @ m - m, 2))


def verify_square_identity(factor: ExcitationFactor) -> float:
    """Spectral norm of (A + A^dagger)^2 minus the occupation-projector form."""
    m = generator_matrix(factor)
    return float(np.linalg.norm(m @ m - np.diag(projector_diagonal(factor)), 2))


def clear_caches() -> None:
    _pairing.cache_clear()
