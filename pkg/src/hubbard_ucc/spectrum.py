"""Exact diagonalization, the closed-form ground-state energy and the
three-amplitude structure of the half-filled ground state."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .fock import N_MOMENTA, basis_state, dn, half_filled_basis, up, down_count, up_count
from .hamiltonian import HubbardParams, build_momentum_space, momentum_blocks, operator_matrix


class PatternMismatch(ValueError):
    """Ground-state amplitudes do not follow the alpha/beta/gamma template."""


# Reference product state; its amplitude defines the global phase.
REFERENCE = basis_state((0, 1), (0, 3))

# (basis state, amplitude name, multiplier) in this package's sign convention.
GROUND_STATE_TEMPLATE: tuple[tuple[int, str, float], ...] = (
    (basis_state((0, 1), (0, 3)), "alpha", 1.0),
    (basis_state((0, 3), (0, 1)), "alpha", -1.0),
    (basis_state((0, 1), (1, 2)), "beta", -1.0),
    (basis_state((1, 2), (0, 1)), "beta", 1.0),
    (basis_state((0, 3), (2, 3)), "beta", -1.0),
    (basis_state((2, 3), (0, 3)), "beta", 1.0),
    (basis_state((0, 2), (1, 3)), "beta", -2.0),
    (basis_state((1, 3), (0, 2)), "beta", 2.0),
    (basis_state((1, 2), (2, 3)), "gamma", 1.0),
    (basis_state((2, 3), (1, 2)), "gamma", -1.0),
)

PATTERN_TOL = 1e-9
ZERO_TOL = 1e-10


class Amplitudes(NamedTuple):
    alpha: float
    beta: float
    gamma: float

    @property
    def norm_squared(self) -> float:
        return 2 * self.alpha**2 + 12 * self.beta**2 + 2 * self.gamma**2


def template_vector(amps: Amplitudes) -> np.ndarray:
    basis = half_filled_basis()
    v = np.zeros(len(basis), dtype=complex)
    for state, name, mult in GROUND_STATE_TEMPLATE:
        v[basis.index(state)] = mult * getattr(amps, name)
    return v


def ground_energy_cubic(u: float) -> float:
    """Lowest real root of E^3 - 3U E^2 + 2(U^2 - 8) E + 24 U = 0 (units of t)."""
    companion = np.array(
        [
            [3.0 * u, -2.0 * (u * u - 8.0), -24.0 * u],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ]
    )
    roots = np.linalg.eigvals(companion)
    real = roots[np.abs(roots.imag) <= 1e-9 * max(1.0, np.abs(roots).max())].real
    return float(real.min())


def spectrum(params: HubbardParams, *, mirror_down: bool = True) -> np.ndarray:
    """All 36 eigenvalues, ascending, from the momentum-resolved blocks."""
    h = build_momentum_space(params, mirror_down=mirror_down)
    vals = [np.linalg.eigvalsh(h[np.ix_(b, b)]) for b in momentum_blocks(mirror_down=mirror_down).values() if len(b)]
    return np.sort(np.concatenate(vals))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    basis = half_filled_basis()
    ref = vec[basis.index(REFERENCE)]
    if abs(ref) < 1e-12:
        ref = vec[np.argmax(np.abs(vec))]
    return vec * (abs(ref) / ref)


def ground_state_ed(params: HubbardParams, *, mirror_down: bool = True) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the momentum-space Hamiltonian.

    The Hamiltonian is diagonalized one momentum block at a time, so the
    returned vector never mixes momentum sectors even when levels from
    different sectors are nearly degenerate (small U). The global phase makes
    the ``|01;03>`` amplitude real and positive.
    """
    basis = half_filled_basis()
    h = build_momentum_space(params, mirror_down=mirror_down)
    best = None
    for block in momentum_blocks(mirror_down=mirror_down).values():
        if not len(block):
            continue
        w, v = np.linalg.eigh(h[np.ix_(block, block)])
        if best is None or w[0] < best[0]:
            vec = np.zeros(len(basis), dtype=complex)
            vec[block] = v[:, 0]
            best = (float(w[0]), vec)
    energy, vec = best
    return energy, _fix_phase(vec / np.linalg.norm(vec))


def ground_space(params: HubbardParams, tol: float = 1e-9, *, mirror_down: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues within ``tol`` of the minimum and an orthonormal basis of that space."""
    w, v = np.linalg.eigh(build_momentum_space(params, mirror_down=mirror_down))
    keep = w <= w[0] + tol
    return w[keep], v[:, keep]


def extract_amplitudes(gs: np.ndarray) -> Amplitudes:
    """Read alpha, beta, gamma off a phase-fixed ground state and check the template.

    Raises :class:`PatternMismatch` if any of the ten structured amplitudes
    deviates from the template by more than 1e-9, or if any of the other 26
    amplitudes exceeds 1e-10.
    """
    basis = half_filled_basis()
    amp = lambda s: gs[basis.index(s)]  # noqa: E731
    alpha = amp(basis_state((0, 1), (0, 3)))
    beta = -amp(basis_state((0, 1), (1, 2)))
    gamma = amp(basis_state((1, 2), (2, 3)))
    if abs(alpha) < PATTERN_TOL:
        raise PatternMismatch("reference amplitude on |01;03> vanishes")
    if max(abs(alpha.imag), abs(beta.imag), abs(gamma.imag)) > PATTERN_TOL:
        raise PatternMismatch("amplitudes are not real in the reference phase")
    amps = Amplitudes(float(alpha.real), float(beta.real), float(gamma.real))
    residual = pattern_residual(gs, amps)
    if residual > PATTERN_TOL:
        raise PatternMismatch(f"amplitude pattern residual {residual:.3e} exceeds {PATTERN_TOL:g}")
    return amps


def pattern_residual(gs: np.ndarray, amps: Amplitudes) -> float:
    """Largest deviation of ``gs`` from the template built from ``amps``.

    Entries outside the template are compared against zero with the tighter
    1e-10 bound by scaling them up accordingly.
    """
    diff = np.abs(gs - template_vector(amps))
    outside = np.ones(len(diff), dtype=bool)
    basis = half_filled_basis()
    for state, _, _ in GROUND_STATE_TEMPLATE:
        outside[basis.index(state)] = False
    inside = diff[~outside].max()
    stray = diff[outside].max() * (PATTERN_TOL / ZERO_TOL)
    return float(max(inside, stray))


@lru_cache(maxsize=2)
def _spin_raising(mirror_down: bool) -> np.ndarray:
    # S+ pairs an up electron of momentum k with the down label carrying k
    partner = (lambda k: (-k) % N_MOMENTA) if mirror_down else (lambda k: k)
    full = range(2 ** (2 * N_MOMENTA))
    terms = [(1.0, [(True, up(k)), (False, dn(partner(k)))]) for k in range(N_MOMENTA)]
    return operator_matrix(list(full), terms)


def spin_squared_matrix(*, mirror_down: bool = True) -> np.ndarray:
    """S^2 = Sz^2 + (S+S- + S-S+)/2 restricted to the half-filled sector."""
    sp = _spin_raising(mirror_down)
    sm = sp.conj().T
    sz = np.diag([(up_count(s) - down_count(s)) / 2 for s in range(sp.shape[0])])
    s2 = sz @ sz + (sp @ sm + sm @ sp) / 2
    states = list(half_filled_basis().states)
    return s2[np.ix_(states, states)]


def total_spin_squared(vec: np.ndarray, *, mirror_down: bool = True) -> float:
    return float(np.vdot(vec, spin_squared_matrix(mirror_down=mirror_down) @ vec).real)


def clear_caches() -> None:
    _spin_raising.cache_clear()


@dataclass(frozen=True)
class GroundStateSummary:
    u: float
    energy_ed: float
    energy_cubic: float
    alpha: float
    beta: float
    gamma: float
    gap: float
    spin_squared: float

    @property
    def amplitudes(self) -> Amplitudes:
        return Amplitudes(self.alpha, self.beta, self.gamma)


def summarize(params: HubbardParams) -> GroundStateSummary:
    energy, gs = ground_state_ed(params)
    amps = extract_amplitudes(gs)
    levels = spectrum(params)
    return GroundStateSummary(
        u=params.u,
        energy_ed=energy,
        energy_cubic=ground_energy_cubic(params.u / params.t) * params.t,
        alpha=amps.alpha,
        beta=amps.beta,
        gamma=amps.gamma,
        gap=float(levels[1] - levels[0]),
        spin_squared=total_spin_squared(gs),
    )


__all__ = [
    "Amplitudes",
    "GROUND_STATE_TEMPLATE",
    "GroundStateSummary",
    "PatternMismatch",
    "REFERENCE",
    "extract_amplitudes",
    "ground_energy_cubic",
    "ground_space",
    "ground_state_ed",
    "pattern_residual",
    "spectrum",
    "spin_squared_matrix",
    "summarize",
    "template_vector",
    "total_spin_squared",
]
