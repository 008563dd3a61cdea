"""Closed-form state preparation of the half-filled ground state.

Both recipes start from the product state ``|01;03>``. The exact recipe uses
nine factors (one of them a quad excitation) and reproduces the ground state
for every ``U``; the doubles-only recipe drops the quad and keeps the same
angle formulas with ``cos^2(theta1)`` in place of ``mu12``.

Row expressions are written in their own sign convention. ``ROW_SIGN_GAUGE``
converts them to the package frame, where every amplitude is
``gauge * expression``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .fock import basis_state, dn, half_filled_basis, up
from .hamiltonian import HubbardParams, build_momentum_space
from .spectrum import Amplitudes, extract_amplitudes, ground_energy_cubic, ground_state_ed
from .ucc import AnsatzSequence, CompiledSequence, ExcitationFactor, excitation

SQRT2 = math.sqrt(2.0)

# The pi/4 factor that splits |01;03> into the two-reference combination.
# Negative in the package sign frame; the row expressions' frame has +pi/4.
FIXED_ROTATION = -math.pi / 4

START_STATE = basis_state((0, 1), (0, 3))

TRACKED_STATES: tuple[int, ...] = (
    basis_state((0, 1), (0, 3)),
    basis_state((0, 3), (0, 1)),
    basis_state((1, 2), (2, 3)),
    basis_state((2, 3), (1, 2)),
    basis_state((0, 1), (1, 2)),
    basis_state((1, 2), (0, 1)),
    basis_state((0, 3), (2, 3)),
    basis_state((2, 3), (0, 3)),
    basis_state((0, 2), (1, 3)),
    basis_state((1, 3), (0, 2)),
)

ROW_SIGN_GAUGE = np.array([1, -1, 1, -1, 1, -1, 1, -1, -1, 1], dtype=float)


class Mode(str, enum.Enum):
    EXACT = "exact"
    DOUBLES = "doubles"


class DomainError(ValueError):
    """An arcsine argument left [-1, 1]: the amplitudes are outside the reachable family."""


class Angles(NamedTuple):
    theta1: float
    theta2: float
    theta3: float
    theta4: float


def _asin(x: float, name: str) -> float:
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"arcsine argument for {name} is {x!r}, outside [-1, 1]")
    return math.asin(x)


def mu12(theta1: float, theta2: float) -> float:
    return math.cos(theta1) ** 2 * math.cos(theta2) + math.sin(theta1) ** 2 * math.sin(theta2)


def _lower_angles(alpha: float, beta: float, gamma: float, theta1: float, weight: float) -> tuple[float, float]:
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    theta3 = 0.5 * _asin(2 * SQRT2 * beta / weight, "theta3")
    theta4 = -math.atan(gamma / alpha) + math.atan(math.tan(theta3) ** 2)
    return theta3, theta4


def exact_angles(alpha: float, beta: float, gamma: float) -> Angles:
    theta1 = -0.5 * _asin(4 * beta, "theta1")
    theta2 = math.atan(math.tan(theta1) ** 2)
    theta3, theta4 = _lower_angles(alpha, beta, gamma, theta1, mu12(theta1, theta2))
    return Angles(theta1, theta2, theta3, theta4)


def doubles_angles(alpha: float, beta: float, gamma: float) -> Angles:
    """Doubles-only angles; ``theta2`` is returned as 0 and never used."""
    theta1 = -0.5 * _asin(4 * beta, "theta1")
    theta3, theta4 = _lower_angles(alpha, beta, gamma, theta1, math.cos(theta1) ** 2)
    return Angles(theta1, 0.0, theta3, theta4)


def _factors(a: Angles, quad: bool, leading: tuple[ExcitationFactor, ExcitationFactor]) -> list[ExcitationFactor]:
    t1, t2, t3, t4 = a
    factors = [leading[0].with_theta(t1), leading[1].with_theta(t1)]
    if quad:
        factors.append(excitation([up(2), up(3), dn(1), dn(2)], [up(0), up(1), dn(0), dn(3)], t2))
    factors += [
        excitation([up(3), dn(1)], [up(1), dn(3)], FIXED_ROTATION),
        excitation([dn(1), dn(2)], [dn(0), dn(3)], -t3),
        excitation([up(2), up(3)], [up(0), up(1)], t3),
        excitation([up(1), up(2)], [up(0), up(3)], -t3),
        excitation([dn(2), dn(3)], [dn(0), dn(1)], t3),
        excitation([up(2), dn(2)], [up(0), dn(0)], t4),
    ]
    return factors


_LEADING = (
    excitation([up(2), dn(1)], [up(1), dn(0)]),
    excitation([up(3), dn(2)], [up(0), dn(3)]),
)

# Aimed at |02;02> and |13;13>, which sit in a different momentum sector
# from the ground state. Kept only to demonstrate that failure.
_LEADING_SAME_LABEL = (
    excitation([up(2), dn(2)], [up(1), dn(3)]),
    excitation([up(3), dn(1)], [up(0), dn(0)]),
)


def exact_sequence(angles: Sequence[float]) -> AnsatzSequence:
    return AnsatzSequence(_factors(Angles(*angles), True, _LEADING))


def doubles_sequence(angles: Sequence[float]) -> AnsatzSequence:
    return AnsatzSequence(_factors(Angles(*angles), False, _LEADING))


def same_label_exact_sequence(angles: Sequence[float]) -> AnsatzSequence:
    """The exact recipe with the 2-beta states read as ``|02;02>`` and ``|13;13>``."""
    return AnsatzSequence(_factors(Angles(*angles), True, _LEADING_SAME_LABEL))


def sequence_for(mode: Mode, angles: Sequence[float]) -> AnsatzSequence:
    return exact_sequence(angles) if Mode(mode) is Mode.EXACT else doubles_sequence(angles)


def angles_for(mode: Mode, amps: Amplitudes) -> Angles:
    fn = exact_angles if Mode(mode) is Mode.EXACT else doubles_angles
    return fn(*amps)


def start_vector() -> np.ndarray:
    return half_filled_basis().basis_vector(START_STATE)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def tracked_amplitudes(psi: np.ndarray) -> np.ndarray:
    basis = half_filled_basis()
    return np.array([psi[basis.index(s)] for s in TRACKED_STATES])


# Row expressions, one list per recipe. Row r is the state after r - 1 factors.

def _exact_rows(a: Angles) -> list[list[float]]:
    t1, t2, t3, t4 = a
    c1, s1, c3, s3, c4, s4 = (math.cos(t1), math.sin(t1), math.cos(t3), math.sin(t3), math.cos(t4), math.sin(t4))
    m = mu12(t1, t2) / SQRT2
    mu34 = c3**2 * c4 + s3**2 * s4
    nu34 = c3**2 * s4 - s3**2 * c4
    x = -c1 * s1
    cs = -m * c3 * s3
    return [
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [c1, 0, 0, 0, 0, 0, 0, 0, -s1, 0],
        [c1**2, 0, 0, s1**2, 0, 0, 0, 0, x, x],
        [mu12(t1, t2), 0, 0, 0, 0, 0, 0, 0, x, x],
        [m, m, 0, 0, 0, 0, 0, 0, x, x],
        [m * c3, m, 0, 0, -m * s3, 0, 0, 0, x, x],
        [m * c3**2, m, 0, m * s3**2, cs, 0, 0, cs, x, x],
        [m * c3**2, m * c3, 0, m * s3**2, cs, -m * s3, 0, cs, x, x],
        [m * c3**2, m * c3**2, m * s3**2, m * s3**2, cs, cs, cs, cs, x, x],
        # fourth entry: -mu12 nu34 / sqrt2, matching the |12;23> entry
        [m * mu34, m * mu34, -m * nu34, -m * nu34, cs, cs, cs, cs, x, x],
    ]


def _doubles_rows(a: Angles) -> list[list[float]]:
    t1, _, t3, t4 = a
    c1, s1, c3, s3, c4, s4 = (math.cos(t1), math.sin(t1), math.cos(t3), math.sin(t3), math.cos(t4), math.sin(t4))
    m = c1**2 / SQRT2
    mu34 = c3**2 * c4 + s3**2 * s4
    nu34 = c3**2 * s4 - s3**2 * c4
    x = -c1 * s1
    sq = s1**2
    cs = -m * c3 * s3
    return [
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [c1, 0, 0, 0, 0, 0, 0, 0, -s1, 0],
        [c1**2, 0, 0, sq, 0, 0, 0, 0, x, x],
        [m, m, 0, sq, 0, 0, 0, 0, x, x],
        [m * c3, m, 0, sq, -m * s3, 0, 0, 0, x, x],
        [m * c3**2, m, 0, m * s3**2 + sq, cs + sq * c3, 0, 0, cs, x, x],
        [m * c3**2, m * c3, 0, m * s3**2 + sq, cs + sq * c3, -m * s3, 0, cs, x, x],
        [m * c3**2, m * c3**2, m * s3**2, m * s3**2 + sq, cs + sq * c3, cs, cs, cs, x, x],
        [m * mu34, m * mu34 - sq * s4, -m * nu34, -m * nu34 + sq * c4, cs + sq * c3, cs, cs, cs, x, x],
    ]


ROW_EXPRESSIONS: dict[Mode, Callable[[Angles], list[list[float]]]] = {
    Mode.EXACT: _exact_rows,
    Mode.DOUBLES: _doubles_rows,
}


def row_count(mode: Mode) -> int:
    return len(sequence_for(mode, Angles(0, 0, 0, 0))) + 1


def row_expression(row: int, mode: Mode, angles: Sequence[float]) -> np.ndarray:
    """Expected tracked amplitudes of ``row`` (1-based) in the package sign frame."""
    mode = Mode(mode)
    if not 1 <= row <= row_count(mode):
        raise IndexError(f"row {row} outside 1..{row_count(mode)} for {mode.value}")
    return ROW_SIGN_GAUGE * np.array(ROW_EXPRESSIONS[mode](Angles(*angles))[row - 1])


def row_state(row: int, mode: Mode, angles: Sequence[float]) -> np.ndarray:
    """State after the first ``row - 1`` factors."""
    seq = sequence_for(mode, angles)[: row - 1]
    return CompiledSequence(seq.factors).apply(start_vector())


def verify_table_row(row: int, mode: Mode, angles: Sequence[float]) -> float:
    """Largest deviation of the simulated row from its expression.

    Amplitudes outside the ten tracked states are expected to vanish and are
    included in the comparison.
    """
    expected = row_expression(row, mode, angles)
    psi = row_state(row, mode, angles)
    tracked = tracked_amplitudes(psi)
    rest = np.delete(psi, [half_filled_basis().index(s) for s in TRACKED_STATES])
    return float(max(np.abs(tracked - expected).max(), np.abs(rest).max(initial=0.0)))


@dataclass(frozen=True)
class PreparationPlan:
    mode: Mode
    angles: Angles
    sequence: AnsatzSequence
    fixed_rotation: float = FIXED_ROTATION

    @classmethod
    def from_amplitudes(cls, mode: Mode, amps: Amplitudes) -> "PreparationPlan":
        mode = Mode(mode)
        angles = angles_for(mode, amps)
        return cls(mode, angles, sequence_for(mode, angles))

    def prepare(self) -> np.ndarray:
        return CompiledSequence(self.sequence.factors).apply(start_vector())


@dataclass(frozen=True)
class PreparationReport:
    u: float
    t: float
    mode: Mode
    angles: Angles
    amplitudes: Amplitudes
    energy: float
    exact_energy: float
    cubic_energy: float
    fidelity: float
    state: np.ndarray = field(repr=False, compare=False)
    snapshots: np.ndarray = field(repr=False, compare=False)


def prepare(u: float, mode: Mode | str = Mode.EXACT, t: float = 1.0) -> PreparationReport:
    """Exact diagonalization, amplitudes, angles, then the factor sequence."""
    params = HubbardParams(u=u, t=t)
    mode = Mode(mode)
    e0, gs = ground_state_ed(params)
    amps = extract_amplitudes(gs)
    plan = PreparationPlan.from_amplitudes(mode, amps)

    psi = start_vector()
    snapshots = [tracked_amplitudes(psi)]
    compiled = CompiledSequence(plan.sequence.factors)
    for k in range(len(compiled)):
        psi = CompiledSequence(compiled.factors[k : k + 1]).apply(psi)
        snapshots.append(tracked_amplitudes(psi))

    h = build_momentum_space(params)
    return PreparationReport(
        u=u,
        t=t,
        mode=mode,
        angles=plan.angles,
        amplitudes=amps,
        energy=kernels.expectation(h, psi),
        exact_energy=e0,
        cubic_energy=ground_energy_cubic(u / t) * t,
        fidelity=fidelity(psi, gs),
        state=psi,
        snapshots=np.array(snapshots),
    )
