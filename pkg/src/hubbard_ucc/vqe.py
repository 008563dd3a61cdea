"""Variational outer loop: minimize the prepared-state energy over free angles.

Factors can share one free angle (with a fixed multiplier) or be frozen at
their own angle. The exact recipe therefore has four free angles even though
eight of its nine factors rotate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from . import kernels
from .fock import half_filled_basis
from .hamiltonian import HubbardParams, build_momentum_space
from .stateprep import START_STATE, Angles, Mode, sequence_for
from .ucc import AnsatzSequence, CompiledSequence

log = logging.getLogger(__name__)

# (slot, multiplier): factor angle = multiplier * free[slot]; slot None = frozen.
Slot = tuple[int | None, float]


class MaxEvaluationsExceeded(RuntimeError):
    def __init__(self, result: "VqeResult"):
        super().__init__(f"evaluation budget exhausted after {result.evaluations} evaluations")
        self.result = result


@dataclass(frozen=True)
class VqeProblem:
    params: HubbardParams
    sequence: AnsatzSequence
    slots: tuple[Slot, ...]
    start_state: int = START_STATE
    initial_angles: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple((s, float(m)) for s, m in self.slots))
        if len(self.slots) != len(self.sequence):
            raise ValueError("one slot entry per factor is required")
        used = sorted({s for s, _ in self.slots if s is not None})
        if used != list(range(len(used))):
            raise ValueError(f"free-angle slots must be 0..n-1, got {used}")
        if self.initial_angles is None:
            object.__setattr__(self, "initial_angles", (0.0,) * len(used))
        elif len(self.initial_angles) != len(used):
            raise ValueError(f"expected {len(used)} initial angles, got {len(self.initial_angles)}")

    @property
    def n_free(self) -> int:
        return len({s for s, _ in self.slots if s is not None})

    @classmethod
    def independent(cls, params: HubbardParams, sequence: AnsatzSequence, frozen: Sequence[int] = ()) -> "VqeProblem":
        """One free angle per factor except the ``frozen`` positions."""
        slots, k = [], 0
        for i in range(len(sequence)):
            if i in frozen:
                slots.append((None, 1.0))
            else:
                slots.append((k, 1.0))
                k += 1
        return cls(params, sequence, tuple(slots))

    def factor_angles(self, free: Sequence[float]) -> np.ndarray:
        free = np.asarray(free, dtype=float)
        if free.shape != (self.n_free,):
            raise ValueError(f"expected {self.n_free} angles, got shape {free.shape}")
        return np.array(
            [f.theta if s is None else m * free[s] for f, (s, m) in zip(self.sequence, self.slots)]
        )


def recipe_problem(params: HubbardParams, mode: Mode | str = Mode.EXACT) -> VqeProblem:
    """The preparation recipe with its angles as free parameters.

    Slots follow the recipe's ties: theta1 drives both leading doubles,
    theta3 the four same-spin doubles (alternating sign), and the pi/4
    factor is frozen.
    """
    mode = Mode(mode)
    seq = sequence_for(mode, Angles(0.0, 0.0, 0.0, 0.0))
    if mode is Mode.EXACT:
        slots = [(0, 1), (0, 1), (1, 1), (None, 1), (2, -1), (2, 1), (2, -1), (2, 1), (3, 1)]
    else:
        slots = [(0, 1), (0, 1), (None, 1), (1, -1), (1, 1), (1, -1), (1, 1), (2, 1)]
    return VqeProblem(params, seq, tuple(slots))


class _Evaluator:
    def __init__(self, problem: VqeProblem):
        self.problem = problem
        self.compiled = CompiledSequence(problem.sequence.factors)
        self.h = build_momentum_space(problem.params)
        self.start = half_filled_basis().basis_vector(problem.start_state)

    def __call__(self, free: Sequence[float]) -> float:
        psi = self.compiled.apply(self.start, self.problem.factor_angles(free))
        return kernels.expectation(self.h, psi)


def energy(problem: VqeProblem, angles: Sequence[float]) -> float:
    return _Evaluator(problem)(angles)


@dataclass(frozen=True)
class VqeConfig:
    max_evaluations: int = 20_000
    fatol: float = 1e-10
    xatol: float = 1e-8
    initial_step: float = 0.1
    max_restarts: int = 50
    seed: int = 0
    raise_on_budget: bool = False

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")


@dataclass
class VqeResult:
    best_angles: np.ndarray
    best_energy: float
    evaluations: int
    converged: bool
    restarts: int = 0
    history: list[tuple[np.ndarray, float]] = field(default_factory=list, repr=False)

    def running_minimum(self) -> np.ndarray:
        return np.minimum.accumulate([e for _, e in self.history])


class _Budget(Exception):
    pass


def _simplex(x0: np.ndarray, step: float, rng: np.random.Generator) -> np.ndarray:
    # random orthogonal frame so restarts explore new directions
    n = len(x0)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return np.vstack([x0, x0 + step * q.T])


def minimize(problem: VqeProblem, config: VqeConfig = VqeConfig()) -> VqeResult:
    """Nelder-Mead with restart-from-best until a restart stops improving.

    Every objective call is recorded in ``history``. If the evaluation budget
    runs out the best point so far is returned with ``converged=False``
    (or :class:`MaxEvaluationsExceeded` is raised when configured).
    """
    evaluate = _Evaluator(problem)
    history: list[tuple[np.ndarray, float]] = []
    best = [np.asarray(problem.initial_angles, dtype=float), np.inf]

    def objective(x):
        if len(history) >= config.max_evaluations:
            raise _Budget
        e = evaluate(x)
        history.append((np.array(x, dtype=float), e))
        if e < best[1]:
            best[0], best[1] = np.array(x, dtype=float), e
        return e

    if problem.n_free == 0:
        objective(np.zeros(0))
        return VqeResult(best[0], best[1], len(history), True, 0, history)

    rng = np.random.default_rng(config.seed)
    converged = False
    restarts = 0
    x = best[0]
    try:
        objective(x)
        step = config.initial_step
        while restarts <= config.max_restarts:
            before = best[1]
            res = scipy_minimize(
                objective,
                x,
                method="Nelder-Mead",
                options={
                    "initial_simplex": _simplex(x, step, rng),
                    "fatol": config.fatol,
                    "xatol": config.xatol,
                    "maxfev": config.max_evaluations,
                    "maxiter": config.max_evaluations,
                },
            )
            log.debug("restart %d: %s (%d evaluations)", restarts, res.message, len(history))
            x = best[0]
            if before - best[1] <= config.fatol:
                converged = bool(res.success)
                break
            restarts += 1
            step = max(step / 2, 1e-4)
    except _Budget:
        log.info("evaluation budget of %d reached", config.max_evaluations)

    result = VqeResult(best[0], best[1], len(history), converged, restarts, history)
    if not converged and config.raise_on_budget:
        raise MaxEvaluationsExceeded(result)
    return result
