"""Self-checks behind ``hubbard-ucc verify``.

Each check raises on failure. ``run`` collects failures instead of stopping
at the first one, and reports the exception type so that, for example, a
broken sign rule shows up as ``PatternMismatch``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

import numpy as np

from . import hamiltonian, spectrum, ucc
from .fock import dn, half_filled_basis, up
from .hamiltonian import HubbardParams, build_momentum_space, build_real_space
from .spectrum import extract_amplitudes, ground_energy_cubic, ground_state_ed, total_spin_squared
from .stateprep import Mode, prepare
from .ucc import ExcitationFactor, apply_factor, dense_factor_exponential, verify_cube_identity, verify_square_identity

U_GRID = (0.01, 0.1, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0)


class CheckFailed(AssertionError):
    pass


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise CheckFailed(message)


def clear_all_caches() -> None:
    hamiltonian.clear_caches()
    spectrum.clear_caches()
    ucc.clear_caches()


def check_spectra_agree() -> None:
    for u in (0.0, 1.0, 4.0, 10.0):
        p = HubbardParams(u)
        real = np.linalg.eigvalsh(build_real_space(p))
        mom = np.linalg.eigvalsh(build_momentum_space(p))
        _require(np.abs(real - mom).max() < 1e-10, f"real/momentum spectra differ at u={u}")


def check_cubic() -> None:
    for u in U_GRID:
        e, _ = ground_state_ed(HubbardParams(u))
        _require(abs(e - ground_energy_cubic(u)) < 1e-9, f"cubic root disagrees with ED at u={u}")


def check_amplitude_pattern() -> None:
    for u in U_GRID:
        amps = extract_amplitudes(ground_state_ed(HubbardParams(u))[1])
        _require(abs(amps.norm_squared - 1) < 1e-10, f"amplitude normalization off at u={u}")


def check_noninteracting_limit() -> None:
    e, gs = ground_state_ed(HubbardParams(1e-6))
    a = extract_amplitudes(gs)
    _require(abs(e + 4) < 1e-5, "ground energy at u=1e-6 is not -4")
    _require(abs(a.alpha - 1 / math.sqrt(2)) < 1e-6 and abs(a.beta) < 1e-6 and abs(a.gamma) < 1e-6,
             "u=1e-6 amplitudes are not (1/sqrt2, 0, 0)")


def check_singlet() -> None:
    for u in (1.0, 4.0, 16.0):
        p = HubbardParams(u)
        _, gs = ground_state_ed(p)
        levels = spectrum.spectrum(p)
        _require(total_spin_squared(gs) < 1e-9, f"ground state is not a singlet at u={u}")
        _require(levels[1] - levels[0] > 0, f"ground state degenerate at u={u}")


def check_exact_preparation() -> None:
    for u in U_GRID:
        r = prepare(u, Mode.EXACT)
        _require(r.fidelity >= 1 - 1e-9, f"exact preparation fidelity {r.fidelity} at u={u}")
        _require(abs(r.energy - r.cubic_energy) < 1e-8, f"exact preparation energy off at u={u}")


def check_doubles_bound() -> None:
    for u in (0.1, 1.0, 4.0, 16.0):
        r = prepare(u, Mode.DOUBLES)
        _require(r.energy >= r.exact_energy - 1e-9, f"doubles energy below ground state at u={u}")
        _require(r.fidelity < 1, f"doubles fidelity reached 1 at u={u}")


def _fixed_factors() -> list[ExcitationFactor]:
    return [
        ExcitationFactor((up(2), dn(1)), (up(1), dn(0)), 0.37),
        ExcitationFactor((up(2), up(3)), (up(0), up(1)), -1.1),
        ExcitationFactor((up(2), up(3), dn(1), dn(2)), (up(0), up(1), dn(0), dn(3)), 0.6),
    ]


def random_factor(rng: np.random.Generator) -> ExcitationFactor:
    """A random Sz-conserving double or quad with a random angle."""
    while True:
        rank = int(rng.choice([2, 4]))
        n_up = int(rng.integers(0, rank + 1))
        ups = rng.permutation(4)
        dns = rng.permutation(4)
        if n_up > 2 or rank - n_up > 2:
            continue
        sources = [up(int(k)) for k in ups[:n_up]] + [dn(int(k)) for k in dns[: rank - n_up]]
        targets = [up(int(k)) for k in ups[2 : 2 + n_up]] + [dn(int(k)) for k in dns[2 : 2 + rank - n_up]]
        order = rng.permutation(rank)
        targets = [targets[i] for i in order]
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        return ExcitationFactor(tuple(targets), tuple(sources), theta)


def check_identities(factors: Iterable[ExcitationFactor]) -> None:
    n = len(half_filled_basis())
    eye = np.eye(n, dtype=complex)
    for f in factors:
        _require(verify_cube_identity(f) < 1e-12, f"cube identity fails for {f}")
        _require(verify_square_identity(f) < 1e-12, f"square identity fails for {f}")
        closed = np.column_stack([apply_factor(eye[:, j], f) for j in range(n)])
        _require(np.abs(closed - dense_factor_exponential(f)).max() < 1e-12, f"closed form != expm for {f}")


def check_random_identities(count: int = 100, seed: int = 2024) -> None:
    rng = np.random.default_rng(seed)
    check_identities(random_factor(rng) for _ in range(count))


def check_vqe() -> None:
    from .vqe import VqeConfig, minimize, recipe_problem

    r = minimize(recipe_problem(HubbardParams(4.0)), VqeConfig(seed=1))
    _require(abs(r.best_energy - ground_energy_cubic(4.0)) < 1e-7, "VQE did not reach the ground energy at u=4")


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[[], None]


FAST = (
    Check("spectra", check_spectra_agree),
    Check("cubic", check_cubic),
    Check("amplitudes", check_amplitude_pattern),
    Check("noninteracting", check_noninteracting_limit),
    Check("singlet", check_singlet),
    Check("exact-prep", check_exact_preparation),
    Check("doubles-bound", check_doubles_bound),
    Check("identities", lambda: check_identities(_fixed_factors())),
)
FULL = FAST + (
    Check("random-identities", check_random_identities),
    Check("vqe", check_vqe),
)


def run(level: str, out: TextIO) -> bool:
    clear_all_caches()
    checks = {"fast": FAST, "full": FULL}[level]
    failures = 0
    for check in checks:
        start = time.perf_counter()
        try:
            check.fn()
        except Exception as exc:  # report every failure, keep going
            failures += 1
            print(f"FAIL {check.name}: {type(exc).__name__}: {exc}", file=out)
        else:
            print(f"ok   {check.name} ({time.perf_counter() - start:.2f}s)", file=out)
    print(f"{len(checks) - failures}/{len(checks)} checks passed", file=out)
    return failures == 0
