"""Factorized unitary coupled-cluster state preparation for the four-site Hubbard ring.

Statevector simulation over the 36-state half-filled sector, an exact
diagonalization oracle, closed-form preparation angles and a variational loop.
"""
from .fock import SectorBasis, Spin, SpinOrbital, basis_state, dn, half_filled_basis, label, up
from .hamiltonian import HubbardParams, build_momentum_space, build_real_space
from .kernels import backend_name
from .spectrum import GroundStateSummary, PatternMismatch, extract_amplitudes, ground_energy_cubic, ground_state_ed
from .stateprep import DomainError, Mode, doubles_angles, exact_angles, fidelity, prepare
from .ucc import AnsatzSequence, ExcitationFactor, apply_factor, apply_sequence, excitation
from .vqe import VqeConfig, VqeProblem, VqeResult, minimize

__version__ = "0.1.0"

__all__ = [
    "AnsatzSequence",
    "DomainError",
    "ExcitationFactor",
    "GroundStateSummary",
    "HubbardParams",
    "Mode",
    "PatternMismatch",
    "SectorBasis",
    "Spin",
    "SpinOrbital",
    "VqeConfig",
    "VqeProblem",
    "VqeResult",
    "apply_factor",
    "apply_sequence",
    "backend_name",
    "basis_state",
    "build_momentum_space",
    "build_real_space",
    "dn",
    "doubles_angles",
    "exact_angles",
    "excitation",
    "extract_amplitudes",
    "fidelity",
    "ground_energy_cubic",
    "ground_state_ed",
    "half_filled_basis",
    "label",
    "minimize",
    "prepare",
    "up",
]
