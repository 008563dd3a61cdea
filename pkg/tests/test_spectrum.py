import math

import numpy as np
import pytest

import oracles
from hubbard_ucc.fock import basis_state, half_filled_basis
from hubbard_ucc.hamiltonian import HubbardParams
from hubbard_ucc.spectrum import (
    Amplitudes,
    PatternMismatch,
    extract_amplitudes,
    ground_energy_cubic,
    ground_space,
    ground_state_ed,
    pattern_residual,
    spectrum,
    summarize,
    template_vector,
    total_spin_squared,
)

GRID = (0.01, 0.1, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0)


def amp(vec, ups, downs):
    return vec[half_filled_basis().index(basis_state(ups, downs))]


def test_cubic_at_zero():
    assert ground_energy_cubic(0.0) == pytest.approx(-4.0, abs=1e-12)


@pytest.mark.parametrize("u", GRID)
def test_cubic_matches_numpy_roots_and_ed(u):
    roots = oracles.cubic_roots(u)
    expected = min(r.real for r in roots if abs(r.imag) < 1e-9)
    assert ground_energy_cubic(u) == pytest.approx(expected, abs=1e-9)
    assert abs(ground_state_ed(HubbardParams(u))[0] - ground_energy_cubic(u)) < 1e-9


def test_u4_cubic_form():
    # at U=4 the cubic reads E^3 - 12E^2 + 16E + 96
    e = ground_energy_cubic(4.0)
    assert e**3 - 12 * e**2 + 16 * e + 96 == pytest.approx(0.0, abs=1e-10)


def test_ed_matches_oracle_ground_state():
    e, gs = ground_state_ed(HubbardParams(4.0))
    e_ref, gs_ref = oracles.ground_state(4.0)
    assert e == pytest.approx(e_ref, abs=1e-12)
    assert np.abs(gs - gs_ref).max() < 1e-10


def test_ed_at_zero_and_degenerate_space():
    e, _ = ground_state_ed(HubbardParams(0.0))
    assert e == pytest.approx(-4.0, abs=1e-12)
    w, v = ground_space(HubbardParams(0.0))
    assert len(w) > 1
    assert np.allclose(v.conj().T @ v, np.eye(len(w)))


def test_noninteracting_limit_amplitudes():
    a = extract_amplitudes(ground_state_ed(HubbardParams(1e-6))[1])
    assert a.alpha == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert abs(a.beta) < 1e-6 and abs(a.gamma) < 1e-6


@pytest.mark.parametrize("u", GRID)
def test_pattern_holds(u):
    _, gs = ground_state_ed(HubbardParams(u))
    a = extract_amplitudes(gs)
    assert pattern_residual(gs, a) < 1e-9
    assert a.norm_squared == pytest.approx(1.0, abs=1e-10)
    # the two doubly-weighted states carry +-2 beta
    assert amp(gs, (1, 3), (0, 2)).real == pytest.approx(2 * a.beta, abs=1e-9)
    assert amp(gs, (0, 2), (1, 3)).real == pytest.approx(-2 * a.beta, abs=1e-9)


def test_template_has_26_zeros():
    v = template_vector(Amplitudes(0.6, 0.1, 0.2))
    assert np.count_nonzero(v) == 10


def test_pattern_mismatch_raised():
    _, gs = ground_state_ed(HubbardParams(4.0))
    broken = gs.copy()
    broken[half_filled_basis().index(basis_state((1, 2), (0, 1)))] *= -1
    with pytest.raises(PatternMismatch):
        extract_amplitudes(broken)
    stray = gs.copy()
    stray[half_filled_basis().index(basis_state((0, 1), (0, 1)))] = 1e-8
    with pytest.raises(PatternMismatch):
        extract_amplitudes(stray)


def test_amplitudes_monotone():
    us = np.linspace(0.05, 16, 60)
    amps = np.array([extract_amplitudes(ground_state_ed(HubbardParams(u))[1]) for u in us])
    assert np.all(np.diff(amps[:, 0]) < 0)
    assert np.all(np.diff(amps[:, 1]) > 0) and np.all(np.diff(amps[:, 2]) > 0)
    assert np.all(amps > 0)


@pytest.mark.parametrize("u", [1.0, 4.0, 16.0])
def test_singlet_and_gap(u):
    p = HubbardParams(u)
    _, gs = ground_state_ed(p)
    s2 = total_spin_squared(gs)
    assert s2 < 1e-9
    # site-space S^2, independent of the momentum labelling
    assert abs(np.vdot(gs, oracles.spin_squared_momentum() @ gs)) < 1e-9
    levels = spectrum(p)
    assert levels[1] - levels[0] > 0


def test_spin_squared_of_product_states():
    basis = half_filled_basis()
    # up and down fill different physical momenta: not a singlet
    open_shell = basis.basis_vector(basis_state((0, 1), (0, 1)))
    assert total_spin_squared(open_shell) == pytest.approx(1.0, abs=1e-12)
    # down label 3 carries momentum 1, so this is a closed shell
    closed = basis.basis_vector(basis_state((0, 1), (0, 3)))
    assert total_spin_squared(closed) == pytest.approx(0.0, abs=1e-12)
    pair = (closed + basis.basis_vector(basis_state((0, 3), (0, 1)))) / math.sqrt(2)
    assert total_spin_squared(pair) == pytest.approx(0.0, abs=1e-12)
    # same-label reading: |01;03> is open-shell there
    assert total_spin_squared(closed, mirror_down=False) == pytest.approx(1.0, abs=1e-12)
    s2_ref = oracles.spin_squared_momentum()
    for v in (open_shell, closed, pair):
        assert total_spin_squared(v) == pytest.approx(np.vdot(v, s2_ref @ v).real, abs=1e-12)


def test_summary_fields():
    s = summarize(HubbardParams(4.0))
    assert abs(s.energy_ed - s.energy_cubic) < 1e-9
    assert s.gap > 0
    assert s.amplitudes.norm_squared == pytest.approx(1.0, abs=1e-10)
