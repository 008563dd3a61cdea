"""Pure-numpy kernels. Same signatures as the compiled ``_ckernels`` module."""
import numpy as np


def apply_rotations(psi, partners, weights, cosines, sines):
    """Apply a run of two-level rotations to ``psi``.

    Row ``f`` of ``partners``/``weights`` describes one factor: for every
    basis index ``i`` with ``partners[f, i] >= 0`` the new amplitude is
    ``cos * psi[i] + sin * weights[f, i] * psi[partners[f, i]]``; indices with
    a negative partner are left alone.
    """
    out = np.array(psi, dtype=np.complex128, copy=True)
    for f in range(partners.shape[0]):
        p = partners[f]
        active = p >= 0
        prev = out.copy()
        out[active] = cosines[f] * prev[active] + sines[f] * weights[f, active] * prev[p[active]]
    return out


def expectation(h, psi):
    """Real part of <psi|h|psi>."""
    return float(np.vdot(psi, h @ psi).real)
