"""Pure numpy kernels; same contracts as the compiled module."""

from __future__ import annotations

import numpy as np

BACKEND = "fallback"

# Keeps pairwise-distance blocks around ~8 MB of complex128.
_CHUNK = 256


def orbit_norms(mat, vec, n_steps, exit_low, exit_high):
    """Norms of vec, M vec, M^2 vec, ... with early exit outside (exit_low, exit_high).

    Returns a float64 array of the norms actually computed; shorter than
    n_steps + 1 exactly when a threshold fired.
    """
    m = np.ascontiguousarray(mat, dtype=np.complex128)
    v = np.array(vec, dtype=np.complex128)
    norms = np.empty(n_steps + 1, dtype=np.float64)
    norms[0] = np.linalg.norm(v)
    last = 0
    for n in range(1, n_steps + 1):
        v = m @ v
        norms[n] = np.linalg.norm(v)
        last = n
        if norms[n] < exit_low or norms[n] > exit_high:
            break
    return norms[: last + 1]


def orbit_points(mat, vec, n_steps):
    """The full orbit as rows: out[n] = M^n vec, n = 0..n_steps."""
    m = np.ascontiguousarray(mat, dtype=np.complex128)
    v = np.array(vec, dtype=np.complex128)
    out = np.empty((n_steps + 1, v.shape[0]), dtype=np.complex128)
    out[0] = v
    for n in range(1, n_steps + 1):
        v = m @ v
        out[n] = v
    return out


def uncovered_count(targets, points, eps):
    """How many target rows have no point row within distance eps.

    Non-finite point coordinates never cover anything (their distances
    compare as not-below-threshold), matching the compiled loop.
    """
    t = np.ascontiguousarray(targets, dtype=np.complex128)
    p = np.ascontiguousarray(points, dtype=np.complex128)
    if t.shape[0] == 0:
        return 0
    if p.shape[0] == 0:
        return int(t.shape[0])
    eps2 = float(eps) * float(eps)
    covered = np.zeros(t.shape[0], dtype=bool)
    # |p - t|^2 expanded as ||p||^2 + ||t||^2 - 2 Re <p, t>
    pn = np.einsum("ij,ij->i", p.real, p.real) + np.einsum("ij,ij->i", p.imag, p.imag)
    for start in range(0, t.shape[0], _CHUNK):
        block = t[start : start + _CHUNK]
        tn = np.einsum("ij,ij->i", block.real, block.real) + np.einsum(
            "ij,ij->i", block.imag, block.imag
        )
        with np.errstate(invalid="ignore"):
            cross = p @ block.conj().T
            d2 = pn[:, None] + tn[None, :] - 2.0 * cross.real
            covered[start : start + block.shape[0]] = (d2 <= eps2).any(axis=0)
    return int(np.count_nonzero(~covered))
