"""Finite-dimensional obstructions to orbit density.

Closed-form generalized-eigenvector orbits, adjoint pairing laws that pin
orbit inner products to polynomial-times-power profiles, the grow-or-die
norm dichotomy for matrices with spectrum off the unit circle, orbit span
rank, the coverage defect of an orbit against a dyadic net, and the
compressed-orbit identity on invariant-complement splits.  Dense work is
delegated to the kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    ComplementNotInvariant,
    NotEigenvector,
    NotInGeneralizedKernel,
)
from .seqspace import (
    FiniteMatrix,
    Operator,
    SeqVec,
    adjoint_apply,
    apply,
    inner,
    norm,
)
from .subspace import ZeroPattern, dyadic_net, membership_defect

__all__ = [
    "jordan_orbit",
    "eigen_orbit_pairing",
    "generalized_pairing_polynomial",
    "DichotomyVerdict",
    "spectral_dichotomy",
    "orbit_span_rank",
    "density_defect",
    "compression_orbit_check",
    "planted_eigen_instance",
    "planted_chain_instance",
]

KERNEL_TOL = 1e-10

EXIT_LOW_FACTOR = 1e-6
EXIT_HIGH_FACTOR = 1e6


def _kernel_residual(step, y: np.ndarray, p: int) -> float:
    w = y.copy()
    for _ in range(p):
        w = step(w)
    return float(np.linalg.norm(w))


def _kernel_residual_seq(step, y: SeqVec, p: int) -> float:
    w = y
    for _ in range(p):
        w = step(w)
    return norm(w)


def jordan_orbit(op: FiniteMatrix, lam: complex, p: int, y: SeqVec, n: int) -> SeqVec:
    """n-th orbit point of a rank-p generalized eigenvector, in closed form.

    Exact integer binomials carry the combinatorial part; only the powers of
    ``lam`` and the p matrix applications touch floats.  Requires n >= p and
    (op - lam)^p y = 0 within ``KERNEL_TOL``.
    """
    if p < 1:
        raise ValueError("rank p must be >= 1")
    if n < p:
        raise ValueError(f"closed form needs n >= p, got n={n}, p={p}")
    m = op.array
    y_dense = y.to_dense(op.dim)
    scale = max(1.0, float(np.linalg.norm(y_dense)))
    if _kernel_residual(lambda w: m @ w - lam * w, y_dense, p) > KERNEL_TOL * scale:
        raise NotInGeneralizedKernel(f"(T - lam)^{p} y is not ~ 0")

    powers = [y_dense]
    for _ in range(p - 1):
        powers.append(m @ powers[-1])
    # powers[p-k] = T^(p-k) y for k = 1..p

    total = np.zeros(op.dim, dtype=np.complex128)
    for k in range(1, p + 1):
        coeff = Fraction(math.comb(p, k) * math.comb(n, p) * k, n - p + k)
        if (k - 1) % 2 == 1:
            coeff = -coeff
        total += float(coeff) * lam ** (n - p + k) * powers[p - k]
    return SeqVec.from_dense(total)


def eigen_orbit_pairing(
    op: Operator, x: SeqVec, y: SeqVec, lam: complex, n_max: int
) -> float:
    """Worst deviation of <T^n x, y> from conj(lam)^n <x, y> over n <= n_max.

    ``y`` must satisfy T* y = lam y within ``KERNEL_TOL`` (relative to its
    norm); the pairing law then forces the whole profile.
    """
    scale = max(1.0, norm(y))
    if norm(adjoint_apply(op, y) - lam * y) > KERNEL_TOL * scale:
        raise NotEigenvector("y is not an adjoint eigenvector for lam")
    base = inner(x, y)
    lam_bar = lam.conjugate()
    worst = 0.0
    v = x
    for n in range(n_max + 1):
        if n > 0:
            v = apply(op, v)
        worst = max(worst, abs(inner(v, y) - lam_bar**n * base))
    return worst


def generalized_pairing_polynomial(
    op: Operator, x: SeqVec, y: SeqVec, lam: complex, p: int, n_max: int
) -> float:
    """Fit <T^n x, y> = conj(lam)^(n-p) Q(n), deg Q < p, and report the residual.

    Q is solved from the p pairings n = p..2p-1; the returned value is the
    worst |<T^n x, y> - conj(lam)^(n-p) Q(n)| over 2p <= n <= n_max.  For
    lam = 0 the profile collapses: Q is the constant <T^p x, y> and every
    later pairing must vanish outright.
    """
    if p < 1:
        raise ValueError("rank p must be >= 1")
    scale = max(1.0, norm(y))
    if _kernel_residual_seq(lambda w: adjoint_apply(op, w) - lam * w, y, p) > KERNEL_TOL * scale:
        raise NotInGeneralizedKernel(f"(T* - lam)^{p} y is not ~ 0")

    pairings = []
    v = x
    for n in range(n_max + 1):
        if n > 0:
            v = apply(op, v)
        pairings.append(inner(v, y))

    lam_bar = lam.conjugate()
    if lam == 0:
        coeffs = np.zeros(p, dtype=np.complex128)
        coeffs[0] = pairings[p] if p <= n_max else 0j
    else:
        rows = min(p, n_max - p + 1)
        if rows < p:
            raise ValueError(f"need n_max >= 2p - 1 = {2 * p - 1} to fit Q")
        ns = np.arange(p, 2 * p)
        vander = np.vander(ns.astype(np.complex128), p, increasing=True)
        rhs = np.array(
            [pairings[n] / lam_bar ** (n - p) for n in ns], dtype=np.complex128
        )
        coeffs = np.linalg.solve(vander, rhs)

    worst = 0.0
    for n in range(2 * p, n_max + 1):
        if lam == 0:
            predicted = 0j
        else:
            q = sum(coeffs[i] * n**i for i in range(p))
            predicted = lam_bar ** (n - p) * q
        worst = max(worst, abs(pairings[n] - predicted))
    return worst


@dataclass(frozen=True)
class DichotomyVerdict:
    classification: str  # "toZero" | "toInfinity" | "neither"
    first_norm: float
    last_norm: float
    steps: int
    ratio_trend: float

    def to_json_dict(self) -> dict:
        return {
            "classification": self.classification,
            "firstNorm": self.first_norm,
            "lastNorm": self.last_norm,
            "steps": self.steps,
            "ratioTrend": self.ratio_trend,
        }


def spectral_dichotomy(op: FiniteMatrix, x: SeqVec, n_steps: int = 400) -> DichotomyVerdict:
    """Iterate orbit norms and classify collapse vs blowup.

    Exits as soon as the norm leaves the band
    [EXIT_LOW_FACTOR * ||x||, EXIT_HIGH_FACTOR * ||x||]; staying inside for
    all ``n_steps`` steps yields "neither".
    """
    x_norm = norm(x)
    if x_norm == 0.0:
        raise ValueError("dichotomy needs a nonzero start vector")
    low = EXIT_LOW_FACTOR * x_norm
    high = EXIT_HIGH_FACTOR * x_norm
    norms = _kernels.orbit_norms(op.array, x.to_dense(op.dim), n_steps, low, high)
    last = float(norms[-1])
    steps = len(norms) - 1
    if last < low:
        cls = "toZero"
    elif last > high or not math.isfinite(last):
        cls = "toInfinity"
    else:
        cls = "neither"
    if steps >= 1 and last > 0.0 and math.isfinite(last):
        trend = (last / float(norms[0])) ** (1.0 / steps)
    else:
        trend = 0.0
    return DichotomyVerdict(cls, float(norms[0]), last, steps, trend)


def orbit_span_rank(op: FiniteMatrix, x: SeqVec, n_steps: int, rel_tol: float = 1e-10) -> int:
    """Numerical rank of span{x, Tx, ..., T^n x} by pivoted Gram-Schmidt."""
    if n_steps < 0:
        raise ValueError("orbit length must be >= 0")
    points = _kernels.orbit_points(op.array, x.to_dense(op.dim), n_steps)
    return _pivoted_rank(points.T, rel_tol)


def _pivoted_rank(cols: np.ndarray, rel_tol: float) -> int:
    work = np.array(cols, dtype=np.complex128)
    d, m = work.shape
    threshold = rel_tol * max(
        (float(np.linalg.norm(work[:, j])) for j in range(m)), default=0.0
    )
    if threshold == 0.0:
        return 0
    rank = 0
    for _ in range(min(d, m)):
        lengths = np.linalg.norm(work, axis=0)
        pivot = int(np.argmax(lengths))
        if lengths[pivot] <= threshold:
            break
        q = work[:, pivot] / lengths[pivot]
        work -= np.outer(q, q.conj() @ work)
        rank += 1
    return rank


def density_defect(
    points: Sequence[SeqVec] | np.ndarray,
    pattern: ZeroPattern,
    net_level: int,
    support_bound: int,
    eps: float,
    membership_tol: float = 1e-9,
) -> float:
    """Fraction of a unit-ball dyadic net left uncovered by the orbit points.

    Points outside the subspace (beyond ``membership_tol``) cannot cover
    anything and are discarded first; an empty remaining cloud leaves the
    whole net uncovered (defect 1).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    net = dyadic_net(pattern, support_bound, net_level)

    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.complex128)
        forbidden = [
            i for i in range(arr.shape[1]) if pattern.forbids(i)
        ]
        if forbidden:
            bad = np.sqrt(
                np.sum(np.abs(arr[:, forbidden]) ** 2, axis=1)
            ) > membership_tol
            arr = arr[~bad]
        dim = arr.shape[1]
        member_points = arr
    else:
        kept = [v for v in points if membership_defect(v, pattern) <= membership_tol]
        dim = max(
            [support_bound]
            + [v.support()[-1] + 1 for v in kept if v.support()]
        )
        member_points = np.array(
            [v.to_dense(dim) for v in kept], dtype=np.complex128
        ).reshape(len(kept), dim)

    if member_points.shape[0] == 0:
        return 1.0

    net_dim = max(dim, support_bound)
    net_arr = np.array([v.to_dense(net_dim) for v in net], dtype=np.complex128)
    if member_points.shape[1] < net_dim:
        padded = np.zeros((member_points.shape[0], net_dim), dtype=np.complex128)
        padded[:, : member_points.shape[1]] = member_points
        member_points = padded

    misses = _kernels.uncovered_count(net_arr, member_points, eps)
    return misses / len(net)


def compression_orbit_check(
    op: FiniteMatrix, pattern: ZeroPattern, x: SeqVec, horizon: int
) -> float:
    """Worst gap between P T^n x and (P T)^n x over n <= horizon.

    P projects onto the pattern's allowed coordinates.  Requires the
    forbidden coordinates to span an invariant complement: each forbidden
    basis column of the matrix must stay out of the allowed block.  The
    start vector must lie in the allowed block.
    """
    m = op.array
    d = op.dim
    allowed = np.array([not pattern.forbids(i) for i in range(d)])
    if not allowed.any():
        raise ValueError("pattern forbids every coordinate of the block")
    col_scale = max(1.0, float(np.abs(m).max()))
    for j in range(d):
        if allowed[j]:
            continue
        leak = float(np.linalg.norm(m[allowed, j]))
        if leak > KERNEL_TOL * col_scale:
            raise ComplementNotInvariant(
                f"column {j} leaks into the allowed block (norm {leak:.3e})"
            )
    x_dense = x.to_dense(d)
    if float(np.linalg.norm(x_dense[~allowed])) > KERNEL_TOL * max(1.0, norm(x)):
        raise ValueError("start vector must lie in the allowed block")

    mask = allowed.astype(np.complex128)
    full = x_dense.copy()
    compressed = x_dense.copy()
    worst = 0.0
    for _ in range(horizon):
        full = m @ full
        compressed = mask * (m @ compressed)
        worst = max(worst, float(np.linalg.norm(mask * full - compressed)))
    return worst


# --------------------------------------------------------------------------
# Seeded instance generators for the pairing laws.  Unitary conjugation
# keeps the planted structure well conditioned, so observed deviations
# measure the pairing law, not the generator.


def planted_eigen_instance(
    rng: np.random.Generator, dim: int
) -> tuple[FiniteMatrix, SeqVec, complex]:
    """A matrix with a known adjoint eigenpair: returns (T, y, lam) with T* y = lam y."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    moduli = rng.uniform(0.2, 1.0, size=dim)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=dim)
    eigs = moduli * np.exp(1j * phases)
    t = q @ np.diag(eigs) @ q.conj().T
    y = SeqVec.from_dense(q[:, 0])
    # T* = Q conj(Lambda) Q*, so the adjoint eigenvalue at q_0 is conj(eigs[0])
    return FiniteMatrix.from_array(t), y, complex(np.conj(eigs[0]))


def planted_chain_instance(
    rng: np.random.Generator, dim: int, p: int
) -> tuple[FiniteMatrix, SeqVec, complex]:
    """A matrix whose adjoint has a planted rank-p chain: (T* - lam)^p y = 0."""
    if not 1 <= p <= dim:
        raise ValueError("need 1 <= p <= dim")
    lam = complex(rng.uniform(0.3, 0.9) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
    block = np.diag(np.full(p, lam)) + np.diag(np.ones(p - 1), 1)
    rest = np.diag(
        rng.uniform(0.2, 0.95, size=dim - p)
        * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=dim - p))
    )
    adj = np.zeros((dim, dim), dtype=np.complex128)
    adj[:p, :p] = block
    adj[p:, p:] = rest
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    t = (q @ adj @ q.conj().T).conj().T
    y = SeqVec.from_dense(q[:, p - 1])
    return FiniteMatrix.from_array(t), y, lam
