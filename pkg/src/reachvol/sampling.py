"""Seeded random test-case generators.

Spectra are drawn uniformly with a minimum pairwise gap so the
closed-form factor denominators stay bounded and floating-point
tolerances stay meaningful; matrices are built from controlled singular
values or eigenbases so powers and inverses do not amplify noise.
"""

import numpy as np

from .model import StateSpaceModel

__all__ = [
    "random_spectrum",
    "random_negative_spectrum",
    "random_orthogonal",
    "random_invertible",
    "random_diagonalizable",
    "random_single_input",
]


def random_spectrum(rng, n, low=0.05, high=0.95, min_gap=0.02):
    """Distinct ascending spectrum in (low, high) with pairwise gaps >= min_gap."""
    if n * min_gap >= (high - low):
        raise ValueError("gap constraint is infeasible for this range")
    while True:
        lam = np.sort(rng.uniform(low, high, n))
        if n == 1 or np.min(np.diff(lam)) > min_gap:
            return lam


def random_negative_spectrum(rng, n, low=-0.95, high=-0.05, min_gap=0.02):
    """Distinct ascending all-negative spectrum with pairwise gaps >= min_gap."""
    return -random_spectrum(rng, n, -high, -low, min_gap)[::-1]


def random_orthogonal(rng, n):
    """Haar-ish random orthogonal matrix via QR with sign fixing."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_invertible(rng, n, sv_low=0.6, sv_high=1.6):
    """Random matrix with singular values in [sv_low, sv_high].

    The bounded condition number keeps powers of the matrix and of its
    inverse numerically tame in oracle cross-checks.
    """
    U = random_orthogonal(rng, n)
    V = random_orthogonal(rng, n)
    s = rng.uniform(sv_low, sv_high, n)
    return U @ np.diag(s) @ V.T


def random_diagonalizable(rng, spectrum, skew=0.3):
    """Matrix with the given real spectrum and a well-conditioned eigenbasis."""
    lam = np.asarray(spectrum, dtype=float)
    n = lam.size
    V = random_orthogonal(rng, n) @ np.diag(rng.uniform(1.0 - skew, 1.0 + skew, n)) \
        @ random_orthogonal(rng, n)
    return V @ np.diag(lam) @ np.linalg.inv(V)


def random_single_input(rng, spectrum, min_gain=0.2, skew=0.3):
    """Single-input model with the given spectrum and nonzero modal gains.

    Redraws the input column until every mode couples with gain at least
    `min_gain`, so volumes stay bounded away from zero.
    """
    A = random_diagonalizable(rng, spectrum, skew)
    lam = np.asarray(spectrum, dtype=float)
    n = lam.size
    w, v = np.linalg.eig(A.T)
    W = np.real(v).T[np.argsort(np.real(w))]
    W = W / np.linalg.norm(W, axis=1, keepdims=True)
    while True:
        b = rng.uniform(-1.0, 1.0, (n, 1))
        if np.min(np.abs(W @ b)) >= min_gain:
            return StateSpaceModel(A, b)
