"""Narrow controllable regions, all-negative spectra, and continuous time.

Three generalizations of the reachable-region volume expansion:

* the narrow controllable (recovery) region, whose expansion swaps the
  eigenvalue powers for inverse powers;
* systems whose spectrum is entirely negative, where the expansion runs
  over the eigenvalue moduli sorted ascending (the alternating column
  signs of the generator matrix drop out of the absolute determinants, so
  the region volume equals that of the modulus system);
* linear continuous-time systems, where the region is generated by the
  matrix exponential over [0, T], the power factor becomes exp(sum l T),
  and the distribution factor uses pairwise sums and 1/lambda.

Each analytic route here is paired with an independent brute-force check:
the narrow generators of the model definition, the plain reachability
generators, and a left-endpoint Riemann discretization of the integral
region, all fed through the exact determinant sum.
"""

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .analytic import (
    DEFAULT_DPS,
    SubsetTerm,
    VolumeReport,
    _analytic_terms,
    _eigen_subsets,
    _validate_positive_path,
    analytic_volume_sum,
    analytic_volume_terms,
    full_volume,
    sign_coefficient,
)
from .model import (
    EPS_DISTINCT,
    EPS_SING,
    EigenStructure,
    SpectrumClass,
    SpectrumError,
    StateSpaceModel,
    VolumeDomainError,
    classify_spectrum,
    diagonalize,
)
from .zonotope import determinant_count, symmetric_volume

__all__ = [
    "ContinuousModel",
    "narrow_volume_analytic",
    "negative_spectrum_volume",
    "ct_volume_analytic",
    "ct_discretized_oracle",
    "narrow_via_relation",
]


@dataclass(frozen=True)
class ContinuousModel:
    """Continuous-time pair (A_c, B_c) with a time horizon T.

    The region of interest is the set of states reachable by
    x = integral_0^T exp(A_c t) B_c u(t) dt with |u(t)| <= 1.
    """

    A_c: np.ndarray
    B_c: np.ndarray
    T: float

    def __post_init__(self):
        A = np.asarray(self.A_c, dtype=float)
        B = np.asarray(self.B_c, dtype=float)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A_c must be square, got {A.shape}")
        if B.shape != (A.shape[0], 1):
            raise ValueError(f"B_c must be a single column of length {A.shape[0]}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            raise ValueError("continuous model matrices must be finite")
        T = float(self.T)
        if not (T >= 0.0 and math.isfinite(T)):
            raise ValueError(f"horizon T must be finite and >= 0, got {T}")
        object.__setattr__(self, "A_c", A)
        object.__setattr__(self, "B_c", B)
        object.__setattr__(self, "T", T)

    @classmethod
    def from_spectrum(cls, eigenvalues, modal_gains, T):
        lam = np.asarray(eigenvalues, dtype=float).reshape(-1)
        order = np.argsort(lam)
        g = np.asarray(modal_gains, dtype=float).reshape(-1)
        if g.size != lam.size:
            raise ValueError("need one modal gain per eigenvalue")
        return cls(np.diag(lam[order]), g[order].reshape(-1, 1), T)

    @property
    def n(self):
        return self.A_c.shape[0]


def _ensure_eigen(system, eps_distinct=None, eps_complex=None):
    if isinstance(system, EigenStructure):
        return system
    return diagonalize(system, eps_distinct=eps_distinct, eps_complex=eps_complex)


def narrow_volume_analytic(system, N, *, eps_distinct=None, eps_sing=None,
                           dps=DEFAULT_DPS):
    """Volume of the N-step narrow controllable region, closed form.

    Same subset expansion as the reachable region but with inverse
    eigenvalue powers, reflecting that the narrow region is generated by
    A^-N B, ..., A^-1 B.  Requires a strictly positive distinct spectrum
    bounded away from 0 and 1.  The signed normalized sum is reported as
    computed; the volume is its magnitude times the 2^n prefactor.
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    eig = _ensure_eigen(system, eps_d)
    lam = eig.eigenvalues
    if np.any(np.abs(lam) < eps_s):
        raise VolumeDomainError("narrow region needs nonzero eigenvalues")
    _validate_positive_path(lam, eps_d, eps_s, "the narrow-region expansion")
    N = int(N)
    if N < eig.n:
        raise ValueError(f"N must be >= n={eig.n}, got {N}")
    terms, total = _analytic_terms(lam, N, inverse_powers=True, dps=dps)
    warnings = ()
    if total < 0.0:
        warnings = ("signed normalized sum is negative; volume is its magnitude",)
    cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)
    return VolumeReport(volume=eig.volume_prefactor * abs(total), route="analytic",
                        normalized_sum=total, terms=tuple(terms), spectrum=cls,
                        warnings=warnings)


def negative_spectrum_volume(system, N, *, eps_distinct=None, eps_sing=None,
                             dps=DEFAULT_DPS):
    """Volume of the N-step reachable region for an all-negative spectrum.

    Evaluated as the positive-path expansion over the eigenvalue moduli
    sorted ascending: in that order the power factor is prod |lambda|**N,
    the pairwise distribution factors are the absolute pairwise couplings,
    and the per-eigenvalue factors are 1/(1 + lambda).  Column-sign
    flips of the generators cancel inside the absolute determinants, so
    this equals the exact generator-matrix volume at every N.  Subset
    indices in the term breakdown refer to the modulus-ascending order.
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    eig = _ensure_eigen(system, eps_d)
    lam = eig.eigenvalues
    if not np.all(lam < 0.0):
        cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)
        raise SpectrumError(cls, "negative-spectrum route requires lambda_i < 0 for all i")
    work = np.sort(np.abs(lam))
    N = int(N)
    if N < eig.n:
        raise ValueError(f"N must be >= n={eig.n}, got {N}")
    terms = analytic_volume_terms(work, N, eps_distinct=eps_d, eps_sing=eps_s, dps=dps)
    total = analytic_volume_sum(work, N, eps_distinct=eps_d, eps_sing=eps_s, dps=dps)
    return VolumeReport(volume=eig.volume_prefactor * abs(total), route="analytic",
                        normalized_sum=total, terms=tuple(terms),
                        spectrum=SpectrumClass.ALL_NEGATIVE_DISTINCT,
                        warnings=("evaluated on |lambda| sorted ascending",))


def _ct_validate(lam, eps_d, eps_s):
    cls = classify_spectrum(lam, "continuous", eps_distinct=eps_d, eps_sing=eps_s)
    if cls is SpectrumClass.COMPLEX:
        raise SpectrumError(cls, "continuous-time route needs a real spectrum")
    if cls is SpectrumClass.DEGENERATE:
        raise SpectrumError(cls, "continuous-time route needs distinct eigenvalues")
    if cls is SpectrumClass.NEAR_SINGULAR_FACTOR:
        raise SpectrumError(cls, "an eigenvalue or a pairwise sum is within "
                                 "tolerance of zero")
    return cls


def ct_volume_analytic(model, *, eps_distinct=None, eps_sing=None, dps=DEFAULT_DPS):
    """Volume of the time-T continuous-time reachable region, closed form.

    Subset expansion with power factor exp(sum_subset lambda T) and the
    continuous distribution factor (absolute pairwise couplings over the
    pairwise sums, per-eigenvalue 1/lambda).  The signed sum's magnitude is
    reported as the volume.  The absolute-value placement in the pairwise
    factor makes the expansion track the integral region exactly when all
    eigenvalues are negative; a warning is attached otherwise.
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    sys_model = StateSpaceModel(model.A_c, model.B_c)
    eig = diagonalize(sys_model, eps_distinct=eps_d)
    lam = eig.eigenvalues
    cls = _ct_validate(lam, eps_d, eps_s)
    n = eig.n
    T = model.T
    warnings = []
    if not np.all(lam < 0.0):
        warnings.append("spectrum is not strictly stable; the closed form is "
                        "exact only for all-negative spectra")
    with mp.workdps(dps):
        lam_mp = [mpf(float(x)) for x in lam]

        def phi_ct(sel):
            p = mpf(1)
            for a in range(len(sel)):
                for b in range(a + 1, len(sel)):
                    p *= (lam_mp[sel[b]] - lam_mp[sel[a]]) / (
                        lam_mp[sel[a]] + lam_mp[sel[b]])
            p = abs(p)
            for a in sel:
                p /= lam_mp[a]
            return p

        phis = {sub: phi_ct(tuple(j - 1 for j in sub)) for sub in _eigen_subsets(n)}
        total = mpf(0)
        terms = []
        for sub in _eigen_subsets(n):
            comp = tuple(j for j in range(1, n + 1) if j not in sub)
            sgn = sign_coefficient(sub, n)
            ups = mp.e ** (mpf(T) * math.fsum(float(lam[j - 1]) for j in sub)) \
                if sub else mpf(1)
            val = sgn * ups * phis[sub] * phis[comp]
            total += val
            terms.append(SubsetTerm(sub, sgn, float(ups), float(phis[sub]),
                                    float(phis[comp]), float(val)))
        total_f = float(total)
    if total_f < 0.0:
        warnings.append("signed normalized sum is negative; volume is its magnitude")
    return VolumeReport(volume=eig.volume_prefactor * abs(total_f), route="analytic",
                        normalized_sum=total_f, terms=tuple(terms), spectrum=cls,
                        warnings=tuple(warnings))


def ct_discretized_oracle(model, dt, *, max_terms=20_000_000, eps_distinct=None):
    """Brute-force volume of a left-endpoint Riemann cover of the CT region.

    Builds the generators exp(A_c k dt) B_c dt for k = 0 .. ceil(T/dt)-1
    (matrix exponential through the eigendecomposition, valid on the
    real-distinct-spectrum domain) and runs the exact determinant sum.
    Converges to the continuous region volume at first order in dt.

    Raises ValueError when C(K, n) would exceed `max_terms`, with advice
    to enlarge dt.
    """
    dt = float(dt)
    if not 0.0 < dt < model.T:
        raise ValueError(f"dt must lie in (0, T), got dt={dt}, T={model.T}")
    # ceil of the real quotient: guard against float jitter just above an
    # integer, which would append a spurious generator beyond T
    q = model.T / dt
    K = round(q) if abs(q - round(q)) <= 1e-9 * max(1.0, q) else math.ceil(q)
    n = model.n
    count = determinant_count(K, n) if K >= n else 0
    if count > max_terms:
        raise ValueError(
            f"C({K},{n}) = {count} determinants exceeds the budget {max_terms}; "
            f"use a larger dt or a smaller state dimension")
    eig = diagonalize(StateSpaceModel(model.A_c, model.B_c),
                      eps_distinct=eps_distinct)
    W = eig.left_vectors
    Winv = np.linalg.inv(W)
    step = Winv @ np.diag(np.exp(eig.eigenvalues * dt)) @ W
    g = model.B_c * dt
    cols = np.empty((n, K))
    for k in range(K):
        cols[:, k] = g[:, 0]
        g = step @ g
    return symmetric_volume(cols)


def narrow_via_relation(model, N, route="auto", *, eps_distinct=None, eps_sing=None):
    """Narrow-region volume through the inverse-system identity.

    The narrow region of (A, B) is the image under A^-1 of the reachable
    region of (A^-1, B), so its volume is |det A|^-1 times that reachable
    volume; this routes the right-hand side through :func:`full_volume`
    as an independent second route for narrow volumes.
    """
    eps_s = EPS_SING if eps_sing is None else eps_sing
    A = model.A
    scale = np.linalg.norm(A, 2)
    det = np.linalg.det(A)
    if scale == 0.0 or abs(det) <= eps_s * scale ** model.n:
        raise VolumeDomainError("narrow region undefined for singular A")
    inverse_model = StateSpaceModel(np.linalg.inv(A), model.B)
    report = full_volume(inverse_model, N, route, eps_distinct=eps_distinct,
                         eps_sing=eps_sing)
    return report.volume / abs(det)
