"""Closed-form and recursive volume sums for diagonalizable systems.

For a single-input system with distinct real eigenvalues, the normalized
volume V_N of the N-step reachable region (the spectrum-only part, before
the 2^n coordinate/gain prefactor) admits three routes:

* direct: the exact determinant sum over the n-by-N power matrix
  [lambda_i^k] (see :mod:`reachvol.zonotope`), O(N^n) determinants;
* recursive: a dynamic program over deleted-eigenvalue subsequences,
  O(2^n N) arithmetic;
* analytic: a 2^n-term expansion over eigenvalue subsets, each term a sign
  coefficient times a power factor times two distribution factors, with
  cost independent of N.

The expansion's terms cancel heavily near the N = n anchor, so subset
terms are evaluated in arbitrary precision (mpmath, 40 significant digits
by default) and rounded once on output; the recursion needs no divisions
and runs in ordinary doubles.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from mpmath import mp, mpf

from .model import (
    EPS_DISTINCT,
    EPS_SING,
    EigenStructure,
    SingularFactorError,
    SpectrumClass,
    SpectrumError,
    StateSpaceModel,
    UnboundedRegionError,
    classify_spectrum,
    diagonalize,
    reachability_generators,
)
from .zonotope import symmetric_volume

__all__ = [
    "DEFAULT_DPS",
    "SubsetTerm",
    "VolumeReport",
    "distribution_factor",
    "power_factor",
    "sign_coefficient",
    "quasi_vandermonde",
    "recursive_volume_sum",
    "analytic_volume_sum",
    "analytic_volume_terms",
    "analytic_volume_sum_grouped",
    "infinite_volume_sum",
    "full_volume",
    "deletion_identity_residual",
    "substitution_identity_residuals",
]

# Working precision (significant digits) for the subset-term expansion.
DEFAULT_DPS = 40


@dataclass(frozen=True)
class SubsetTerm:
    """One eigenvalue-subset term of the analytic expansion.

    value = sign * power * dist_in * dist_out, where `subset` holds the
    selected 1-based eigenvalue indices, `power` is the product of their
    N-th powers, and dist_in/dist_out are the distribution factors of the
    subset and of its complement.
    """

    subset: tuple
    sign: int
    power: float
    dist_in: float
    dist_out: float
    value: float


@dataclass(frozen=True)
class VolumeReport:
    """Result of a volume computation.

    volume is always nonnegative.  normalized_sum is the spectrum-only sum
    (signed; eigenvalue routes only), so that for those routes
    volume = prefactor * |normalized_sum| with the 2^n coordinate/gain
    prefactor of the eigenstructure.  terms is the per-subset breakdown
    (analytic route only), ordered by subset size then lexicographically.
    """

    volume: float
    route: str
    normalized_sum: float = None
    terms: tuple = None
    spectrum: SpectrumClass = None
    warnings: tuple = ()


def _check_sorted_spectrum(lam):
    if lam.ndim != 1 or lam.size < 1:
        raise ValueError("spectrum must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(lam)):
        raise ValueError("spectrum must be finite")
    if lam.size > 1 and np.any(np.diff(lam) < 0):
        raise ValueError("spectrum must be sorted ascending")


def distribution_factor(lambdas, mode="discrete_positive", *, eps_sing=None):
    """Product of pairwise and per-eigenvalue distribution factors.

    Pairwise factors couple every ordered pair (i < k) of the given
    sequence; per-eigenvalue factors depend on the mode:

    ==================== ============================== =================
    mode                 pairwise factor                per-eigenvalue
    ==================== ============================== =================
    discrete_positive    (l_k - l_i) / (1 - l_i l_k)    1 / (1 - l_i)
    discrete_negative_abs |pairwise product|            1 / (1 + l_i)
    continuous           |(l_k - l_i) / (l_i + l_k)|    1 / l_i
    ==================== ============================== =================

    The empty sequence gives 1 (blank-sequence convention).

    Raises
    ------
    SingularFactorError
        If any denominator is within eps_sing of zero; the message names
        the offending eigenvalue or pair.
    """
    eps = EPS_SING if eps_sing is None else eps_sing
    lam = [float(x) for x in np.asarray(lambdas, dtype=float).ravel()]
    if mode not in ("discrete_positive", "discrete_negative_abs", "continuous"):
        raise ValueError(f"unknown mode {mode!r}")
    pair = 1.0
    for i in range(len(lam)):
        for k in range(i + 1, len(lam)):
            if mode == "continuous":
                den = lam[i] + lam[k]
            else:
                den = 1.0 - lam[i] * lam[k]
            if abs(den) < eps:
                raise SingularFactorError(
                    f"pair (lambda_{i + 1}={lam[i]}, lambda_{k + 1}={lam[k]}) "
                    f"makes a pairwise denominator vanish"
                )
            pair *= (lam[k] - lam[i]) / den
    if mode in ("discrete_negative_abs", "continuous"):
        pair = abs(pair)
    out = pair
    for i, x in enumerate(lam):
        den = {"discrete_positive": 1.0 - x,
               "discrete_negative_abs": 1.0 + x,
               "continuous": x}[mode]
        if abs(den) < eps:
            raise SingularFactorError(
                f"lambda_{i + 1}={x} makes a per-eigenvalue denominator vanish"
            )
        out /= den
    return out


def power_factor(lambdas, N, mode="discrete"):
    """Product of N-th eigenvalue powers (or the exponential, in CT).

    mode "discrete" gives prod lambda_i**N, "discrete_abs" uses |lambda_i|,
    and "continuous" interprets N as a time horizon T and returns
    exp(sum lambda_i * T).  The empty sequence gives 1.  Values that
    overflow double precision are re-evaluated in log space and reported.
    """
    lam = [float(x) for x in np.asarray(lambdas, dtype=float).ravel()]
    if mode not in ("discrete", "discrete_abs", "continuous"):
        raise ValueError(f"unknown mode {mode!r}")
    if not lam:
        return 1.0
    if mode == "continuous":
        arg = math.fsum(lam) * float(N)
        if arg > 709.0:
            raise OverflowError(
                f"power factor overflows double precision (log magnitude {arg:.6g})"
            )
        return math.exp(arg)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    try:
        out = 1.0
        for x in lam:
            out *= (abs(x) if mode == "discrete_abs" else x) ** int(N)
        if math.isinf(out):
            raise OverflowError
        return out
    except OverflowError:
        logmag = int(N) * math.fsum(math.log(abs(x)) for x in lam if x != 0.0)
        raise OverflowError(
            f"power factor overflows double precision (log magnitude {logmag:.6g})"
        ) from None


def sign_coefficient(subset, n):
    """Sign (-1)**((n+1)*s - sum(subset)) of a subset term.

    `subset` is a strictly increasing tuple of 1-based eigenvalue indices
    (size s) out of {1, ..., n}; the empty subset gives +1.
    """
    sub = tuple(int(j) for j in subset)
    if any(j < 1 or j > n for j in sub):
        raise ValueError(f"subset {sub} has indices outside 1..{n}")
    if any(b <= a for a, b in zip(sub, sub[1:])):
        raise ValueError(f"subset {sub} must be strictly increasing")
    return 1 if ((n + 1) * len(sub) - sum(sub)) % 2 == 0 else -1


def quasi_vandermonde(lambdas, exponents):
    """Determinant of the power matrix [lambda_i ** e_k].

    For 0 < lambda_1 < ... < lambda_n and strictly increasing nonnegative
    exponents the result is strictly positive (the generalized Vandermonde
    positivity that makes the direct volume sum cancellation-free).
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    exps = tuple(int(e) for e in np.atleast_1d(exponents))
    if len(exps) != lam.size:
        raise ValueError("need as many exponents as eigenvalues")
    if any(e < 0 for e in exps):
        raise ValueError("exponents must be nonnegative")
    if any(b <= a for a, b in zip(exps, exps[1:])):
        raise ValueError("exponents must be strictly increasing")
    M = lam[:, None] ** np.asarray(exps)[None, :]
    return float(np.linalg.det(M))


def _vandermonde_product(lam):
    p = 1.0
    for a in range(len(lam)):
        for b in range(a + 1, len(lam)):
            p *= lam[b] - lam[a]
    return p


def recursive_volume_sum(lambdas, N, *, eps_distinct=None):
    """Normalized volume sum V_N by the O(2^n N) deletion recursion.

    Seeds: V_N for a single eigenvalue accumulates the geometric series
    1 + lambda + ... + lambda^(N-1); at N = n the sum collapses to the
    Vandermonde product of the subset.  The step from N-1 to N adds, for
    each eigenvalue, a signed power times the sum over the spectrum with
    that eigenvalue deleted, so the table runs over all non-empty
    sub-spectra (bitmask-keyed).

    The recursion is division-free, hence usable where the closed-form
    expansion has (removable) singular factors, e.g. eigenvalues at 1 or
    reciprocal pairs.  It equals the region volume for strictly positive
    spectra; for mixed signs the determinants it accumulates are no longer
    all of one sign and the result is not a volume.

    Parameters
    ----------
    lambdas : sorted ascending distinct reals
    N : int, N >= n

    Returns
    -------
    float
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    lam_arr = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _check_sorted_spectrum(lam_arr)
    n = lam_arr.size
    radius = max(float(np.max(np.abs(lam_arr))), 1.0)
    if n > 1 and np.min(np.diff(lam_arr)) < eps_d * radius:
        raise SpectrumError(SpectrumClass.DEGENERATE, "recursion needs distinct eigenvalues")
    N = int(N)
    if N < n:
        raise ValueError(f"N must be >= n={n}, got {N}")
    lam = [float(x) for x in lam_arr]

    full = (1 << n) - 1
    masks = list(range(1, full + 1))
    members = {m: [i for i in range(n) if m >> i & 1] for m in masks}
    seed = {m: _vandermonde_product([lam[i] for i in members[m]]) for m in masks}
    # empty spectrum contributes the constant 1 (empty determinant)
    prev = {0: 1.0}
    pows = [1.0] * n  # lambda_i ** (k-1) at step k
    for k in range(1, N + 1):
        cur = {0: 1.0}
        for m in masks:
            mem = members[m]
            sz = len(mem)
            if sz > k:
                continue
            if sz == k:
                cur[m] = seed[m]
            else:
                acc = prev[m]
                for pos, i in enumerate(mem, start=1):
                    term = pows[i] * prev[m & ~(1 << i)]
                    acc += term if (sz + pos) % 2 == 0 else -term
                cur[m] = acc
        for i in range(n):
            pows[i] *= lam[i]
        prev = cur
    return prev[full]


def _eigen_subsets(n):
    """All subsets of {1..n} as 1-based tuples, by size then lexicographic."""
    for s in range(n + 1):
        yield from combinations(range(1, n + 1), s)


def _mp_phi(lam_mp, sel):
    """Positive-path distribution factor over `sel` (0-based), in mpmath."""
    p = mpf(1)
    for a in range(len(sel)):
        for b in range(a + 1, len(sel)):
            den = 1 - lam_mp[sel[a]] * lam_mp[sel[b]]
            p *= (lam_mp[sel[b]] - lam_mp[sel[a]]) / den
    for a in sel:
        p /= 1 - lam_mp[a]
    return p


def _validate_positive_path(lam, eps_d, eps_s, what):
    _check_sorted_spectrum(lam)
    cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)
    if cls is not SpectrumClass.ALL_POSITIVE_DISTINCT:
        raise SpectrumError(cls, f"{what} requires 0 < lambda_1 < ... < lambda_n "
                                 f"with no factor denominator near zero")


def _analytic_terms(lam_arr, N, *, inverse_powers=False, dps=DEFAULT_DPS):
    """Subset terms of the expansion, evaluated in working precision.

    Returns (terms, total) with terms ordered by size then lexicographic
    and total the exactly accumulated sum, both rounded to float once.
    """
    n = lam_arr.size
    with mp.workdps(dps):
        lam_mp = [mpf(float(x)) for x in lam_arr]
        phis = {}
        for sub in _eigen_subsets(n):
            sel = tuple(j - 1 for j in sub)
            phis[sub] = _mp_phi(lam_mp, sel)
        terms = []
        total = mpf(0)
        exp_n = -int(N) if inverse_powers else int(N)
        for sub in _eigen_subsets(n):
            comp = tuple(j for j in range(1, n + 1) if j not in sub)
            sgn = sign_coefficient(sub, n)
            ups = mpf(1)
            for j in sub:
                ups *= lam_mp[j - 1] ** exp_n
            val = sgn * ups * phis[sub] * phis[comp]
            total += val
            terms.append(SubsetTerm(sub, sgn, float(ups), float(phis[sub]),
                                    float(phis[comp]), float(val)))
        return terms, float(total)


def analytic_volume_sum(lambdas, N, *, eps_distinct=None, eps_sing=None, dps=DEFAULT_DPS):
    """Normalized volume sum V_N by the closed-form subset expansion.

    Sums, over all 2^n subsets of the spectrum, sign * power * dist_in *
    dist_out; evaluation cost does not depend on N.  Requires a strictly
    positive, strictly ascending spectrum with every factor denominator
    (1 - lambda_i, 1 - lambda_i lambda_j) bounded away from zero.

    Raises
    ------
    SpectrumError
        Carrying the failing SpectrumClass when a hypothesis does not hold;
        callers may fall back to the recursive or direct route.
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _validate_positive_path(lam, eps_d, eps_s, "the analytic expansion")
    if int(N) < lam.size:
        raise ValueError(f"N must be >= n={lam.size}, got {N}")
    _, total = _analytic_terms(lam, N, dps=dps)
    return total


def analytic_volume_terms(lambdas, N, *, eps_distinct=None, eps_sing=None, dps=DEFAULT_DPS):
    """Subset-term breakdown of :func:`analytic_volume_sum`.

    Returns the 2^n terms in deterministic order (size, then lex); their
    exact sum is the value analytic_volume_sum returns.
    """
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _validate_positive_path(lam, eps_d, eps_s, "the analytic expansion")
    if int(N) < lam.size:
        raise ValueError(f"N must be >= n={lam.size}, got {N}")
    terms, _ = _analytic_terms(lam, N, dps=dps)
    return terms


def analytic_volume_sum_grouped(lambdas, N, form="factored", *, eps_distinct=None,
                                eps_sing=None, dps=DEFAULT_DPS):
    """V_N via the regrouped prints of the expansion.

    form "complement" swaps each subset's sign and power factor for the
    complement's; form "factored" pulls the full-spectrum distribution
    factor out and couples subset to complement through the cross factor.
    Both are algebraic rearrangements of :func:`analytic_volume_sum` and
    exist to cross-check the three printed forms against each other.
    """
    if form not in ("complement", "factored"):
        raise ValueError(f"unknown form {form!r}")
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _validate_positive_path(lam, eps_d, eps_s, "the analytic expansion")
    n = lam.size
    if int(N) < n:
        raise ValueError(f"N must be >= n={n}, got {N}")
    with mp.workdps(dps):
        lam_mp = [mpf(float(x)) for x in lam]
        total = mpf(0)
        if form == "complement":
            for sub in _eigen_subsets(n):
                comp = tuple(j for j in range(1, n + 1) if j not in sub)
                ups = mpf(1)
                for j in comp:
                    ups *= lam_mp[j - 1] ** int(N)
                total += (sign_coefficient(comp, n) * ups
                          * _mp_phi(lam_mp, tuple(j - 1 for j in sub))
                          * _mp_phi(lam_mp, tuple(j - 1 for j in comp)))
        else:
            phi_full = _mp_phi(lam_mp, tuple(range(n)))
            for sub in _eigen_subsets(n):
                comp = tuple(j for j in range(1, n + 1) if j not in sub)
                ups = mpf(1)
                for j in sub:
                    ups *= lam_mp[j - 1] ** int(N)
                cross = mpf(1)
                for j in sub:
                    for k in comp:
                        a, b = (j, k) if j < k else (k, j)
                        cross *= (1 - lam_mp[j - 1] * lam_mp[k - 1]) / (
                            lam_mp[b - 1] - lam_mp[a - 1])
                total += sign_coefficient(sub, n) * ups * cross
            total *= phi_full
        return float(total)


def infinite_volume_sum(lambdas, *, eps_sing=None, eps_distinct=None):
    """Normalized volume of the infinite-horizon reachable region.

    For a distinct same-sign spectrum strictly inside the unit circle this
    is the full-spectrum distribution factor with per-eigenvalue factors
    1 / (1 - |lambda_i|); the finite-horizon sums converge to it at rate
    max|lambda|**N.
    """
    eps_s = EPS_SING if eps_sing is None else eps_sing
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _check_sorted_spectrum(lam)
    n = lam.size
    if np.max(np.abs(lam)) >= 1.0:
        raise UnboundedRegionError("infinite-time region unbounded")
    cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)
    if cls in (SpectrumClass.DEGENERATE, SpectrumClass.MIXED_SIGN):
        raise SpectrumError(cls, "infinite-horizon formula needs distinct same-sign eigenvalues")
    if np.any(1.0 - np.abs(lam) < eps_s):
        raise SingularFactorError("an eigenvalue magnitude is within tolerance of 1")
    out = 1.0
    for a in range(n):
        for b in range(a + 1, n):
            out *= (lam[b] - lam[a]) / (1.0 - lam[a] * lam[b])
    for x in lam:
        out /= 1.0 - abs(x)
    return float(out)


def deletion_identity_residual(lambdas, *, eps_sing=None):
    """Left-minus-right residual of the one-eigenvalue-deletion identity.

    The identity: (1 - prod(lambda)) * Phi(full spectrum) equals the
    alternating sum over k of (product of all eigenvalues but the k-th)
    times Phi(spectrum with the k-th deleted), with Phi the signed
    discrete distribution factor.  Exact algebraically; the residual
    measures floating-point evaluation only.
    """
    eps = EPS_SING if eps_sing is None else eps_sing
    lam = [float(x) for x in np.atleast_1d(np.asarray(lambdas, dtype=float))]
    n = len(lam)
    if n < 1:
        raise ValueError("need at least one eigenvalue")

    def phi(vals):
        return distribution_factor(vals, "discrete_positive", eps_sing=eps)

    ups_full = math.prod(lam)
    lhs = (1.0 - ups_full) * phi(lam)
    rhs_terms = []
    for k in range(1, n + 1):
        rest = lam[:k - 1] + lam[k:]
        ups = math.prod(rest) if rest else 1.0
        rhs_terms.append((1.0 if (1 + k) % 2 == 0 else -1.0) * ups * phi(rest))
    return lhs - math.fsum(rhs_terms)


def _phi_float(vals, eps):
    return distribution_factor(vals, "discrete_positive", eps_sing=eps)


def substitution_identity_residuals(lambdas, i, j, *, members=None, eps_sing=None):
    """Residuals of the three substitution limits of the distribution factor.

    `lambdas` is the ambient spectrum (strictly ascending); `members` picks
    the index subset the factor is built over (default: all); i < j are
    1-based ambient indices.  The three left-hand sides are evaluated by
    substituting into factored forms that stay finite at the substitution
    point:

    1. Phi at lambda_j := lambda_i -- zero when both are members, a signed
       member swap when only lambda_j is, unchanged when lambda_j is not.
    2. (1 - lambda_i) * Phi at lambda_i := 1 -- a signed deletion when
       lambda_i is a member, zero otherwise.
    3. (1 - lambda_i lambda_j) * Phi at lambda_j := 1/lambda_i -- a signed
       double deletion scaled by (1 + lambda_i)/(1 - lambda_i) when both
       are members, zero otherwise.

    Returns the triple of left-minus-right values, each ~0 up to rounding.
    """
    eps = EPS_SING if eps_sing is None else eps_sing
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    _check_sorted_spectrum(lam)
    n = lam.size
    if members is None:
        members = tuple(range(1, n + 1))
    members = tuple(int(k) for k in members)
    if any(k < 1 or k > n for k in members) or \
            any(b <= a for a, b in zip(members, members[1:])):
        raise ValueError(f"members {members} must be strictly increasing in 1..{n}")
    i, j = int(i), int(j)
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}")
    vals = {k: float(lam[k - 1]) for k in members}
    mem_vals = [vals[k] for k in members]
    m = len(members)

    def pos(k):
        return members.index(k) + 1  # 1-based position within members

    # --- case 1: Phi at lambda_j := lambda_i --------------------------------
    x = float(lam[i - 1])
    if j not in members:
        r1 = _phi_float(mem_vals, eps) - _phi_float(mem_vals, eps)
    elif i in members:
        subst = [x if k == j else vals[k] for k in members]
        r1 = _phi_float(subst, eps) - 0.0
    else:
        s = pos(j)
        rest = [vals[k] for k in members if k != j]
        lhs = _phi_float(rest, eps) / (1.0 - x)
        for q, k in enumerate(members, start=1):
            if k == j:
                continue
            y = vals[k]
            den = 1.0 - x * y
            if abs(den) < eps or abs(1.0 - x) < eps:
                raise SingularFactorError(
                    f"substitution point collides with lambda_{k} in case 1")
            lhs *= ((x - y) if q < s else (y - x)) / den
        h = sum(1 for k in members if k < i)
        new_set = sorted(rest + [x])
        rhs = (1.0 if (s - h - 1) % 2 == 0 else -1.0) * _phi_float(new_set, eps)
        r1 = lhs - rhs

    # --- case 2: (1 - lambda_i) * Phi at lambda_i := 1 ----------------------
    if i not in members:
        r2 = 0.0 * _phi_float(mem_vals, eps)
    else:
        h = pos(i)
        rest = [vals[k] for k in members if k != i]
        lhs = _phi_float(rest, eps)
        for q, k in enumerate(members, start=1):
            if k == i:
                continue
            y = vals[k]
            den = 1.0 - y  # 1 - y*x at x = 1
            if abs(den) < eps:
                raise SingularFactorError(
                    f"substitution point collides with lambda_{k} in case 2")
            lhs *= ((1.0 - y) if q < h else (y - 1.0)) / den
        rhs = (1.0 if (m - h) % 2 == 0 else -1.0) * _phi_float(rest, eps)
        r2 = lhs - rhs

    # --- case 3: (1 - lambda_i lambda_j) * Phi at lambda_j := 1/lambda_i ----
    if abs(x) < eps:
        raise SingularFactorError("lambda_i near 0 is inadmissible in case 3")
    y_sub = 1.0 / x
    if i in members and j in members:
        if abs(1.0 - x) < eps:
            raise SingularFactorError("lambda_i near 1 is inadmissible in case 3")
        h, s = pos(i), pos(j)
        rest = [vals[k] for k in members if k not in (i, j)]
        lhs = (y_sub - x) * _phi_float(rest, eps) / ((1.0 - x) * (1.0 - y_sub))
        for q, k in enumerate(members, start=1):
            if k in (i, j):
                continue
            y = vals[k]
            d1 = 1.0 - y * x
            d2 = 1.0 - y * y_sub
            if abs(d1) < eps or abs(d2) < eps:
                raise SingularFactorError(
                    f"substitution point collides with lambda_{k} in case 3")
            lhs *= ((x - y) if q < h else (y - x)) / d1
            lhs *= ((y_sub - y) if q < s else (y - y_sub)) / d2
        rhs = (1.0 if (s - h) % 2 == 0 else -1.0) * (1.0 + x) / (1.0 - x) \
            * _phi_float(rest, eps)
        r3 = lhs - rhs
    else:
        subst = [y_sub if k == j else vals[k] for k in members]
        r3 = (1.0 - x * y_sub) * _phi_float(subst, eps)

    return (r1, r2, r3)


def _ensure_eigen(system, eps_distinct, eps_complex):
    if isinstance(system, EigenStructure):
        return system
    return diagonalize(system, eps_distinct=eps_distinct, eps_complex=eps_complex)


def _ensure_model(system):
    if isinstance(system, StateSpaceModel):
        return system
    return system.to_model()


def _direct_report(system, N, warnings=()):
    model = _ensure_model(system)
    vol = symmetric_volume(reachability_generators(model, N))
    return VolumeReport(volume=vol, route="direct", warnings=tuple(warnings))


def full_volume(system, N=None, route="auto", *, eps_distinct=None, eps_sing=None,
                eps_complex=None, dps=DEFAULT_DPS):
    """Volume of the N-step (or infinite-horizon) reachable region.

    Parameters
    ----------
    system : StateSpaceModel or EigenStructure
    N : int, or None/inf for the infinite-horizon region
    route : {"auto", "direct", "recursive", "analytic"}
        "auto" picks the analytic expansion when its hypotheses hold, the
        recursion when only a singular-factor check fails, and the exact
        determinant sum otherwise.  All-negative distinct spectra use the
        eigenvalue routes on the modulus spectrum (ascending |lambda|),
        which generates the same region volume column for column.

    Returns
    -------
    VolumeReport
        With the route actually used, diagnostics, and (analytic route)
        the subset-term breakdown.
    """
    if route not in ("auto", "direct", "recursive", "analytic"):
        raise ValueError(f"unknown route {route!r}")
    eps_d = EPS_DISTINCT if eps_distinct is None else eps_distinct
    eps_s = EPS_SING if eps_sing is None else eps_sing
    eps_c = eps_complex

    infinite = N is None or (isinstance(N, float) and math.isinf(N))
    if infinite:
        if route in ("direct", "recursive"):
            raise ValueError(f"route {route!r} cannot evaluate an infinite horizon")
        eig = _ensure_eigen(system, eps_d, eps_c)
        lam = eig.eigenvalues
        cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)
        phi = infinite_volume_sum(lam, eps_sing=eps_s, eps_distinct=eps_d)
        return VolumeReport(volume=eig.volume_prefactor * abs(phi), route="infinite",
                            normalized_sum=phi, spectrum=cls)

    N = int(N)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")

    if route == "direct":
        return _direct_report(system, N)

    warnings = []
    try:
        eig = _ensure_eigen(system, eps_d, eps_c)
    except (SpectrumError, ValueError) as exc:
        if route == "auto":
            warnings.append(f"eigenvalue routes unavailable ({exc}); used direct route")
            return _direct_report(system, N, warnings)
        raise

    lam = eig.eigenvalues
    n = eig.n
    cls = classify_spectrum(lam, "discrete", eps_distinct=eps_d, eps_sing=eps_s)

    if N < n:
        # fewer generators than dimensions: the region is flat
        return VolumeReport(volume=0.0, route=route if route != "auto" else "analytic",
                            normalized_sum=0.0, spectrum=cls,
                            warnings=("N < n: flat region, volume 0",))

    negative = bool(np.all(lam < 0.0))
    work = np.sort(np.abs(lam)) if negative else lam
    if negative:
        warnings.append("all-negative spectrum: evaluated on |lambda| sorted ascending")

    def recursive_report():
        v = float(recursive_volume_sum(work, N, eps_distinct=eps_d))
        return VolumeReport(volume=eig.volume_prefactor * abs(v), route="recursive",
                            normalized_sum=v, spectrum=cls, warnings=tuple(warnings))

    def analytic_report():
        terms = analytic_volume_terms(work, N, eps_distinct=eps_d, eps_sing=eps_s, dps=dps)
        v = analytic_volume_sum(work, N, eps_distinct=eps_d, eps_sing=eps_s, dps=dps)
        return VolumeReport(volume=eig.volume_prefactor * abs(v), route="analytic",
                            normalized_sum=v, terms=tuple(terms), spectrum=cls,
                            warnings=tuple(warnings))

    if route == "recursive":
        if cls is SpectrumClass.MIXED_SIGN:
            raise SpectrumError(cls, "recursion requires a same-sign spectrum")
        if cls is SpectrumClass.DEGENERATE:
            raise SpectrumError(cls, "recursion requires distinct eigenvalues")
        return recursive_report()

    if route == "analytic":
        return analytic_report()

    # auto
    if cls in (SpectrumClass.ALL_POSITIVE_DISTINCT, SpectrumClass.ALL_NEGATIVE_DISTINCT):
        return analytic_report()
    if cls is SpectrumClass.NEAR_SINGULAR_FACTOR:
        if np.all(lam > 0.0) or negative:
            warnings.append("analytic route refused (NearSingularFactor); used recursion")
            return recursive_report()
        warnings.append("NearSingularFactor on a mixed-sign spectrum; used direct route")
        return _direct_report(system, N, warnings)
    warnings.append(f"spectrum class {cls}; used direct route")
    return _direct_report(system, N, warnings)
