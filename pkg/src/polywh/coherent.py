"""Coherent states over the number basis of a polynomial ladder algebra.

Two families, both stored as plain coefficient vectors with c_0 = 1
unless normalization is requested:

    perelomov           c_n = sqrt(F(n)!) / n! * z^n * e^{-i F(n) phi}
    barut-girardello    c_n = z^n / sqrt(F(n)!)   * e^{-i F(n) phi}

The phase ``phi`` is read from the parameter pack.  Existence domains are
enforced as typed errors, never as numeric garbage:

* perelomov on an infinite ladder exists only for r = 1 and |z| strictly
  inside the disk of radius 1/sqrt(kappa_1) (all of C when kappa_1 = 0);
* perelomov on a finite ladder exists for any r and any z, and equals the
  nilpotent exponential exp(z * raising)|0>;
* barut-girardello states (lowering-operator eigenstates) exist on the
  infinite ladder for any r and any z, and not at all for complex z on a
  finite ladder -- see `grassmann` for the nilpotent-variable version.

Infinite series are cut off once a geometric ratio bound puts the
remaining l2 tail below ``tail_tol`` of the accumulated norm; the bound
actually achieved is recorded on the state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraParams,
    LadderRep,
    _freeze,
    classify,
    commutator_gap,
    reciprocal_ells,
    structure_function,
)
from .errors import DomainError

__all__ = [
    "StateKind",
    "CutoffMeta",
    "CoherentState",
    "perelomov_state",
    "perelomov_via_exponential",
    "bg_state",
    "check_bg_eigen",
    "time_evolve",
    "overlap",
    "hyper_0f",
    "bg_normalization",
    "perelomov_log_partial_norms",
]

DEFAULT_TAIL_TOL = 1e-14
MAX_SERIES_TERMS = 200_000


class StateKind(str, enum.Enum):
    PERELOMOV = "perelomov"
    BARUT_GIRARDELLO = "barut-girardello"


@dataclass(frozen=True)
class CutoffMeta:
    """Whether the coefficient vector is exact (finite ladder) or a series
    truncation, and in the latter case the achieved relative l2 tail bound."""

    exact: bool
    n_terms: int
    tail_bound: float = 0.0
    tail_tol: float = 0.0


@dataclass(frozen=True)
class CoherentState:
    kind: StateKind
    params: AlgebraParams
    z: complex
    coeffs: np.ndarray
    normalized: bool
    cutoff_meta: CutoffMeta

    @property
    def phi(self) -> float:
        return self.params.phi

    def __len__(self) -> int:
        return len(self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def _truncate_series(step, ratio_sup, tail_tol, max_terms):
    """Accumulate c_0 = 1, c_n = c_{n-1} * step(n) until the l2 tail is
    provably below tail_tol times the partial norm.

    ratio_sup(j) must bound |c_{m+1}/c_m| for every m >= j; once it drops
    under 1 the tail is dominated by a geometric series, giving
    tail^2 <= |c_next|^2 / (1 - q^2).
    """
    coeffs = [1.0 + 0.0j]
    norm2 = 1.0
    n = 0
    while True:
        c_next = coeffs[-1] * step(n + 1)
        q = ratio_sup(n + 1)
        if q < 1.0:
            tail2 = abs(c_next) ** 2 / (1.0 - q * q)
            if tail2 <= tail_tol * tail_tol * norm2:
                bound = math.sqrt(tail2 / norm2)
                return np.array(coeffs, dtype=complex), bound
        n += 1
        if n >= max_terms:
            raise DomainError(
                f"series did not reach tail tolerance {tail_tol:g} within {max_terms} terms"
            )
        coeffs.append(c_next)
        norm2 += abs(c_next) ** 2


def _finish(kind, params, z, coeffs, normalize, meta) -> CoherentState:
    if normalize:
        coeffs = coeffs / np.linalg.norm(coeffs)
    return CoherentState(kind, params, z, _freeze(coeffs), bool(normalize), meta)


def perelomov_state(
    params: AlgebraParams,
    z,
    *,
    normalize: bool = False,
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_terms: int = MAX_SERIES_TERMS,
) -> CoherentState:
    """State with coefficients sqrt(F(n)!)/n! * z^n * e^{-i F(n) phi}.

    Finite ladder: exact vector of d coefficients, any r, any z.
    Infinite ladder: requires r = 1 and |z| < 1/sqrt(kappa_1) (open disk);
    the series is truncated at the requested tail tolerance.
    """
    z = complex(z)
    dim = classify(params)
    phi = params.phi
    if dim.is_finite:
        f = [structure_function(params, n) for n in range(dim.d)]
        coeffs = np.empty(dim.d, dtype=complex)
        coeffs[0] = 1.0
        for n in range(1, dim.d):
            gap = float(f[n] - f[n - 1])
            coeffs[n] = coeffs[n - 1] * z * math.sqrt(float(f[n])) / n * np.exp(-1j * gap * phi)
        meta = CutoffMeta(exact=True, n_terms=dim.d)
        return _finish(StateKind.PERELOMOV, params, z, coeffs, normalize, meta)

    if params.r >= 2:
        raise DomainError(
            "perelomov-type states on an infinite ladder exist only for r = 1 "
            f"(the series cannot be normalized for r >= 2); got r = {params.r}"
        )
    k1 = float(params.kappas[0])
    if k1 > 0.0 and abs(z) * math.sqrt(k1) >= 1.0:
        raise DomainError(
            "z lies outside the existence disk: need |z| < 1/sqrt(kappa_1) = "
            f"{1.0 / math.sqrt(k1):.6g}, got |z| = {abs(z):.6g}"
        )

    def step(n):
        f_n = float(structure_function(params, n))
        gap = float(commutator_gap(params, n - 1))
        return z * math.sqrt(f_n) / n * np.exp(-1j * gap * phi)

    def ratio_sup(j):
        # |c_{m+1}/c_m| = |z| sqrt((1 + k1 m)/(m + 1)) is monotone toward
        # sqrt(k1), so the sup over m >= j is attained at m = j or in the limit
        g = (1.0 + k1 * j) / (j + 1.0)
        return abs(z) * math.sqrt(max(g, k1))

    coeffs, bound = _truncate_series(step, ratio_sup, tail_tol, max_terms)
    meta = CutoffMeta(exact=False, n_terms=len(coeffs), tail_bound=bound, tail_tol=tail_tol)
    return _finish(StateKind.PERELOMOV, params, z, coeffs, normalize, meta)


def perelomov_via_exponential(
    params: AlgebraParams, z, rep: LadderRep, *, normalize: bool = False
) -> CoherentState:
    """exp(z * raising)|0> summed as the exact nilpotent polynomial.

    Independent of the series construction: on a finite ladder the raising
    matrix is nilpotent, so the exponential is a finite sum of d vector
    terms.  Agrees with `perelomov_state` entrywise.
    """
    z = complex(z)
    dim = classify(params)
    if not dim.is_finite:
        raise DomainError(
            "the nilpotent-exponential route needs a finite ladder; use the series form instead"
        )
    if rep.params != params:
        raise ValueError("representation was built for different parameters")
    if rep.truncation_order is not None:
        raise ValueError("need the untruncated representation")
    if rep.dim_window != dim.d:
        raise ValueError(f"representation window {rep.dim_window} != d = {dim.d}")
    v = np.zeros(dim.d, dtype=complex)
    v[0] = 1.0
    term = v.copy()
    for k in range(1, dim.d):
        term = (rep.raising @ term) * (z / k)
        v = v + term
    meta = CutoffMeta(exact=True, n_terms=dim.d)
    return _finish(StateKind.PERELOMOV, params, z, v, normalize, meta)


def bg_state(
    params: AlgebraParams,
    z,
    *,
    normalize: bool = False,
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_terms: int = MAX_SERIES_TERMS,
) -> CoherentState:
    """Lowering-operator eigenstate, coefficients z^n e^{-i F(n) phi} / sqrt(F(n)!).

    Exists on the infinite ladder for any r and any complex z.  On a
    finite ladder the eigenvalue equation has no complex solution, so the
    request is rejected; `grassmann.bg_grassmann_state` provides the
    nilpotent-variable construction there.
    """
    z = complex(z)
    dim = classify(params)
    if dim.is_finite:
        raise DomainError(
            "no lowering-operator eigenstate exists for complex z on a finite ladder "
            f"(d = {dim.d}); use bg_grassmann_state for the nilpotent-variable construction"
        )
    phi = params.phi

    def step(n):
        f_n = float(structure_function(params, n))
        gap = float(commutator_gap(params, n - 1))
        return z / math.sqrt(f_n) * np.exp(-1j * gap * phi)

    def ratio_sup(j):
        # F is nondecreasing on the infinite ladder, so the first ratio dominates
        return abs(z) / math.sqrt(float(structure_function(params, j + 1)))

    coeffs, bound = _truncate_series(step, ratio_sup, tail_tol, max_terms)
    meta = CutoffMeta(exact=False, n_terms=len(coeffs), tail_bound=bound, tail_tol=tail_tol)
    return _finish(StateKind.BARUT_GIRARDELLO, params, z, coeffs, normalize, meta)


def check_bg_eigen(state: CoherentState, rep: LadderRep) -> float:
    """Relative l2 residual of lowering @ c = z c.

    For truncated series the last populated row is excluded (it reads the
    first dropped coefficient, a pure cutoff artifact); exact finite
    vectors are checked on every row.  Eigenstates built at tail tolerance
    1e-14 come out below 1e-10; anything that is not a lowering
    eigenstate (e.g. a perelomov state on a deformed ladder) gives an
    O(1) residual.
    """
    if rep.params != state.params:
        raise ValueError("state and representation parameters differ")
    length = len(state.coeffs)
    if state.cutoff_meta.exact:
        if rep.dim_window != length:
            raise ValueError(
                f"window {rep.dim_window} does not match the exact state length {length}"
            )
        c = state.coeffs
        rows = slice(0, length)
    else:
        if rep.dim_window < length + 1:
            raise ValueError(
                f"window too small: need >= {length + 1} rows to apply the lowering "
                f"matrix past the cutoff, got {rep.dim_window}"
            )
        c = np.zeros(rep.dim_window, dtype=complex)
        c[:length] = state.coeffs
        rows = slice(0, length - 1)
    resid = (rep.lowering @ c - state.z * c)[rows]
    return float(np.linalg.norm(resid) / np.linalg.norm(state.coeffs))


def time_evolve(state: CoherentState, t: float) -> CoherentState:
    """Propagate with the structure-function Hamiltonian: c_n -> e^{-i F(n) t} c_n.

    Temporal stability: the result coincides with the same-kind state
    rebuilt at phase phi + t (moduli are untouched, so the cutoff metadata
    carries over unchanged).
    """
    t = float(t)
    fvals = np.array(
        [float(structure_function(state.params, n)) for n in range(len(state.coeffs))]
    )
    coeffs = state.coeffs * np.exp(-1j * fvals * t)
    return CoherentState(
        state.kind,
        state.params.with_phi(state.phi + t),
        state.z,
        _freeze(coeffs),
        state.normalized,
        state.cutoff_meta,
    )


def overlap(s1: CoherentState, s2: CoherentState, *, unchecked: bool = False) -> complex:
    """<s1|s2> = sum conj(c_n) c'_n over the common coefficient window.

    Requires matching kind and kappas.  Equal phases are required as well
    unless ``unchecked=True``: cross-phase overlaps are well-defined
    numbers but carry no verified property.
    """
    if s1.kind != s2.kind:
        raise ValueError("overlap requires matching state kinds")
    if s1.params.kappas != s2.params.kappas:
        raise ValueError("overlap requires matching algebra parameters")
    if not unchecked and s1.params.phi != s2.params.phi:
        raise ValueError("phases differ; pass unchecked=True to compute the overlap anyway")
    length = min(len(s1.coeffs), len(s2.coeffs))
    return complex(np.vdot(s1.coeffs[:length], s2.coeffs[:length]))


def hyper_0f(ells, x: float, *, rel_tol: float = 1e-16, max_terms: int = 100_000) -> float:
    """Generalized hypergeometric series 0F_q(ell_1, ..., ell_q; x).

    Summed term by term, t_{k+1} = t_k * x / ((k+1) prod_i (ell_i + k)),
    until the relative term drops below ``rel_tol``.
    """
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > rel_tol * abs(total):
        term *= x / ((k + 1) * math.prod(ell + k for ell in ells))
        total += term
        k += 1
        if k >= max_terms:
            raise DomainError("hypergeometric series did not converge")
    return total


def bg_normalization(params: AlgebraParams, z) -> float:
    """|N(z)| with |N|^2 = 0F_q(ells; prod(ells) |z|^2).

    Valid for kappas of the reciprocal-integer form 1/ell (zero kappas
    drop out).  Agrees with the l2 norm of the unnormalized
    lowering-eigenstate coefficient vector at the same z.
    """
    ells = reciprocal_ells(params)
    x = math.prod(ells) * abs(complex(z)) ** 2
    return math.sqrt(hyper_0f(ells, x))


def perelomov_log_partial_norms(params: AlgebraParams, z, n_terms: int) -> np.ndarray:
    """log of the partial sums of sum_n |c_n|^2 for the perelomov series.

    Bypasses the existence gate so that the divergence for r >= 2 on an
    infinite ladder can be exhibited numerically; works in log space
    because the terms overflow double precision almost immediately.
    """
    if classify(params).is_finite:
        raise DomainError("the divergence diagnostic applies to the infinite ladder")
    z = complex(z)
    log_term = 0.0  # log |c_n|^2
    log_sum = 0.0
    out = np.empty(n_terms)
    out[0] = 0.0
    for n in range(1, n_terms):
        f_n = float(structure_function(params, n))
        log_term += math.log(abs(z) ** 2 * f_n / n**2) if z != 0 else -math.inf
        # log-sum-exp accumulation of the partial norm
        hi, lo = max(log_sum, log_term), min(log_sum, log_term)
        log_sum = hi + math.log1p(math.exp(lo - hi))
        out[n] = log_sum
    return out
