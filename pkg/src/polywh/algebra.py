"""Ladder-operator algebras with a polynomial commutator.

The family handled here is spanned by a lowering operator, a raising
operator and a number operator N satisfying

    raising @ lowering = diag(F(0), F(1), ...),
    [lowering, raising] = G(N),          G(n) = F(n+1) - F(n),

with the structure function the degree-(r+1) polynomial

    F(n) = n * (1 + kappa_1 (n-1)) * ... * (1 + kappa_r (n-1)).

kappa_i = 0 everywhere is the harmonic oscillator (F(n) = n).  The sign
pattern of the kappas decides whether the ladder terminates: all
kappa_i >= 0 gives an infinite tower of levels, while kappa_1 < 0 with
-1/kappa_1 a positive integer (and the remaining kappas nonnegative)
gives a ladder on exactly d = 1 - 1/kappa_1 levels that closes by itself
because F(d) = 0.  Any other sign pattern is rejected at construction.

Scalar quantities (F, G, generalized factorials) are exact ``Fraction``
values; matrix representations are complex double precision, with the
raising matrix built as the exact conjugate transpose of the lowering
matrix.  All values are immutable after construction.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "AlgebraParams",
    "RepDimension",
    "LadderRep",
    "structure_function",
    "commutator_gap",
    "classify",
    "generalized_factorial",
    "build_rep",
    "build_truncated_rep",
    "reciprocal_ells",
]


def _as_fraction(value) -> Fraction:
    # floats are refused: the finite/infinite classification is an exact
    # divisibility test and must not depend on binary rounding
    if isinstance(value, float):
        raise TypeError(
            f"kappa = {value!r}: pass an exact rational (int, Fraction or 'p/q' string), not a float"
        )
    return Fraction(value)


@dataclass(frozen=True)
class AlgebraParams:
    """The r rational deformation parameters plus the representation phase.

    ``kappas`` may be given as ints, 'p/q' strings or Fractions; ``phi``
    is an arbitrary real (no range reduction is performed, since F(n) is
    not an integer in general and no universal period exists).
    """

    kappas: tuple[Fraction, ...]
    phi: float = 0.0

    def __post_init__(self):
        if isinstance(self.kappas, (str, int, Fraction)):
            raise TypeError("kappas must be a sequence of rationals, e.g. ['-1/3']")
        kappas = tuple(_as_fraction(k) for k in self.kappas)
        if not kappas:
            raise DomainError("at least one kappa is required (r >= 1)")
        for k in kappas[1:]:
            if k < 0:
                raise DomainError(
                    "only the first kappa may be negative (finite-ladder case); "
                    f"got kappa = {k} in a later slot"
                )
        if kappas[0] < 0:
            levels = -1 / kappas[0]
            if levels.denominator != 1:
                raise DomainError(
                    f"kappa_1 = {kappas[0]} does not close the ladder on an integer number "
                    f"of levels: -1/kappa_1 = {levels} is not a positive integer"
                )
        object.__setattr__(self, "kappas", kappas)
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def r(self) -> int:
        return len(self.kappas)

    def with_phi(self, phi: float) -> "AlgebraParams":
        return dataclasses.replace(self, phi=float(phi))


@dataclass(frozen=True)
class RepDimension:
    """Ladder classification: ``d`` levels, or ``None`` for an infinite tower."""

    d: int | None

    @property
    def is_finite(self) -> bool:
        return self.d is not None

    def __str__(self) -> str:
        return "infinite" if self.d is None else f"finite(d={self.d})"


def classify(params: AlgebraParams) -> RepDimension:
    """Infinite when every kappa is >= 0, else exactly d = 1 - 1/kappa_1 levels."""
    k1 = params.kappas[0]
    if k1 >= 0:
        return RepDimension(None)
    return RepDimension(int(1 - 1 / k1))


def structure_function(params: AlgebraParams, n: int) -> Fraction:
    """F(n) = n * prod_i (1 + kappa_i (n - 1)), exactly."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = Fraction(n)
    for kappa in params.kappas:
        out *= 1 + kappa * (n - 1)
    return out


def commutator_gap(params: AlgebraParams, n: int) -> Fraction:
    """G(n) = F(n+1) - F(n), the commutator eigenvalue at level n."""
    return structure_function(params, n + 1) - structure_function(params, n)


def generalized_factorial(params: AlgebraParams, n: int) -> Fraction:
    """F(n)! = F(1) F(2) ... F(n), with F(0)! = 1.

    On a finite ladder the product is only defined up to n = d - 1; past
    that it would pick up the zero (then negative) values of F.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    dim = classify(params)
    if dim.is_finite and n > dim.d - 1:
        raise DomainError(
            f"generalized factorial needs n <= d-1 = {dim.d - 1} on a finite ladder; got n = {n}"
        )
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= structure_function(params, k)
    return out


@dataclass(frozen=True)
class LadderRep:
    """Matrix representation on the number basis |0>, ..., |m-1>.

    ``lowering`` is nonzero only on the first superdiagonal, ``raising``
    is its exact entrywise conjugate transpose, and ``number`` is
    diag(0, ..., m-1).  When ``truncation_order`` is set to s, every
    transition touching level s or above has been removed.
    """

    params: AlgebraParams
    dim_window: int
    lowering: np.ndarray
    raising: np.ndarray
    number: np.ndarray
    truncation_order: int | None = None


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_rep(params: AlgebraParams, window: int | None = None) -> LadderRep:
    """Materialize the ladder matrices on an m-dimensional basis window.

    Finite case: m is forced to d, and since F(d) = 0 the commutation
    identity holds exactly on the whole matrix (the top of the ladder
    annihilates with no special-casing).  Infinite case: m is a required
    user cutoff, and the last diagonal entry of lowering @ raising carries
    the usual truncation artifact.
    """
    dim = classify(params)
    if dim.is_finite:
        if window is None:
            window = dim.d
        elif window != dim.d:
            raise ValueError(
                f"finite representation has fixed size d = {dim.d}, got window = {window}"
            )
    elif window is None:
        raise ValueError("infinite representation needs an explicit basis cutoff `window`")
    m = int(window)
    if m < 1:
        raise ValueError("window must be a positive integer")
    f = [structure_function(params, n) for n in range(m)]
    lowering = np.zeros((m, m), dtype=complex)
    for n in range(1, m):
        gap = float(f[n] - f[n - 1])
        lowering[n - 1, n] = math.sqrt(float(f[n])) * np.exp(1j * gap * params.phi)
    raising = lowering.conj().T.copy()
    number = np.diag(np.arange(m, dtype=float))
    return LadderRep(params, m, _freeze(lowering), _freeze(raising), _freeze(number))


def build_truncated_rep(params: AlgebraParams, window: int, s: int) -> LadderRep:
    """Remove every ladder transition at or above level s.

    The operators stay on the same window-sized basis, so the commutator
    picks up the rank-one correction -F(s)|s-1><s-1| on top of the
    level-restricted gap function.
    """
    if classify(params).is_finite:
        raise DomainError("level truncation applies to infinite-dimensional parameters only")
    if not 1 <= s < window:
        raise ValueError(f"need 1 <= s < window, got s = {s} with window = {window}")
    full = build_rep(params, window)
    lowering = full.lowering.copy()
    lowering[:, s:] = 0.0  # kills the sqrt(F(n)) |n-1><n| transitions with n >= s
    raising = lowering.conj().T.copy()
    return LadderRep(
        params, window, _freeze(lowering), _freeze(raising), full.number, truncation_order=s
    )


def reciprocal_ells(params: AlgebraParams) -> tuple[int, ...]:
    """Read the kappas as 1/ell with ell a positive integer.

    kappa = 0 entries are dropped: they contribute a factor 1 to the
    structure function and correspond to the ell -> infinity limit of
    that slot.  Anything else (negative or non-reciprocal) is rejected.
    """
    ells = []
    for kappa in params.kappas:
        if kappa == 0:
            continue
        if kappa < 0 or kappa.numerator != 1:
            raise DomainError(f"kappa = {kappa} is not of the reciprocal-integer form 1/ell")
        ells.append(int(kappa.denominator))
    return tuple(ells)
