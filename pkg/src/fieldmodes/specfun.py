"""Real-order special functions: log-gamma, Bessel J and the 3F2 series."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

__all__ = ["SeriesControl", "log_gamma", "bessel_j", "hyper_3f2", "angular_kernel"]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for hypergeometric series.

    Parameters
    ----------
    rel_tol : float
        Summation stops once a term falls below ``rel_tol`` times the
        running partial sum.
    max_terms : int
        Hard budget on the number of terms.
    """

    rel_tol: float = 1e-16
    max_terms: int = 100_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-3):
            raise DomainError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 100:
            raise DomainError(f"max_terms must be >= 100, got {self.max_terms}")


def log_gamma(x):
    """Natural log of the gamma function for positive real arguments.

    Accepts scalars or arrays; raises ``DomainError`` for x <= 0.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("log_gamma requires x > 0")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0."""
    nu_a = np.asarray(nu, dtype=float)
    x_a = np.asarray(x, dtype=float)
    if np.any(~(nu_a >= 0)):
        raise DomainError("bessel_j requires nu >= 0")
    if np.any(~(x_a >= 0)):
        raise DomainError("bessel_j requires x >= 0")
    out = special.jv(nu_a, x_a)
    return float(out) if out.ndim == 0 else out


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def hyper_3f2(a1, a2, a3, b1, b2, x, control: SeriesControl | None = None) -> float:
    """Generalized hypergeometric function 3F2(a1,a2,a3; b1,b2; x) for |x| < 1.

    The series is summed term by term with the ratio of consecutive terms
    updated in closed form, so no Pochhammer symbol is ever formed
    explicitly. A terminating series (some ``a`` a nonpositive integer) is
    summed exactly.

    Raises
    ------
    DomainError
        If |x| >= 1 or a lower parameter is a nonpositive integer.
    ConvergenceError
        If the tolerance is not reached within ``control.max_terms`` terms.
    """
    control = control or SeriesControl()
    x = float(x)
    if not abs(x) < 1.0:
        raise DomainError(f"hyper_3f2 requires |x| < 1, got {x}")
    if _is_nonpositive_int(b1) or _is_nonpositive_int(b2):
        raise DomainError("lower parameters must not be nonpositive integers")
    if x == 0.0:
        return 1.0

    terms = [1.0]
    term = 1.0
    partial = 1.0
    for n in range(control.max_terms):
        ratio = (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1)) * x
        term *= ratio
        if term == 0.0:
            return math.fsum(terms)
        terms.append(term)
        partial += term
        # only trust the stopping rule once terms are shrinking
        if abs(ratio) < 1.0 and abs(term) <= control.rel_tol * abs(partial):
            # geometric estimate of the remaining tail
            terms.append(term * ratio / (1.0 - ratio))
            return math.fsum(terms)
    raise ConvergenceError(
        f"3F2 did not converge in {control.max_terms} terms (x={x}, last term {term:.3e})"
    )


def angular_kernel(dim: int, x):
    """Angle-averaged plane wave in ``dim`` spatial dimensions.

    Returns Gamma(D/2) (2/x)^(D/2-1) J_{D/2-1}(x), which equals cos x for
    D=1 and sin x / x for D=3, with value 1 at x=0.
    """
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("angular_kernel requires x >= 0")
    if dim == 1:
        return np.cos(x)
    if dim == 2:
        return special.j0(x)
    if dim == 3:
        return np.sinc(x / np.pi)
    nu = 0.5 * dim - 1.0
    small = x < 1e-4
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore", invalid="ignore"):
        big = np.exp(special.gammaln(0.5 * dim) + nu * np.log(2.0 / xs)) * special.jv(nu, xs)
    series = 1.0 - x * x / (2.0 * dim)
    return np.where(small, series, big)
