"""Vacuum two-point functions of smeared field and momentum operators.

All correlators are symmetrized, ``<{A, B}> = <AB + BA>``. For two smearings
f, g separated by a vector d,

    <{Phi[f], Phi[g]}> = integral d^Dk/(2π)^D f̃(k) g̃(k) cos(k.d) / ω(k)
    <{Pi[f],  Pi[g]}>  = c_f c_g integral d^Dk/(2π)^D f̃(k) g̃(k) cos(k.d) ω(k)

with ω = sqrt(k² + μ²) and f̃ the transform about each smearing's own
center. Angular integration leaves a one-dimensional radial integral.
Field-momentum correlators vanish in the vacuum.
"""
from __future__ import annotations

import enum
import math
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (ConvergenceError, DomainError, IRDivergenceError, QuadratureError,
                     UnsupportedConfigurationError)
from .modes import ModeSpec
from .smearing import (Family, SmearingSpec, _bandwidth, _unit_transform, has_closed_transform,
                       normalization, panel_nodes, sphere_area)
from .specfun import SeriesControl, angular_kernel, hyper_3f2, log_gamma

__all__ = [
    "FieldParams",
    "CorrelatorKind",
    "j_coeff",
    "l_coeff",
    "n_delta_sq",
    "correlator_analytic",
    "correlator_numeric",
    "correlator",
    "analytic_eligible",
    "asymptotic_u_v",
    "single_mode_nu",
    "single_mode_nu_limit",
]


@dataclass(frozen=True)
class FieldParams:
    """Spatial dimension D and dimensionless mass μ = m R.

    Lengths are measured in units of the reference radius, so μ is the mass
    in inverse length units of that scale.
    """

    D: int
    mu: float = 0.0

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 1:
            raise DomainError(f"D must be an integer >= 1, got {self.D}")
        object.__setattr__(self, "D", int(self.D))
        if not self.mu >= 0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        object.__setattr__(self, "mu", float(self.mu))
        if self.D == 1 and self.mu == 0:
            raise IRDivergenceError("the massless field in D=1 needs mu > 0")


class CorrelatorKind(str, enum.Enum):
    PHI_PHI = "PhiPhi"
    PI_PI = "PiPi"
    PHI_PI = "PhiPi"


def _as_smearing(x) -> SmearingSpec:
    if isinstance(x, SmearingSpec):
        return x
    if isinstance(x, ModeSpec):
        s = x.pure_smearing
        if s is None:
            raise UnsupportedConfigurationError(
                "pairwise correlators need single-smearing modes; use build_covariance")
        return s
    raise TypeError(f"expected SmearingSpec or ModeSpec, got {type(x).__name__}")


def _check_lambda(lam):
    if lam not in (-1, 1):
        raise DomainError(f"lambda must be -1 or +1, got {lam}")


# closed forms -----------------------------------------------------------------


def j_coeff(lam: int, delta: float, D: int) -> float:
    """Self-correlator coefficient of the PolyBump family (massless, D > 1)."""
    _check_lambda(lam)
    if D <= 1:
        raise DomainError("j_coeff needs D > 1")
    if delta < 1:
        raise DomainError("j_coeff needs delta >= 1")
    log_val = ((-1 - 2 * delta + lam) * math.log(2.0)
               + log_gamma(0.5 * (D + lam)) + log_gamma(1 + 2 * delta - lam)
               - 2 * log_gamma(1 + delta - 0.5 * lam)
               - log_gamma(0.5 * (D - lam) + 2 * delta + 1))
    return math.exp(log_val)


@lru_cache(maxsize=65536)
def l_coeff(lam: int, delta: float, rho: float, D: int, control: SeriesControl | None = None) -> float:
    """Cross-correlator coefficient of two PolyBumps at center distance ``rho`` radii.

    Negative for ``lam=+1``; decays as rho^-(D+lam) at large separation.
    """
    _check_lambda(lam)
    if D <= 1:
        raise DomainError("l_coeff needs D > 1")
    if delta < 1:
        raise DomainError("l_coeff needs delta >= 1")
    if not rho > 2:
        raise DomainError(f"l_coeff needs disjoint supports (rho > 2), got {rho}")
    a = (1 + 0.5 * lam, 0.5 * (D + lam), 0.5 * (D + 1) + delta)
    b = (0.5 * D + 1 + delta, D + 1 + 2 * delta)
    series = hyper_3f2(*a, *b, 4.0 / (rho * rho), control)
    log_mag = (-(D + lam) * math.log(rho) + log_gamma(0.5 * (D + lam)) + log_gamma(0.5 * D)
               - (1 + 2 * delta - lam) * math.log(2.0) - 2 * log_gamma(0.5 * D + 1 + delta))
    return math.exp(log_mag) / math.gamma(-0.5 * lam) * series


def n_delta_sq(delta: float, D: int) -> float:
    """Prefactor N_δ² of the closed-form PolyBump correlators."""
    return math.exp(2 * delta * math.log(2.0) + log_gamma(1 + 0.5 * D + 2 * delta)
                    + 2 * log_gamma(1 + delta) - log_gamma(1 + 2 * delta) - log_gamma(0.5 * D))


def _distance(a: SmearingSpec, b: SmearingSpec) -> float:
    return float(np.linalg.norm(np.subtract(a.center, b.center)))


def analytic_eligible(i, j, params: FieldParams) -> bool:
    """Whether the closed form covers this pair (contact excluded)."""
    try:
        _analytic_case(_as_smearing(i), _as_smearing(j), params)
    except UnsupportedConfigurationError:
        return False
    return True


def _analytic_case(a: SmearingSpec, b: SmearingSpec, params: FieldParams):
    if a.family is not Family.POLY_BUMP or b.family is not Family.POLY_BUMP:
        raise UnsupportedConfigurationError("closed form needs PolyBump smearings")
    if a.delta != b.delta or a.radius != b.radius:
        raise UnsupportedConfigurationError("closed form needs equal delta and radius")
    if not a.is_regular:
        raise UnsupportedConfigurationError("closed form needs delta >= 1")
    if params.mu != 0 or params.D <= 1:
        raise UnsupportedConfigurationError("closed form needs mu = 0 and D > 1")
    if a.dim != params.D or b.dim != params.D:
        raise DomainError("smearing dimension differs from field dimension")
    R = a.radius
    d = _distance(a, b)
    if d <= 1e-12 * R:
        return None
    rho = d / R
    if rho <= 2:
        raise UnsupportedConfigurationError(f"closed form needs rho > 2, got {rho}")
    return rho


def correlator_analytic(i, j, params: FieldParams, kind: CorrelatorKind) -> float:
    """Closed-form massless correlator of two equal PolyBump smearings.

    Raises ``UnsupportedConfigurationError`` outside the covered cases
    (other families, unequal shapes, massive field, D=1, touching or
    partially overlapping supports).
    """
    kind = CorrelatorKind(kind)
    a, b = _as_smearing(i), _as_smearing(j)
    rho = _analytic_case(a, b, params)
    if kind is CorrelatorKind.PHI_PI:
        return 0.0
    lam = -1 if kind is CorrelatorKind.PHI_PHI else 1
    delta, D, R = a.delta, params.D, a.radius
    c = math.sqrt(a.scale_c * b.scale_c)
    coef = j_coeff(lam, delta, D) if rho is None else l_coeff(lam, delta, rho, D)
    scale = R / c if lam == -1 else c / R
    return 2.0 * n_delta_sq(delta, D) * scale * coef


def asymptotic_u_v(delta: float, D: int) -> tuple[float, float]:
    """Large-separation coefficients u, v of the PolyBump cross-correlators.

    <{Phi_A,Phi_B}> ~ (R/c) u rho^-(D-1) and <{Pi_A,Pi_B}> ~ -(c/R) v rho^-(D+1).
    """
    if D <= 1:
        raise DomainError("asymptotic_u_v needs D > 1")
    if delta < 1:
        raise DomainError("asymptotic_u_v needs delta >= 1")
    common = (log_gamma(0.5 * (D + 4 * delta + 2)) - log_gamma(delta + 0.5)
              - 2 * log_gamma(0.5 * D + delta + 1))
    log_u = ((-2 * delta - 1) * math.log(2.0) + log_gamma(0.5 * (D - 1))
             + log_gamma(delta + 1) + common)
    log_v = (-2 * delta * math.log(2.0) + math.log(delta) + log_gamma(0.5 * (D + 1))
             + log_gamma(delta) + common)
    return math.exp(log_u), math.exp(log_v)


def single_mode_nu(delta: float, D: int) -> float:
    """Symplectic eigenvalue of one massless PolyBump mode, D > 1."""
    if D <= 1:
        raise DomainError("single_mode_nu needs D > 1")
    if delta < 1:
        raise DomainError("single_mode_nu needs delta >= 1")
    lg = log_gamma
    root = 0.5 * (lg(0.5 * (D - 1)) + lg(0.5 * (D + 1)) + lg(2 * delta) + lg(2 * delta + 2)
                  - lg(0.5 * (D + 4 * delta + 1)) - lg(0.5 * (D + 4 * delta + 3)))
    log_nu = (2 * lg(delta + 1) + lg(0.5 * D + 2 * delta + 1) + root
              - lg(0.5 * D) - lg(delta + 0.5) - lg(delta + 1.5) - lg(2 * delta + 1))
    return math.exp(log_nu)


def single_mode_nu_limit(delta: float) -> float:
    """Limit of ``single_mode_nu`` as D goes to infinity."""
    lg = log_gamma
    log_sq = (lg(2 * delta) + 4 * lg(delta + 1) + lg(2 * delta + 2)
              - 2 * lg(delta + 0.5) - 2 * lg(delta + 1.5) - 2 * lg(2 * delta + 1))
    return math.exp(0.5 * log_sq)


# numerical path ---------------------------------------------------------------

_ORDER = 16
_K_START = 256.0
_K_MAX_CLOSED = 16384.0
_K_MAX_QUAD = 4096.0


class _KGrid:
    """Panelled Gauss-Legendre grid on [0, K] that can be extended in K."""

    def __init__(self, h: float, head_levels: int):
        self.h = h
        edges = [0.0] + [h * 2.0 ** -j for j in range(head_levels, 0, -1)] + [h]
        k, w = panel_nodes(edges, _ORDER)
        self.k, self.w = k, w
        self.K = h

    def extend(self, K: float):
        if K <= self.K + 1e-12 * K:
            return
        n = int(round((K - self.K) / self.h))
        edges = self.K + self.h * np.arange(n + 1)
        k, w = panel_nodes(edges, _ORDER)
        self.k = np.concatenate([self.k, k])
        self.w = np.concatenate([self.w, w])
        self.K = float(edges[-1])


class _Cache:
    """Small LRU store shared by all correlator evaluations in a process."""

    def __init__(self, size: int):
        self.size = size
        self.data: OrderedDict = OrderedDict()

    def get(self, key, factory):
        if key in self.data:
            self.data.move_to_end(key)
            return self.data[key]
        val = factory()
        self.data[key] = val
        if len(self.data) > self.size:
            self.data.popitem(last=False)
        return val


_GRIDS = _Cache(64)
_TRANSFORMS = _Cache(256)


def _grid(h: float, head_levels: int) -> _KGrid:
    return _GRIDS.get((h, head_levels), lambda: _KGrid(h, head_levels))


class _TransformTable:
    def __init__(self, spec: SmearingSpec):
        self.spec = spec
        self.values = np.empty(0)

    def upto(self, grid: _KGrid, n_need: int) -> np.ndarray:
        n_have = self.values.size
        if n_have < n_need:
            new = _unit_transform(self.spec, grid.k[n_have:n_need])
            self.values = np.concatenate([self.values, new])
        return self.values[:n_need]


def _transform_on(spec: SmearingSpec, grid: _KGrid, grid_key, n: int) -> np.ndarray:
    key = (spec.profile_key(), grid_key)
    table = _TRANSFORMS.get(key, lambda: _TransformTable(spec))
    return table.upto(grid, n)


def _tail_estimate(k, g_w, K: float) -> float:
    """Estimated integral beyond K of a slowly decaying non-oscillating mean.

    Window averages over [K/4, K/2] and [K/2, K] give the local power law
    k^-q of the integrand mean; the tail is integrated analytically.
    """
    s1 = g_w[(k >= 0.25 * K) & (k < 0.5 * K)].sum()
    s2 = g_w[(k >= 0.5 * K) & (k < K)].sum()
    m1, m2 = s1 / (0.25 * K), s2 / (0.5 * K)
    if m1 == 0 or m2 == 0 or (m1 > 0) != (m2 > 0):
        return 0.0
    q = math.log2(m1 / m2)
    if not 1.5 < q < 30:
        return 0.0
    return m2 * 0.5 * K / (2.0 ** (q - 1) - 1.0)


def _partial(k, g_w, K: float, correct: bool) -> float:
    val = float(g_w[k < K].sum())
    if correct:
        val += _tail_estimate(k, g_w, K)
    return val


def correlator_numeric(i, j, params: FieldParams, kind: CorrelatorKind,
                       rtol: float = 1e-8, atol: float = 1e-13) -> float:
    """Correlator by radial quadrature, for any smearing family, D and μ.

    The radial integrand is sampled on Gauss-Legendre panels no wider than
    half the shortest oscillation period. The cutoff doubles until two
    successive cutoffs agree to ``rtol``; the slowly decaying mean of the
    integrand beyond the cutoff is added analytically from its fitted power
    law.

    Raises
    ------
    QuadratureError
        If the tolerance is not met by the largest allowed cutoff.
    """
    kind = CorrelatorKind(kind)
    a, b = _as_smearing(i), _as_smearing(j)
    D, mu = params.D, params.mu
    if a.dim != D or b.dim != D:
        raise DomainError("smearing dimension differs from field dimension")
    if not (a.is_regular and b.is_regular):
        raise DomainError("delta = 0 PolyBump has divergent momentum correlators")
    if kind is CorrelatorKind.PHI_PI:
        return 0.0
    d = _distance(a, b)
    return _numeric_pair(kind, a.moved([0.0] * D), b.moved([0.0] * D), round(d, 12), params,
                         rtol, atol)


@lru_cache(maxsize=65536)
def _numeric_pair(kind, a, b, d, params, rtol, atol) -> float:
    D, mu = params.D, params.mu
    band = max(_bandwidth(a), _bandwidth(b))
    # inverse of the finest length in either profile: radius, or shell thickness and ripple length
    kscale = max(1.0 / min(a.outer_radius, b.outer_radius), band / (2 * np.pi))
    freq = d + a.outer_radius + b.outer_radius
    h = 2.0 ** math.floor(math.log2(math.pi / freq))
    head = int(max(0, math.ceil(math.log2(h / (0.01 * mu))))) if mu > 0 else 0
    grid = _grid(h, head)
    closed = has_closed_transform(a) and has_closed_transform(b)
    k_max = (_K_MAX_CLOSED if closed else _K_MAX_QUAD) * kscale
    K = max(4 * h, h * 2.0 ** math.ceil(math.log2(_K_START * kscale / h)))
    amp = normalization(a).value * normalization(b).value
    pref = amp * sphere_area(D) / (2 * np.pi) ** D
    if kind is CorrelatorKind.PI_PI:
        pref *= a.scale_c * b.scale_c
    power = -1 if kind is CorrelatorKind.PHI_PHI else 1
    previous = None
    last_change = last_ratio = None
    while True:
        grid.extend(K)
        # the shared grid may already reach past K; only nodes below K are used
        n = int(np.searchsorted(grid.k, K))
        k, w = grid.k[:n], grid.w[:n]
        Fa = _transform_on(a, grid, (h, head), n)
        Fb = Fa if b.profile_key() == a.profile_key() else _transform_on(b, grid, (h, head), n)
        omega = np.sqrt(k * k + mu * mu)
        g_w = pref * w * k ** (D - 1) * Fa * Fb * omega ** power
        if d > 0:
            g_w = g_w * angular_kernel(D, k * d)
        # the mean of the integrand only settles once K exceeds the profile bandwidth
        correct = K >= 8 * band
        value = _partial(k, g_w, K, correct)
        half = previous if previous is not None else _partial(k, g_w, 0.5 * K, correct)
        change = abs(value - half)
        # once changes shrink geometrically with ratio r, the error left after
        # this cutoff is about change * r / (1 - r); a safety factor 4 is applied.
        # r is the larger of the last two ratios so one lucky cancellation
        # does not end the loop early
        err = change
        if last_change is not None and change < last_change:
            ratio = change / last_change
            if last_ratio is not None and last_ratio < 1.0:
                r = max(ratio, last_ratio)
                err = change * min(1.0, 4.0 * r / (1.0 - r))
            last_ratio = ratio
        else:
            last_ratio = None
        if err <= rtol * abs(value) + atol:
            return value
        if K >= k_max:
            raise QuadratureError(
                f"{kind.value} correlator unconverged at cutoff {K:g}: value {value:.12g}, "
                f"change {change:.3g}")
        previous = value
        last_change = change
        K *= 2


def correlator(i, j, params: FieldParams, kind: CorrelatorKind, method: str = "auto") -> float:
    """Correlator by the closed form when it applies, by quadrature otherwise.

    ``method`` is ``"auto"``, ``"analytic"`` or ``"numeric"``.
    """
    if method == "analytic":
        return correlator_analytic(i, j, params, kind)
    if method == "numeric":
        return correlator_numeric(i, j, params, kind)
    if method != "auto":
        raise DomainError(f"unknown correlator method {method!r}")
    if analytic_eligible(i, j, params):
        try:
            return correlator_analytic(i, j, params, kind)
        except ConvergenceError:
            pass
    return correlator_numeric(i, j, params, kind)
