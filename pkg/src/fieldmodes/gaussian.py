"""Gaussian states of N bosonic modes described by their covariance matrix.

Ordering is interleaved, (x1, p1, x2, p2, ...), with symplectic form
Omega = diag([[0, 1], [-1, 0]], ...). Covariances hold symmetrized second
moments, so the vacuum of a free oscillator has sigma = identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correlators import CorrelatorKind, FieldParams, correlator
from .errors import CommutatorError, DegeneracyError, DomainError, NoThresholdError
from .modes import ModeSpec
from .smearing import overlap

__all__ = [
    "GaussianState",
    "Bipartition",
    "SymplecticSpectrum",
    "omega",
    "build_covariance",
    "symplectic_spectrum",
    "symplectic_spectrum_eig",
    "von_neumann_entropy",
    "mutual_information",
    "partial_transpose",
    "log_negativity",
    "min_pt_eigenvalue",
    "entanglement_verdict",
    "mix_modes",
    "squeezer",
    "entanglement_threshold",
    "rindler_two_mode",
    "save_covariance",
    "load_covariance",
]

NU_CLAMP = 1e-9
SYMMETRY_TOL = 1e-12
HEISENBERG_TOL = 1e-9
PAIRING_TOL = 1e-8
COMMUTATOR_TOL = 1e-8


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in interleaved ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


class GaussianState:
    """Zero-mean Gaussian state given by its covariance matrix.

    Parameters
    ----------
    sigma : array_like, shape (2N, 2N)
        Symmetric covariance matrix in interleaved ordering.
    physical : bool
        When True (default) the uncertainty relation sigma + i Omega >= 0 is
        enforced. Partially transposed matrices are built with False.
    """

    def __init__(self, sigma, physical: bool = True):
        sigma = np.array(sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise DomainError(f"covariance must be square of even size, got {sigma.shape}")
        scale = max(1.0, float(np.max(np.abs(sigma)))) if sigma.size else 1.0
        if np.max(np.abs(sigma - sigma.T), initial=0.0) > SYMMETRY_TOL * scale:
            raise DomainError("covariance matrix is not symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        sigma.setflags(write=False)
        self.sigma = sigma
        self.physical = physical
        if physical:
            # roundoff in sigma + i Omega grows with the largest entry
            floor = self.uncertainty_floor()
            if floor < -HEISENBERG_TOL * scale:
                raise DomainError(f"uncertainty relation violated: eigenvalue {floor:.3e}")

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2

    def uncertainty_floor(self) -> float:
        """Smallest eigenvalue of sigma + i Omega."""
        herm = self.sigma + 1j * omega(self.n_modes)
        return float(np.linalg.eigvalsh(herm)[0])

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        """State of the listed modes (principal submatrix)."""
        idx = _indices(modes)
        return GaussianState(self.sigma[np.ix_(idx, idx)], physical=self.physical)

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


def _indices(modes) -> np.ndarray:
    modes = np.asarray(list(modes), dtype=int)
    return np.stack([2 * modes, 2 * modes + 1], axis=1).ravel()


@dataclass(frozen=True)
class Bipartition:
    """Assignment of each mode to subsystem 'A' or 'B'."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(v) for v in self.labels)
        if any(v not in ("A", "B") for v in labels):
            raise DomainError("labels must be 'A' or 'B'")
        object.__setattr__(self, "labels", labels)
        if self.n_A < 1 or self.n_B < 1:
            raise DomainError("each side of a bipartition needs at least one mode")

    @classmethod
    def from_counts(cls, n_a: int, n_b: int) -> "Bipartition":
        return cls(("A",) * n_a + ("B",) * n_b)

    @property
    def n_A(self) -> int:
        return self.labels.count("A")

    @property
    def n_B(self) -> int:
        return self.labels.count("B")

    @property
    def N(self) -> int:
        return len(self.labels)

    @property
    def modes_A(self) -> list:
        return [i for i, v in enumerate(self.labels) if v == "A"]

    @property
    def modes_B(self) -> list:
        return [i for i, v in enumerate(self.labels) if v == "B"]


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues sorted ascending."""

    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    @property
    def min(self) -> float:
        return self.values[0]


# spectra and entropies ----------------------------------------------------------


def symplectic_spectrum(state: GaussianState) -> SymplecticSpectrum:
    """Williamson eigenvalues from the Cholesky factor, sigma = L L^T.

    The singular values of L^T Omega L come in equal pairs; each pair gives
    one symplectic eigenvalue.
    """
    sigma = state.sigma if isinstance(state, GaussianState) else np.asarray(state, float)
    n = sigma.shape[0] // 2
    try:
        L = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise DomainError("covariance matrix is not positive definite") from None
    sv = np.sort(np.linalg.svd(L.T @ omega(n) @ L, compute_uv=False))
    pairs = sv.reshape(n, 2)
    gap = np.abs(pairs[:, 0] - pairs[:, 1])
    if np.any(gap > PAIRING_TOL * np.maximum(1.0, pairs[:, 1])):
        raise DegeneracyError(f"symplectic pairs split by {gap.max():.3e}")
    return SymplecticSpectrum(tuple(float(v) for v in pairs.mean(axis=1)))


def symplectic_spectrum_eig(state: GaussianState) -> SymplecticSpectrum:
    """Reference path: moduli of the eigenvalues of i Omega sigma."""
    sigma = state.sigma
    n = sigma.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega(n) @ sigma)))
    return SymplecticSpectrum(tuple(float(v) for v in ev.reshape(n, 2).mean(axis=1)))


def _entropy_term(nu: float) -> float:
    if nu < 1.0 - NU_CLAMP:
        raise DomainError(f"symplectic eigenvalue {nu} below 1: state is unphysical")
    if nu <= 1.0 + NU_CLAMP:
        return 0.0
    a, b = 0.5 * (nu + 1.0), 0.5 * (nu - 1.0)
    return a * math.log2(a) - b * math.log2(b)


def von_neumann_entropy(state) -> float:
    """Entropy in bits of a state, or of a precomputed symplectic spectrum."""
    spec = state if isinstance(state, SymplecticSpectrum) else symplectic_spectrum(state)
    return math.fsum(_entropy_term(v) for v in spec.values)


def mutual_information(state: GaussianState, part: Bipartition) -> float:
    """I(A,B) = S_A + S_B - S_AB in bits."""
    _check_part(state, part)
    s_a = von_neumann_entropy(state.reduced(part.modes_A))
    s_b = von_neumann_entropy(state.reduced(part.modes_B))
    return s_a + s_b - von_neumann_entropy(state)


def _check_part(state: GaussianState, part: Bipartition):
    if part.N != state.n_modes:
        raise DomainError(f"bipartition covers {part.N} modes, state has {state.n_modes}")


def partial_transpose(state: GaussianState, part: Bipartition) -> GaussianState:
    """Flip the sign of every B momentum; an involution."""
    _check_part(state, part)
    t = np.ones(2 * state.n_modes)
    t[2 * np.asarray(part.modes_B) + 1] = -1.0
    return GaussianState(state.sigma * np.outer(t, t), physical=False)


def min_pt_eigenvalue(state: GaussianState, part: Bipartition) -> float:
    """Smallest symplectic eigenvalue of the partial transpose."""
    return symplectic_spectrum(partial_transpose(state, part)).min


def log_negativity(state: GaussianState, part: Bipartition) -> float:
    """E_N = sum over partial-transpose eigenvalues of max(0, -log2 nu)."""
    spec = symplectic_spectrum(partial_transpose(state, part))
    return math.fsum(-math.log2(v) for v in spec.values if v < 1.0 - NU_CLAMP)


def entanglement_verdict(state: GaussianState, part: Bipartition) -> str:
    """'entangled' when E_N > 0; otherwise 'separable' if one side is a
    single mode, else 'not distillable'."""
    if min_pt_eigenvalue(state, part) < 1.0 - NU_CLAMP:
        return "entangled"
    if part.n_A == 1 or part.n_B == 1:
        return "separable"
    return "not distillable"


# symplectic maps ------------------------------------------------------------------


def _mixing_block(z: float) -> np.ndarray:
    ch, sh = math.cosh(z), math.sinh(z)
    # rows: x1, p1, x2, p2; columns: x_i, p_i, x_j, p_j
    return np.array([[ch, 0.0, sh, 0.0],
                     [0.0, ch, 0.0, -sh],
                     [sh, 0.0, ch, 0.0],
                     [0.0, -sh, 0.0, ch]])


def _embed(block: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    S = np.eye(2 * n)
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    S[np.ix_(idx, idx)] = block
    return S


def mix_modes(state: GaussianState, mode_i: int, mode_j: int, z: float) -> GaussianState:
    """Apply the two-mode squeezing map of strength z to modes i and j."""
    n = state.n_modes
    if mode_i == mode_j or not (0 <= mode_i < n and 0 <= mode_j < n):
        raise DomainError("mix_modes needs two distinct valid mode indices")
    S = _embed(_mixing_block(z), n, mode_i, mode_j)
    return GaussianState(S @ state.sigma @ S.T, physical=state.physical)


def squeezer(n_modes: int, mode: int, r: float) -> np.ndarray:
    """Single-mode squeezing matrix diag(e^-r, e^r) acting on one mode."""
    S = np.eye(2 * n_modes)
    S[2 * mode, 2 * mode] = math.exp(-r)
    S[2 * mode + 1, 2 * mode + 1] = math.exp(r)
    return S


def entanglement_threshold(state: GaussianState, mode_i: int = 0, mode_j: int = 1,
                           bracket: tuple = (0.0, 10.0), tol: float = 1e-8) -> float:
    """Smallest |z| at which mixing modes i and j entangles them.

    The two modes are first reduced to their joint state. Both signs of z
    are bisected on ``bracket`` and the smaller threshold is returned.

    Raises
    ------
    NoThresholdError
        If neither sign entangles the pair anywhere in the bracket.
    """
    pair = state.reduced([mode_i, mode_j])
    part = Bipartition(("A", "B"))

    def gap(z):
        return min_pt_eigenvalue(mix_modes(pair, 0, 1, z), part) - (1.0 - NU_CLAMP)

    lo0, hi0 = bracket
    if gap(lo0) < 0:
        return float(lo0)
    # grow the upper end geometrically so that huge |z|, where sigma is badly
    # conditioned, is only visited when nothing entangles earlier
    steps = [z for z in lo0 + 0.25 * 2.0 ** np.arange(64) if z < hi0] + [hi0]
    found = []
    for sign in (1.0, -1.0):
        lo = lo0
        hi = None
        for z in steps:
            try:
                entangled = gap(sign * z) < 0
            except (DomainError, DegeneracyError):
                break
            if entangled:
                hi = z
                break
            lo = z
        if hi is None:
            continue
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if gap(sign * mid) < 0:
                hi = mid
            else:
                lo = mid
        found.append(hi)
    if not found:
        raise NoThresholdError(f"no entangling mixing strength with |z| <= {hi0}")
    return min(found)


def rindler_two_mode(omega_over_a: float) -> GaussianState:
    """Regularized covariance of a right/left Rindler mode pair.

    Diagonal entries coth(pi w/a); x-x cross entries +1/sinh, p-p cross
    entries -1/sinh. Beyond pi w/a = 30 the identity limit is returned.
    """
    if not omega_over_a > 0:
        raise DomainError("omega/a must be positive")
    x = math.pi * omega_over_a
    if x > 30:
        return GaussianState(np.eye(4))
    coth, csch = 1.0 / math.tanh(x), 1.0 / math.sinh(x)
    sigma = np.array([[coth, 0.0, csch, 0.0],
                      [0.0, coth, 0.0, -csch],
                      [csch, 0.0, coth, 0.0],
                      [0.0, -csch, 0.0, coth]])
    return GaussianState(sigma)


# covariance assembly ------------------------------------------------------------------


def build_covariance(modes: Sequence[ModeSpec], params: FieldParams,
                     method: str = "auto") -> GaussianState:
    """Vacuum covariance matrix of a list of modes.

    Second moments of every mode operator are assembled from the pairwise
    correlators of the underlying smearings; the symplectic products of the
    operators are checked against Omega.

    Raises
    ------
    CommutatorError
        If the operators are not canonically normalized to within 1e-8.
    """
    modes = list(modes)
    if not modes:
        raise DomainError("need at least one mode")
    for m in modes:
        if m.dim != params.D:
            raise DomainError(f"mode of dimension {m.dim} in a D={params.D} field")
    smearings = []
    index = {}
    for m in modes:
        for s in m.smearings():
            if s not in index:
                index[s] = len(smearings)
                smearings.append(s)
    ns, n = len(smearings), len(modes)
    P = np.zeros((2 * n, ns))
    Q = np.zeros((2 * n, ns))
    for a, m in enumerate(modes):
        for row, terms in ((2 * a, m.first), (2 * a + 1, m.second)):
            for t in terms:
                target = P if t.kind == "phi" else Q
                target[row, index[t.smearing]] += t.coef

    G_phi = np.zeros((ns, ns))
    G_pi = np.zeros((ns, ns))
    M = np.zeros((ns, ns))
    for s in range(ns):
        for t in range(s, ns):
            a, b = smearings[s], smearings[t]
            G_phi[s, t] = G_phi[t, s] = correlator(a, b, params, CorrelatorKind.PHI_PHI, method)
            G_pi[s, t] = G_pi[t, s] = correlator(a, b, params, CorrelatorKind.PI_PI, method)
            ov = overlap(a, b)
            M[s, t] = b.scale_c * ov
            M[t, s] = a.scale_c * ov

    X = P @ M @ Q.T
    comm = X - X.T
    dev = np.max(np.abs(comm - omega(n)))
    if dev > COMMUTATOR_TOL:
        raise CommutatorError(f"mode operators deviate from canonical commutators by {dev:.3e}")
    sigma = P @ G_phi @ P.T + Q @ G_pi @ Q.T
    return GaussianState(0.5 * (sigma + sigma.T))


# plain-text matrix format ------------------------------------------------------------


def save_covariance(path, state: GaussianState) -> None:
    """Write sigma row-major as whitespace-separated full-precision decimals."""
    np.savetxt(path, state.sigma, fmt="%.17g")


def load_covariance(path, physical: bool = True) -> GaussianState:
    return GaussianState(np.atleast_2d(np.loadtxt(path, dtype=float)), physical=physical)
