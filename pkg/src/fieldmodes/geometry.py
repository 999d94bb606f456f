"""Spatial arrangements of modes and their A/B bipartitions.

All lengths are in units of the ball radius R = 1. Contact spacing means
center distance exactly 2; touching closed supports share only a set of
measure zero and are accepted as disjoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .gaussian import Bipartition
from .modes import ModeSpec
from .smearing import SmearingSpec, overlap

__all__ = [
    "Configuration",
    "validate_supports",
    "two_balls",
    "hex_layers",
    "hex_ring_at_distance",
    "alternating_line",
    "two_hex_cells",
    "hcp_packing",
    "ball_and_shell",
    "onion",
    "sinc_stack",
    "mixed_sinc_pair",
]

CONTACT_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-8


@dataclass
class Configuration:
    """Modes, their bipartition and the generator that produced them.

    ``overlapping`` marks configurations whose supports intersect on
    purpose (concentric orthogonal modes); those skip the disjointness test
    and rely on the commutator check of the covariance builder.
    """

    modes: list
    bipartition: Bipartition
    name: str
    params: dict = field(default_factory=dict)
    overlapping: bool = False

    def __post_init__(self):
        if len(self.modes) != self.bipartition.N:
            raise DomainError("bipartition does not cover every mode")

    @property
    def dim(self) -> int:
        return self.modes[0].dim

    def to_dict(self) -> dict:
        """Explicit mode-list form."""
        return {
            "name": self.name,
            "params": dict(self.params),
            "modes": [dict(m.to_dict(), label=lab)
                      for m, lab in zip(self.modes, self.bipartition.labels)],
        }


def validate_supports(modes, allow_nesting: bool = False) -> None:
    """Raise ``DomainError`` naming the first pair of intersecting supports.

    Balls are disjoint when their center distance is at least the sum of
    their radii. With ``allow_nesting`` concentric supports whose radial
    ranges do not overlap (a ball inside a shell, nested shells) also pass.
    """
    owner, specs = [], []
    for idx, m in enumerate(modes):
        for s in m.smearings():
            owner.append(idx)
            specs.append(s)
    if len(specs) < 2:
        return
    owner = np.array(owner)
    centers = np.array([s.center for s in specs])
    reach = np.array([s.outer_radius for s in specs])
    dist = np.sqrt(((centers[:, None, :] - centers[None, :, :]) ** 2).sum(-1))
    close = dist < (reach[:, None] + reach[None, :]) * (1 - CONTACT_TOL)
    close &= owner[:, None] < owner[None, :]
    for i, j in zip(*np.nonzero(close)):
        if not _disjoint(specs[i], specs[j], allow_nesting):
            raise DomainError(f"supports of modes {owner[i]} and {owner[j]} intersect")


def _disjoint(s: SmearingSpec, t: SmearingSpec, allow_nesting: bool) -> bool:
    d = float(np.linalg.norm(np.subtract(s.center, t.center)))
    reach = s.outer_radius + t.outer_radius
    if d >= reach * (1 - CONTACT_TOL):
        return True
    if allow_nesting and d <= CONTACT_TOL:
        lo = max(s.inner_radius, t.inner_radius)
        hi = min(s.outer_radius, t.outer_radius)
        return hi <= lo * (1 + CONTACT_TOL)
    return False


def _validate(config: Configuration) -> Configuration:
    validate_supports(config.modes, allow_nesting=config.overlapping)
    return config


def _bump(delta, dim, center, radius=1.0):
    return ModeSpec.pure(SmearingSpec.poly_bump(delta, center, radius, dim))


def _from_template(template: SmearingSpec, center) -> ModeSpec:
    return ModeSpec.pure(template.moved(center))


def two_balls(rho: float, smearing: SmearingSpec | None = None, *,
              allow_contact: bool = False) -> Configuration:
    """Two equal smearings with centers ``rho`` radii apart along the first axis.

    ``rho`` must exceed 2; ``allow_contact`` also admits the touching case
    rho = 2.
    """
    template = smearing or SmearingSpec.poly_bump(1.0, dim=3)
    R = template.outer_radius
    ratio = rho * template.radius / (2 * R)
    if not (ratio > 1 or (allow_contact and ratio >= 1 - CONTACT_TOL)):
        raise DomainError(f"balls overlap or touch at rho={rho}; need rho > 2")
    D = template.dim
    a = np.zeros(D)
    b = np.zeros(D)
    b[0] = rho * template.radius
    modes = [_from_template(template, a), _from_template(template, b)]
    return _validate(Configuration(modes, Bipartition(("A", "B")), "two_balls",
                                   {"rho": rho, "smearing": template.to_dict()}))


def _sorted_sites(points: np.ndarray, n: int, angle_keys) -> np.ndarray:
    """The ``n`` sites nearest the origin, ties broken by angle."""
    dist = np.round(np.linalg.norm(points, axis=1), 9)
    keys = [np.round(k, 9) for k in angle_keys(points)]
    order = np.lexsort(tuple(reversed([dist] + keys)))
    return points[order[:n]]


def _hex_lattice(n: int, spacing: float = 2.0) -> np.ndarray:
    """Triangular-lattice sites except the origin, nearest first."""
    m = int(math.ceil(math.sqrt(n))) + 3
    i, j = np.meshgrid(np.arange(-m, m + 1), np.arange(-m, m + 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    pts = spacing * np.stack([i + 0.5 * j, 0.5 * math.sqrt(3) * j], axis=1)
    pts = pts[(i != 0) | (j != 0)]
    return _sorted_sites(pts, n, lambda p: [np.mod(np.arctan2(p[:, 1], p[:, 0]), 2 * np.pi)])


def hex_layers(n_modes_B: int, delta: float = 1.0) -> Configuration:
    """Disk A at the origin surrounded by ``n_modes_B`` contact-packed disks.

    B-disks fill the hexagonal lattice nearest-center first, ties broken by
    polar angle measured from the first axis in [0, 2π).
    """
    if n_modes_B < 1:
        raise DomainError("n_modes_B must be >= 1")
    sites = _hex_lattice(n_modes_B)
    modes = [_bump(delta, 2, (0.0, 0.0))] + [_bump(delta, 2, p) for p in sites]
    return _validate(Configuration(modes, Bipartition.from_counts(1, n_modes_B), "hex_layers",
                                   {"n_modes_B": n_modes_B, "delta": delta}))


def hex_ring_at_distance(rho: float, delta: float = 1.0) -> Configuration:
    """Disk A with six B-disks at center distance ``rho`` in hexagonal directions."""
    if not rho > 2:
        raise DomainError(f"ring needs rho > 2, got {rho}")
    ang = np.arange(6) * np.pi / 3
    pts = rho * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    modes = [_bump(delta, 2, (0.0, 0.0))] + [_bump(delta, 2, p) for p in pts]
    return _validate(Configuration(modes, Bipartition.from_counts(1, 6), "hex_ring_at_distance",
                                   {"rho": rho, "delta": delta}))


def alternating_line(n_per_side: int, delta: float = 1.0, rho: float = 2.0) -> Configuration:
    """``2 n_per_side`` collinear disks at spacing ``rho`` labeled A, B, A, B, ..."""
    if n_per_side < 1:
        raise DomainError("n_per_side must be >= 1")
    if rho < 2:
        raise DomainError(f"spacing {rho} makes neighbours overlap")
    n = 2 * n_per_side
    modes = [_bump(delta, 2, (rho * i, 0.0)) for i in range(n)]
    labels = tuple("A" if i % 2 == 0 else "B" for i in range(n))
    return _validate(Configuration(modes, Bipartition(labels), "alternating_line",
                                   {"n_per_side": n_per_side, "delta": delta, "rho": rho}))


def _hex_patch(n: int) -> np.ndarray:
    """Center plus the ``n - 1`` nearest triangular-lattice sites."""
    return np.vstack([np.zeros((1, 2)), _hex_lattice(n - 1)]) if n > 1 else np.zeros((1, 2))


def two_hex_cells(rho_gap: float, n_per_cell: int = 19, delta: float = 1.0) -> Configuration:
    """Two hexagonal patches of contact-packed disks facing along a flat side.

    Cell B is a copy of cell A moved across the flat face normal to the
    second axis and offset by one radius along the first axis, so at zero
    gap the rows interlock and both cells form one triangular packing.
    ``rho_gap`` is the surface gap, in radii, between the closest disks of
    the two cells.
    """
    if n_per_cell < 1:
        raise DomainError("n_per_cell must be >= 1")
    if rho_gap < 0:
        raise DomainError("rho_gap must be >= 0")
    cell = _hex_patch(n_per_cell)
    target = 2.0 + rho_gap
    lateral = 1.0
    shift = 0.0
    for a in cell:
        for b in cell:
            dx = b[0] + lateral - a[0]
            if abs(dx) < target:
                shift = max(shift, a[1] - b[1] + math.sqrt(target * target - dx * dx))
    cell_b = cell + np.array([lateral, shift])
    modes = [_bump(delta, 2, p) for p in cell] + [_bump(delta, 2, p) for p in cell_b]
    part = Bipartition.from_counts(n_per_cell, n_per_cell)
    params = {"rho_gap": rho_gap, "n_per_cell": n_per_cell, "delta": delta}
    return _validate(Configuration(modes, part, "two_hex_cells", params))


def _hcp_lattice(n: int, spacing: float = 2.0) -> np.ndarray:
    """Hexagonal close-packed sites except the origin, nearest first.

    Layers alternate between the A stacking (through the origin) and the B
    stacking offset by (1, 1/sqrt 3) radii, with layer spacing 2 sqrt(2/3).
    Ties are broken by polar angle from the third axis, then azimuth.
    """
    m = int(math.ceil(n ** (1.0 / 3.0))) + 3
    a1 = np.array([1.0, 0.0])
    a2 = np.array([0.5, 0.5 * math.sqrt(3)])
    offset = np.array([0.5, 0.5 / math.sqrt(3)])
    dz = math.sqrt(2.0 / 3.0)
    pts = []
    for k in range(-m, m + 1):
        shift = offset if k % 2 else np.zeros(2)
        for i in range(-m - 2, m + 3):
            for j in range(-m - 2, m + 3):
                xy = i * a1 + j * a2 + shift
                pts.append((xy[0], xy[1], k * dz))
    pts = spacing * np.array(pts)
    pts = pts[np.linalg.norm(pts, axis=1) > 1e-9]

    def angles(p):
        r = np.linalg.norm(p, axis=1)
        theta = np.arccos(np.clip(p[:, 2] / r, -1.0, 1.0))
        phi = np.mod(np.arctan2(p[:, 1], p[:, 0]), 2 * np.pi)
        return [theta, phi]

    return _sorted_sites(pts, n, angles)


def hcp_packing(n_modes_B: int, delta: float = 1.0) -> Configuration:
    """Ball A at the origin with ``n_modes_B`` HCP neighbours in contact packing."""
    if n_modes_B < 1:
        raise DomainError("n_modes_B must be >= 1")
    sites = _hcp_lattice(n_modes_B)
    modes = [_bump(delta, 3, (0.0, 0.0, 0.0))] + [_bump(delta, 3, p) for p in sites]
    return _validate(Configuration(modes, Bipartition.from_counts(1, n_modes_B), "hcp_packing",
                                   {"n_modes_B": n_modes_B, "delta": delta}))


def ball_and_shell(R_B_over_RA: float = 1.0, d_B_over_RA: float = 0.5, D: int = 3) -> Configuration:
    """BallCos2 mode A of unit radius inside a concentric ShellSin2 mode B."""
    if R_B_over_RA < 1:
        raise DomainError("the shell must not cut into the ball (R_B >= R_A)")
    if not d_B_over_RA > 0:
        raise DomainError("shell thickness must be positive")
    if D < 2:
        raise DomainError("ball and shell need D >= 2")
    ball = ModeSpec.pure(SmearingSpec.ball_cos2(None, 1.0, D))
    shell = ModeSpec.pure(SmearingSpec.shell_sin2(R_B_over_RA, d_B_over_RA, None, D))
    return _validate(Configuration([ball, shell], Bipartition(("A", "B")), "ball_and_shell",
                                   {"R_B_over_RA": R_B_over_RA, "d_B_over_RA": d_B_over_RA, "D": D},
                                   overlapping=True))


def onion(n_shells: int, D: int = 3, thickness: float = 0.5) -> Configuration:
    """Unit BallCos2 plus ``n_shells`` nested contact shells, labels alternating outward."""
    if n_shells < 1:
        raise DomainError("n_shells must be >= 1")
    if not thickness > 0:
        raise DomainError("thickness must be positive")
    if D < 2:
        raise DomainError("onion needs D >= 2")
    modes = [ModeSpec.pure(SmearingSpec.ball_cos2(None, 1.0, D))]
    for i in range(n_shells):
        modes.append(ModeSpec.pure(SmearingSpec.shell_sin2(1.0 + i * thickness, thickness, None, D)))
    labels = tuple("A" if i % 2 == 0 else "B" for i in range(n_shells + 1))
    return _validate(Configuration(modes, Bipartition(labels), "onion",
                                   {"n_shells": n_shells, "D": D, "thickness": thickness},
                                   overlapping=True))


def sinc_stack(n_A: int, n_B: int, D: int = 3) -> Configuration:
    """Two Sinc modes of different order on the same unit ball.

    Only dimensions where the two profiles are orthogonal are accepted;
    that holds for D = 3.
    """
    if n_A == n_B:
        raise DomainError("sinc_stack needs n_A != n_B")
    if n_A < 1 or n_B < 1:
        raise DomainError("Sinc orders must be >= 1")
    a = SmearingSpec.sinc(n_A, None, 1.0, D)
    b = SmearingSpec.sinc(n_B, None, 1.0, D)
    if abs(overlap(a, b)) > ORTHOGONALITY_TOL * abs(overlap(a, a)):
        raise DomainError(f"Sinc({n_A}) and Sinc({n_B}) are not orthogonal in D={D}")
    return Configuration([ModeSpec.pure(a), ModeSpec.pure(b)], Bipartition(("A", "B")),
                         "sinc_stack", {"n_A": n_A, "n_B": n_B, "D": D}, overlapping=True)


def mixed_sinc_pair(n_pairs: int, rho: float, D: int = 3) -> Configuration:
    """Two balls ``rho`` radii apart, each carrying a field-momentum mixed Sinc mode."""
    if rho < 2:
        raise DomainError(f"balls overlap at rho={rho}")
    b = np.zeros(D)
    b[0] = rho
    modes = [ModeSpec.mixed_sinc(n_pairs, None, 1.0, D), ModeSpec.mixed_sinc(n_pairs, b, 1.0, D)]
    validate_supports(modes)
    return Configuration(modes, Bipartition(("A", "B")), "mixed_sinc_pair",
                         {"n_pairs": n_pairs, "rho": rho, "D": D})



