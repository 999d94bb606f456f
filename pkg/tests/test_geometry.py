import itertools

import numpy as np
import pytest

from fieldmodes.errors import DomainError
from fieldmodes.geometry import (alternating_line, ball_and_shell, hcp_packing, hex_layers,
                                 hex_ring_at_distance, mixed_sinc_pair, onion, sinc_stack, two_balls,
                                 two_hex_cells, validate_supports)
from fieldmodes.modes import ModeSpec
from fieldmodes.smearing import SmearingSpec


def centers(cfg):
    return np.array([m.pure_smearing.center for m in cfg.modes])


def min_pair_distance(pts):
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    return d[np.triu_indices(len(pts), 1)].min()


def test_two_balls():
    cfg = two_balls(3.0, SmearingSpec.poly_bump(1.0, dim=2))
    assert cfg.bipartition.labels == ("A", "B")
    np.testing.assert_allclose(centers(cfg), [[0, 0], [3, 0]])
    with pytest.raises(DomainError):
        two_balls(2.0)
    assert two_balls(2.0, allow_contact=True).bipartition.N == 2
    with pytest.raises(DomainError):
        two_balls(1.9, allow_contact=True)


@pytest.mark.parametrize("n", [1, 5, 6, 7, 18, 30])
def test_hex_layers_contact_spacing(n):
    cfg = hex_layers(n)
    pts = centers(cfg)
    assert len(pts) == n + 1 and cfg.bipartition.n_B == n
    assert min_pair_distance(pts) == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_allclose(pts[0], [0, 0])


def test_hex_layers_fill_nearest_first():
    r = np.linalg.norm(centers(hex_layers(18))[1:], axis=1)
    assert np.all(np.diff(r) >= -1e-12)
    assert np.allclose(r[:6], 2.0)


def test_hex_ring():
    cfg = hex_ring_at_distance(2.3)
    r = np.linalg.norm(centers(cfg)[1:], axis=1)
    np.testing.assert_allclose(r, 2.3)
    with pytest.raises(DomainError):
        hex_ring_at_distance(2.0)


def test_alternating_line():
    cfg = alternating_line(4)
    assert cfg.bipartition.labels == ("A", "B") * 4
    pts = centers(cfg)
    np.testing.assert_allclose(np.diff(pts[:, 0]), 2.0)


@pytest.mark.parametrize("gap", [0.0, 0.05, 0.3])
def test_two_hex_cells_gap(gap):
    cfg = two_hex_cells(gap)
    pts = centers(cfg)
    part = cfg.bipartition
    a, b = pts[part.modes_A], pts[part.modes_B]
    d = np.sqrt(((a[:, None] - b[None]) ** 2).sum(-1))
    assert d.min() - 2.0 == pytest.approx(gap, abs=1e-12)
    assert part.n_A == part.n_B == 19


@pytest.mark.parametrize("n", [12, 30, 100])
def test_hcp_packing(n):
    pts = centers(hcp_packing(n))
    assert min_pair_distance(pts) == pytest.approx(2.0, rel=1e-12)
    r = np.linalg.norm(pts[1:], axis=1)
    assert np.all(np.diff(r) >= -1e-12)
    if n >= 12:
        assert np.allclose(r[:12], 2.0)


def test_ball_and_shell():
    cfg = ball_and_shell(1.0, 0.5, 3)
    ball, shell = (m.pure_smearing for m in cfg.modes)
    assert ball.outer_radius == pytest.approx(1.0)
    assert shell.inner_radius == pytest.approx(1.0) and shell.outer_radius == pytest.approx(1.5)
    with pytest.raises(DomainError):
        ball_and_shell(0.9, 0.5, 3)


def test_onion_labels_and_nesting():
    cfg = onion(4, 3, 0.5)
    assert cfg.bipartition.labels == ("A", "B", "A", "B", "A")
    radii = [(m.pure_smearing.inner_radius, m.pure_smearing.outer_radius) for m in cfg.modes]
    for (lo0, hi0), (lo1, hi1) in zip(radii, radii[1:]):
        assert hi0 == pytest.approx(lo1)


def test_sinc_stack():
    cfg = sinc_stack(1, 3)
    assert [m.pure_smearing.n for m in cfg.modes] == [1, 3]
    with pytest.raises(DomainError):
        sinc_stack(2, 2)
    with pytest.raises(DomainError):
        sinc_stack(1, 2, D=2)


def test_mixed_sinc_pair():
    cfg = mixed_sinc_pair(2, 2.0, 3)
    assert len(cfg.modes) == 2
    assert len(cfg.modes[0].smearings()) == 4


def test_validate_supports_detects_overlap():
    a = ModeSpec.pure(SmearingSpec.poly_bump(1.0, dim=2))
    b = ModeSpec.pure(SmearingSpec.poly_bump(1.0, center=[1.5, 0.0], dim=2))
    with pytest.raises(DomainError):
        validate_supports([a, b])
    c = ModeSpec.pure(SmearingSpec.poly_bump(1.0, center=[2.0, 0.0], dim=2))
    validate_supports([a, c])


def test_config_round_trip():
    cfg = hex_layers(6)
    d = cfg.to_dict()
    modes = [ModeSpec.from_dict(m) for m in d["modes"]]
    assert modes == cfg.modes
    assert [m["label"] for m in d["modes"]] == list(cfg.bipartition.labels)
