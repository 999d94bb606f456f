import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldmodes.correlators import FieldParams
from fieldmodes.errors import CommutatorError, DomainError, NoThresholdError
from fieldmodes.gaussian import (Bipartition, GaussianState, build_covariance, entanglement_threshold,
                                 entanglement_verdict, load_covariance, log_negativity, min_pt_eigenvalue,
                                 mix_modes, mutual_information, omega, partial_transpose, rindler_two_mode,
                                 save_covariance, squeezer, symplectic_spectrum, symplectic_spectrum_eig,
                                 von_neumann_entropy)
from fieldmodes.geometry import two_balls
from fieldmodes.modes import ModeSpec, Term
from fieldmodes.smearing import SmearingSpec


def random_symplectic(n, rng):
    """Product of random passive rotations and single-mode squeezers."""
    S = np.eye(2 * n)
    for _ in range(3):
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, n))
        H = A + A.T + 1j * (B - B.T)
        w, V = np.linalg.eigh(H)
        U = V @ np.diag(np.exp(0.3j * w)) @ V.conj().T
        # interleaved real form of a unitary
        O = np.zeros((2 * n, 2 * n))
        O[0::2, 0::2] = U.real
        O[0::2, 1::2] = -U.imag
        O[1::2, 0::2] = U.imag
        O[1::2, 1::2] = U.real
        S = O @ S
        for m in range(n):
            S = squeezer(n, m, rng.uniform(-0.6, 0.6)) @ S
    return S


def random_state(n, rng):
    nus = 1.0 + rng.exponential(0.7, size=n)
    S = random_symplectic(n, rng)
    return GaussianState(S @ np.diag(np.repeat(nus, 2)) @ S.T), np.sort(nus)


def test_omega_structure():
    W = omega(3)
    np.testing.assert_array_equal(W.T, -W)
    np.testing.assert_array_equal(W @ W, -np.eye(6))


def test_random_symplectic_preserves_omega():
    rng = np.random.default_rng(1)
    S = random_symplectic(4, rng)
    np.testing.assert_allclose(S @ omega(4) @ S.T, omega(4), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1))
def test_spectrum_is_symplectic_invariant(n, seed):
    rng = np.random.default_rng(seed)
    state, nus = random_state(n, rng)
    np.testing.assert_allclose(symplectic_spectrum(state).values, nus, rtol=1e-9)
    np.testing.assert_allclose(symplectic_spectrum_eig(state).values, nus, rtol=1e-9)


def test_thermal_entropy():
    nu = 3.0
    state = GaussianState(nu * np.eye(2))
    a, b = 2.0, 1.0
    assert von_neumann_entropy(state) == pytest.approx(a * math.log2(a) - b * math.log2(b), rel=1e-14)
    assert von_neumann_entropy(GaussianState(np.eye(4))) == 0.0


@settings(max_examples=25, deadline=None)
@given(n1=st.integers(1, 3), n2=st.integers(1, 3), seed=st.integers(0, 2 ** 32 - 1))
def test_entropy_additive_on_blocks(n1, n2, seed):
    rng = np.random.default_rng(seed)
    s1, _ = random_state(n1, rng)
    s2, _ = random_state(n2, rng)
    joint = np.zeros((2 * (n1 + n2),) * 2)
    joint[:2 * n1, :2 * n1] = s1.sigma
    joint[2 * n1:, 2 * n1:] = s2.sigma
    total = von_neumann_entropy(GaussianState(joint))
    assert total == pytest.approx(von_neumann_entropy(s1) + von_neumann_entropy(s2), rel=1e-10, abs=1e-12)
    part = Bipartition.from_counts(n1, n2)
    assert abs(mutual_information(GaussianState(joint), part)) < 1e-9
    assert log_negativity(GaussianState(joint), part) == 0.0


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 5), seed=st.integers(0, 2 ** 32 - 1))
def test_partial_transpose_involution(n, seed):
    rng = np.random.default_rng(seed)
    state, _ = random_state(n, rng)
    part = Bipartition(tuple(rng.permutation(["A"] + ["B"] + list(rng.choice(["A", "B"], n - 2)))))
    twice = partial_transpose(partial_transpose(state, part), part)
    np.testing.assert_array_equal(twice.sigma, state.sigma)


@pytest.mark.parametrize("z", [0.1, 1.0, 3.0])
def test_two_mode_squeezed_negativity(z):
    state = mix_modes(GaussianState(np.eye(4)), 0, 1, z)
    part = Bipartition(("A", "B"))
    assert log_negativity(state, part) == pytest.approx(2 * z / math.log(2), rel=1e-10)
    assert symplectic_spectrum(state).values == pytest.approx((1.0, 1.0), abs=1e-9)
    assert entanglement_verdict(state, part) == "entangled"


@pytest.mark.parametrize("w", [0.05, 0.5, 2.0])
def test_rindler_pair(w):
    state = rindler_two_mode(w)
    part = Bipartition(("A", "B"))
    assert max(abs(v - 1) for v in symplectic_spectrum(state).values) <= 1e-12
    assert min_pt_eigenvalue(state, part) == pytest.approx(math.tanh(0.5 * math.pi * w), abs=1e-12)


def test_verdict_labels():
    sep = GaussianState(np.eye(6))
    assert entanglement_verdict(sep, Bipartition(("A", "B", "B"))) == "separable"
    assert entanglement_verdict(sep, Bipartition(("A", "A", "B"))) == "separable"
    sep4 = GaussianState(np.eye(8))
    assert entanglement_verdict(sep4, Bipartition(("A", "A", "B", "B"))) == "not distillable"


def test_state_validation():
    with pytest.raises(DomainError):
        GaussianState(np.eye(3))
    with pytest.raises(DomainError):
        GaussianState([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(DomainError):
        GaussianState(0.5 * np.eye(2))
    with pytest.raises(DomainError):
        Bipartition(("A", "A"))
    with pytest.raises(DomainError):
        Bipartition(("A", "C"))


def test_reduced_and_bipartition_counts():
    part = Bipartition(("B", "A", "B"))
    assert (part.n_A, part.n_B, part.N) == (1, 2, 3)
    assert part.modes_A == [1] and part.modes_B == [0, 2]
    rng = np.random.default_rng(3)
    state, _ = random_state(3, rng)
    np.testing.assert_array_equal(state.reduced([1]).sigma, state.sigma[2:4, 2:4])


def test_two_ball_state_physics():
    cfg = two_balls(4.0, SmearingSpec.poly_bump(1.0, dim=3))
    state = build_covariance(cfg.modes, FieldParams(3))
    part = cfg.bipartition
    assert state.uncertainty_floor() >= -1e-9
    for m in range(2):
        assert symplectic_spectrum(state.reduced([m])).min > 1.0
    assert mutual_information(state, part) > 0
    assert log_negativity(state, part) == 0.0
    assert entanglement_verdict(state, part) == "separable"


def test_entanglement_threshold():
    cfg = two_balls(4.0, SmearingSpec.poly_bump(1.0, dim=3))
    state = build_covariance(cfg.modes, FieldParams(3))
    part = cfg.bipartition
    z = entanglement_threshold(state, 0, 1)
    assert 0 < z < 1
    below = max(log_negativity(mix_modes(state, 0, 1, s * 0.99 * z), part) for s in (1, -1))
    above = max(log_negativity(mix_modes(state, 0, 1, s * 1.01 * z), part) for s in (1, -1))
    assert below == 0.0 and above > 0.0


def test_threshold_bracket_too_small():
    state = GaussianState(5.0 * np.eye(4))
    with pytest.raises(NoThresholdError):
        entanglement_threshold(state, 0, 1, bracket=(0.0, 0.1))


def test_commutator_check():
    s = SmearingSpec.poly_bump(1.0, dim=3)
    bad = ModeSpec((Term(1.0, "phi", s),), (Term(2.0, "pi", s),))
    with pytest.raises(CommutatorError):
        build_covariance([bad], FieldParams(3))


def test_mixed_mode_is_canonical():
    mode = ModeSpec.mixed_sinc(2, dim=3)
    state = build_covariance([mode], FieldParams(3))
    assert symplectic_spectrum(state).min > 1.0


def test_covariance_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    state, _ = random_state(3, rng)
    path = tmp_path / "sigma.txt"
    save_covariance(path, state)
    again = load_covariance(path)
    np.testing.assert_array_equal(again.sigma, state.sigma)
