import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fidelity_circuit, random_hermitian, swap_test_p0
from quop.kernels import (
    KernelConfig,
    fidelity_exact,
    fidelity_sampled,
    overlap,
    pair_rng,
    score,
    swap_test,
)
from quop.linalg import node_unitary

X = np.array([[0, 1], [1, 0]], dtype=complex)


def rot(theta, anchor=None):
    return node_unitary(theta * X, anchor=anchor)


def random_unitary(rng, d, anchor=None):
    h = random_hermitian(rng, d)
    return node_unitary(h - np.trace(h).real / d * np.eye(d), anchor=anchor)


def test_config_validation():
    with pytest.raises(ValueError):
        KernelConfig(kernel="projected")
    with pytest.raises(ValueError):
        KernelConfig(mode="noisy")
    with pytest.raises(ValueError):
        KernelConfig(mode="sampled", shots=0)
    cfg = KernelConfig()
    with pytest.raises(AttributeError):
        cfg.shots = 5


def test_fidelity_self_is_one():
    u = random_unitary(np.random.default_rng(0), 8)
    assert fidelity_exact(u, u).value == 1.0


def test_fidelity_orthogonal_rotations():
    # cos^2(dtheta) with dtheta = pi/2
    s = fidelity_exact(rot(0.3), rot(0.3 + math.pi / 2))
    assert s.value == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("a, b", [(0.0, 0.4), (0.3, 1.1), (2.0, -0.7)])
def test_fidelity_rotation_closed_form(a, b):
    assert fidelity_exact(rot(a), rot(b)).value == pytest.approx(math.cos(a - b) ** 2, abs=1e-14)


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity_exact(rot(0.1), node_unitary(np.zeros((4, 4))))


def test_fidelity_matches_circuit():
    rng = np.random.default_rng(4)
    for d in (2, 4, 8):
        a, b = random_unitary(rng, d), random_unitary(rng, d)
        assert fidelity_exact(a, b).value == pytest.approx(fidelity_circuit(a.matrix, b.matrix), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 8, 16]))
def test_exact_scores_symmetric_and_bounded(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_unitary(rng, d), random_unitary(rng, d)
    for kernel in ("fidelity", "swap"):
        cfg = KernelConfig(kernel=kernel)
        ab, ba = score(a, b, cfg).value, score(b, a, cfg).value
        assert ab == ba
        assert 0.0 <= ab <= 1.0


def test_sampled_degenerate_cases():
    cfg = KernelConfig(mode="sampled", shots=777, seed=3)
    u = rot(0.2, anchor=1)
    assert fidelity_sampled(u, u, cfg).value == 1.0
    assert fidelity_sampled(rot(0.0, 1), rot(math.pi / 2, 2), cfg).value == 0.0
    assert fidelity_sampled(u, u, cfg).stderr_estimate == 0.0


def test_sampled_half_fidelity_within_3_sigma():
    a, b = rot(0.0, anchor=0), rot(math.pi / 4, anchor=1)
    assert fidelity_exact(a, b).value == pytest.approx(0.5)
    hits = sum(
        abs(fidelity_sampled(a, b, KernelConfig(mode="sampled", shots=1000, seed=s)).value - 0.5) <= 0.047
        for s in range(100)
    )
    assert hits >= 95


def test_sampled_stderr():
    s = fidelity_sampled(rot(0.0, 0), rot(math.pi / 4, 1), KernelConfig(mode="sampled", shots=400, seed=1))
    assert s.stderr_estimate == pytest.approx(math.sqrt(s.value * (1 - s.value) / 400))


def test_sampled_reproducible_and_symmetric():
    a, b = rot(0.1, anchor=4), rot(0.9, anchor=9)
    cfg = KernelConfig(mode="sampled", shots=1000, seed=21)
    assert fidelity_sampled(a, b, cfg) == fidelity_sampled(a, b, cfg)
    assert fidelity_sampled(a, b, cfg) == fidelity_sampled(b, a, cfg)
    draws = {fidelity_sampled(a, b, KernelConfig(mode="sampled", shots=1000, seed=s)).value for s in range(20)}
    assert len(draws) > 1


def test_pair_rng_distinguishes_pairs():
    a, b, c = rot(0, 1), rot(0, 2), rot(0, 3)
    assert pair_rng(0, a, b).random() != pair_rng(0, a, c).random()
    assert pair_rng(0, a, b).random() == pair_rng(0, b, a).random()
    assert pair_rng(0, rot(0, -1), b).random() != pair_rng(0, rot(0, 0), b).random()


def test_swap_identical():
    u = rot(0.7)
    s = swap_test(u, u)
    assert s.raw_p0 == 1.0 and s.value == 1.0


def test_swap_orthogonal():
    s = swap_test(rot(0.3), rot(0.3 + math.pi / 2))
    assert s.raw_p0 == pytest.approx(0.5, abs=1e-15)
    assert s.value == pytest.approx(0.0, abs=1e-15)


def test_swap_half_fidelity():
    a, b = rot(0.0), rot(math.pi / 4)
    s = swap_test(a, b)
    assert s.raw_p0 == pytest.approx(0.75, abs=1e-15)
    assert s.value == pytest.approx(0.5, abs=1e-15)
    assert swap_test_p0(a.matrix, b.matrix) == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize("d", [2, 4])
def test_swap_closed_form_matches_circuit(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        a, b = random_unitary(rng, d), random_unitary(rng, d)
        assert swap_test(a, b).raw_p0 == pytest.approx(swap_test_p0(a.matrix, b.matrix), abs=1e-12)


def test_swap_sampled_raw_and_clamped():
    a, b = rot(0.0, 0), rot(math.pi / 2, 1)  # F = 0, P0 = 1/2
    raw = [swap_test(a, b, KernelConfig("swap", "sampled", 100, s)).value for s in range(40)]
    assert min(raw) < 0.0
    clamped = [swap_test(a, b, KernelConfig("swap", "sampled", 100, s, clamp=True)).value for s in range(40)]
    assert min(clamped) == 0.0
    assert all(0.0 <= v <= 1.0 for v in clamped)


def test_swap_sampled_self_is_one():
    u = rot(1.3, 5)
    s = swap_test(u, u, KernelConfig("swap", "sampled", 1000, 8))
    assert s.value == 1.0 and s.raw_p0 == 1.0


def test_overlap_of_unnormalised_arrays_is_bounded():
    a = np.eye(4) * (1 + 1e-13)
    assert overlap(a, a) == 1.0
