"""Fidelity and SWAP-test kernels between node operators.

Both circuits prepare ``U|0...0>`` states and compare them. The fidelity
test reads the probability of the all-zeros outcome after ``U_j^dagger
U_k``; the SWAP test reads ``P(ancilla = 0) = (1 + F) / 2`` and maps it
back onto [0, 1] with ``2 * P0 - 1``.

Sampled mode draws the number of successful shots from the binomial
distribution of the circuit's outcome rather than collapsing a
statevector shot by shot; the two are the same distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import NodeUnitary

KERNELS = ("fidelity", "swap")
MODES = ("exact", "sampled")


@dataclass(frozen=True)
class KernelConfig:
    kernel: str = "fidelity"
    mode: str = "exact"
    shots: int = 1000
    seed: int = 0
    clamp: bool = False

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel,
            "mode": self.mode,
            "shots": self.shots,
            "seed": self.seed,
            "clamp": self.clamp,
        }


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    raw_p0: float | None = None
    stderr_estimate: float | None = None


def _matrix(u):
    return u.matrix if isinstance(u, NodeUnitary) else np.asarray(u)


def _anchor(u):
    return u.anchor if isinstance(u, NodeUnitary) else None


def overlap(uk, uj) -> float:
    """``|<0|U_j^dagger U_k|0>|^2`` computed from the two prepared states.

    The states are renormalised, which removes round-off in the unitaries
    and makes the self-overlap exactly 1.
    """
    a, b = _matrix(uk), _matrix(uj)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    x, y = a[:, 0], b[:, 0]
    amp = np.vdot(y, x)
    nx_ = np.vdot(x, x).real
    ny = np.vdot(y, y).real
    f = (amp.real * amp.real + amp.imag * amp.imag) / (nx_ * ny)
    return min(1.0, max(0.0, float(f)))


def _zigzag(v: int) -> int:
    return 2 * v if v >= 0 else -2 * v - 1


def pair_rng(seed: int, uk, uj) -> np.random.Generator:
    """Per-pair generator derived from ``(seed, anchors)``, symmetric in the pair."""
    ids = sorted(-1 if a is None else _zigzag(int(a)) for a in (_anchor(uk), _anchor(uj)))
    entropy = [_zigzag(int(seed))] + [i + 1 for i in ids]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def fidelity_exact(uk, uj) -> SimilarityScore:
    return SimilarityScore(overlap(uk, uj))


def fidelity_sampled(uk, uj, cfg: KernelConfig) -> SimilarityScore:
    f = overlap(uk, uj)
    hits = pair_rng(cfg.seed, uk, uj).binomial(cfg.shots, f)
    v = hits / cfg.shots
    return SimilarityScore(v, None, math.sqrt(v * (1.0 - v) / cfg.shots))


def swap_test(uk, uj, cfg: KernelConfig | None = None) -> SimilarityScore:
    cfg = cfg or KernelConfig(kernel="swap")
    p0 = (1.0 + overlap(uk, uj)) / 2.0
    if cfg.mode == "exact":
        return SimilarityScore(2.0 * p0 - 1.0, p0, None)
    hits = pair_rng(cfg.seed, uk, uj).binomial(cfg.shots, p0)
    p_hat = hits / cfg.shots
    value = 2.0 * p_hat - 1.0
    if cfg.clamp:
        value = min(1.0, max(0.0, value))
    return SimilarityScore(value, p_hat, 2.0 * math.sqrt(p_hat * (1.0 - p_hat) / cfg.shots))


def score(uk, uj, cfg: KernelConfig) -> SimilarityScore:
    """Dispatch on ``cfg.kernel`` and ``cfg.mode``."""
    if cfg.kernel == "swap":
        return swap_test(uk, uj, cfg)
    if cfg.mode == "exact":
        return fidelity_exact(uk, uj)
    return fidelity_sampled(uk, uj, cfg)
