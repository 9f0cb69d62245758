"""Hermitian eigendecomposition and the node operator ``exp(-iH)``."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EigenSolverError

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class EighResult:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns


@dataclass(frozen=True)
class NodeUnitary:
    anchor: int | None
    matrix: np.ndarray
    det: complex

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def state(self) -> np.ndarray:
        """``U|0...0>``, the first column."""
        return self.matrix[:, 0]


def _as_square(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    return h


def hermitian_defect(h) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def eigh(h) -> EighResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``ValueError`` when ``h`` is not Hermitian to 1e-10 (scaled by
    the largest entry for big matrices) and :class:`EigenSolverError` when
    LAPACK fails to converge.
    """
    h = _as_square(h)
    scale = max(1.0, float(np.max(np.abs(h))))
    if hermitian_defect(h) > HERMITIAN_TOL * scale:
        raise ValueError(f"matrix is not Hermitian (defect {hermitian_defect(h):.3e})")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigendecomposition did not converge: {exc}") from exc
    return EighResult(w, v)


def expm_neg_i(h) -> np.ndarray:
    """``exp(-iH)`` through the spectral decomposition of ``H``."""
    res = eigh(h)
    v = res.eigenvectors
    return (v * np.exp(-1j * res.eigenvalues)) @ v.conj().T


def node_unitary(h, anchor=None) -> NodeUnitary:
    res = eigh(h)
    v = res.eigenvectors
    phases = np.exp(-1j * res.eigenvalues)
    u = (v * phases) @ v.conj().T
    u.setflags(write=False)
    return NodeUnitary(anchor, u, complex(np.prod(phases)))


def expm_taylor_oracle(h) -> np.ndarray:
    """``exp(-iH)`` by scaling and squaring a truncated power series.

    Independent of :func:`expm_neg_i`; used to check it. The argument is
    halved until its max row sum is at most 0.5, the series is summed
    until adding a term no longer changes the partial sum, and the result
    is squared back up.
    """
    a = -1j * _as_square(h)
    norm = float(np.max(np.sum(np.abs(a), axis=1)))
    s = 0
    while norm > 0.5:
        norm /= 2.0
        s += 1
    a = a / (2.0**s)
    n = a.shape[0]
    total = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 200):
        term = term @ a / k
        new = total + term
        if np.array_equal(new, total):
            break
        total = new
    for _ in range(s):
        total = total @ total
    return total


def unitarity_defect(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def write_unitary_csv(u, path) -> None:
    """Debug dump: one CSV row per matrix row, entries as ``re,im`` pairs."""
    u = np.asarray(u, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in u:
            flat = []
            for z in row:
                flat += [repr(float(z.real)), repr(float(z.imag))]
            writer.writerow(flat)


def read_unitary_csv(path) -> np.ndarray:
    rows = []
    with open(Path(path), newline="") as fh:
        for row in csv.reader(fh):
            vals = [float(x) for x in row]
            rows.append([complex(re, im) for re, im in zip(vals[::2], vals[1::2])])
    return np.array(rows, dtype=complex)
