"""Random projection matrices with implicit storage and fast application.

The structured family is the product H @ D of a normalized Hadamard matrix

    H_1 = (1),   H_L = 1/sqrt(2) * [[H_{L/2},  H_{L/2}],
                                    [H_{L/2}, -H_{L/2}]]

with a random Rademacher diagonal D (entries drawn uniformly from {-1, +1}).
H is never materialized: applying it costs O(L log L) time and O(L) memory
via the fast Walsh-Hadamard transform. A dense alternative with explicitly
orthonormalized Gaussian columns is provided for comparison; both families
behave as Johnson-Lindenstrauss maps.
"""

from __future__ import annotations

import math

import numpy as np


def next_pow_two(n: int) -> int:
    """Smallest power of two >= max(n, 1)."""
    return 1 << max(n - 1, 0).bit_length()


def hadamard_transform(v: np.ndarray) -> np.ndarray:
    """Apply the normalized Hadamard matrix H_L along the last axis.

    The input's last axis must have power-of-two length L. Returns a new
    array; the butterfly passes run in place on an internal buffer, costing
    O(L log L) per vector. H_L is symmetric and orthogonal, so the transform
    is its own inverse.
    """
    a = np.asarray(v, dtype=np.float64)
    L = a.shape[-1]
    if L & (L - 1):
        raise ValueError(f"length {L} is not a power of two")
    # Butterflies run along axis 0 so every slice is a contiguous block of
    # batch rows; transposing costs one copy each way. The copy also keeps
    # the caller's array untouched.
    work = a.reshape(-1, L).T.copy()
    _fwht_axis0(work)
    out = work.T * (1.0 / math.sqrt(L))
    return out.reshape(a.shape)


def _fwht_axis0(work: np.ndarray) -> None:
    """Unnormalized in-place Walsh-Hadamard butterflies down axis 0."""
    L = work.shape[0]
    scratch = np.empty((L // 2, work.shape[1]) if work.ndim == 2 else (L // 2,), dtype=work.dtype)
    h = 1
    while h < L:
        blocks = work.reshape(L // (2 * h), 2, h, -1)
        top = blocks[:, 0]
        bot = blocks[:, 1]
        diff = scratch.reshape(top.shape)
        np.subtract(top, bot, out=diff)
        np.add(top, bot, out=top)
        bot[...] = diff
        h *= 2


class StructuredRandomMatrix:
    """Implicit Hadamard-Rademacher projection from R^M to R^n.

    Inputs of length <= ``logical_rows`` are zero-padded to the power-of-two
    dimension L >= max(logical_rows, cols) (padding is equivalent to ignoring
    the unused rows of the implied matrix), multiplied by the Rademacher
    diagonal, Hadamard-transformed, and truncated to the first ``cols``
    coordinates. Outputs are scaled by sqrt(L / cols) so squared norms are
    unbiased. Only the length-L diagonal is stored.
    """

    def __init__(self, logical_rows: int, cols: int, seed=None):
        if logical_rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        self.logical_rows = logical_rows
        self.cols = cols
        self.padded_dim = next_pow_two(max(logical_rows, cols))
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.rademacher = rng.integers(0, 2, self.padded_dim).astype(np.float64) * 2.0 - 1.0
        self._scale = math.sqrt(self.padded_dim / self.cols)

    @classmethod
    def from_rademacher(cls, diagonal, cols: int, logical_rows: int | None = None) -> "StructuredRandomMatrix":
        """Build a projection with a fixed diagonal (for oracles and tests)."""
        diagonal = np.asarray(diagonal, dtype=np.float64)
        L = len(diagonal)
        if L & (L - 1):
            raise ValueError("diagonal length must be a power of two")
        if not np.all(np.abs(diagonal) == 1.0):
            raise ValueError("diagonal entries must be +1 or -1")
        m = cls.__new__(cls)
        m.logical_rows = logical_rows if logical_rows is not None else L
        m.cols = cols
        m.padded_dim = L
        m.seed = None
        m.rademacher = diagonal.copy()
        m._scale = math.sqrt(L / cols)
        if m.cols > L or m.logical_rows > L:
            raise ValueError("cols and logical_rows must not exceed the diagonal length")
        return m

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Project one vector of length <= logical_rows to length ``cols``."""
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("apply expects a 1-d vector; use apply_batch for stacks")
        return self.apply_batch(v[None, :])[0]

    def apply_batch(self, rows: np.ndarray) -> np.ndarray:
        """Project a stack of row vectors, shape (B, m <= logical_rows) -> (B, cols)."""
        rows = np.asarray(rows, dtype=np.float64)
        m = rows.shape[1]
        if m > self.logical_rows:
            raise ValueError(f"input length {m} exceeds logical rows {self.logical_rows}")
        # Zero-pad, apply the diagonal, and transpose in one pass; the
        # Hadamard normalization 1/sqrt(L) is folded into the output scale.
        work = np.zeros((self.padded_dim, rows.shape[0]), dtype=np.float64)
        np.multiply(rows.T, self.rademacher[:m, None], out=work[:m])
        _fwht_axis0(work)
        return work[: self.cols].T * (self._scale / math.sqrt(self.padded_dim))


class DenseRandomMatrix:
    """Explicit random orthogonal projection from R^M to R^n.

    Gaussian entries are orthonormalized with QR: over the columns when
    rows >= cols (outputs scaled by sqrt(rows / cols) for unbiased squared
    norms), over the rows otherwise (the map is then an exact isometry).
    """

    def __init__(self, rows: int, cols: int, seed=None):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        self.rows = rows
        self.cols = cols
        self.seed = seed
        rng = np.random.default_rng(seed)
        gauss = rng.standard_normal((rows, cols))
        if rows >= cols:
            q, _ = np.linalg.qr(gauss)
            self.matrix = q
            self._scale = math.sqrt(rows / cols)
        else:
            q, _ = np.linalg.qr(gauss.T)
            self.matrix = q.T
            self._scale = 1.0

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Project one vector of length <= rows to length ``cols``."""
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("apply expects a 1-d vector; use apply_batch for stacks")
        if len(v) > self.rows:
            raise ValueError(f"input length {len(v)} exceeds rows {self.rows}")
        return (v @ self.matrix[: len(v)]) * self._scale

    def apply_batch(self, rows: np.ndarray) -> np.ndarray:
        """Project a stack of row vectors, shape (B, m <= rows) -> (B, cols)."""
        rows = np.asarray(rows, dtype=np.float64)
        if rows.shape[1] > self.rows:
            raise ValueError(f"input length {rows.shape[1]} exceeds rows {self.rows}")
        return (rows @ self.matrix[: rows.shape[1]]) * self._scale
