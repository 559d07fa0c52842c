"""Dense matrices on ordered tensor products of N-dimensional legs.

Legs are numbered from 1.  Row and column multi-indices are row-major in leg
order, so leg 1 is the slowest-varying index (the ``np.kron`` convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError

COND_LIMIT = 1e10


@dataclass(frozen=True, eq=False)
class LegMatrix:
    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        size = int(np.prod(self.dims))
        if self.data.shape != (size, size):
            raise ValueError(f"shape {self.data.shape} does not match legs {self.dims}")

    @property
    def nlegs(self) -> int:
        return len(self.dims)

    @classmethod
    def identity(cls, dims) -> LegMatrix:
        dims = tuple(dims)
        return cls(np.eye(int(np.prod(dims)), dtype=complex), dims)

    def _same(self, other: LegMatrix):
        if self.dims != other.dims:
            raise ValueError(f"leg mismatch {self.dims} vs {other.dims}")

    def __matmul__(self, other: LegMatrix) -> LegMatrix:
        self._same(other)
        return LegMatrix(self.data @ other.data, self.dims)

    def __mul__(self, scalar) -> LegMatrix:
        return LegMatrix(self.data * scalar, self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> LegMatrix:
        return LegMatrix(self.data / scalar, self.dims)

    def __add__(self, other: LegMatrix) -> LegMatrix:
        self._same(other)
        return LegMatrix(self.data + other.data, self.dims)

    def __sub__(self, other: LegMatrix) -> LegMatrix:
        self._same(other)
        return LegMatrix(self.data - other.data, self.dims)

    def kron(self, other: LegMatrix) -> LegMatrix:
        return LegMatrix(np.kron(self.data, other.data), self.dims + other.dims)

    def pt(self, *legs: int) -> LegMatrix:
        """Partial transpose on each of ``legs`` (1-based)."""
        out = self
        for leg in legs:
            out = partial_transpose(out, leg)
        return out

    @property
    def T(self) -> LegMatrix:
        return LegMatrix(self.data.T.copy(), self.dims)

    def cond(self) -> float:
        return float(np.linalg.cond(self.data))

    def inv(self, conds: list | None = None, what: str = "matrix") -> LegMatrix:
        """Inverse by LU solve; refuses when the condition number exceeds 1e10.

        When ``conds`` is given the condition number is appended to it.
        """
        cond = self.cond()
        if conds is not None:
            conds.append(cond)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularMatrixError(cond, what)
        eye = np.eye(self.data.shape[0], dtype=complex)
        return LegMatrix(np.linalg.solve(self.data, eye), self.dims)

    def trace(self, legs) -> LegMatrix:
        return partial_trace(self, legs)


def _check_leg(M: LegMatrix, leg: int):
    if not 1 <= leg <= M.nlegs:
        raise ValueError(f"leg {leg} out of range 1..{M.nlegs}")


def partial_transpose(M: LegMatrix, leg: int) -> LegMatrix:
    _check_leg(M, leg)
    s = M.nlegs
    tensor = M.data.reshape(M.dims + M.dims)
    axes = list(range(2 * s))
    axes[leg - 1], axes[s + leg - 1] = axes[s + leg - 1], axes[leg - 1]
    return LegMatrix(tensor.transpose(axes).reshape(M.data.shape), M.dims)


def partial_trace(M: LegMatrix, legs) -> LegMatrix:
    """Trace out ``legs``; the remaining legs keep their order."""
    legs = sorted(set(legs))
    for leg in legs:
        _check_leg(M, leg)
    s = M.nlegs
    keep = [k for k in range(1, s + 1) if k not in legs]
    tensor = M.data.reshape(M.dims + M.dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = [letters[k] for k in range(s)]
    col = [letters[s + k] for k in range(s)]
    for leg in legs:
        col[leg - 1] = row[leg - 1]
    out = "".join(row[k - 1] for k in keep) + "".join(col[k - 1] for k in keep)
    kept = np.einsum("".join(row) + "".join(col) + "->" + out, tensor)
    dims = tuple(M.dims[k - 1] for k in keep)
    size = int(np.prod(dims)) if dims else 1
    return LegMatrix(kept.reshape(size, size), dims)


def embed(M: LegMatrix, s: int, i: int, j: int) -> LegMatrix:
    """Place the two legs of ``M`` on slots i and j of an s-leg space."""
    if M.nlegs != 2:
        raise ValueError("embed expects a two-leg matrix")
    if not (1 <= i <= s and 1 <= j <= s and i != j):
        raise ValueError(f"bad slots ({i}, {j}) for s={s}")
    N = M.dims[0]
    if M.dims[1] != N:
        raise ValueError("embed expects equal leg dimensions")
    others = [k for k in range(1, s + 1) if k not in (i, j)]
    order = [i, j] + others
    big = np.kron(M.data, np.eye(N ** (s - 2), dtype=complex)).reshape([N] * (2 * s))
    perm = [order.index(k) for k in range(1, s + 1)]
    axes = perm + [s + a for a in perm]
    return LegMatrix(big.transpose(axes).reshape(N**s, N**s), (N,) * s)


def embed_one(M: LegMatrix, s: int, i: int) -> LegMatrix:
    """Place a one-leg matrix on slot i of an s-leg space."""
    if M.nlegs != 1 or not 1 <= i <= s:
        raise ValueError(f"cannot place {M.nlegs}-leg matrix on slot {i} of {s}")
    N = M.dims[0]
    data = np.kron(np.kron(np.eye(N ** (i - 1)), M.data), np.eye(N ** (s - i)))
    return LegMatrix(data.astype(complex), (N,) * s)


def swap(N: int) -> LegMatrix:
    """The flip ``P`` on two N-dimensional legs."""
    P = np.zeros((N * N, N * N), dtype=complex)
    for a in range(N):
        for b in range(N):
            P[a * N + b, b * N + a] = 1
    return LegMatrix(P, (N, N))


def permutation_op(s: int, i: int, j: int, N: int) -> LegMatrix:
    if not 1 <= i < j <= s:
        raise ValueError(f"need 1 <= i < j <= s, got i={i}, j={j}, s={s}")
    return embed(swap(N), s, i, j)


def flip(M: LegMatrix) -> LegMatrix:
    """``M_{21} = P M_{12} P`` for a two-leg matrix."""
    P = swap(M.dims[0])
    return P @ M @ P
