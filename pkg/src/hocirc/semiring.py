"""Semirings and dense matrices over them.

Two semirings ship: the Boolean semiring (or/and, compared exactly) and
float64 (compared entrywise within a tolerance).  Matrix kernels go through
numpy; Boolean products are computed by counting in float64 and thresholding,
which is exact for any inner dimension this package can produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelError


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring with an equality predicate.

    ``add``/``mul`` act on scalars; ``tol`` widens ``eq`` for inexact
    carriers (0.0 means exact comparison).
    """

    name: str
    zero: object
    one: object
    add: Callable = field(compare=False)
    mul: Callable = field(compare=False)
    dtype: object = field(compare=False, default=np.float64)
    tol: float = 0.0

    def eq(self, a, b) -> bool:
        if self.tol:
            return abs(float(a) - float(b)) <= self.tol
        return bool(a == b)

    # -- matrix kernels ----------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.name == "bool":
            return (a.astype(np.float64) @ b.astype(np.float64)) > 0.5
        return a @ b

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.kron(a, b)

    def einsum(self, spec: str, *arrays: np.ndarray) -> np.ndarray:
        if self.name == "bool":
            out = np.einsum(spec, *(x.astype(np.float64) for x in arrays), optimize=True)
            return out > 0.5
        return np.einsum(spec, *arrays, optimize=True)

    def mat_eq(self, a: np.ndarray, b: np.ndarray) -> bool:
        if a.shape != b.shape:
            return False
        if self.tol:
            return bool(np.all(np.abs(a - b) <= self.tol))
        return bool(np.array_equal(a, b))


BOOL = Semiring(
    name="bool",
    zero=False,
    one=True,
    add=lambda a, b: bool(a) or bool(b),
    mul=lambda a, b: bool(a) and bool(b),
    dtype=np.bool_,
    tol=0.0,
)

F64 = Semiring(
    name="f64",
    zero=0.0,
    one=1.0,
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    dtype=np.float64,
    tol=1e-9,
)

SEMIRINGS = {"bool": BOOL, "f64": F64}


def get_semiring(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ModelError("unknown-semiring", f"no semiring named {name!r}") from None


@dataclass(frozen=True)
class Matrix:
    """A dense matrix tagged with its semiring."""

    data: np.ndarray
    semiring: Semiring

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ModelError("bad-shape", f"matrix data must be 2-d, got {self.data.shape}")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.semiring.name == other.semiring.name
            and self.semiring.mat_eq(self.data, other.data)
        )

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        return hash((self.rows, self.cols, self.semiring.name))


def mat_compose(f: Matrix, g: Matrix) -> Matrix:
    """Matrix product ``f @ g`` (so ``f`` is applied after ``g``)."""
    if f.semiring.name != g.semiring.name:
        raise ModelError("semiring-mismatch", "cannot compose across semirings")
    if f.cols != g.rows:
        raise ModelError("bad-shape", f"cannot compose {f.rows}x{f.cols} with {g.rows}x{g.cols}")
    return Matrix(f.semiring.matmul(f.data, g.data), f.semiring)


def mat_tensor(f: Matrix, g: Matrix) -> Matrix:
    if f.semiring.name != g.semiring.name:
        raise ModelError("semiring-mismatch", "cannot tensor across semirings")
    return Matrix(f.semiring.kron(f.data, g.data), f.semiring)


def perm_index(dims: list[int], sigma: list[int] | tuple[int, ...]) -> np.ndarray:
    """Index array realising a factor permutation.

    For the permutation matrix ``P`` with ``out[k] = in[sigma[k]]``, returns
    ``idx`` such that ``(P v)[m] = v[idx[m]]``.
    """
    n = int(np.prod(dims)) if dims else 1
    if not dims:
        return np.array([0])
    a = np.arange(n).reshape(dims)
    return np.ascontiguousarray(a.transpose(sigma)).ravel()


def perm_matrix(dims: list[int], sigma, semiring: Semiring) -> np.ndarray:
    idx = perm_index(dims, sigma)
    n = idx.shape[0]
    out = np.zeros((n, n), dtype=semiring.dtype)
    out[np.arange(n), idx] = semiring.one
    return out


def mat_perm(dims: list[int], sigma, semiring: Semiring) -> Matrix:
    """Permutation matrix moving input factor ``sigma[k]`` to output slot ``k``."""
    if sorted(sigma) != list(range(len(dims))):
        raise ModelError("bad-permutation", f"{sigma} is not a permutation of {len(dims)} factors")
    return Matrix(perm_matrix(dims, sigma, semiring), semiring)


def identity(n: int, semiring: Semiring) -> np.ndarray:
    return np.eye(n, dtype=semiring.dtype)
