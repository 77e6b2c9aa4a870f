"""Finite probe grids.

The behavioural checks in :mod:`hocirc.holes` and :mod:`hocirc.embed` all
quantify over "every process" in one place or another.  That is infinite, so
each check runs over a finite grid instead: context words up to a length
bound, Boolean matrices at fixed small dimensions, and enumeration budgets
that decide when a sweep is exhaustive and when it falls back to seeded
sampling.  Both modules must share one :class:`GridConfig` so that their
quotients line up; the config is recorded on every tabulated family and
report.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import product

import numpy as np

from .signature import Word


@dataclass(frozen=True)
class GridConfig:
    """Shared bounds for grid sweeps.

    ``dim_bound``
        every object on the grid gets this Boolean dimension.
    ``word_len``
        maximum length of context words.
    ``samples``
        number of seeded samples when an enumeration exceeds its budget.
    ``seed``
        root seed; all derived randomness goes through :func:`subrng`.
    ``cell_bits``
        a family cell (one choice of contexts for every hole) is tabulated
        only when the total bit count of its input matrices stays at or
        under this; larger cells fall off the grid.
    ``cond_bits``
        budget for a single vectorised check condition (input matrices x
        context morphisms); conditions over budget are skipped
        deterministically.
    ``chunk``
        batch rows processed per einsum call.
    ``fill_cap``
        in multi-input checks, at most this many fillings of the fixed
        holes are quantified per cell (all of them when the cell is small).
    ``max_cells``
        cap on the number of cells per tabulated family.
    ``probe_bits``
        behavioural sweeps enumerate all Boolean assignments up to this
        many total bits, and sample above it.
    ``ctx_tuples``
        cap on context tuples per behavioural comparison.
    ``asg_bits``
        behavioural sweeps enumerate every Boolean assignment of the
        occurring generators when their total bit count stays at or under
        this, and fall back to ``samples`` seeded draws above it.
    """

    dim_bound: int = 2
    word_len: int = 1
    samples: int = 100
    seed: int = 0
    cell_bits: int = 16
    cond_bits: int = 20
    chunk: int = 4096
    fill_cap: int = 16
    max_cells: int = 24
    probe_bits: int = 12
    ctx_tuples: int = 6
    asg_bits: int = 8

    def dims_for(self, objects: tuple[str, ...]) -> dict[str, int]:
        return {o: self.dim_bound for o in objects}


def grid_words(objects: tuple[str, ...], word_len: int) -> tuple[Word, ...]:
    """All words over ``objects`` up to ``word_len``, shortest first."""
    out: list[Word] = []
    for n in range(word_len + 1):
        for combo in product(objects, repeat=n):
            out.append(Word(*combo))
    return tuple(out)


def subrng(seed: int, *path) -> np.random.Generator:
    """Counter-based generator for the stream named by ``path``.

    Streams are independent for distinct paths and reproducible across
    platforms (the key is a SHA-256 of the rendered path, fed to Philox).
    """
    tag = repr((int(seed),) + tuple(repr(p) for p in path)).encode()
    key = int.from_bytes(hashlib.sha256(tag).digest()[:8], "big")
    return np.random.Generator(np.random.Philox(key))


# ---------------------------------------------------------------------------
# Boolean matrix enumeration.  Matrices of a given shape are indexed by an
# integer code: bit k of the code is the entry at row-major position k.


def bool_matrix_codes(rows: int, cols: int, dtype=np.uint8) -> np.ndarray:
    """Dense ``[2**(rows*cols), rows, cols]`` array of all Boolean matrices."""
    bits = rows * cols
    if bits > 24:
        raise ValueError(f"refusing to enumerate 2**{bits} matrices")
    codes = np.arange(1 << bits, dtype=np.int64)
    flat = (codes[:, None] >> np.arange(bits, dtype=np.int64)[None, :]) & 1
    return flat.reshape(-1, rows, cols).astype(dtype)


def pack_bool(mats: np.ndarray) -> np.ndarray:
    """Inverse of :func:`bool_matrix_codes` on the last two axes."""
    r, c = mats.shape[-2], mats.shape[-1]
    bits = r * c
    flat = (mats.reshape(mats.shape[:-2] + (bits,)) > 0).astype(np.int64)
    weights = (np.int64(1) << np.arange(bits, dtype=np.int64))
    return flat @ weights


def random_bool_matrices(rng: np.random.Generator, n: int, rows: int, cols: int) -> np.ndarray:
    return (rng.integers(0, 2, size=(n, rows, cols))).astype(np.uint8)
