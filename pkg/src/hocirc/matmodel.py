"""Matrix semantics for base circuits and polymorphisms.

Objects are self-dual; a word evaluates to the product of its factor
dimensions.  A hom type ``[a,b]`` becomes a space of dimension
``dim(a) * dim(b)`` whose factors are laid out as *(reversed factors of a,
then factors of b)* — reversing the dual block makes the pairing between a
word and its dual nested, so cups and caps are index-diagonal in this layout:

* a lifted morphism ``f : a -> b`` becomes the column vector with
  ``v[i_rev(a), j_b] = f[j, i]``,
* sequential composition contracts the middle pair of blocks with a cap,
* parallel composition, splits, and merges are pure factor permutations.

A polymorphism with inputs ``X1..Xn`` and outputs ``Y1..Ym`` evaluates to a
matrix from the tensor of the input hom spaces (in order) to the tensor of
the output hom spaces; ``Comp`` contracts one matched block.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import ExplosionGuard, ModelError
from .semiring import BOOL, F64, Matrix, Semiring, identity, perm_index, perm_matrix
from .signature import HomType, PolyType, Signature, Word
from .terms import (
    BBraid,
    BCompose,
    BGen,
    BId,
    BTensor,
    BaseTerm,
    Comp,
    IdSt,
    InPerm,
    Lift,
    Merge,
    OutPerm,
    ParM,
    PGen,
    Split,
    SeqM,
    Term,
    typecheck,
)

DEFAULT_CEILING = 10_000_000


def enumeration_ceiling() -> int:
    raw = os.environ.get("HOCIRC_CEILING")
    if raw is None:
        return DEFAULT_CEILING
    try:
        return int(raw)
    except ValueError:
        raise ModelError("bad-ceiling", f"HOCIRC_CEILING must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# dimension bookkeeping


def word_dims(w: Word, dims: Mapping[str, int]) -> list[int]:
    try:
        return [dims[x] for x in w]
    except KeyError as e:
        raise ModelError("missing-dim", f"no dimension assigned to object {e.args[0]!r}") from None


def word_dim(w: Word, dims: Mapping[str, int]) -> int:
    return math.prod(word_dims(w, dims))


def hom_factor_dims(h: HomType, dims: Mapping[str, int]) -> list[int]:
    """Factor dimensions of a hom space: reversed dom block, then cod block."""
    return word_dims(h.dom, dims)[::-1] + word_dims(h.cod, dims)


def hom_dim(h: HomType, dims: Mapping[str, int]) -> int:
    return word_dim(h.dom, dims) * word_dim(h.cod, dims)


def block_dims(homs, dims: Mapping[str, int]) -> list[int]:
    return [hom_dim(h, dims) for h in homs]


def space_dim(homs, dims: Mapping[str, int]) -> int:
    return math.prod(block_dims(homs, dims))


@dataclass
class ModelAssignment:
    """Dimensions and generator matrices interpreting a signature."""

    semiring: Semiring
    dims: dict[str, int]
    gen_mats: dict[str, np.ndarray] = field(default_factory=dict)
    polygen_mats: dict[str, np.ndarray] = field(default_factory=dict)

    def dim(self, w: Word) -> int:
        return word_dim(w, self.dims)


def check_assignment(sig: Signature, asg: ModelAssignment) -> None:
    """Verify that every assigned matrix has the shape its declaration demands."""
    for name, mat in asg.gen_mats.items():
        dom, cod = sig.gen_type(name)
        want = (word_dim(cod, asg.dims), word_dim(dom, asg.dims))
        if mat.shape != want:
            raise ModelError(
                "bad-shape", f"generator {name!r} needs shape {want}, got {mat.shape}"
            )
    for name, mat in asg.polygen_mats.items():
        ptype = sig.polygen_type(name)
        want = (space_dim(ptype.outputs, asg.dims), space_dim(ptype.inputs, asg.dims))
        if mat.shape != want:
            raise ModelError(
                "bad-shape", f"poly generator {name!r} needs shape {want}, got {mat.shape}"
            )


# ---------------------------------------------------------------------------
# base evaluation


def eval_base(t: BaseTerm, sig: Signature, asg: ModelAssignment) -> Matrix:
    return Matrix(_eval_base(t, sig, asg), asg.semiring)


def _eval_base(t: BaseTerm, sig: Signature, asg: ModelAssignment) -> np.ndarray:
    sr = asg.semiring
    if isinstance(t, BId):
        return identity(word_dim(t.word, asg.dims), sr)
    if isinstance(t, BGen):
        sig.gen_type(t.name)
        try:
            return asg.gen_mats[t.name]
        except KeyError:
            raise ModelError("missing-matrix", f"no matrix assigned to {t.name!r}") from None
    if isinstance(t, BBraid):
        du = word_dims(t.left, asg.dims)
        dv = word_dims(t.right, asg.dims)
        n = len(du)
        sigma = list(range(n, n + len(dv))) + list(range(n))
        return perm_matrix(du + dv, sigma, sr)
    if isinstance(t, BCompose):
        a = _eval_base(t.first, sig, asg)
        b = _eval_base(t.second, sig, asg)
        return sr.matmul(b, a)
    if isinstance(t, BTensor):
        return sr.kron(_eval_base(t.left, sig, asg), _eval_base(t.right, sig, asg))
    raise ModelError("unknown-term", f"not a base term: {t!r}")


# ---------------------------------------------------------------------------
# poly evaluation


def _reversal_matrix(wdims: list[int], sr: Semiring) -> np.ndarray:
    """Matrix sending basis vector ``e[flat(a)]`` to ``e[flat(reversed(a))]``.

    ``flat`` on the left is row-major over ``wdims``; on the right, over
    ``reversed(wdims)``.  Not symmetric unless ``wdims`` is a palindrome.
    """
    n = len(wdims)
    return perm_matrix(wdims, list(range(n - 1, -1, -1)), sr).T.copy()


def lift_vector(mat: np.ndarray, dom_dims: list[int], sr: Semiring) -> np.ndarray:
    """Column vector naming ``mat`` in the reversed-dual hom layout."""
    r = _reversal_matrix(dom_dims, sr)
    return np.ascontiguousarray(sr.matmul(mat, r).T).reshape(-1, 1)


def cap_vector(wdims: list[int], sr: Semiring) -> np.ndarray:
    """Row vector pairing a word block against its reversed dual block."""
    return _reversal_matrix(wdims, sr).reshape(1, -1)


def reverse_index(wdims: list[int]) -> np.ndarray:
    """``idx[flat(a)]`` = flat index of ``reversed(a)`` over reversed dims."""
    if not wdims:
        return np.zeros(1, dtype=np.int64)
    n = int(np.prod(wdims))
    a = np.arange(n, dtype=np.int64).reshape(list(reversed(wdims)))
    return np.ascontiguousarray(a.transpose(range(len(wdims) - 1, -1, -1))).reshape(-1)


def lift_batch(mats: np.ndarray, dom_dims: list[int]) -> np.ndarray:
    """Batched :func:`lift_vector`: ``[..., cod, dom] -> [..., dom*cod]``."""
    idx = np.argsort(reverse_index(dom_dims))
    return np.take(mats, idx, axis=-1).swapaxes(-1, -2).reshape(mats.shape[:-2] + (-1,))


def unlift_matrix(vec: np.ndarray, dom_dims: list[int], cod_dims: list[int]) -> np.ndarray:
    """Matrix named by a hom vector; inverse of :func:`lift_vector`."""
    ddom = int(np.prod(dom_dims)) if dom_dims else 1
    dcod = int(np.prod(cod_dims)) if cod_dims else 1
    idx = reverse_index(dom_dims)
    v = np.asarray(vec).reshape(ddom, dcod)
    return np.ascontiguousarray(v[idx, :].T)


def unlift_batch(vecs: np.ndarray, dom_dims: list[int], cod_dims: list[int]) -> np.ndarray:
    """Batched :func:`unlift_matrix`: ``[..., dom*cod] -> [..., cod, dom]``."""
    ddom = int(np.prod(dom_dims)) if dom_dims else 1
    dcod = int(np.prod(cod_dims)) if cod_dims else 1
    idx = reverse_index(dom_dims)
    v = vecs.reshape(vecs.shape[:-1] + (ddom, dcod))
    return np.take(v, idx, axis=-2).swapaxes(-1, -2)


def eval_poly(t: Term, sig: Signature, asg: ModelAssignment) -> Matrix:
    """Evaluate a polymorphism term to its matrix.

    Shape is (product of output hom dims) x (product of input hom dims).
    """
    return Matrix(_eval_poly(t, sig, asg), asg.semiring)


def _split_sigma(parts, dims) -> tuple[list[int], list[int]]:
    """Input factor dims of a split and the output<-input slot permutation."""
    dom_lens = [len(h.dom) for h in parts]
    cod_lens = [len(h.cod) for h in parts]
    n_dom = sum(dom_lens)
    in_dims: list[int] = []
    for h in reversed(parts):
        in_dims.extend(word_dims(h.dom, dims)[::-1])
    for h in parts:
        in_dims.extend(word_dims(h.cod, dims))
    sigma: list[int] = []
    for i, h in enumerate(parts):
        rev_start = sum(dom_lens[j] for j in range(len(parts)) if j > i)
        sigma.extend(range(rev_start, rev_start + dom_lens[i]))
        cod_start = n_dom + sum(cod_lens[:i])
        sigma.extend(range(cod_start, cod_start + cod_lens[i]))
    return in_dims, sigma


def _eval_poly(t: Term, sig: Signature, asg: ModelAssignment) -> np.ndarray:
    sr = asg.semiring
    dims = asg.dims
    if isinstance(t, PGen):
        sig.polygen_type(t.name)
        try:
            return asg.polygen_mats[t.name]
        except KeyError:
            raise ModelError("missing-matrix", f"no matrix assigned to {t.name!r}") from None
    if isinstance(t, Lift):
        from .terms import base_typecheck

        dom, _cod = base_typecheck(t.base, sig)
        return lift_vector(_eval_base(t.base, sig, asg), word_dims(dom, dims), sr)
    if isinstance(t, IdSt):
        return lift_vector(
            identity(word_dim(t.a, dims), sr), word_dims(t.a, dims), sr
        )
    if isinstance(t, SeqM):
        left = identity(word_dim(t.a, dims), sr)
        cap = cap_vector(word_dims(t.b, dims), sr)
        right = identity(word_dim(t.c, dims), sr)
        return sr.kron(sr.kron(left, cap), right)
    if isinstance(t, ParM):
        ra = word_dims(t.a, dims)[::-1]
        a2 = word_dims(t.a2, dims)
        rb = word_dims(t.b, dims)[::-1]
        b2 = word_dims(t.b2, dims)
        in_dims = ra + a2 + rb + b2
        offs = [0, len(ra), len(ra) + len(a2), len(ra) + len(a2) + len(rb)]
        lens = [len(ra), len(a2), len(rb), len(b2)]
        sigma: list[int] = []
        for block in (2, 0, 1, 3):  # rev(b), rev(a), a2, b2
            sigma.extend(range(offs[block], offs[block] + lens[block]))
        return perm_matrix(in_dims, sigma, sr)
    if isinstance(t, Split):
        in_dims, sigma = _split_sigma(t.parts, dims)
        return perm_matrix(in_dims, sigma, sr)
    if isinstance(t, Merge):
        in_dims, sigma = _split_sigma(t.parts, dims)
        return perm_matrix(in_dims, sigma, sr).T.copy()
    if isinstance(t, InPerm):
        inner = _eval_poly(t.term, sig, asg)
        itype = typecheck(t.term, sig)
        bd = block_dims(itype.inputs, dims)
        idx = perm_index(bd, list(t.perm))
        return inner[:, idx]
    if isinstance(t, OutPerm):
        inner = _eval_poly(t.term, sig, asg)
        itype = typecheck(t.term, sig)
        bd = block_dims(itype.outputs, dims)
        idx = perm_index(bd, list(t.perm))
        return inner[idx, :]
    if isinstance(t, Comp):
        stype = typecheck(t.s, sig)
        ttype = typecheck(t.t, sig)
        s_mat = _eval_poly(t.s, sig, asg)
        t_mat = _eval_poly(t.t, sig, asg)
        d1 = space_dim(stype.outputs[: t.i], dims)
        b = hom_dim(stype.outputs[t.i], dims)
        d2 = space_dim(stype.outputs[t.i + 1 :], dims)
        g = space_dim(stype.inputs, dims)
        th = space_dim(ttype.outputs, dims)
        l1 = space_dim(ttype.inputs[: t.j], dims)
        l2 = space_dim(ttype.inputs[t.j + 1 :], dims)
        s4 = s_mat.reshape(d1, b, d2, g)
        t4 = t_mat.reshape(th, l1, b, l2)
        out = sr.einsum("pbqg,tlbm->ptqlgm", s4, t4)
        return out.reshape(d1 * th * d2, l1 * g * l2)
    raise ModelError("unknown-term", f"not a poly term: {t!r}")


def eval_cost(t: Term, sig: Signature, dims: Mapping[str, int]) -> int:
    """Estimated peak entry count of any dense array ``eval_poly`` allocates.

    Checker pipelines use this to skip dimension assignments that a particular
    term instance cannot afford; the sequencing morphism in particular
    materialises an ``(a c) x (a b b c)`` scaffold that dwarfs the result.
    """
    if isinstance(t, PGen):
        p = sig.polygen_type(t.name)
        return space_dim(p.inputs, dims) * space_dim(p.outputs, dims)
    if isinstance(t, Lift):
        from .terms import base_typecheck

        dom, cod = base_typecheck(t.base, sig)
        return word_dim(dom, dims) * word_dim(cod, dims)
    if isinstance(t, IdSt):
        return word_dim(t.a, dims) ** 2
    if isinstance(t, SeqM):
        da, db, dc = (word_dim(w, dims) for w in (t.a, t.b, t.c))
        return (da * dc) * (da * db * db * dc)
    if isinstance(t, (ParM, Split, Merge)):
        ptype = typecheck(t, sig)
        return space_dim(ptype.inputs, dims) ** 2
    if isinstance(t, (InPerm, OutPerm)):
        ptype = typecheck(t, sig)
        own = space_dim(ptype.inputs, dims) * space_dim(ptype.outputs, dims)
        return max(own, eval_cost(t.term, sig, dims))
    if isinstance(t, Comp):
        stype = typecheck(t.s, sig)
        ttype = typecheck(t.t, sig)
        b = hom_dim(stype.outputs[t.i], dims)
        rows = space_dim(stype.outputs, dims) // b * space_dim(ttype.outputs, dims)
        cols = space_dim(ttype.inputs, dims) // b * space_dim(stype.inputs, dims)
        return max(rows * cols, eval_cost(t.s, sig, dims), eval_cost(t.t, sig, dims))
    raise ModelError("unknown-term", f"not a poly term: {t!r}")


# ---------------------------------------------------------------------------
# assignment enumeration


def _bool_matrices(rows: int, cols: int) -> Iterator[np.ndarray]:
    cells = rows * cols
    for code in range(1 << cells):
        bits = (code >> np.arange(cells)) & 1
        yield bits.astype(np.bool_).reshape(rows, cols)


def _dim_maps(objects: tuple[str, ...], dim_bound: int) -> Iterator[dict[str, int]]:
    if not objects:
        yield {}
        return
    head, rest = objects[0], objects[1:]
    for sub in _dim_maps(rest, dim_bound):
        for d in range(1, dim_bound + 1):
            out = {head: d}
            out.update(sub)
            yield out


def count_boolean_assignments(
    sig: Signature,
    dim_bound: int,
    objects: tuple[str, ...] | None = None,
    gens: tuple[str, ...] | None = None,
    polygens: tuple[str, ...] | None = None,
) -> int:
    objects = tuple(sig.objects) if objects is None else objects
    gens = tuple(n for n, _ in sig.gens) if gens is None else gens
    polygens = tuple(n for n, _ in sig.polygens) if polygens is None else polygens
    total = 0
    for dm in _dim_maps(objects, dim_bound):
        per = 1
        for name in gens:
            dom, cod = sig.gen_type(name)
            per *= 1 << (word_dim(cod, dm) * word_dim(dom, dm))
        for name in polygens:
            pt = sig.polygen_type(name)
            per *= 1 << (space_dim(pt.outputs, dm) * space_dim(pt.inputs, dm))
        total += per
    return total


def enumerate_boolean_assignments(
    sig: Signature,
    dim_bound: int,
    objects: tuple[str, ...] | None = None,
    gens: tuple[str, ...] | None = None,
    polygens: tuple[str, ...] | None = None,
    ceiling: int | None = None,
) -> Iterator[ModelAssignment]:
    """All Boolean assignments: every dim map up to the bound crossed with
    every Boolean matrix for each listed generator.

    ``objects``/``gens``/``polygens`` restrict the enumeration to the symbols
    that actually occur in whatever is being evaluated; unlisted objects
    (which cannot be read during evaluation) are left out of the dim map
    entirely.  Raises :class:`ExplosionGuard` when the count exceeds the
    ceiling (``HOCIRC_CEILING`` or 10^7).
    """
    objects = tuple(sig.objects) if objects is None else objects
    gens = tuple(n for n, _ in sig.gens) if gens is None else gens
    polygens = tuple(n for n, _ in sig.polygens) if polygens is None else polygens
    limit = enumeration_ceiling() if ceiling is None else ceiling
    total = count_boolean_assignments(sig, dim_bound, objects, gens, polygens)
    if total > limit:
        raise ExplosionGuard(total, limit)

    def gen_shapes(dm):
        out = []
        for name in gens:
            dom, cod = sig.gen_type(name)
            out.append((name, False, word_dim(cod, dm), word_dim(dom, dm)))
        for name in polygens:
            pt = sig.polygen_type(name)
            out.append((name, True, space_dim(pt.outputs, dm), space_dim(pt.inputs, dm)))
        return out

    def fill(asg: ModelAssignment, shapes, k) -> Iterator[ModelAssignment]:
        if k == len(shapes):
            yield asg
            return
        name, is_poly, rows, cols = shapes[k]
        for mat in _bool_matrices(rows, cols):
            target = asg.polygen_mats if is_poly else asg.gen_mats
            target[name] = mat
            yield from fill(asg, shapes, k + 1)

    for dm in _dim_maps(objects, dim_bound):
        base = ModelAssignment(semiring=BOOL, dims=dict(dm))
        yield from fill(base, gen_shapes(dm), 0)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator so runs reproduce across platforms."""
    return np.random.Generator(np.random.Philox(seed))


def random_float_assignment(
    sig: Signature,
    dims: Mapping[str, int],
    rng: np.random.Generator,
    gens: tuple[str, ...] | None = None,
    polygens: tuple[str, ...] | None = None,
) -> ModelAssignment:
    """Uniform [0,1] matrices for the listed generators at the given dims."""
    gens = tuple(n for n, _ in sig.gens) if gens is None else gens
    polygens = tuple(n for n, _ in sig.polygens) if polygens is None else polygens
    asg = ModelAssignment(semiring=F64, dims=dict(dims))
    for name in gens:
        dom, cod = sig.gen_type(name)
        asg.gen_mats[name] = rng.random((word_dim(cod, dims), word_dim(dom, dims)))
    for name in polygens:
        pt = sig.polygen_type(name)
        asg.polygen_mats[name] = rng.random(
            (space_dim(pt.outputs, dims), space_dim(pt.inputs, dims))
        )
    return asg
