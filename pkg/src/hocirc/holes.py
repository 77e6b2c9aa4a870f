"""Supermaps on typed holes and locally-applicable families.

A *supermap* takes whole processes as inputs: it has a list of typed holes
``[a_i, a_i']`` and a target ``[b, b']``, and turns a process filling each
hole into a process of the target type.  Dense supermaps are stored as a
single core matrix ``b (x) a_1' .. a_n' -> b' (x) a_1 .. a_n``; plugging a
process into a hole contracts the matching pair of legs, and any context
wires the plugged process carries ride along untouched.

Not every family of functions between process sets arises that way.  The
ones that do are exactly the *locally applicable* families: indexed by a
context pair ``(x, x')`` per hole, sending ``a.x -> a'.x'`` to
``b.x -> b'.x'``, and commuting with everything that happens on the context
wires.  Over a finite grid that is two checkable conditions per family —
appending a fresh wire commutes with the family (dragging), and processing
done on the context before or after the hole can slide through it — plus,
for several holes, the requirement that each slot is locally applicable
with the others fixed, uniformly in the fixed filling.

This module implements dense supermaps, tabulated families on a
:class:`~hocirc.grids.GridConfig`, the local-applicability checks, the
commuting-slots check for two families acting on disjoint holes, a search
for single-party realisations (one tooth in, one tooth out, a memory wire
across), and grid-bounded behavioural comparison of open terms.
"""

from __future__ import annotations

import hashlib
import string
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ExplosionGuard, ModelError, TermTypeError
from .grids import (
    GridConfig,
    bool_matrix_codes,
    grid_words,
    pack_bool,
    random_bool_matrices,
    subrng,
)
from .matmodel import (
    ModelAssignment,
    _split_sigma,
    enumeration_ceiling,
    eval_poly,
    hom_dim,
    lift_batch,
    reverse_index,
    unlift_matrix,
    word_dim,
    word_dims,
)
from .semiring import BOOL, Semiring, perm_index, perm_matrix
from .signature import EMPTY, HomType, PolyType, Signature, Word, hom, tensor_words
from .terms import Term, gen_names, typecheck

__all__ = [
    "DSupermap",
    "identity_supermap",
    "comb_supermap",
    "apply_dsupermap",
    "apply_dsupermap_batch",
    "dsupermap_from_term",
    "CellTable",
    "FunctionFamilyLAT",
    "family_from_dsupermap",
    "identity_family",
    "fixed_family",
    "CheckResult",
    "check_lat",
    "check_lat_single",
    "check_lat_multi",
    "check_slot",
    "check_single_party_representable",
    "BehavioralResult",
    "BehavioralClass",
    "behavioral_equal",
    "behavioral_class",
]


def _mat_str(m: np.ndarray) -> str:
    rows = [" ".join(str(int(v)) for v in row) for row in np.atleast_2d(m)]
    return "[" + "; ".join(rows) + "]"


# ---------------------------------------------------------------------------
# dense supermaps


@dataclass(frozen=True)
class DSupermap:
    """A dense supermap core over a fixed dimension assignment.

    ``core`` is the matrix of the supermap read as one big process
    ``b (x) a_1' .. a_n' -> b' (x) a_1 .. a_n`` (rows indexed by
    ``b', a_1, .., a_n``; columns by ``b, a_1', .., a_n'``).
    """

    holes: tuple[HomType, ...]
    target: HomType
    core: np.ndarray = field(compare=False)
    dims: Mapping[str, int] = field(compare=False)
    semiring: Semiring = BOOL

    def __post_init__(self):
        rows = word_dim(self.target.cod, self.dims) * prod(
            word_dim(h.dom, self.dims) for h in self.holes
        )
        cols = word_dim(self.target.dom, self.dims) * prod(
            word_dim(h.cod, self.dims) for h in self.holes
        )
        if self.core.shape != (rows, cols):
            raise ModelError(
                "bad-shape",
                f"supermap core needs shape {(rows, cols)}, got {self.core.shape}",
            )

    @property
    def n_holes(self) -> int:
        return len(self.holes)


def identity_supermap(h: HomType, dims: Mapping[str, int], semiring: Semiring = BOOL) -> DSupermap:
    """The supermap with one hole of type ``h`` that returns its filling."""
    du = word_dim(h.dom, dims)
    dv = word_dim(h.cod, dims)
    core = perm_matrix([du, dv], [1, 0], semiring)
    return DSupermap((h,), h, core, dict(dims), semiring)


def comb_supermap(
    holes: Sequence[HomType],
    target: HomType,
    teeth: Sequence[np.ndarray],
    memories: Sequence[Word],
    dims: Mapping[str, int],
    semiring: Semiring = BOOL,
) -> DSupermap:
    """Assemble the supermap of a comb from its teeth and memory words.

    ``teeth[0] : b -> a_1 . w_1`` feeds the first hole, ``teeth[i]`` routes
    ``a_i' . w_i -> a_{i+1} . w_{i+1}`` between consecutive holes, and the
    last tooth closes ``a_n' . w_n -> b'``.  Memory wires are contracted
    into the core, so the result plugs like any other dense supermap.
    """
    holes = tuple(holes)
    memories = list(memories)
    n = len(holes)
    if len(teeth) != n + 1 or len(memories) != n:
        raise ModelError(
            "shape-mismatch",
            f"a comb on {n} holes needs {n + 1} teeth and {n} memories, "
            f"got {len(teeth)} and {len(memories)}",
        )
    db = word_dim(target.dom, dims)
    dbp = word_dim(target.cod, dims)
    if n == 0:
        u = np.asarray(teeth[0])
        if u.shape != (dbp, db):
            raise ModelError("shape-mismatch", f"tooth 0 needs shape {(dbp, db)}, got {u.shape}")
        return DSupermap((), target, u, dict(dims), semiring)
    das = [word_dim(h.dom, dims) for h in holes]
    daps = [word_dim(h.cod, dims) for h in holes]
    dws = [word_dim(w, dims) for w in memories]
    shapes = [(das[0] * dws[0], db)]
    shapes += [(das[i] * dws[i], daps[i - 1] * dws[i - 1]) for i in range(1, n)]
    shapes.append((dbp, daps[n - 1] * dws[n - 1]))
    mats = [np.asarray(t) for t in teeth]
    for k, (m, want) in enumerate(zip(mats, shapes)):
        if m.shape != want:
            raise ModelError("shape-mismatch", f"tooth {k} needs shape {want}, got {m.shape}")
    pool = iter(string.ascii_letters)
    lb, lbp = next(pool), next(pool)
    la = [next(pool) for _ in range(n)]
    lap = [next(pool) for _ in range(n)]
    lw = [next(pool) for _ in range(n)]
    ops = [mats[0].reshape(das[0], dws[0], db)]
    subs = [la[0] + lw[0] + lb]
    for i in range(1, n):
        ops.append(mats[i].reshape(das[i], dws[i], daps[i - 1], dws[i - 1]))
        subs.append(la[i] + lw[i] + lap[i - 1] + lw[i - 1])
    ops.append(mats[n].reshape(dbp, daps[n - 1], dws[n - 1]))
    subs.append(lbp + lap[n - 1] + lw[n - 1])
    out = lbp + "".join(la) + lb + "".join(lap)
    core = semiring.einsum(",".join(subs) + "->" + out, *ops)
    core = np.ascontiguousarray(core.reshape(dbp * prod(das), db * prod(daps)))
    return DSupermap(holes, target, core, dict(dims), semiring)


def apply_dsupermap_batch(
    S: DSupermap,
    batches: Sequence[np.ndarray],
    contexts: Sequence[HomType],
) -> np.ndarray:
    """Plug a batch of fillings into every hole at once.

    ``batches[i]`` is ``[N_i, d(a_i'.x_i'), d(a_i.x_i)]`` for context
    ``contexts[i] = [x_i, x_i']``; the result is
    ``[N_1 * .. * N_n, d(b'.x_1'..x_n'), d(b.x_1..x_n)]`` with the combined
    batch index running hole-major.
    """
    n = S.n_holes
    if len(batches) != n or len(contexts) != n:
        raise ModelError(
            "shape-mismatch",
            f"supermap has {n} holes, got {len(batches)} batches and {len(contexts)} contexts",
        )
    dims, sr = S.dims, S.semiring
    db = word_dim(S.target.dom, dims)
    dbp = word_dim(S.target.cod, dims)
    if n == 0:
        return S.core[None, :, :].copy()
    if 2 + 5 * n > len(string.ascii_letters):
        raise ModelError("shape-mismatch", f"cannot route {n} holes through one contraction")
    das = [word_dim(h.dom, dims) for h in S.holes]
    daps = [word_dim(h.cod, dims) for h in S.holes]
    dxs = [word_dim(c.dom, dims) for c in contexts]
    dxps = [word_dim(c.cod, dims) for c in contexts]
    phis = []
    for i, b in enumerate(batches):
        b = np.asarray(b)
        want = (daps[i] * dxps[i], das[i] * dxs[i])
        if b.ndim != 3 or b.shape[1:] != want:
            raise ModelError(
                "shape-mismatch",
                f"hole {i} at context {contexts[i]} takes {want} matrices, got {b.shape}",
            )
        phis.append(b.reshape(b.shape[0], daps[i], dxps[i], das[i], dxs[i]))
    pool = iter(string.ascii_letters)
    lb, lbp = next(pool), next(pool)
    la = [next(pool) for _ in range(n)]
    lap = [next(pool) for _ in range(n)]
    lx = [next(pool) for _ in range(n)]
    lxp = [next(pool) for _ in range(n)]
    ln = [next(pool) for _ in range(n)]
    core_t = S.core.reshape([dbp] + das + [db] + daps)
    subs = [lbp + "".join(la) + lb + "".join(lap)]
    subs += [ln[i] + lap[i] + lxp[i] + la[i] + lx[i] for i in range(n)]
    out = "".join(ln) + lbp + "".join(lxp) + lb + "".join(lx)
    res = sr.einsum(",".join(subs) + "->" + out, core_t, *phis)
    nn = prod(p.shape[0] for p in phis)
    return res.reshape(nn, dbp * prod(dxps), db * prod(dxs))


def apply_dsupermap(
    S: DSupermap,
    phis: Sequence[np.ndarray],
    contexts: Sequence[HomType],
) -> np.ndarray:
    """Plug one process (with its context wires) into every hole."""
    out = apply_dsupermap_batch(S, [np.asarray(p)[None] for p in phis], contexts)
    return out[0]


def dsupermap_from_term(sig: Signature, t: Term, asg: ModelAssignment) -> DSupermap:
    """Evaluate a single-output polymorphism term to a dense supermap.

    The term's input homs become the holes and its output the target; the
    evaluated matrix is re-indexed from hom-space layout (dual factors
    reversed) to the plain process layout of the core.
    """
    ptype = typecheck(t, sig)
    if len(ptype.outputs) != 1:
        raise TermTypeError(
            "multiple-outputs-unsupported",
            f"a supermap core needs exactly one output hom, got {len(ptype.outputs)}",
        )
    holes = ptype.inputs
    target = ptype.outputs[0]
    dims, sr = asg.dims, asg.semiring
    M = eval_poly(t, sig, asg).data
    b_dims = word_dims(target.dom, dims)
    bp_dims = word_dims(target.cod, dims)
    db, dbp = prod(b_dims), prod(bp_dims)
    if not holes:
        core = np.ascontiguousarray(unlift_matrix(M[:, 0], b_dims, bp_dims))
        return DSupermap((), target, core, dict(dims), sr)
    n = len(holes)
    u_dims = [word_dims(h.dom, dims) for h in holes]
    dus = [prod(d) for d in u_dims]
    dvs = [word_dim(h.cod, dims) for h in holes]
    shape = [db, dbp]
    for du, dv in zip(dus, dvs):
        shape += [du, dv]
    T = M.reshape(shape)
    T = np.take(T, reverse_index(b_dims), axis=0)
    for i in range(n):
        T = np.take(T, reverse_index(u_dims[i]), axis=2 + 2 * i)
    perm = [1] + [2 + 2 * i for i in range(n)] + [0] + [3 + 2 * i for i in range(n)]
    core = np.ascontiguousarray(T.transpose(perm).reshape(dbp * prod(dus), db * prod(dvs)))
    return DSupermap(tuple(holes), target, core, dict(dims), sr)


# ---------------------------------------------------------------------------
# tabulated families on a grid


@dataclass
class CellTable:
    """All values of a family at one choice of contexts.

    ``data[code]`` is the value on the Boolean filling with that code
    (hole-major combined code, row-major bits per hole).  ``present`` masks
    codes actually tabulated; ``None`` means the cell is total.
    """

    ctxs: tuple[HomType, ...]
    data: np.ndarray
    present: np.ndarray | None = None


class FunctionFamilyLAT:
    """A context-indexed family of functions on Boolean process matrices.

    The family sends, at each context tuple ``(x_i, x_i')``, fillings
    ``a_i.x_i -> a_i'.x_i'`` of its holes to a process ``b.X -> b'.X'``
    where ``X`` tensors the contexts in hole order.  Values live in
    tabulated cells, computed on demand through ``batch_source`` when one
    is attached (e.g. a dense supermap) and otherwise required up front.
    Whether such a family is a supermap in disguise is exactly what the
    ``check_lat*`` functions decide, so construction puts no conditions on
    the table beyond shapes.
    """

    def __init__(
        self,
        holes: Sequence[HomType],
        target: HomType,
        dims: Mapping[str, int],
        grid: GridConfig,
        name: str = "T",
        cells: Mapping[tuple[HomType, ...], CellTable] | None = None,
        batch_source: Callable | None = None,
        restrict_cells: Sequence[tuple[HomType, ...]] | None = None,
    ):
        self.holes = tuple(holes)
        self.target = target
        self.dims = dict(dims)
        self.grid = grid
        self.name = name
        self.cells: dict[tuple[HomType, ...], CellTable] = dict(cells or {})
        self.batch_source = batch_source
        self.restrict_cells = (
            tuple(tuple(c) for c in restrict_cells) if restrict_cells is not None else None
        )
        self.semiring = BOOL
        self._cell_list: tuple[tuple[HomType, ...], ...] | None = None

    # -- shapes ------------------------------------------------------------

    def hole_shape(self, i: int, ctx: HomType) -> tuple[int, int]:
        h = self.holes[i]
        return (
            word_dim(h.cod, self.dims) * word_dim(ctx.cod, self.dims),
            word_dim(h.dom, self.dims) * word_dim(ctx.dom, self.dims),
        )

    def hole_bits(self, i: int, ctx: HomType) -> int:
        r, c = self.hole_shape(i, ctx)
        return r * c

    def cell_bits(self, ctxs: Sequence[HomType]) -> int:
        return sum(self.hole_bits(i, c) for i, c in enumerate(ctxs))

    def value_shape(self, ctxs: Sequence[HomType]) -> tuple[int, int]:
        rows = word_dim(self.target.cod, self.dims) * prod(
            word_dim(c.cod, self.dims) for c in ctxs
        )
        cols = word_dim(self.target.dom, self.dims) * prod(
            word_dim(c.dom, self.dims) for c in ctxs
        )
        return rows, cols

    # -- cell enumeration --------------------------------------------------

    def hole_ctx_candidates(self, i: int) -> tuple[HomType, ...]:
        words = grid_words(tuple(sorted(self.dims)), self.grid.word_len)
        out = []
        for x in words:
            for xp in words:
                ctx = hom(x, xp)
                if self.hole_bits(i, ctx) <= self.grid.cell_bits:
                    out.append(ctx)
        return tuple(out)

    def grid_cells(self) -> tuple[tuple[HomType, ...], ...]:
        """The family's cells, smallest first, capped at ``grid.max_cells``."""
        if self.restrict_cells is not None:
            return self.restrict_cells
        if self._cell_list is None:
            from itertools import product as iproduct

            cands = [self.hole_ctx_candidates(i) for i in range(len(self.holes))]
            combos = [c for c in iproduct(*cands) if self.cell_bits(c) <= self.grid.cell_bits]
            combos.sort(key=lambda c: self.cell_bits(c))
            self._cell_list = tuple(combos[: self.grid.max_cells])
        return self._cell_list

    # -- values ------------------------------------------------------------

    def ensure_cell(self, ctxs: Sequence[HomType]) -> CellTable:
        ctxs = tuple(ctxs)
        tbl = self.cells.get(ctxs)
        if tbl is not None:
            return tbl
        if self.batch_source is None:
            raise ModelError(
                "incomplete-table",
                f"{self.name}: no tabulated cell at contexts ({', '.join(map(str, ctxs))})",
            )
        bits = self.cell_bits(ctxs)
        if bits > 24:
            raise ModelError(
                "explosion-guard",
                f"{self.name}: refusing to tabulate a 2**{bits}-entry cell",
            )
        batches = [bool_matrix_codes(*self.hole_shape(i, c)) for i, c in enumerate(ctxs)]
        vals = np.asarray(self.batch_source(ctxs, batches))
        want = (1 << bits,) + self.value_shape(ctxs)
        if vals.shape != want:
            raise ModelError(
                "bad-shape",
                f"{self.name}: cell values need shape {want}, got {vals.shape}",
            )
        tbl = CellTable(ctxs, vals.astype(np.uint8), None)
        self.cells[ctxs] = tbl
        return tbl

    def ensure_all(self) -> None:
        for c in self.grid_cells():
            self.ensure_cell(c)

    def values(self, ctxs: Sequence[HomType], codes) -> np.ndarray:
        """Values on the fillings with the given combined codes."""
        tbl = self.ensure_cell(ctxs)
        codes = np.asarray(codes, dtype=np.int64)
        if tbl.present is not None:
            ok = tbl.present[codes]
            if not ok.all():
                bad = int(np.asarray(codes).reshape(-1)[int(np.argmin(ok.reshape(-1)))])
                raise ModelError(
                    "incomplete-table",
                    f"{self.name}: missing entry {bad} at contexts ({', '.join(map(str, tbl.ctxs))})",
                )
        return tbl.data[codes]

    def mutated(self, ctxs: Sequence[HomType], code: int, bit: int = 0) -> "FunctionFamilyLAT":
        """A copy of the family with one output bit flipped in one cell."""
        ctxs = tuple(ctxs)
        tbl = self.ensure_cell(ctxs)
        data = tbl.data.copy()
        flat = data[code].reshape(-1)
        flat[bit] ^= 1
        cells = dict(self.cells)
        cells[ctxs] = CellTable(tbl.ctxs, data, tbl.present)
        return FunctionFamilyLAT(
            self.holes,
            self.target,
            self.dims,
            self.grid,
            name=f"{self.name}~flip",
            cells=cells,
            batch_source=self.batch_source,
            restrict_cells=self.restrict_cells,
        )


def family_from_dsupermap(S: DSupermap, grid: GridConfig, name: str | None = None) -> FunctionFamilyLAT:
    """Tabulate a dense supermap as a family over the grid (lazily)."""
    if S.semiring.name != "bool":
        raise ModelError("bool-only", "grid tabulation works over the Boolean semiring")

    def source(ctxs, batches):
        return np.asarray(apply_dsupermap_batch(S, batches, ctxs)).astype(np.uint8)

    return FunctionFamilyLAT(
        S.holes,
        S.target,
        S.dims,
        grid,
        name=name if name is not None else "S*",
        batch_source=source,
    )


def identity_family(
    h: HomType, dims: Mapping[str, int], grid: GridConfig, name: str = "Id"
) -> FunctionFamilyLAT:
    return family_from_dsupermap(identity_supermap(h, dims, BOOL), grid, name=name)


# ---------------------------------------------------------------------------
# check results


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a grid check: a verdict, a witness, and a case count."""

    ok: bool
    witness: str = ""
    cases: int = 0
    data: object = None


# ---------------------------------------------------------------------------
# local applicability, single hole


def _swap_blocks(d0: int, d1: int) -> np.ndarray:
    """Permutation matrix exchanging two tensor blocks, as uint8."""
    return perm_matrix([d0, d1], [1, 0], BOOL).astype(np.uint8)


def _conj_batch(pout: np.ndarray, vals: np.ndarray, pin: np.ndarray) -> np.ndarray:
    """``pout @ v @ pin`` over the batch; exact for permutation conjugators."""
    return np.einsum("or,nrc,ci->noi", pout, vals, pin)


def _kron_id_batch(mats: np.ndarray, dz: int) -> np.ndarray:
    """Append an identity wire of dimension ``dz`` to a batch of matrices."""
    n, r, c = mats.shape
    eye = np.eye(dz, dtype=mats.dtype)
    out = np.einsum("nij,kl->nikjl", mats, eye)
    return out.reshape(n, r * dz, c * dz)


def check_lat_single(fam: FunctionFamilyLAT) -> CheckResult:
    """Check local applicability of a one-hole family over its grid.

    Two sweeps: *dragging* (the value at a context extended by a fresh wire
    ``z`` is the old value with ``z`` appended) and *sliding* (Boolean
    pre/post-processing ``f : y -> x``, ``g : x' -> y'`` of the context
    moves through the family).  Conditions whose enumeration exceeds
    ``grid.cond_bits`` are skipped; everything else is exhaustive.
    """
    if len(fam.holes) != 1:
        raise ModelError("expected-single-hole", f"{fam.name} has {len(fam.holes)} holes")
    grid = fam.grid
    dims = fam.dims
    cells = fam.grid_cells()
    fam.ensure_all()
    cellset = set(cells)
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    a, ap = fam.holes[0].dom, fam.holes[0].cod
    da, dap = word_dim(a, dims), word_dim(ap, dims)
    db = word_dim(fam.target.dom, dims)
    dbp = word_dim(fam.target.cod, dims)
    cases = 0

    # dragging
    for (ctx,) in cells:
        r, c = fam.hole_shape(0, ctx)
        n_all = 1 << (r * c)
        phis_all = bool_matrix_codes(r, c)
        small = fam.values((ctx,), np.arange(n_all))
        for z in words:
            if len(z) == 0:
                continue
            big = hom(ctx.dom @ z, ctx.cod @ z)
            if (big,) not in cellset or big == ctx:
                continue
            dz = word_dim(z, dims)
            for start in range(0, n_all, grid.chunk):
                sl = slice(start, min(start + grid.chunk, n_all))
                conj = _kron_id_batch(phis_all[sl], dz)
                lhs = fam.values((big,), pack_bool(conj))
                rhs = _kron_id_batch(small[sl], dz)
                neq = (lhs != rhs).reshape(lhs.shape[0], -1).any(axis=1)
                cases += int(lhs.shape[0])
                if neq.any():
                    k = int(np.argmax(neq))
                    code = start + k
                    wit = (
                        f"dragging fails for {fam.name}: context {ctx}, wire {z}, "
                        f"filling {_mat_str(phis_all[code])} (code {code})"
                    )
                    return CheckResult(False, wit, cases, data={"ctx": ctx, "z": z, "code": code})

    # sliding
    for (src,) in cells:
        src_bits = fam.hole_bits(0, src)
        n_src = 1 << src_bits
        dx = word_dim(src.dom, dims)
        dxp = word_dim(src.cod, dims)
        phis_all = bool_matrix_codes(*fam.hole_shape(0, src))
        src_vals = fam.values((src,), np.arange(n_src))
        for (dst,) in cells:
            dy = word_dim(dst.dom, dims)
            dyp = word_dim(dst.cod, dims)
            if src_bits + dx * dy + dyp * dxp > grid.cond_bits:
                continue
            nf = 1 << (dx * dy)
            ng = 1 << (dyp * dxp)
            fs = bool_matrix_codes(dx, dy).astype(np.float64)
            gs = bool_matrix_codes(dyp, dxp).astype(np.float64)
            cp = max(1, grid.chunk // max(1, nf * ng))
            for start in range(0, n_src, cp):
                sl = slice(start, min(start + cp, n_src))
                nn = sl.stop - sl.start
                phi = phis_all[sl].reshape(nn, dap, dxp, da, dx).astype(np.float64)
                conj = np.einsum("pAXax,gYX,fxy->pfgAYay", phi, gs, fs, optimize=True) > 0.5
                conj = conj.astype(np.uint8).reshape(nn, nf, ng, dap * dyp, da * dy)
                lhs = fam.values((dst,), pack_bool(conj))
                tv = src_vals[sl].reshape(nn, dbp, dxp, db, dx).astype(np.float64)
                rhs = np.einsum("pBXbx,gYX,fxy->pfgBYby", tv, gs, fs, optimize=True) > 0.5
                rhs = rhs.astype(np.uint8).reshape(nn, nf, ng, dbp * dyp, db * dy)
                neq = (lhs != rhs).reshape(nn, nf, ng, -1).any(axis=-1)
                cases += nn * nf * ng
                if neq.any():
                    p, fi, gi = (int(v) for v in np.argwhere(neq)[0])
                    code = start + p
                    wit = (
                        f"sliding fails for {fam.name}: {src} to {dst}, "
                        f"filling code {code}, f={_mat_str(bool_matrix_codes(dx, dy)[fi])}, "
                        f"g={_mat_str(bool_matrix_codes(dyp, dxp)[gi])}"
                    )
                    return CheckResult(
                        False,
                        wit,
                        cases,
                        data={"src": src, "dst": dst, "code": code, "f": fi, "g": gi},
                    )
    return CheckResult(True, "", cases)


# ---------------------------------------------------------------------------
# local applicability, several holes


def _combined_strides(fam: FunctionFamilyLAT, ctxs: tuple[HomType, ...]) -> list[int]:
    sizes = [1 << fam.hole_bits(j, c) for j, c in enumerate(ctxs)]
    strides = []
    for j in range(len(sizes)):
        strides.append(prod(sizes[j + 1 :]))
    return strides


def fixed_family(
    fam: FunctionFamilyLAT,
    i: int,
    other_ctxs: Sequence[HomType],
    other_codes: Sequence[int],
    name: str | None = None,
) -> FunctionFamilyLAT:
    """The one-hole family induced by fixing every hole except ``i``.

    The fixed holes keep Boolean fillings ``other_codes`` at contexts
    ``other_ctxs`` (both in hole order, slot ``i`` omitted).  Values are
    read from the parent's cells; the surviving context wire is permuted to
    the end of the induced target, past the fixed contexts, so the result
    is a plain one-hole family over the same grid.
    """
    n = len(fam.holes)
    if not 0 <= i < n:
        raise ModelError("shape-mismatch", f"hole index {i} out of range for {n} holes")
    if len(other_ctxs) != n - 1 or len(other_codes) != n - 1:
        raise ModelError(
            "shape-mismatch",
            f"fixing {n - 1} holes needs {n - 1} contexts and codes",
        )
    other_ctxs = tuple(other_ctxs)
    other_codes = tuple(int(c) for c in other_codes)
    dims = fam.dims
    pre, post = other_ctxs[:i], other_ctxs[i:]
    tgt = hom(
        tensor_words(fam.target.dom, *(c.dom for c in other_ctxs)),
        tensor_words(fam.target.cod, *(c.cod for c in other_ctxs)),
    )
    d_pre = prod(word_dim(c.dom, dims) for c in pre)
    d_prep = prod(word_dim(c.cod, dims) for c in pre)
    d_post = prod(word_dim(c.dom, dims) for c in post)
    d_postp = prod(word_dim(c.cod, dims) for c in post)
    db = word_dim(fam.target.dom, dims)
    dbp = word_dim(fam.target.cod, dims)

    def source(ctxs1, batches):
        ci = ctxs1[0]
        full = other_ctxs[:i] + (ci,) + other_ctxs[i:]
        tbl = fam.ensure_cell(full)
        strides = _combined_strides(fam, full)
        base = sum(code * strides[j] for code, j in zip(other_codes, [k for k in range(n) if k != i]))
        idx = base + np.arange(len(batches[0]), dtype=np.int64) * strides[i]
        if tbl.present is not None and not tbl.present[idx].all():
            raise ModelError(
                "incomplete-table",
                f"{fam.name}: fixed-slot sweep hits a missing entry at ({', '.join(map(str, full))})",
            )
        vals = tbl.data[idx]
        dxi = word_dim(ci.dom, dims)
        dxip = word_dim(ci.cod, dims)
        if d_post == 1 and d_postp == 1:
            return vals
        pin = np.kron(np.eye(db * d_pre, dtype=np.uint8), _swap_blocks(d_post, dxi))
        pout = np.kron(np.eye(dbp * d_prep, dtype=np.uint8), _swap_blocks(dxip, d_postp))
        return _conj_batch(pout, vals, pin)

    cells = []
    for full in fam.grid_cells():
        if all(full[k] == other_ctxs[k if k < i else k - 1] for k in range(n) if k != i):
            cand = (full[i],)
            if cand not in cells:
                cells.append(cand)
    return FunctionFamilyLAT(
        (fam.holes[i],),
        tgt,
        dims,
        fam.grid,
        name=name if name is not None else f"{fam.name}[slot {i} free]",
        batch_source=source,
        restrict_cells=cells,
    )


def _drop_last(
    fam: FunctionFamilyLAT, last_ctx: HomType, last_code: int, name: str
) -> FunctionFamilyLAT:
    """The (n-1)-hole family induced by fixing the last hole's filling."""
    n = len(fam.holes)
    dims = fam.dims
    tgt = hom(fam.target.dom @ last_ctx.dom, fam.target.cod @ last_ctx.cod)
    db = word_dim(fam.target.dom, dims)
    dbp = word_dim(fam.target.cod, dims)
    dxn = word_dim(last_ctx.dom, dims)
    dxnp = word_dim(last_ctx.cod, dims)

    def source(ctxs, batches):
        full = tuple(ctxs) + (last_ctx,)
        tbl = fam.ensure_cell(full)
        strides = _combined_strides(fam, full)
        combined = np.zeros((), dtype=np.int64)
        for j, b in enumerate(batches):
            combined = np.add.outer(combined, np.arange(len(b), dtype=np.int64) * strides[j])
        idx = combined.reshape(-1) + int(last_code)
        if tbl.present is not None and not tbl.present[idx].all():
            raise ModelError(
                "incomplete-table",
                f"{fam.name}: fixed-slot sweep hits a missing entry at ({', '.join(map(str, full))})",
            )
        vals = tbl.data[idx]
        d_pre = prod(word_dim(c.dom, dims) for c in ctxs)
        d_prep = prod(word_dim(c.cod, dims) for c in ctxs)
        if d_pre == 1 and d_prep == 1:
            return vals
        pin = np.kron(np.eye(db, dtype=np.uint8), _swap_blocks(dxn, d_pre))
        pout = np.kron(np.eye(dbp, dtype=np.uint8), _swap_blocks(d_prep, dxnp))
        return _conj_batch(pout, vals, pin)

    cells = []
    for full in fam.grid_cells():
        if full[-1] == last_ctx and full[:-1] not in cells:
            cells.append(full[:-1])
    return FunctionFamilyLAT(
        fam.holes[:-1],
        tgt,
        dims,
        fam.grid,
        name=name,
        batch_source=source,
        restrict_cells=cells,
    )


def _fill_codes(total: int, cap: int, rng: np.random.Generator) -> np.ndarray:
    if total <= cap:
        return np.arange(total, dtype=np.int64)
    draws = rng.integers(0, total, size=cap)
    return np.unique(np.concatenate([np.zeros(1, dtype=np.int64), draws.astype(np.int64)]))


def check_lat_multi(fam: FunctionFamilyLAT) -> CheckResult:
    """Check local applicability of a multi-hole family over its grid.

    Reduces to the one-hole check along both axes: (a) fix the leading
    holes (every small filling, or a seeded sample capped by
    ``grid.fill_cap``) and check the induced family in the last hole; (b)
    fix the last hole and recurse on the rest, with the fixed context
    absorbed into the target.  A one-hole family goes straight to
    :func:`check_lat_single`.
    """
    n = len(fam.holes)
    if n == 0:
        raise ModelError("expected-single-hole", f"{fam.name} has no holes")
    if n == 1:
        return check_lat_single(fam)
    grid = fam.grid
    cells = fam.grid_cells()
    fam.ensure_all()
    cases = 0

    prefixes: list[tuple[HomType, ...]] = []
    for cell in cells:
        if cell[:-1] not in prefixes:
            prefixes.append(cell[:-1])
    for prefix in prefixes:
        sizes = [1 << fam.hole_bits(j, c) for j, c in enumerate(prefix)]
        total = prod(sizes)
        rng = subrng(grid.seed, "lat-fix", fam.name, str(tuple(map(str, prefix))))
        for combined in _fill_codes(total, grid.fill_cap, rng):
            codes = []
            rest = int(combined)
            for sz in reversed(sizes):
                codes.append(rest % sz)
                rest //= sz
            codes.reverse()
            sub = fixed_family(
                fam,
                n - 1,
                prefix,
                codes,
                name=f"{fam.name}[{', '.join(map(str, prefix))} @ {list(codes)}]",
            )
            res = check_lat_single(sub)
            cases += res.cases
            if not res.ok:
                return CheckResult(False, res.witness, cases, data=res.data)

    lasts: list[HomType] = []
    for cell in cells:
        if cell[-1] not in lasts:
            lasts.append(cell[-1])
    for last in lasts:
        total = 1 << fam.hole_bits(n - 1, last)
        rng = subrng(grid.seed, "lat-drop", fam.name, str(last))
        for code in _fill_codes(total, grid.fill_cap, rng):
            sub = _drop_last(fam, last, int(code), name=f"{fam.name}[last {last} @ {int(code)}]")
            res = check_lat_multi(sub)
            cases += res.cases
            if not res.ok:
                return CheckResult(False, res.witness, cases, data=res.data)
    return CheckResult(True, "", cases)


def check_lat(fam: FunctionFamilyLAT) -> CheckResult:
    """Local applicability over the family's grid, any number of holes."""
    return check_lat_multi(fam) if len(fam.holes) > 1 else check_lat_single(fam)


# ---------------------------------------------------------------------------
# commuting slots


def check_slot(first: FunctionFamilyLAT, second: FunctionFamilyLAT) -> CheckResult:
    """Check that two one-hole families commute on disjoint slots.

    Both act on a shared two-slot process ``psi : a.c.x -> a'.c'.x'``
    (``first`` sees slot one, ``second`` slot two).  Applying ``first``
    then ``second`` must agree with the opposite order, with the obvious
    wire reshuffles in between.  Context pairs whose enumeration exceeds
    ``grid.cond_bits`` are skipped.
    """
    if len(first.holes) != 1 or len(second.holes) != 1:
        raise ModelError("expected-single-hole", "slot commutation takes one-hole families")
    if first.dims != second.dims:
        raise ModelError("shape-mismatch", "families live over different dimension maps")
    dims = first.dims
    grid = first.grid
    a, ap = first.holes[0].dom, first.holes[0].cod
    b, bp = first.target.dom, first.target.cod
    c, cpw = second.holes[0].dom, second.holes[0].cod
    d, dp = second.target.dom, second.target.cod
    da, dap = word_dim(a, dims), word_dim(ap, dims)
    db, dbp = word_dim(b, dims), word_dim(bp, dims)
    dc, dcp = word_dim(c, dims), word_dim(cpw, dims)
    dd, ddp = word_dim(d, dims), word_dim(dp, dims)
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    cases = 0
    skipped = 0
    for x in words:
        for xp in words:
            dx = word_dim(x, dims)
            dxp = word_dim(xp, dims)
            rows = dap * dcp * dxp
            cols = da * dc * dx
            if rows * cols > grid.cond_bits:
                skipped += 1
                continue
            s_cell = (hom(c @ x, cpw @ xp),)
            t_cell = (hom(b @ x, bp @ xp),)
            t_cell2 = (hom(a @ x, ap @ xp),)
            s_cell2 = (hom(d @ x, dp @ xp),)
            n_all = 1 << (rows * cols)
            psis = bool_matrix_codes(rows, cols)
            # wire reshuffles, shared across the sweep
            pin_w = np.kron(_swap_blocks(dc, db), np.eye(dx, dtype=np.uint8))
            pout_w = np.kron(_swap_blocks(dbp, dcp), np.eye(dxp, dtype=np.uint8))
            pin_l = np.kron(_swap_blocks(db, dd), np.eye(dx, dtype=np.uint8))
            pout_l = np.kron(_swap_blocks(ddp, dbp), np.eye(dxp, dtype=np.uint8))
            pin_p = np.kron(_swap_blocks(dc, da), np.eye(dx, dtype=np.uint8))
            pout_p = np.kron(_swap_blocks(dap, dcp), np.eye(dxp, dtype=np.uint8))
            pin_u = np.kron(_swap_blocks(da, dd), np.eye(dx, dtype=np.uint8))
            pout_u = np.kron(_swap_blocks(ddp, dap), np.eye(dxp, dtype=np.uint8))
            for start in range(0, n_all, grid.chunk):
                sl = slice(start, min(start + grid.chunk, n_all))
                codes = np.arange(sl.start, sl.stop, dtype=np.int64)
                s1 = first.values(s_cell, codes)
                w = _conj_batch(pout_w, s1, pin_w)
                t1 = second.values(t_cell, pack_bool(w))
                lhs = _conj_batch(pout_l, t1, pin_l)
                psi_sw = _conj_batch(pout_p, psis[sl], pin_p)
                u1 = second.values(t_cell2, pack_bool(psi_sw))
                u1p = _conj_batch(pout_u, u1, pin_u)
                rhs = first.values(s_cell2, pack_bool(u1p))
                neq = (lhs != rhs).reshape(lhs.shape[0], -1).any(axis=1)
                cases += int(lhs.shape[0])
                if neq.any():
                    k = int(np.argmax(neq))
                    code = sl.start + k
                    wit = (
                        f"slot order matters for {first.name} / {second.name} at context "
                        f"[{x},{xp}]: psi code {code} ({_mat_str(psis[code])})"
                    )
                    return CheckResult(
                        False, wit, cases, data={"x": x, "xp": xp, "code": code, "skipped": skipped}
                    )
    return CheckResult(True, "", cases, data={"skipped": skipped})


# ---------------------------------------------------------------------------
# single-party realisations


def check_single_party_representable(
    fam: FunctionFamilyLAT,
    mem_words: Sequence[Word] | None = None,
    ceiling: int | None = None,
) -> CheckResult:
    """Search for a one-tooth-in/one-tooth-out realisation of a family.

    Tries memory words shortest first: a hit is a pair ``u : b -> a.w``,
    ``d : a'.w -> b'`` whose sandwich reproduces every tabulated value of
    the family.  Fillings of the other holes must be fixed beforehand (see
    :func:`fixed_family`).  Raises :class:`ExplosionGuard` instead of
    starting a sweep whose work exceeds the enumeration ceiling.
    """
    if len(fam.holes) != 1:
        raise ModelError(
            "expected-single-hole",
            f"{fam.name} has {len(fam.holes)} holes; fix all but one first",
        )
    if ceiling is None:
        ceiling = enumeration_ceiling()
    grid = fam.grid
    dims = fam.dims
    a, ap = fam.holes[0].dom, fam.holes[0].cod
    da, dap = word_dim(a, dims), word_dim(ap, dims)
    db = word_dim(fam.target.dom, dims)
    dbp = word_dim(fam.target.cod, dims)
    if mem_words is None:
        mem_words = grid_words(tuple(sorted(dims)), grid.word_len)
    cells = fam.grid_cells()
    fam.ensure_all()
    cases = 0
    for w in mem_words:
        dw = word_dim(w, dims)
        u_bits = da * dw * db
        d_bits = dbp * dap * dw
        nu, nd = 1 << u_bits, 1 << d_bits
        first_phi = 1 << fam.hole_bits(0, cells[0][0])
        if u_bits > 24 or d_bits > 24 or nu * nd * first_phi > ceiling:
            raise ExplosionGuard(nu * nd * first_phi, ceiling)
        us = bool_matrix_codes(da * dw, db).astype(np.float64).reshape(-1, da, dw, db)
        ds = bool_matrix_codes(dbp, dap * dw).astype(np.float64).reshape(-1, dbp, dap, dw)

        # cross-product sieve on the smallest cell, then verify pairs
        ctx = cells[0][0]
        r, c = fam.hole_shape(0, ctx)
        dx = word_dim(ctx.dom, dims)
        dxp = word_dim(ctx.cod, dims)
        phis = bool_matrix_codes(r, c).astype(np.float64).reshape(-1, dap, dxp, da, dx)
        tvals = fam.values(cells[0], np.arange(first_phi))
        out_sz = (dbp * dxp) * (db * dx)
        alive = np.ones((nu, nd), dtype=bool)
        uc = max(1, 8_000_000 // max(1, nd * first_phi * out_sz))
        for start in range(0, nu, uc):
            sli = slice(start, min(start + uc, nu))
            sand = (
                np.einsum("uawb,pqyax,deqw->udpeybx", us[sli], phis, ds, optimize=True)
                > 0.5
            ).astype(np.uint8)
            sand = sand.reshape(sli.stop - sli.start, nd, first_phi, dbp * dxp, db * dx)
            okc = (sand == tvals[None, None]).reshape(
                sli.stop - sli.start, nd, first_phi, -1
            ).all(axis=-1)
            alive[sli] &= okc.all(axis=2)
        cases += nu * nd * first_phi
        pairs = np.argwhere(alive)
        for cell in cells[1:]:
            if pairs.shape[0] == 0:
                break
            ctx = cell[0]
            r, c = fam.hole_shape(0, ctx)
            n_phi = 1 << (r * c)
            if pairs.shape[0] * n_phi > ceiling:
                raise ExplosionGuard(pairs.shape[0] * n_phi, ceiling)
            dx = word_dim(ctx.dom, dims)
            dxp = word_dim(ctx.cod, dims)
            phis = bool_matrix_codes(r, c).astype(np.float64).reshape(n_phi, dap, dxp, da, dx)
            tvals = fam.values(cell, np.arange(n_phi))
            out_sz = (dbp * dxp) * (db * dx)
            keep = np.zeros(pairs.shape[0], dtype=bool)
            kc = max(1, 8_000_000 // max(1, n_phi * out_sz))
            for start in range(0, pairs.shape[0], kc):
                sli = slice(start, min(start + kc, pairs.shape[0]))
                sand = (
                    np.einsum(
                        "kawb,pqyax,keqw->kpeybx",
                        us[pairs[sli, 0]],
                        phis,
                        ds[pairs[sli, 1]],
                        optimize=True,
                    )
                    > 0.5
                ).astype(np.uint8)
                sand = sand.reshape(sli.stop - sli.start, n_phi, dbp * dxp, db * dx)
                keep[sli] = (sand == tvals[None]).reshape(
                    sli.stop - sli.start, n_phi, -1
                ).all(axis=-1).all(axis=1)
            cases += pairs.shape[0] * n_phi
            pairs = pairs[keep]
        if pairs.shape[0]:
            ui, di = int(pairs[0, 0]), int(pairs[0, 1])
            u_mat = bool_matrix_codes(da * dw, db)[ui]
            d_mat = bool_matrix_codes(dbp, dap * dw)[di]
            wit = f"memory {w}: u={_mat_str(u_mat)}, d={_mat_str(d_mat)}"
            return CheckResult(True, wit, cases, data={"memory": w, "u": u_mat, "d": d_mat})
    return CheckResult(False, "no single-party realisation over the searched memories", cases)


# ---------------------------------------------------------------------------
# behavioural comparison of open terms


@dataclass(frozen=True)
class BehavioralResult:
    """Verdict of a grid-bounded behavioural comparison."""

    verdict: str  # "equal" | "distinguished"
    witness: str = ""
    cases: int = 0

    @property
    def equal(self) -> bool:
        return self.verdict == "equal"


@dataclass(frozen=True)
class BehavioralClass:
    """A term's behavioural class on a grid, keyed by a value digest.

    Two terms land in the same class exactly when every probed value over
    the grid's assignments, contexts, and Boolean probes agrees.
    """

    ptype: PolyType
    key: bytes
    rep: Term = field(compare=False)


def _probe_plan(
    ptype: PolyType, grid: GridConfig, objects: tuple[str, ...]
) -> list[tuple[HomType, ...]]:
    k = len(ptype.inputs)
    eps = hom(EMPTY, EMPTY)
    plan: list[tuple[HomType, ...]] = [tuple(eps for _ in range(k))]
    if k == 0:
        return plan
    words = grid_words(objects, grid.word_len)
    pairs = [hom(x, xp) for x in words for xp in words if len(x) + len(xp) > 0]
    for j in range(k):
        for pr in pairs:
            if len(plan) >= grid.ctx_tuples:
                return plan
            cand = tuple(pr if i == j else eps for i in range(k))
            if cand not in plan:
                plan.append(cand)
    return plan


def _probe_batches(
    ptype: PolyType,
    ctxs: tuple[HomType, ...],
    grid: GridConfig,
    dims: Mapping[str, int],
    tag: str,
) -> list[np.ndarray]:
    shapes = []
    for h, cx in zip(ptype.inputs, ctxs):
        rows = word_dim(h.cod, dims) * word_dim(cx.cod, dims)
        cols = word_dim(h.dom, dims) * word_dim(cx.dom, dims)
        shapes.append((rows, cols))
    total = sum(r * c for r, c in shapes)
    if total <= grid.probe_bits:
        return [bool_matrix_codes(r, c) for r, c in shapes]
    k = len(shapes)
    per = max(2, int(round((1 << grid.probe_bits) ** (1.0 / k))))
    out = []
    for i, (r, c) in enumerate(shapes):
        n_all = 1 << (r * c)
        if n_all <= per:
            out.append(bool_matrix_codes(r, c))
        else:
            rng = subrng(grid.seed, "probe", tag, i)
            out.append(random_bool_matrices(rng, per, r, c))
    return out


def _contract_probes(
    mat: np.ndarray,
    in_homs: tuple[HomType, ...],
    ctxs: tuple[HomType, ...],
    batches: Sequence[np.ndarray],
    dims: Mapping[str, int],
    sr: Semiring,
) -> np.ndarray:
    """Values of a term matrix on whole batches of probe fillings.

    Each probe ``a_i.x_i -> a_i'.x_i'`` is lifted to a hom vector, split
    into its hole and context legs, and the hole legs are contracted with
    the matrix; context legs stay open in the result, which is flattened to
    ``[N_1 * .. * N_k, d(out) * d(ctx legs)]``.
    """
    k = len(in_homs)
    mat = np.asarray(mat)
    if k == 0:
        return mat.reshape(1, -1)
    vs = []
    for h, cx, b in zip(in_homs, ctxs, batches):
        big_dom = word_dims(h.dom @ cx.dom, dims)
        v = lift_batch(np.asarray(b), big_dom)
        in_dims, sigma = _split_sigma((h, cx), dims)
        v = np.take(v, perm_index(in_dims, sigma), axis=1)
        vs.append(v.reshape(v.shape[0], hom_dim(h, dims), hom_dim(cx, dims)))
    pool = iter(string.ascii_letters)
    lo = next(pool)
    lh = [next(pool) for _ in range(k)]
    lc = [next(pool) for _ in range(k)]
    ln = [next(pool) for _ in range(k)]
    core = mat.reshape([mat.shape[0]] + [hom_dim(h, dims) for h in in_homs])
    subs = [lo + "".join(lh)] + [ln[i] + lh[i] + lc[i] for i in range(k)]
    out = "".join(ln) + lo + "".join(lc)
    res = sr.einsum(",".join(subs) + "->" + out, core, *vs)
    nn = prod(v.shape[0] for v in vs)
    return res.reshape(nn, -1)


def _mat_from_code(code: int, rows: int, cols: int) -> np.ndarray:
    bits = (np.int64(code) >> np.arange(rows * cols, dtype=np.int64)) & 1
    return bits.reshape(rows, cols).astype(bool)


def _assignment_stream(
    sig: Signature,
    base_names: set[str],
    poly_names: set[str],
    dims: Mapping[str, int],
    grid: GridConfig,
    tag: str,
) -> Iterator[tuple[str, ModelAssignment]]:
    """Boolean assignments of the named generators: exhaustive or sampled."""
    from .matmodel import space_dim

    base = sorted(base_names)
    poly = sorted(poly_names)
    shapes: list[tuple[int, int]] = []
    for nm in base:
        dom, cod = sig.gen_type(nm)
        shapes.append((word_dim(cod, dims), word_dim(dom, dims)))
    for nm in poly:
        pt = sig.polygen_type(nm)
        shapes.append((space_dim(pt.outputs, dims), space_dim(pt.inputs, dims)))
    bits = [r * c for r, c in shapes]
    total = sum(bits)

    def build(mats: list[np.ndarray]) -> ModelAssignment:
        gm = dict(zip(base, mats[: len(base)]))
        pm = dict(zip(poly, mats[len(base) :]))
        return ModelAssignment(BOOL, dict(dims), gm, pm)

    if total <= grid.asg_bits:
        for combined in range(1 << total):
            mats = []
            off = 0
            for (r, c), b in zip(shapes, bits):
                mats.append(_mat_from_code((combined >> off) & ((1 << b) - 1), r, c))
                off += b
            yield f"assignment {combined}", build(mats)
    else:
        rng = subrng(grid.seed, "asg", tag)
        for k in range(grid.samples):
            mats = [rng.integers(0, 2, size=(r, c)).astype(bool) for r, c in shapes]
            yield f"sampled assignment {k}", build(mats)


def behavioral_equal(sig: Signature, s: Term, t: Term, grid: GridConfig) -> BehavioralResult:
    """Compare two terms under every grid context, assignment, and probe.

    Terms of different poly types are not comparable.  Equal evaluated
    matrices short-circuit a whole assignment; otherwise Boolean probes are
    pushed through both matrices until one output entry differs, which
    becomes the witness.
    """
    st = typecheck(s, sig)
    tt = typecheck(t, sig)
    if st != tt:
        raise TermTypeError(
            "type-mismatch", f"behavioural comparison needs equal poly types: {st} vs {tt}"
        )
    dims = grid.dims_for(sig.objects)
    b1, p1 = gen_names(s)
    b2, p2 = gen_names(t)
    plan = _probe_plan(st, grid, sig.objects)
    cases = 0
    for label, asg in _assignment_stream(sig, b1 | b2, p1 | p2, dims, grid, tag="behav"):
        ms = eval_poly(s, sig, asg).data
        mt = eval_poly(t, sig, asg).data
        cases += 1
        if np.array_equal(ms, mt):
            continue
        for ctxs in plan:
            tag = "|".join(map(str, ctxs))
            batches = _probe_batches(st, ctxs, grid, dims, tag)
            vs = _contract_probes(ms, st.inputs, ctxs, batches, dims, BOOL)
            vt = _contract_probes(mt, st.inputs, ctxs, batches, dims, BOOL)
            neq = (vs != vt).any(axis=1)
            cases += int(vs.shape[0])
            if neq.any():
                flat = int(np.argmax(neq))
                if batches:
                    codes = tuple(
                        int(v)
                        for v in np.unravel_index(flat, [b.shape[0] for b in batches])
                    )
                else:
                    codes = ()
                wit = (
                    f"distinguished under {label} at contexts "
                    f"({', '.join(map(str, ctxs))}), probe indices {codes}"
                )
                return BehavioralResult("distinguished", wit, cases)
    return BehavioralResult("equal", "", cases)


def behavioral_class(sig: Signature, t: Term, grid: GridConfig) -> BehavioralClass:
    """Digest a term's probed values into its behavioural class on the grid."""
    tt = typecheck(t, sig)
    dims = grid.dims_for(sig.objects)
    b1, p1 = gen_names(t)
    plan = _probe_plan(tt, grid, sig.objects)
    h = hashlib.sha256()
    h.update(str(tt).encode())
    for _label, asg in _assignment_stream(sig, b1, p1, dims, grid, tag="behav"):
        m = eval_poly(t, sig, asg).data
        for ctxs in plan:
            tag = "|".join(map(str, ctxs))
            batches = _probe_batches(tt, ctxs, grid, dims, tag)
            vals = _contract_probes(m, tt.inputs, ctxs, batches, dims, BOOL)
            h.update(np.packbits(vals.astype(np.uint8), axis=None).tobytes())
    return BehavioralClass(tt, h.digest(), t)
