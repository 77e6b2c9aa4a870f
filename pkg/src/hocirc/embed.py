"""States-as-elements: the embedding into strong profunctors.

Every hom type ``a = [u, v]`` determines a family of state sets
``F(a)(x, x')``: the states of type ``a[x, x'] = [u.x, v.x']``, i.e.
processes ``u.x -> v.x'``.  The family is functorial in the context pair
(pre- and post-processing of the context sandwiches the state) and carries
a *strength* appending an untouched wire.  A single-output polymorphism
``S`` then acts on whole tuples of such states — split each state into its
hole part and context part, feed the hole parts to ``S``, carry the
contexts along — giving a multimorphism ``F(S)`` between the state
families.  Checking that this assignment is functorial, strong, and
faithful down on the Boolean grid is the point of this module.

Elements are carried symbolically as closed multi-output terms
``() -> (a, [x_1,x_1'], .., [x_k,x_k'])``: the context legs stay separate
outputs, because fusing them into ``a`` needs the *inverse* of the split
rule, which is not a term.  The fusion is instead applied extensionally —
:func:`element_vector` evaluates the term and permutes the result into the
state space of ``a[x, x']`` — so two elements with differently bracketed
contexts can still be compared.  :class:`StrongProfunctorView` realises
the same structure concretely, as sweeps over all Boolean matrices of a
state space, which is what the exhaustive axiom checks quantify over.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Mapping, Sequence

import numpy as np

from .errors import TermTypeError
from .grids import GridConfig, bool_matrix_codes, grid_words, subrng
from .holes import (
    CheckResult,
    FunctionFamilyLAT,
    _assignment_stream,
    check_lat_multi,
    dsupermap_from_term,
    family_from_dsupermap,
)
from .matmodel import (
    ModelAssignment,
    _split_sigma,
    eval_poly,
    unlift_matrix,
    word_dim,
    word_dims,
)
from .semiring import BOOL, perm_matrix
from .signature import EMPTY, HomType, PolyType, Signature, Word, hom, tensor_words
from .terms import (
    BaseTerm,
    BGen,
    Comp,
    IdSt,
    Lift,
    ParM,
    Split,
    Term,
    base_typecheck,
    gen_names,
    hom_action,
    typecheck,
)

__all__ = [
    "ProfElement",
    "make_element",
    "probe_element",
    "element_vector",
    "element_matrix",
    "prof_action",
    "strength",
    "FMorphism",
    "F_morphism",
    "apply_elements",
    "tabulate_F",
    "check_lat_of_F",
    "f_pointwise_equal",
    "check_faithful_pair",
    "StrongProfunctorView",
    "check_profunctor_axioms",
    "check_strength_axioms",
    "check_profunctor_axioms_float",
    "check_strength_axioms_float",
]


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class ProfElement:
    """A state of ``a[x, x']``, carried as a closed multi-output term.

    ``term`` has no inputs and outputs ``(obj, *ctx_factors)``; the merged
    context pair is ``(x_1..x_k, x_1'..x_k')``.  ``ctx_factors`` may be
    empty (a plain state of ``obj``).
    """

    obj: HomType
    ctx_factors: tuple[HomType, ...]
    term: Term

    @property
    def context(self) -> HomType:
        return hom(
            tensor_words(*(c.dom for c in self.ctx_factors)),
            tensor_words(*(c.cod for c in self.ctx_factors)),
        )


def make_element(sig: Signature, term: Term) -> ProfElement:
    """Wrap a closed term as an element; output 0 is the object."""
    ptype = typecheck(term, sig)
    if ptype.inputs or not ptype.outputs:
        raise TermTypeError(
            "type-mismatch",
            f"an element is a closed term with outputs, got type {ptype}",
        )
    return ProfElement(ptype.outputs[0], tuple(ptype.outputs[1:]), term)


def probe_element(sig: Signature, name: str, obj: HomType, ctx: HomType) -> ProfElement:
    """The element of ``obj`` at ``ctx`` named by a base generator.

    The generator must have type ``obj.dom . ctx.dom -> obj.cod . ctx.cod``;
    it is lifted to a state and split into object and context legs.
    """
    dom, cod = sig.gen_type(name)
    if dom != obj.dom @ ctx.dom or cod != obj.cod @ ctx.cod:
        raise TermTypeError(
            "type-mismatch",
            f"generator {name!r} : {dom} -> {cod} does not probe {obj} at {ctx}",
        )
    term = Comp(Lift(BGen(name)), 0, Split((obj, ctx)), 0)
    return ProfElement(obj, (ctx,), term)


def element_vector(sig: Signature, e: ProfElement, asg: ModelAssignment) -> np.ndarray:
    """The element's state vector in ``a[x, x']``, context legs fused in."""
    v = eval_poly(e.term, sig, asg).data
    if not e.ctx_factors:
        return v[:, 0]
    in_dims, sigma = _split_sigma((e.obj,) + e.ctx_factors, asg.dims)
    merge = perm_matrix(in_dims, sigma, asg.semiring).T
    return asg.semiring.matmul(merge, v)[:, 0]


def element_matrix(sig: Signature, e: ProfElement, asg: ModelAssignment) -> np.ndarray:
    """The element as a process matrix ``u.x -> v.x'``."""
    vec = element_vector(sig, e, asg)
    ctx = e.context
    dd = word_dims(e.obj.dom @ ctx.dom, asg.dims)
    cd = word_dims(e.obj.cod @ ctx.cod, asg.dims)
    return unlift_matrix(vec, dd, cd)


def prof_action(sig: Signature, e: ProfElement, f: BaseTerm, g: BaseTerm) -> ProfElement:
    """Reindex an element along ``f : y -> x`` (contra) and ``g : x' -> y'``.

    The context leg is sandwiched by the hom action ``[f, g]``; the object
    leg is untouched.  Defined for elements with one context factor.
    """
    if len(e.ctx_factors) != 1:
        raise TermTypeError(
            "type-mismatch",
            f"action needs exactly one context factor, element has {len(e.ctx_factors)}",
        )
    ctx = e.ctx_factors[0]
    y, x = base_typecheck(f, sig)
    xp, yp = base_typecheck(g, sig)
    if x != ctx.dom or xp != ctx.cod:
        raise TermTypeError(
            "type-mismatch",
            f"action [{y}->{x}, {xp}->{yp}] does not apply at context {ctx}",
        )
    term = Comp(e.term, 1, hom_action(sig, f, g), 0)
    return ProfElement(e.obj, (hom(y, yp),), term)


def strength(sig: Signature, e: ProfElement, y: Word) -> ProfElement:
    """Extend an element by an identity gap on ``y``.

    The new wire is fused into the last context factor (a fresh trivial
    factor is added first when there is none), moving the element from
    context ``(x, x')`` to ``(x.y, x'.y)``.
    """
    if not e.ctx_factors:
        term = Comp(e.term, 0, Split((e.obj, hom(EMPTY, EMPTY))), 0)
        e = ProfElement(e.obj, (hom(EMPTY, EMPTY),), term)
    k = len(e.ctx_factors)
    last = e.ctx_factors[-1]
    t1 = Comp(e.term, k, ParM(last.dom, last.cod, y, y), 0)
    t2 = Comp(IdSt(y), 0, t1, 0)
    factors = e.ctx_factors[:-1] + (hom(last.dom @ y, last.cod @ y),)
    return ProfElement(e.obj, factors, t2)


# ---------------------------------------------------------------------------
# the embedding on polymorphisms


@dataclass(frozen=True)
class FMorphism:
    """A polymorphism packaged as a multimorphism between state families."""

    term: Term
    ptype: PolyType

    @property
    def inputs(self) -> tuple[HomType, ...]:
        return self.ptype.inputs

    @property
    def target(self) -> HomType:
        return self.ptype.outputs[0]

    def apply(self, sig: Signature, elements: Sequence[ProfElement]) -> ProfElement:
        return apply_elements(sig, self.term, elements)


def F_morphism(sig: Signature, t: Term) -> FMorphism:
    """Package a single-output polymorphism as a multimorphism family."""
    ptype = typecheck(t, sig)
    if len(ptype.outputs) != 1:
        raise TermTypeError(
            "multiple-outputs-unsupported",
            f"the embedding takes single-output polymorphisms, got {len(ptype.outputs)} outputs",
        )
    return FMorphism(t, ptype)


def apply_elements(sig: Signature, t: Term, elements: Sequence[ProfElement]) -> ProfElement:
    """Feed one element per input hole; contexts ride along in slot order.

    Each element's object leg is plugged into its hole; the resulting
    closed term keeps the target as output 0 followed by every context
    factor, slot by slot — so the result is an element of the target at
    the concatenated context.
    """
    ptype = typecheck(t, sig)
    if len(ptype.outputs) != 1:
        raise TermTypeError(
            "multiple-outputs-unsupported",
            f"the embedding takes single-output polymorphisms, got {len(ptype.outputs)} outputs",
        )
    if len(elements) != len(ptype.inputs):
        raise TermTypeError(
            "type-mismatch",
            f"term has {len(ptype.inputs)} holes, got {len(elements)} elements",
        )
    factors: list[HomType] = []
    out = t
    for i, (h, e) in enumerate(zip(ptype.inputs, elements)):
        if e.obj != h:
            raise TermTypeError(
                "type-mismatch",
                f"element {i} has object {e.obj}, hole wants {h}",
            )
        out = Comp(e.term, 0, out, 0)
        factors.extend(e.ctx_factors)
    return ProfElement(ptype.outputs[0], tuple(factors), out)


def tabulate_F(
    sig: Signature,
    t: Term,
    asg: ModelAssignment,
    grid: GridConfig,
    name: str = "F",
) -> FunctionFamilyLAT:
    """The concrete function family of ``F(t)`` at one Boolean assignment."""
    return family_from_dsupermap(dsupermap_from_term(sig, t, asg), grid, name=name)


def check_lat_of_F(
    sig: Signature,
    t: Term,
    grid: GridConfig,
    max_assignments: int = 3,
) -> CheckResult:
    """Local applicability of the tabulated ``F(t)``, both induction axes.

    Runs the multi-hole check of :mod:`hocirc.holes` on the family at a few
    Boolean assignments of the term's generators (all of them when there
    are at most ``max_assignments``).
    """
    ptype = typecheck(t, sig)
    if len(ptype.outputs) != 1:
        raise TermTypeError(
            "multiple-outputs-unsupported",
            f"the embedding takes single-output polymorphisms, got {len(ptype.outputs)} outputs",
        )
    dims = grid.dims_for(sig.objects)
    b, p = gen_names(t)
    cases = 0
    stream = _assignment_stream(sig, b, p, dims, grid, tag="lat-of-F")
    for label, asg in islice(stream, max_assignments):
        fam = tabulate_F(sig, t, asg, grid, name=f"F@{label}")
        res = check_lat_multi(fam)
        cases += res.cases
        if not res.ok:
            return CheckResult(False, f"{res.witness} (under {label})", cases, data=res.data)
    return CheckResult(True, "", cases)


def f_pointwise_equal(sig: Signature, s: Term, t: Term, grid: GridConfig) -> CheckResult:
    """Whether ``F(s)`` and ``F(t)`` agree as families over the whole grid.

    Family values are contractions of the supermap core against probe
    tensors, and the Boolean probes of the trivial cell include every
    matrix unit — so two families agree on the grid exactly when their
    cores agree at every assignment.  That is what gets compared.
    """
    st = typecheck(s, sig)
    tt = typecheck(t, sig)
    if st != tt:
        raise TermTypeError("type-mismatch", f"cannot compare {st} with {tt}")
    if len(st.outputs) != 1:
        raise TermTypeError(
            "multiple-outputs-unsupported",
            f"the embedding takes single-output polymorphisms, got {len(st.outputs)} outputs",
        )
    dims = grid.dims_for(sig.objects)
    b1, p1 = gen_names(s)
    b2, p2 = gen_names(t)
    cases = 0
    for label, asg in _assignment_stream(sig, b1 | b2, p1 | p2, dims, grid, tag="behav"):
        cs = dsupermap_from_term(sig, s, asg)
        ct = dsupermap_from_term(sig, t, asg)
        cases += 1
        if not np.array_equal(cs.core, ct.core):
            flat = int(np.argmax((cs.core != ct.core).reshape(-1)))
            return CheckResult(
                False,
                f"families differ under {label} at core entry {flat}",
                cases,
            )
    return CheckResult(True, "", cases)


def check_faithful_pair(sig: Signature, s: Term, t: Term, grid: GridConfig):
    """Compare the two sides of faithfulness on one pair of terms.

    Returns ``(behavioural-equal, F-equal, agree)``; the embedding is
    faithful on the grid when the first two always coincide.
    """
    from .holes import behavioral_equal

    b = behavioral_equal(sig, s, t, grid)
    f = f_pointwise_equal(sig, s, t, grid)
    return b.equal, f.ok, b.equal == f.ok


# ---------------------------------------------------------------------------
# the concrete view: sweeps over all Boolean states


class StrongProfunctorView:
    """The state family of one hom type, realised on Boolean matrices.

    Elements of ``obj`` at context ``(x, x')`` are all Boolean matrices
    ``u.x -> v.x'``; the action is the context sandwich and the strength
    appends an identity wire.  The check functions sweep these exhaustively
    (within the grid budgets), which makes the profunctor and strength
    axioms exact statements about finite arrays.
    """

    def __init__(self, obj: HomType, dims: Mapping[str, int], grid: GridConfig):
        self.obj = obj
        self.dims = dict(dims)
        self.grid = grid

    def state_shape(self, x: Word, xp: Word) -> tuple[int, int]:
        return (
            word_dim(self.obj.cod @ xp, self.dims),
            word_dim(self.obj.dom @ x, self.dims),
        )

    def ctx_pairs(self) -> list[tuple[Word, Word]]:
        words = grid_words(tuple(sorted(self.dims)), self.grid.word_len)
        out = []
        for x in words:
            for xp in words:
                r, c = self.state_shape(x, xp)
                if r * c <= self.grid.cell_bits:
                    out.append((x, xp))
        return out

    def elements(self, x: Word, xp: Word) -> np.ndarray:
        return bool_matrix_codes(*self.state_shape(x, xp))

    def act(self, mats: np.ndarray, x: Word, xp: Word, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Batched ``(1_v (x) g) . M . (1_u (x) f)``; exact Boolean."""
        du = word_dim(self.obj.dom, self.dims)
        dv = word_dim(self.obj.cod, self.dims)
        dx = word_dim(x, self.dims)
        dxp = word_dim(xp, self.dims)
        m5 = mats.reshape(mats.shape[0], dv, dxp, du, dx).astype(np.float64)
        out = np.einsum(
            "nVXvx,YX,xy->nVYvy",
            m5,
            np.asarray(g, np.float64),
            np.asarray(f, np.float64),
            optimize=True,
        )
        out = (out > 0.5).astype(np.uint8)
        return out.reshape(mats.shape[0], dv * g.shape[0], du * f.shape[1])

    def strength_mats(self, mats: np.ndarray, y: Word) -> np.ndarray:
        dy = word_dim(y, self.dims)
        n, r, c = mats.shape
        eye = np.eye(dy, dtype=mats.dtype)
        out = np.einsum("nij,kl->nikjl", mats, eye)
        return out.reshape(n, r * dy, c * dy)


def check_profunctor_axioms(view: StrongProfunctorView) -> CheckResult:
    """Unit and composition of the context action, exhaustively on the grid.

    For every context pair: acting by identities fixes every element, and
    acting twice equals acting by the composite, for all Boolean
    ``f, f2, g, g2`` within the ``cond_bits`` budget.
    """
    grid = view.grid
    dims = view.dims
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    cases = 0
    for x, xp in view.ctx_pairs():
        mats = view.elements(x, xp)
        dx = word_dim(x, dims)
        dxp = word_dim(xp, dims)
        out = view.act(mats, x, xp, np.eye(dx), np.eye(dxp))
        cases += mats.shape[0]
        if not np.array_equal(out, mats):
            k = int(np.argmax((out != mats).reshape(mats.shape[0], -1).any(axis=1)))
            return CheckResult(
                False, f"identity action moves element code {k} at ({x}, {xp})", cases
            )
        m_bits = int(mats.shape[1]) * int(mats.shape[2])
        for y in words:
            for z in words:
                dy, dz = word_dim(y, dims), word_dim(z, dims)
                for yp in words:
                    for zp in words:
                        dyp, dzp = word_dim(yp, dims), word_dim(zp, dims)
                        bits = m_bits + dx * dy + dy * dz + dyp * dxp + dzp * dyp
                        if bits > grid.cond_bits:
                            continue
                        fs = bool_matrix_codes(dx, dy).astype(np.float64)
                        f2s = bool_matrix_codes(dy, dz).astype(np.float64)
                        gs = bool_matrix_codes(dyp, dxp).astype(np.float64)
                        g2s = bool_matrix_codes(dzp, dyp).astype(np.float64)
                        ff = np.einsum("fxy,eyz->fexz", fs, f2s, optimize=True)
                        gg = np.einsum("hZY,gYX->ghZX", g2s, gs, optimize=True)
                        du = word_dim(view.obj.dom, dims)
                        dv = word_dim(view.obj.cod, dims)
                        m5 = mats.reshape(-1, dv, dxp, du, dx).astype(np.float64)
                        step1 = (
                            np.einsum("nVXvx,gYX,fxy->nfgVYvy", m5, gs, fs, optimize=True)
                            > 0.5
                        ).astype(np.float64)
                        lhs = (
                            np.einsum(
                                "nfgVYvy,hZY,eyz->nfgehVZvz", step1, g2s, f2s, optimize=True
                            )
                            > 0.5
                        )
                        rhs = (
                            np.einsum("nVXvx,ghZX,fexz->nfgehVZvz", m5, gg, ff, optimize=True)
                            > 0.5
                        )
                        cases += lhs.size // max(1, dv * dzp * du * dz)
                        if not np.array_equal(lhs, rhs):
                            neq = (lhs != rhs).reshape(lhs.shape[:5] + (-1,)).any(axis=-1)
                            idx = tuple(int(v) for v in np.argwhere(neq)[0])
                            return CheckResult(
                                False,
                                f"action fails to compose at ({x}, {xp}) via ({y}, {yp}) "
                                f"to ({z}, {zp}), indices {idx}",
                                cases,
                            )
    return CheckResult(True, "", cases)


def check_strength_axioms(view: StrongProfunctorView) -> CheckResult:
    """Unit, associativity, naturality, dinaturality of the strength.

    All sweeps are exhaustive over Boolean elements and context morphisms,
    skipping combinations over the ``cond_bits`` budget.
    """
    grid = view.grid
    dims = view.dims
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    nonempty = [w for w in words if len(w)]
    du = word_dim(view.obj.dom, dims)
    dv = word_dim(view.obj.cod, dims)
    cases = 0
    for x, xp in view.ctx_pairs():
        mats = view.elements(x, xp)
        dx = word_dim(x, dims)
        dxp = word_dim(xp, dims)
        m_bits = int(mats.shape[1]) * int(mats.shape[2])

        # unit: the empty wire changes nothing
        out = view.strength_mats(mats, EMPTY)
        cases += mats.shape[0]
        if not np.array_equal(out, mats):
            return CheckResult(False, f"strength unit fails at ({x}, {xp})", cases)

        # associativity: one wire at a time == both at once
        for y in nonempty:
            for z in nonempty:
                if word_dim(y @ z, dims) * max(1, m_bits) > (1 << grid.cond_bits):
                    continue
                lhs = view.strength_mats(view.strength_mats(mats, y), z)
                rhs = view.strength_mats(mats, y @ z)
                cases += mats.shape[0]
                if not np.array_equal(lhs, rhs):
                    return CheckResult(
                        False, f"strength not associative at ({x}, {xp}) with {y}, {z}", cases
                    )

        # naturality: reindex then extend == extend then reindex-with-wire
        for y in words:
            for yp in words:
                dy = word_dim(y, dims)
                dyp = word_dim(yp, dims)
                if m_bits + dx * dy + dyp * dxp > grid.cond_bits:
                    continue
                fs = bool_matrix_codes(dx, dy)
                gs = bool_matrix_codes(dyp, dxp)
                for w in nonempty:
                    dw = word_dim(w, dims)
                    eye = np.eye(dw)
                    for fi in range(fs.shape[0]):
                        for gi in range(gs.shape[0]):
                            f, g = fs[fi].astype(np.float64), gs[gi].astype(np.float64)
                            acted = view.act(mats, x, xp, f, g)
                            lhs = view.strength_mats(acted, w)
                            ext = view.strength_mats(mats, w)
                            rhs = _act_raw(ext, dv, dxp * dw, du, dx * dw, np.kron(g, eye), np.kron(f, eye))
                            cases += mats.shape[0]
                            if not np.array_equal(lhs, rhs):
                                return CheckResult(
                                    False,
                                    f"strength not natural at ({x}, {xp}), wire {w}, "
                                    f"f code {fi}, g code {gi}",
                                    cases,
                                )

        # dinaturality: the appended wire can be processed on either side
        for y in nonempty:
            for w in nonempty:
                dy = word_dim(y, dims)
                dw = word_dim(w, dims)
                if m_bits + dy * dw > grid.cond_bits:
                    continue
                hs = bool_matrix_codes(dw, dy)
                ext_w = view.strength_mats(mats, w)
                ext_y = view.strength_mats(mats, y)
                for hi in range(hs.shape[0]):
                    h = hs[hi].astype(np.float64)
                    lhs = _act_raw(
                        ext_w, dv, dxp * dw, du, dx * dw,
                        np.eye(dxp * dw), np.kron(np.eye(dx), h),
                    )
                    rhs = _act_raw(
                        ext_y, dv, dxp * dy, du, dx * dy,
                        np.kron(np.eye(dxp), h), np.eye(dx * dy),
                    )
                    cases += mats.shape[0]
                    if not np.array_equal(lhs, rhs):
                        return CheckResult(
                            False,
                            f"strength not dinatural at ({x}, {xp}), wire {y} -> {w}, "
                            f"h code {hi}",
                            cases,
                        )
    return CheckResult(True, "", cases)


def _act_raw(
    mats: np.ndarray, dv: int, dxp: int, du: int, dx: int, g: np.ndarray, f: np.ndarray
) -> np.ndarray:
    """Context sandwich with explicit block dimensions, exact Boolean."""
    m5 = mats.reshape(mats.shape[0], dv, dxp, du, dx).astype(np.float64)
    out = np.einsum("nVXvx,YX,xy->nVYvy", m5, np.asarray(g, np.float64), np.asarray(f, np.float64), optimize=True)
    out = (out > 0.5).astype(np.uint8)
    return out.reshape(mats.shape[0], dv * g.shape[0], du * f.shape[1])


def _float_states(rng: np.random.Generator, n: int, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((n, rows, cols))


def check_profunctor_axioms_float(
    obj: HomType, dims: Mapping[str, int], grid: GridConfig, n: int = 100, tol: float = 1e-9
) -> CheckResult:
    """Float counterpart of the action axioms on seeded random data."""
    rng = subrng(grid.seed, "embed-float-action", str(obj))
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    du = word_dim(obj.dom, dims)
    dv = word_dim(obj.cod, dims)
    cases = 0
    for x in words:
        for xp in words:
            dx = word_dim(x, dims)
            dxp = word_dim(xp, dims)
            for y, z, yp, zp in zip(words, reversed(words), words, words):
                dy, dz = word_dim(y, dims), word_dim(z, dims)
                dyp, dzp = word_dim(yp, dims), word_dim(zp, dims)
                mats = _float_states(rng, n, dv * dxp, du * dx)
                f = rng.standard_normal((dx, dy))
                f2 = rng.standard_normal((dy, dz))
                g = rng.standard_normal((dyp, dxp))
                g2 = rng.standard_normal((dzp, dyp))
                m5 = mats.reshape(n, dv, dxp, du, dx)
                step1 = np.einsum("nVXvx,YX,xy->nVYvy", m5, g, f, optimize=True)
                lhs = np.einsum("nVYvy,ZY,yz->nVZvz", step1, g2, f2, optimize=True)
                rhs = np.einsum("nVXvx,ZX,xz->nVZvz", m5, g2 @ g, f @ f2, optimize=True)
                cases += n
                if not np.allclose(lhs, rhs, atol=tol, rtol=0):
                    return CheckResult(
                        False, f"float action composition off at ({x}, {xp})", cases
                    )
    return CheckResult(True, "", cases)


def check_strength_axioms_float(
    obj: HomType, dims: Mapping[str, int], grid: GridConfig, n: int = 100, tol: float = 1e-9
) -> CheckResult:
    """Float counterpart of the strength axioms on seeded random data."""
    rng = subrng(grid.seed, "embed-float-strength", str(obj))
    words = grid_words(tuple(sorted(dims)), grid.word_len)
    nonempty = [w for w in words if len(w)]
    du = word_dim(obj.dom, dims)
    dv = word_dim(obj.cod, dims)
    cases = 0

    def ext(mats, dy):
        m, r, c = mats.shape
        return np.einsum("nij,kl->nikjl", mats, np.eye(dy)).reshape(m, r * dy, c * dy)

    for x in words:
        for xp in words:
            dx = word_dim(x, dims)
            dxp = word_dim(xp, dims)
            mats = _float_states(rng, n, dv * dxp, du * dx)
            cases += n
            if not np.allclose(ext(mats, 1), mats, atol=tol, rtol=0):
                return CheckResult(False, f"float strength unit off at ({x}, {xp})", cases)
            for y in nonempty:
                for z in nonempty:
                    dy, dz = word_dim(y, dims), word_dim(z, dims)
                    lhs = ext(ext(mats, dy), dz)
                    rhs = ext(mats, dy * dz)
                    cases += n
                    if not np.allclose(lhs, rhs, atol=tol, rtol=0):
                        return CheckResult(
                            False, f"float strength assoc off at ({x}, {xp})", cases
                        )
            for y in nonempty:
                dy = word_dim(y, dims)
                dw = dy
                h = rng.standard_normal((dw, dy))
                lhs = np.einsum(
                    "nVXvx,YX,xy->nVYvy",
                    ext(mats, dw).reshape(n, dv, dxp * dw, du, dx * dw),
                    np.eye(dxp * dw),
                    np.kron(np.eye(dx), h),
                    optimize=True,
                )
                rhs = np.einsum(
                    "nVXvx,YX,xy->nVYvy",
                    ext(mats, dy).reshape(n, dv, dxp * dy, du, dx * dy),
                    np.kron(np.eye(dxp), h),
                    np.eye(dx * dy),
                    optimize=True,
                )
                cases += n
                if not np.allclose(lhs, rhs, atol=tol, rtol=0):
                    return CheckResult(
                        False, f"float strength dinaturality off at ({x}, {xp}), wire {y}", cases
                    )
    return CheckResult(True, "", cases)
