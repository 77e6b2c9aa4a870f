"""Term syntax for base circuits and higher-order wirings.

Two layers of syntax live here.  *Base terms* (:class:`BId`, :class:`BGen`,
:class:`BBraid`, :class:`BCompose`, :class:`BTensor`) denote ordinary
circuits between object words.  *Poly terms* denote polymorphisms between
lists of hom types: gaps can be lifted from base morphisms, composed
sequentially or in parallel, split into and merged out of components, and
plugged into one another one wire at a time with :class:`Comp`.

The composition convention is fixed once and for all: ``Comp(s, i, t, j)``
plugs output ``i`` of ``s`` into input ``j`` of ``t``.  With
``s : G -> D1, b, D2`` and ``t : L1, b, L2 -> Th`` the composite has inputs
``L1, G, L2`` and outputs ``D1, Th, D2``.  Only single-wire plugging exists;
symmetric variants are reached with :class:`InPerm` / :class:`OutPerm`,
whose permutations are 0-indexed image lists (``new[i] = old[perm[i]]``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TermTypeError
from .signature import EMPTY, HomType, PolyType, Signature, Word, hom

# ---------------------------------------------------------------------------
# base terms


class BaseTerm:
    """Marker superclass for base-circuit syntax."""

    __slots__ = ()


@dataclass(frozen=True)
class BId(BaseTerm):
    word: Word


@dataclass(frozen=True)
class BGen(BaseTerm):
    name: str


@dataclass(frozen=True)
class BBraid(BaseTerm):
    """The symmetry ``u v -> v u`` between two word blocks."""

    left: Word
    right: Word


@dataclass(frozen=True)
class BCompose(BaseTerm):
    """Diagrammatic composition: ``first`` then ``second``."""

    first: BaseTerm
    second: BaseTerm


@dataclass(frozen=True)
class BTensor(BaseTerm):
    left: BaseTerm
    right: BaseTerm


def base_typecheck(t: BaseTerm, sig: Signature, path: tuple[int, ...] = ()) -> tuple[Word, Word]:
    """Return (dom, cod) of a base term, or raise :class:`TermTypeError`."""
    if isinstance(t, BId):
        sig.check_word(t.word)
        return t.word, t.word
    if isinstance(t, BGen):
        return sig.gen_type(t.name)
    if isinstance(t, BBraid):
        sig.check_word(t.left)
        sig.check_word(t.right)
        return t.left @ t.right, t.right @ t.left
    if isinstance(t, BCompose):
        d1, c1 = base_typecheck(t.first, sig, path + (0,))
        d2, c2 = base_typecheck(t.second, sig, path + (1,))
        if c1 != d2:
            raise TermTypeError(
                "composition-type-mismatch",
                f"base composite needs cod(first) = dom(second), got {c1} vs {d2}",
                path,
            )
        return d1, c2
    if isinstance(t, BTensor):
        d1, c1 = base_typecheck(t.left, sig, path + (0,))
        d2, c2 = base_typecheck(t.right, sig, path + (1,))
        return d1 @ d2, c1 @ c2
    raise TermTypeError("unknown-term", f"not a base term: {t!r}", path)


# ---------------------------------------------------------------------------
# poly terms


class Term:
    """Marker superclass for polymorphism syntax."""

    __slots__ = ()


@dataclass(frozen=True)
class PGen(Term):
    name: str


@dataclass(frozen=True)
class Lift(Term):
    """A base morphism regarded as a state of its hom type."""

    base: BaseTerm


@dataclass(frozen=True)
class SeqM(Term):
    """Sequential composition morphism ``[a,b], [b,c] -> [a,c]``."""

    a: Word
    b: Word
    c: Word


@dataclass(frozen=True)
class ParM(Term):
    """Parallel composition morphism ``[a,a2], [b,b2] -> [a b, a2 b2]``."""

    a: Word
    a2: Word
    b: Word
    b2: Word


@dataclass(frozen=True)
class IdSt(Term):
    """The identity state ``-> [a,a]``."""

    a: Word


@dataclass(frozen=True)
class Split(Term):
    """The cotensor: one composite gap viewed as its components.

    ``parts`` lists the component hom types; the input hom is the pairwise
    concatenation ``[doms, cods]``.
    """

    parts: tuple[HomType, ...]


@dataclass(frozen=True)
class Merge(Term):
    """Inverse of :class:`Split`: components regarded as one composite gap."""

    parts: tuple[HomType, ...]


@dataclass(frozen=True)
class InPerm(Term):
    term: Term
    perm: tuple[int, ...]


@dataclass(frozen=True)
class OutPerm(Term):
    term: Term
    perm: tuple[int, ...]


@dataclass(frozen=True)
class Comp(Term):
    """Plug output ``i`` of ``s`` into input ``j`` of ``t``."""

    s: Term
    i: int
    t: Term
    j: int


def _check_parts(parts, sig: Signature, path) -> HomType:
    if not parts:
        raise TermTypeError("arity-out-of-range", "split/merge needs at least one part", path)
    dom = EMPTY
    cod = EMPTY
    for h in parts:
        sig.check_word(h.dom)
        sig.check_word(h.cod)
        dom = dom @ h.dom
        cod = cod @ h.cod
    return hom(dom, cod)


def _check_perm(perm, n, path) -> None:
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise TermTypeError(
            "permutation-mismatch",
            f"expected a permutation of 0..{n - 1}, got {perm}",
            path,
        )


def typecheck(t: Term, sig: Signature, path: tuple[int, ...] = ()) -> PolyType:
    """Return the :class:`PolyType` of ``t`` or raise :class:`TermTypeError`."""
    if isinstance(t, PGen):
        return sig.polygen_type(t.name)
    if isinstance(t, Lift):
        dom, cod = base_typecheck(t.base, sig, path + (0,))
        return PolyType((), (hom(dom, cod),))
    if isinstance(t, SeqM):
        for w in (t.a, t.b, t.c):
            sig.check_word(w)
        return PolyType((hom(t.a, t.b), hom(t.b, t.c)), (hom(t.a, t.c),))
    if isinstance(t, ParM):
        for w in (t.a, t.a2, t.b, t.b2):
            sig.check_word(w)
        return PolyType(
            (hom(t.a, t.a2), hom(t.b, t.b2)),
            (hom(t.a @ t.b, t.a2 @ t.b2),),
        )
    if isinstance(t, IdSt):
        sig.check_word(t.a)
        return PolyType((), (hom(t.a, t.a),))
    if isinstance(t, Split):
        big = _check_parts(t.parts, sig, path)
        return PolyType((big,), tuple(t.parts))
    if isinstance(t, Merge):
        big = _check_parts(t.parts, sig, path)
        return PolyType(tuple(t.parts), (big,))
    if isinstance(t, InPerm):
        inner = typecheck(t.term, sig, path + (0,))
        _check_perm(t.perm, len(inner.inputs), path)
        return PolyType(tuple(inner.inputs[k] for k in t.perm), inner.outputs)
    if isinstance(t, OutPerm):
        inner = typecheck(t.term, sig, path + (0,))
        _check_perm(t.perm, len(inner.outputs), path)
        return PolyType(inner.inputs, tuple(inner.outputs[k] for k in t.perm))
    if isinstance(t, Comp):
        st = typecheck(t.s, sig, path + (0,))
        tt = typecheck(t.t, sig, path + (1,))
        if not 0 <= t.i < len(st.outputs):
            raise TermTypeError(
                "arity-out-of-range",
                f"output index {t.i} out of range for {len(st.outputs)} outputs",
                path,
            )
        if not 0 <= t.j < len(tt.inputs):
            raise TermTypeError(
                "arity-out-of-range",
                f"input index {t.j} out of range for {len(tt.inputs)} inputs",
                path,
            )
        b = st.outputs[t.i]
        if tt.inputs[t.j] != b:
            raise TermTypeError(
                "composition-type-mismatch",
                f"cannot plug {b} into {tt.inputs[t.j]}",
                path,
            )
        inputs = tt.inputs[: t.j] + st.inputs + tt.inputs[t.j + 1 :]
        outputs = st.outputs[: t.i] + tt.outputs + st.outputs[t.i + 1 :]
        return PolyType(inputs, outputs)
    raise TermTypeError("unknown-term", f"not a poly term: {t!r}", path)


@dataclass(frozen=True)
class TypedTerm:
    term: Term
    type: PolyType


def typed(t: Term, sig: Signature) -> TypedTerm:
    return TypedTerm(t, typecheck(t, sig))


def compose(sig: Signature, s: Term, i: int, t: Term, j: int) -> TypedTerm:
    """Typechecked :class:`Comp`."""
    out = Comp(s, i, t, j)
    return typed(out, sig)


def identity_poly(h: HomType) -> Term:
    """The canonical identity polymorphism on a hom type (the unary split)."""
    return Split((h,))


# ---------------------------------------------------------------------------
# wiring helpers


def _single_hom(ptype: PolyType, idx: int | None, path_desc: str) -> int:
    if idx is not None:
        return idx
    if not ptype.outputs:
        raise TermTypeError("arity-out-of-range", f"{path_desc} has no outputs", ())
    return len(ptype.outputs) - 1


def seq_box(sig: Signature, s: Term, t: Term, i: int | None = None, j: int | None = None) -> Term:
    """Sequentially compose the gap produced by ``s`` with the one from ``t``.

    Output ``i`` of ``s`` (default: last) must have type ``[a,b]`` and output
    ``j`` of ``t`` (default: last) type ``[b,c]``; both are fed to the
    sequential-composition morphism, producing a ``[a,c]`` output.
    """
    st = typecheck(s, sig)
    tt = typecheck(t, sig)
    i = _single_hom(st, i, "seq_box left argument")
    j = _single_hom(tt, j, "seq_box right argument")
    h1 = st.outputs[i]
    h2 = tt.outputs[j]
    if h1.cod != h2.dom:
        raise TermTypeError(
            "composition-type-mismatch",
            f"seq_box needs [a,b] then [b,c], got {h1} then {h2}",
        )
    m = SeqM(h1.dom, h1.cod, h2.cod)
    step = Comp(s, i, m, 0)
    # after the first plug, the remaining [b,c] input of m sits after s's inputs
    return Comp(t, j, step, len(st.inputs))


def par_box(sig: Signature, s: Term, t: Term, i: int | None = None, j: int | None = None) -> Term:
    """Tensor the gap produced by ``s`` with the one from ``t`` (s left)."""
    st = typecheck(s, sig)
    tt = typecheck(t, sig)
    i = _single_hom(st, i, "par_box left argument")
    j = _single_hom(tt, j, "par_box right argument")
    h1 = st.outputs[i]
    h2 = tt.outputs[j]
    m = ParM(h1.dom, h1.cod, h2.dom, h2.cod)
    step = Comp(s, i, m, 0)
    return Comp(t, j, step, len(st.inputs))


def hom_action(sig: Signature, pre: BaseTerm, post: BaseTerm) -> Term:
    """The functorial action ``[pre, post] : [a,b] -> [a2,b2]``.

    ``pre : a2 -> a`` reshapes the domain side, ``post : b -> b2`` the
    codomain side, so a gap from ``a`` to ``b`` becomes one from ``a2`` to
    ``b2`` by sandwiching.
    """
    a2, a = base_typecheck(pre, sig)
    b, b2 = base_typecheck(post, sig)
    step1 = Comp(Lift(pre), 0, SeqM(a2, a, b), 0)  # [a,b] -> [a2,b]
    step2 = Comp(step1, 0, SeqM(a2, b, b2), 0)  # [a,b],[b,b2] -> [a2,b2]
    return Comp(Lift(post), 0, step2, 1)  # [a,b] -> [a2,b2]


# ---------------------------------------------------------------------------
# traversal utilities


def base_gen_names(t: BaseTerm) -> set[str]:
    if isinstance(t, BGen):
        return {t.name}
    if isinstance(t, (BCompose, BTensor)):
        l, r = (t.first, t.second) if isinstance(t, BCompose) else (t.left, t.right)
        return base_gen_names(l) | base_gen_names(r)
    return set()


def gen_names(t: Term) -> tuple[set[str], set[str]]:
    """Base-generator and poly-generator names occurring in ``t``."""
    if isinstance(t, PGen):
        return set(), {t.name}
    if isinstance(t, Lift):
        return base_gen_names(t.base), set()
    if isinstance(t, (InPerm, OutPerm)):
        return gen_names(t.term)
    if isinstance(t, Comp):
        b1, p1 = gen_names(t.s)
        b2, p2 = gen_names(t.t)
        return b1 | b2, p1 | p2
    return set(), set()


def _base_objects(t: BaseTerm) -> set[str]:
    if isinstance(t, BId):
        return set(t.word)
    if isinstance(t, BBraid):
        return set(t.left) | set(t.right)
    if isinstance(t, BCompose):
        return _base_objects(t.first) | _base_objects(t.second)
    if isinstance(t, BTensor):
        return _base_objects(t.left) | _base_objects(t.right)
    return set()


def objects_in(t: Term, sig: Signature) -> set[str]:
    """Base objects mentioned anywhere in ``t`` (via words, gens, or polygens)."""
    if isinstance(t, PGen):
        pt = sig.polygen_type(t.name)
        out: set[str] = set()
        for h in pt.inputs + pt.outputs:
            out |= set(h.dom) | set(h.cod)
        return out
    if isinstance(t, Lift):
        dom, cod = base_typecheck(t.base, sig)
        return _base_objects(t.base) | set(dom) | set(cod)
    if isinstance(t, SeqM):
        return set(t.a) | set(t.b) | set(t.c)
    if isinstance(t, ParM):
        return set(t.a) | set(t.a2) | set(t.b) | set(t.b2)
    if isinstance(t, IdSt):
        return set(t.a)
    if isinstance(t, (Split, Merge)):
        out = set()
        for h in t.parts:
            out |= set(h.dom) | set(h.cod)
        return out
    if isinstance(t, (InPerm, OutPerm)):
        return objects_in(t.term, sig)
    if isinstance(t, Comp):
        return objects_in(t.s, sig) | objects_in(t.t, sig)
    return set()


def term_size(t: Term) -> int:
    if isinstance(t, (InPerm, OutPerm)):
        return 1 + term_size(t.term)
    if isinstance(t, Comp):
        return 1 + term_size(t.s) + term_size(t.t)
    return 1
