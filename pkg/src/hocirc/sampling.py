"""Seeded random generators for terms, pairs, and supermap cores.

The property suites quantify over "random terms of size <= N" in several
places; this module is the single source of those samples.  Everything is
driven by a :class:`numpy.random.Generator` so a (seed, path) pair pins
the whole draw — suites log the seeds they used and any run can replay
them.

Terms are generated top-down against a requested output hom: pick a
constructor whose output can be shaped to the target, then recursively
fill (some of) its input slots, leaving the rest open as holes.  Every
sample typechecks by construction; a retry loop enforces the open-hole
cap instead of threading it through the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .signature import EMPTY, HomType, Signature, Word, hom
from .terms import (
    BaseTerm,
    BBraid,
    BCompose,
    BGen,
    BId,
    Comp,
    IdSt,
    InPerm,
    Lift,
    Merge,
    OutPerm,
    ParM,
    PGen,
    SeqM,
    Split,
    Term,
    identity_poly,
    typecheck,
)

__all__ = [
    "random_word",
    "random_base_term",
    "random_term_with_output",
    "random_single_output_term",
    "random_composable_pair",
    "equal_variant",
    "swap_generator",
    "term_size",
    "ComposablePair",
]


def term_size(t: Term) -> int:
    """Number of polymorphism constructors in a term."""
    if isinstance(t, Comp):
        return 1 + term_size(t.s) + term_size(t.t)
    if isinstance(t, (InPerm, OutPerm)):
        return 1 + term_size(t.term)
    return 1


def random_word(rng: np.random.Generator, objects: Sequence[str], max_len: int, min_len: int = 0) -> Word:
    n = int(rng.integers(min_len, max_len + 1))
    return Word(*(str(objects[int(rng.integers(len(objects)))]) for _ in range(n)))


def random_base_term(
    sig: Signature, rng: np.random.Generator, dom: Word, cod: Word, depth: int = 2
) -> Optional[BaseTerm]:
    """A base circuit ``dom -> cod``, or ``None`` when none can be built.

    Tries, in random order: a matching generator, the identity, a braid,
    and a two-step composite routed through a generator.
    """
    builders = []
    gens = [n for n, (d, c) in sorted(sig.gens.items()) if d == dom and c == cod]
    if gens:
        builders.append(lambda: BGen(str(gens[int(rng.integers(len(gens)))])))
    if dom == cod:
        builders.append(lambda: BId(dom))
    braids = []
    for k in range(1, len(dom)):
        u, v = Word(*dom[:k]), Word(*dom[k:])
        if v @ u == cod:
            braids.append((u, v))
    for u, v in braids:
        builders.append(lambda u=u, v=v: BBraid(u, v))
    if depth > 0:
        starts = [(n, c) for n, (d, c) in sorted(sig.gens.items()) if d == dom]
        rng.shuffle(starts)
        for name, c in starts[:2]:
            rest = random_base_term(sig, rng, c, cod, depth - 1)
            if rest is not None:
                builders.append(lambda name=name, rest=rest: BCompose(BGen(name), rest))
    if not builders:
        return None
    return builders[int(rng.integers(len(builders)))]()


def _word_splits(w: Word) -> list[tuple[Word, Word]]:
    return [(Word(*w[:k]), Word(*w[k:])) for k in range(len(w) + 1)]


def _grow(
    sig: Signature,
    rng: np.random.Generator,
    out: HomType,
    budget: int,
    word_cap: int,
) -> Term:
    """One single-output term with output ``out``; may leave inputs open."""
    u, v = out.dom, out.cod
    options: list[tuple[str, float]] = [("hole", 2.0)]
    base = random_base_term(sig, rng, u, v)
    if base is not None:
        options.append(("lift", 2.5))
    if u == v:
        options.append(("idst", 0.8))
    for name, pt in sorted(sig.polygens.items()):
        if len(pt.outputs) == 1 and pt.outputs[0] == out:
            options.append((f"pgen:{name}", 1.5))
            break
    if budget >= 2:
        options.append(("seq", 2.0))
        if len(u) >= 2 or len(v) >= 2 or (not len(u) and not len(v)):
            options.append(("par", 1.5))
        if len(u) >= 2 and len(v) >= 2:
            options.append(("merge2", 1.0))
        options.append(("inperm", 0.4))
        options.append(("outperm", 0.3))
    names = [o[0] for o in options]
    weights = np.array([o[1] for o in options])
    pick = names[int(rng.choice(len(names), p=weights / weights.sum()))]

    if pick == "hole":
        return identity_poly(out)
    if pick == "lift":
        return Lift(base)
    if pick == "idst":
        return IdSt(u)
    if pick.startswith("pgen:"):
        return PGen(pick.split(":", 1)[1])
    if pick == "seq":
        m = random_word(rng, sig.objects, word_cap)
        skeleton: Term = SeqM(u, m, v)
        slots = [hom(u, m), hom(m, v)]
    elif pick == "par":
        su = _word_splits(u)
        sv = _word_splits(v)
        a, b = su[int(rng.integers(len(su)))]
        a2, b2 = sv[int(rng.integers(len(sv)))]
        skeleton = ParM(a, a2, b, b2)
        slots = [hom(a, a2), hom(b, b2)]
    elif pick == "merge2":
        a, b = Word(*u[:1]), Word(*u[1:])
        a2, b2 = Word(*v[:1]), Word(*v[1:])
        skeleton = Merge((hom(a, a2), hom(b, b2)))
        slots = [hom(a, a2), hom(b, b2)]
    elif pick == "inperm":
        inner = _grow(sig, rng, out, budget - 1, word_cap)
        n = len(typecheck(inner, sig).inputs)
        perm = tuple(int(k) for k in rng.permutation(n))
        return InPerm(inner, perm)
    else:  # outperm: single output, so the only permutation is trivial
        inner = _grow(sig, rng, out, budget - 1, word_cap)
        return OutPerm(inner, (0,))

    # fill slots right to left so earlier indices stay put
    cur = skeleton
    spend = budget - 1
    for j in range(len(slots) - 1, -1, -1):
        if spend <= 0 or rng.random() < 0.35:
            continue
        child_budget = int(rng.integers(1, spend + 1))
        child = _grow(sig, rng, slots[j], child_budget, word_cap)
        cur = Comp(child, 0, cur, j)
        spend -= term_size(child)
    return cur


def random_term_with_output(
    sig: Signature,
    rng: np.random.Generator,
    out: HomType,
    size: int = 6,
    max_inputs: int = 3,
    word_cap: int = 2,
) -> Term:
    """A typechecking single-output term of output type ``out``.

    ``size`` bounds the constructor count, ``max_inputs`` the number of
    open holes (enforced by bounded retry, falling back to the identity).
    """
    for _ in range(24):
        t = _grow(sig, rng, out, size, word_cap)
        pt = typecheck(t, sig)
        if len(pt.inputs) <= max_inputs and term_size(t) <= size:
            return t
    return identity_poly(out)


def _hom_pool(sig: Signature, rng: np.random.Generator, word_cap: int) -> list[HomType]:
    words = [EMPTY]
    for a in sig.objects:
        words.append(Word(a))
    for a in sig.objects:
        for b in sig.objects:
            if word_cap >= 2:
                words.append(Word(a) @ Word(b))
    return [hom(d, c) for d in words for c in words]


def random_single_output_term(
    sig: Signature,
    rng: np.random.Generator,
    size: int = 6,
    max_inputs: int = 3,
    word_cap: int = 2,
) -> Term:
    pool = _hom_pool(sig, rng, word_cap)
    out = pool[int(rng.integers(len(pool)))]
    return random_term_with_output(sig, rng, out, size, max_inputs, word_cap)


@dataclass(frozen=True)
class ComposablePair:
    """``Comp(s, 0, t, j)`` typechecks: ``s`` is single-output, feeding slot ``j``."""

    s: Term
    t: Term
    j: int

    @property
    def composite(self) -> Term:
        return Comp(self.s, 0, self.t, self.j)


def random_composable_pair(
    sig: Signature,
    rng: np.random.Generator,
    size: int = 6,
    max_inputs: int = 3,
) -> ComposablePair:
    """A seeded pair of single-output terms with a valid plugging slot."""
    for _ in range(48):
        t = random_single_output_term(sig, rng, size, max_inputs)
        ins = typecheck(t, sig).inputs
        if not ins:
            continue
        j = int(rng.integers(len(ins)))
        s = random_term_with_output(sig, rng, ins[j], size, max_inputs)
        return ComposablePair(s, t, j)
    # a slot always exists on a doubled wire
    h = hom(Word(sig.objects[0]), Word(sig.objects[0]))
    return ComposablePair(identity_poly(h), SeqM(h.dom, h.dom, h.dom), 0)


def equal_variant(sig: Signature, rng: np.random.Generator, t: Term) -> Term:
    """A syntactically different term denoting the same polymorphism.

    Either plugs the output through the identity, pre-composes a hole with
    the identity, or applies an input permutation and its inverse.
    """
    pt = typecheck(t, sig)
    choices = ["post"]
    if pt.inputs:
        choices.append("pre")
    if len(pt.inputs) >= 2:
        choices.append("perm")
    pick = choices[int(rng.integers(len(choices)))]
    if pick == "post":
        return Comp(t, 0, identity_poly(pt.outputs[0]), 0)
    if pick == "pre":
        j = int(rng.integers(len(pt.inputs)))
        return Comp(identity_poly(pt.inputs[j]), 0, t, j)
    n = len(pt.inputs)
    perm = tuple(int(k) for k in rng.permutation(n))
    inv = tuple(int(k) for k in np.argsort(perm))
    return InPerm(InPerm(t, perm), inv)


def _gen_swaps(sig: Signature) -> dict[str, list[str]]:
    by_type: dict[tuple, list[str]] = {}
    for name, tp in sorted(sig.gens.items()):
        by_type.setdefault(tp, []).append(name)
    out: dict[str, list[str]] = {}
    for names in by_type.values():
        for n in names:
            others = [m for m in names if m != n]
            if others:
                out[n] = others
    return out


def swap_generator(sig: Signature, rng: np.random.Generator, t: Term) -> Optional[Term]:
    """Replace one generator occurrence by a same-typed sibling, if any.

    The result has the same polytype as ``t`` but usually a different
    behaviour — the standard source of distinguished pairs.
    """
    swaps = _gen_swaps(sig)
    spots: list[int] = []
    counter = [0]

    def scan_base(b: BaseTerm) -> None:
        if isinstance(b, BGen):
            if b.name in swaps:
                spots.append(counter[0])
            counter[0] += 1
        elif isinstance(b, BCompose):
            scan_base(b.first)
            scan_base(b.second)
        elif hasattr(b, "left") and isinstance(getattr(b, "left", None), BaseTerm):
            scan_base(b.left)  # type: ignore[attr-defined]
            scan_base(b.right)  # type: ignore[attr-defined]

    def scan(x: Term) -> None:
        if isinstance(x, Lift):
            scan_base(x.base)
        elif isinstance(x, Comp):
            scan(x.s)
            scan(x.t)
        elif isinstance(x, (InPerm, OutPerm)):
            scan(x.term)

    scan(t)
    if not spots:
        return None
    target = spots[int(rng.integers(len(spots)))]
    counter[0] = 0

    def redo_base(b: BaseTerm) -> BaseTerm:
        if isinstance(b, BGen):
            k = counter[0]
            counter[0] += 1
            if k == target:
                others = swaps[b.name]
                return BGen(others[int(rng.integers(len(others)))])
            return b
        if isinstance(b, BCompose):
            return BCompose(redo_base(b.first), redo_base(b.second))
        if hasattr(b, "left") and isinstance(getattr(b, "left", None), BaseTerm):
            cls = type(b)
            return cls(redo_base(b.left), redo_base(b.right))  # type: ignore[attr-defined]
        return b

    def redo(x: Term) -> Term:
        if isinstance(x, Lift):
            return Lift(redo_base(x.base))
        if isinstance(x, Comp):
            return Comp(redo(x.s), x.i, redo(x.t), x.j)
        if isinstance(x, InPerm):
            return InPerm(redo(x.term), x.perm)
        if isinstance(x, OutPerm):
            return OutPerm(redo(x.term), x.perm)
        return x

    return redo(t)
