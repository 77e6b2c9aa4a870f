"""The equational theory: law catalogue, rewriting, and equality checking.

Laws are schemas over word metavariables.  ``instantiate`` closes a schema
over concrete words, producing a (lhs, rhs) pair of terms of equal arity
type; the checking pipeline evaluates both sides under model assignments.

``normalize`` drives the directed net rewriting of :mod:`hocirc.rewrite` to
a fixpoint and reports the trace; ``decide_equal`` adds a bounded
bidirectional search over the undirected laws and a model sweep, returning a
three-valued verdict.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import HocircError
from .matmodel import (
    ModelAssignment,
    count_boolean_assignments,
    enumerate_boolean_assignments,
    enumeration_ceiling,
    eval_poly,
    make_rng,
    random_float_assignment,
)
from .network import Box, Net, canonical_key, net_to_term, term_to_net
from .rewrite import (
    DIRECTED_MATCHERS,
    NetMatch,
    find_matches,
)
from .signature import EMPTY, HomType, Signature, Word
from .terms import (
    BBraid,
    Comp,
    IdSt,
    InPerm,
    Lift,
    Merge,
    OutPerm,
    ParM,
    SeqM,
    Split,
    Term,
    gen_names,
    hom_action,
    identity_poly,
    objects_in,
    typecheck,
)


def _h(d: Word, c: Word) -> HomType:
    return HomType(d, c)


@dataclass(frozen=True)
class Law:
    """An equational law schema.

    ``build(sig, *words)`` returns the two sides; ``arity`` is the number of
    word metavariables.  ``origin`` records whether the law is part of the
    presentation ("core") or provable from it ("derived"); ``mode`` says how
    the rewriter treats it ("directed", "search", or "model" for laws whose
    general form is only checked semantically).
    """

    name: str
    gloss: str
    arity: int
    origin: str
    mode: str
    build: Callable[..., tuple[Term, Term]] = field(compare=False)


def _e1(sig, a, b, c, d):
    lhs = Comp(SeqM(a, b, c), 0, SeqM(a, c, d), 0)
    rhs = Comp(SeqM(b, c, d), 0, SeqM(a, b, d), 1)
    return lhs, rhs


def _e2(sig, a, a2, b, b2, c, c2):
    lhs = Comp(ParM(a, a2, b, b2), 0, ParM(a @ b, a2 @ b2, c, c2), 0)
    rhs = Comp(ParM(b, b2, c, c2), 0, ParM(a, a2, b @ c, b2 @ c2), 1)
    return lhs, rhs


def _e3(sig, a, a2, a3, b, b2, b3):
    inner = Comp(ParM(a, a2, b, b2), 0, SeqM(a @ b, a2 @ b2, a3 @ b3), 0)
    lhs = Comp(ParM(a2, a3, b2, b3), 0, inner, 2)
    inner2 = Comp(SeqM(a, a2, a3), 0, ParM(a, a3, b, b3), 0)
    rhs = InPerm(Comp(SeqM(b, b2, b3), 0, inner2, 2), (0, 2, 1, 3))
    return lhs, rhs


def _e4l(sig, a, b):
    return Comp(IdSt(a), 0, SeqM(a, a, b), 0), identity_poly(_h(a, b))


def _e4r(sig, a, b):
    return Comp(IdSt(b), 0, SeqM(a, b, b), 1), identity_poly(_h(a, b))


def _e5(sig, b, b2):
    lhs = Comp(IdSt(EMPTY), 0, ParM(EMPTY, EMPTY, b, b2), 0)
    return lhs, identity_poly(_h(b, b2))


def _e6(sig, a1, b1, a2, b2, a3, b3):
    coarse = Split((_h(a1 @ a2, b1 @ b2), _h(a3, b3)))
    fine = Split((_h(a1, b1), _h(a2, b2)))
    return Comp(coarse, 0, fine, 0), Split((_h(a1, b1), _h(a2, b2), _h(a3, b3)))


def _e7a(sig, x, x2, y, y2, z, z2):
    lhs = Comp(
        Merge((_h(x @ y, x2 @ y2), _h(z, z2))), 0,
        Split((_h(x, x2), _h(y @ z, y2 @ z2))), 0,
    )
    rhs = Comp(Split((_h(x, x2), _h(y, y2))), 1, Merge((_h(y, y2), _h(z, z2))), 0)
    return lhs, rhs


def _e7b(sig, x, x2, y, y2, z, z2):
    lhs = Comp(
        Merge((_h(x, x2), _h(y @ z, y2 @ z2))), 0,
        Split((_h(x @ y, x2 @ y2), _h(z, z2))), 0,
    )
    rhs = Comp(Split((_h(y, y2), _h(z, z2))), 0, Merge((_h(x, x2), _h(y, y2))), 1)
    return lhs, rhs


def _e8(sig, a, b):
    t1 = Comp(IdSt(a), 0, ParM(a, a, b, b), 0)
    lhs = Comp(IdSt(b), 0, t1, 0)
    return lhs, IdSt(a @ b)


def _e9(sig, a, a2, b, b2):
    act = hom_action(sig, BBraid(b, a), BBraid(a2, b2))
    lhs = Comp(act, 0, Split((_h(b, b2), _h(a, a2))), 0)
    rhs = OutPerm(Split((_h(a, a2), _h(b, b2))), (1, 0))
    return lhs, rhs


def _e10(sig, a, b):
    part = _h(a, b)
    lhs = Comp(Merge((part,)), 0, Split((part,)), 0)
    return lhs, identity_poly(part)


def _d1(sig, a1, b1, a2, b2, a3, b3):
    lhs = Comp(
        Merge((_h(a1, b1), _h(a2, b2))), 0,
        Merge((_h(a1 @ a2, b1 @ b2), _h(a3, b3))), 0,
    )
    return lhs, Merge((_h(a1, b1), _h(a2, b2), _h(a3, b3)))


def _d2(sig, a, a2, b, b2):
    act = hom_action(sig, BBraid(a, b), BBraid(b2, a2))
    lhs = Comp(Merge((_h(b, b2), _h(a, a2))), 0, act, 0)
    rhs = InPerm(Merge((_h(a, a2), _h(b, b2))), (1, 0))
    return lhs, rhs


def _d3(sig, a, a2, b, b2):
    return ParM(a, a2, b, b2), Merge((_h(a, a2), _h(b, b2)))


def _d4(n: int):
    def build(sig, *words):
        pairs = [(words[2 * k], words[2 * k + 1]) for k in range(n + 1)]
        head, tail = pairs[0], pairs[1:]
        p_parts = tuple(_h(d, c) for d, c in tail) + (_h(*head),)
        q_parts = (_h(*head),) + tuple(_h(d, c) for d, c in tail)
        tail_dom = Word(*itertools.chain.from_iterable(d.factors for d, _ in tail))
        tail_cod = Word(*itertools.chain.from_iterable(c.factors for _, c in tail))
        pre = BBraid(tail_dom, head[0])
        post = BBraid(head[1], tail_cod)
        lhs = Comp(hom_action(sig, pre, post), 0, Split(p_parts), 0)
        rhs = OutPerm(Split(q_parts), tuple(range(1, n + 1)) + (0,))
        return lhs, rhs

    return build


def law_catalogue() -> tuple[Law, ...]:
    """All laws of the theory, core presentation first, then derived."""
    core = [
        Law("E1", "sequential composition of gaps associates", 4, "core", "directed", _e1),
        Law("E2", "parallel composition of gaps associates", 6, "core", "directed", _e2),
        Law("E3", "sequential and parallel gap composition interchange", 6, "core", "directed", _e3),
        Law("E4L", "the identity state is a left unit for sequencing", 2, "core", "directed", _e4l),
        Law("E4R", "the identity state is a right unit for sequencing", 2, "core", "directed", _e4r),
        Law("E5", "the empty identity state is a unit for juxtaposition", 2, "core", "directed", _e5),
        Law("E6", "splitting associates", 6, "core", "directed", _e6),
        Law("E7a", "a merge slides off the front of an overlapping split", 6, "core", "search", _e7a),
        Law("E7b", "a merge slides off the back of an overlapping split", 6, "core", "search", _e7b),
        Law("E8", "merged identity states are an identity state", 2, "core", "directed", _e8),
        Law("E9", "braiding before a split reorders its outputs", 4, "core", "directed", _e9),
        Law("E10", "merging then splitting is the identity", 2, "core", "directed", _e10),
    ]
    derived = [
        Law("D1", "consecutive merges are one merge", 6, "derived", "directed", _d1),
        Law("D2", "braiding after a merge reorders its inputs", 4, "derived", "directed", _d2),
        Law("D3", "juxtaposition of gaps is a binary merge", 4, "derived", "directed", _d3),
    ]
    for n in (2, 3, 4):
        derived.append(
            Law(f"D4({n})", f"braiding one party past {n} reorders a split", 2 * (n + 1), "derived", "directed", _d4(n))
        )
    return tuple(core + derived)


_HASH_SIG = Signature(objects=("x1", "x2", "x3", "x4", "x5", "x6"))


def law_hash(law: Law) -> str:
    """Stable short digest of a law's definition."""
    words = [Word(f"x{1 + (k % 6)}") for k in range(law.arity)]
    lhs, rhs = law.build(_HASH_SIG, *words)
    payload = f"{law.name}|{law.gloss}|{lhs!r}|{rhs!r}"
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def instantiate(law: Law, sig: Signature, words: Iterable[Word]) -> tuple[Term, Term]:
    words = tuple(words)
    if len(words) != law.arity:
        raise HocircError("law-arity", f"{law.name} takes {law.arity} words, got {len(words)}")
    lhs, rhs = law.build(sig, *words)
    lt = typecheck(lhs, sig)
    rt = typecheck(rhs, sig)
    if lt != rt:
        raise HocircError("law-ill-typed", f"{law.name} sides disagree: {lt} vs {rt}")
    return lhs, rhs


# ---------------------------------------------------------------------------
# rewriting API


@dataclass(frozen=True)
class RewriteStep:
    term: Term
    law: str
    position: str


@dataclass(frozen=True)
class NormalizeResult:
    term: Term
    steps: tuple[tuple[str, str], ...]
    fuel_exhausted: bool

    @property
    def step_count(self) -> int:
        return len(self.steps)


def _position(paths: dict[int, tuple[int, ...]], boxes: tuple[int, ...]) -> str:
    """Longest common prefix of the patch atoms' positions."""
    ps = [paths[b] for b in boxes if b in paths]
    if not ps:
        return "root"
    prefix = ps[0]
    for p in ps[1:]:
        k = 0
        while k < len(prefix) and k < len(p) and prefix[k] == p[k]:
            k += 1
        prefix = prefix[:k]
    return ".".join(str(x) for x in prefix) if prefix else "root"


def rewrite_step(sig: Signature, term: Term) -> Optional[RewriteStep]:
    """One directed step at the first matching position, or None."""
    paths: dict[int, tuple[int, ...]] = {}
    net = term_to_net(term, sig, paths)
    for m in find_matches(net, sig):
        res = m.apply()
        if res is not None:
            return RewriteStep(net_to_term(res), m.rule, _position(paths, m.patch_boxes))
    return None


DEFAULT_FUEL = 10_000


def normalize(sig: Signature, term: Term, fuel: int = DEFAULT_FUEL) -> NormalizeResult:
    """Directed rewriting to a normal form, with trace.

    Positions in the trace refer to the term as it stood before each step
    (the input term for the first step, the renormalised form afterwards).
    """
    steps: list[tuple[str, str]] = []
    current = term
    for _ in range(fuel):
        nxt = rewrite_step(sig, current)
        if nxt is None:
            return NormalizeResult(current, tuple(steps), False)
        steps.append((nxt.law, nxt.position))
        current = nxt.term
    return NormalizeResult(current, tuple(steps), True)


# ---------------------------------------------------------------------------
# undirected search moves (Frobenius re-association, un-flattening)


def _match_e7a_lr(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Merge) and len(t.parts) == 2):
            continue
        w = net.box_out_wires(b)[0]
        c = net.wire_cons[w]
        if c[0] != "box":
            continue
        cb = c[1]
        ct = net.boxes[cb].term
        if not (isinstance(ct, Split) and len(ct.parts) == 2):
            continue
        m0, m1 = t.parts
        s0, s1 = ct.parts
        x = s0
        nd, nc = len(x.dom), len(x.cod)
        if m0.dom.factors[:nd] != x.dom.factors or m0.cod.factors[:nc] != x.cod.factors:
            continue
        y = _h(Word(*m0.dom.factors[nd:]), Word(*m0.cod.factors[nc:]))
        z = m1
        if s1 != _h(y.dom @ z.dom, y.cod @ z.cod):
            continue

        def apply(b=b, cb=cb, w=w, x=x, y=y, z=z):
            out = net.copy()
            w0 = out.box_in_wires(b)[0]
            w1 = out.box_in_wires(b)[1]
            o0, o1 = out.box_out_wires(cb)
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            wy = out.fresh_wire(y)
            out.boxes[b] = Box(Split((x, y)), (out.wire_type[w0],), (x, y))
            out.wire_cons[w0] = ("box", b, 0)
            out.wire_prod[o0] = ("box", b, 0)
            out.wire_prod[wy] = ("box", b, 1)
            out.boxes[cb] = Box(Merge((y, z)), (y, z), (out.wire_type[o1],))
            out.wire_cons[wy] = ("box", cb, 0)
            out.wire_cons[w1] = ("box", cb, 1)
            out.wire_prod[o1] = ("box", cb, 0)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E7a", (b,), (b, cb), apply)


def _match_e7a_rl(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Split) and len(t.parts) == 2):
            continue
        w = net.box_out_wires(b)[1]
        c = net.wire_cons[w]
        if c[0] != "box" or c[2] != 0:
            continue
        cb = c[1]
        ct = net.boxes[cb].term
        if not (isinstance(ct, Merge) and len(ct.parts) == 2):
            continue
        x, y = t.parts
        y2, z = ct.parts
        if y != y2:
            continue

        def apply(b=b, cb=cb, w=w, x=x, y=y, z=z):
            out = net.copy()
            w0 = out.box_in_wires(b)[0]
            w1 = out.box_in_wires(cb)[1]
            o0 = out.box_out_wires(b)[0]
            o1 = out.box_out_wires(cb)[0]
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            glued_xy = _h(x.dom @ y.dom, x.cod @ y.cod)
            glued_yz = _h(y.dom @ z.dom, y.cod @ z.cod)
            big = _h(x.dom @ y.dom @ z.dom, x.cod @ y.cod @ z.cod)
            out.boxes[b] = Box(Merge((glued_xy, z)), (glued_xy, z), (big,))
            out.wire_cons[w0] = ("box", b, 0)
            out.wire_cons[w1] = ("box", b, 1)
            out.boxes[cb] = Box(Split((x, glued_yz)), (big,), (x, glued_yz))
            wmid = out.fresh_wire(big)
            out.wire_prod[wmid] = ("box", b, 0)
            out.wire_cons[wmid] = ("box", cb, 0)
            out.wire_prod[o0] = ("box", cb, 0)
            out.wire_prod[o1] = ("box", cb, 1)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E7a", (b,), (b, cb), apply)


def _match_e7b_lr(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Merge) and len(t.parts) == 2):
            continue
        w = net.box_out_wires(b)[0]
        c = net.wire_cons[w]
        if c[0] != "box":
            continue
        cb = c[1]
        ct = net.boxes[cb].term
        if not (isinstance(ct, Split) and len(ct.parts) == 2):
            continue
        m0, m1 = t.parts
        s0, s1 = ct.parts
        x = m0
        nd, nc = len(x.dom), len(x.cod)
        if s0.dom.factors[:nd] != x.dom.factors or s0.cod.factors[:nc] != x.cod.factors:
            continue
        y = _h(Word(*s0.dom.factors[nd:]), Word(*s0.cod.factors[nc:]))
        z = s1
        if m1 != _h(y.dom @ z.dom, y.cod @ z.cod):
            continue

        def apply(b=b, cb=cb, w=w, x=x, y=y, z=z):
            out = net.copy()
            w0, w1 = out.box_in_wires(b)
            o0, o1 = out.box_out_wires(cb)
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            wy = out.fresh_wire(y)
            out.boxes[b] = Box(Split((y, z)), (out.wire_type[w1],), (y, z))
            out.wire_cons[w1] = ("box", b, 0)
            out.wire_prod[wy] = ("box", b, 0)
            out.wire_prod[o1] = ("box", b, 1)
            out.boxes[cb] = Box(Merge((x, y)), (x, y), (out.wire_type[o0],))
            out.wire_cons[w0] = ("box", cb, 0)
            out.wire_cons[wy] = ("box", cb, 1)
            out.wire_prod[o0] = ("box", cb, 0)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E7b", (b,), (b, cb), apply)


def _match_e7b_rl(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Split) and len(t.parts) == 2):
            continue
        w = net.box_out_wires(b)[0]
        c = net.wire_cons[w]
        if c[0] != "box" or c[2] != 1:
            continue
        cb = c[1]
        ct = net.boxes[cb].term
        if not (isinstance(ct, Merge) and len(ct.parts) == 2):
            continue
        y, z = t.parts
        x, y2 = ct.parts
        if y != y2:
            continue

        def apply(b=b, cb=cb, w=w, x=x, y=y, z=z):
            out = net.copy()
            w0 = out.box_in_wires(cb)[0]
            w1 = out.box_in_wires(b)[0]
            o0 = out.box_out_wires(cb)[0]
            o1 = out.box_out_wires(b)[1]
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            glued = _h(y.dom @ z.dom, y.cod @ z.cod)
            out.boxes[cb] = Box(Merge((x, glued)), (x, glued), (_h(x.dom @ glued.dom, x.cod @ glued.cod),))
            out.wire_cons[w0] = ("box", cb, 0)
            out.wire_cons[w1] = ("box", cb, 1)
            sp = (_h(x.dom @ y.dom, x.cod @ y.cod), z)
            out.boxes[b] = Box(Split(sp), (_h(x.dom @ glued.dom, x.cod @ glued.cod),), sp)
            wmid = out.fresh_wire(_h(x.dom @ glued.dom, x.cod @ glued.cod))
            out.wire_prod[wmid] = ("box", cb, 0)
            out.wire_cons[wmid] = ("box", b, 0)
            out.wire_prod[o0] = ("box", b, 0)
            out.wire_prod[o1] = ("box", b, 1)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E7b", (b,), (b, cb), apply)


def _match_d1_rev(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Merge) and len(t.parts) >= 3):
            continue
        n = len(t.parts)
        for i in range(n):
            for j in range(i + 2, n + 1):
                if j - i == n:
                    continue

                def apply(b=b, i=i, j=j, t=t):
                    out = net.copy()
                    inner_parts = t.parts[i:j]
                    glued = _h(
                        Word(*itertools.chain.from_iterable(p.dom.factors for p in inner_parts)),
                        Word(*itertools.chain.from_iterable(p.cod.factors for p in inner_parts)),
                    )
                    outer_parts = t.parts[:i] + (glued,) + t.parts[j:]
                    ins = out.box_in_wires(b)
                    nb = out.add_box(Box(Merge(inner_parts), inner_parts, (glued,)))
                    for k, wk in enumerate(ins[i:j]):
                        out.wire_cons[wk] = ("box", nb, k)
                    wg = out.fresh_wire(glued)
                    out.wire_prod[wg] = ("box", nb, 0)
                    out.wire_cons[wg] = ("box", b, i)
                    for k, wk in enumerate(ins[:i]):
                        out.wire_cons[wk] = ("box", b, k)
                    for k, wk in enumerate(ins[j:]):
                        out.wire_cons[wk] = ("box", b, i + 1 + k)
                    out.boxes[b] = Box(Merge(outer_parts), outer_parts, out.boxes[b].outs)
                    if not out.check_tree():
                        return None
                    return out

                yield NetMatch("D1", (b, i, j), (b,), apply)


def _match_e6_rev(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Split) and len(t.parts) >= 3):
            continue
        n = len(t.parts)
        for i in range(n):
            for j in range(i + 2, n + 1):
                if j - i == n:
                    continue

                def apply(b=b, i=i, j=j, t=t):
                    out = net.copy()
                    inner_parts = t.parts[i:j]
                    glued = _h(
                        Word(*itertools.chain.from_iterable(p.dom.factors for p in inner_parts)),
                        Word(*itertools.chain.from_iterable(p.cod.factors for p in inner_parts)),
                    )
                    outer_parts = t.parts[:i] + (glued,) + t.parts[j:]
                    outs = out.box_out_wires(b)
                    nb = out.add_box(Box(Split(inner_parts), (glued,), inner_parts))
                    for k, wk in enumerate(outs[i:j]):
                        out.wire_prod[wk] = ("box", nb, k)
                    wg = out.fresh_wire(glued)
                    out.wire_prod[wg] = ("box", b, i)
                    out.wire_cons[wg] = ("box", nb, 0)
                    for k, wk in enumerate(outs[:i]):
                        out.wire_prod[wk] = ("box", b, k)
                    for k, wk in enumerate(outs[j:]):
                        out.wire_prod[wk] = ("box", b, i + 1 + k)
                    out.boxes[b] = Box(Split(outer_parts), out.boxes[b].ins, outer_parts)
                    if not out.check_tree():
                        return None
                    return out

                yield NetMatch("E6", (b, i, j), (b,), apply)


def _match_e1_rev(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, SeqM):
            continue
        w = net.box_out_wires(b)[0]
        c = net.wire_cons[w]
        if c[0] != "box" or c[2] != 1:
            continue
        cb = c[1]
        ct = net.boxes[cb].term
        if not isinstance(ct, SeqM):
            continue
        # b = SeqM(x, y, d) into port 1 of cb = SeqM(a, x, d)
        x, y, d = box.term.a, box.term.b, box.term.c
        a = ct.a

        def apply(b=b, cb=cb, w=w, a=a, x=x, y=y, d=d):
            out = net.copy()
            b_ins = out.box_in_wires(b)
            c_ins = out.box_in_wires(cb)
            out.boxes[b] = Box(SeqM(a, x, y), (_h(a, x), _h(x, y)), (_h(a, y),))
            out.boxes[cb] = Box(SeqM(a, y, d), (_h(a, y), _h(y, d)), (_h(a, d),))
            out.wire_cons[c_ins[0]] = ("box", b, 0)
            out.wire_cons[b_ins[0]] = ("box", b, 1)
            out.wire_cons[b_ins[1]] = ("box", cb, 1)
            out.wire_type[w] = _h(a, y)
            out.wire_cons[w] = ("box", cb, 0)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E1", (b, cb), (b, cb), apply)


def _match_e3_rev(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not (isinstance(t, Merge) and len(t.parts) == 2):
            continue
        ins = net.box_in_wires(b)
        pa = net.wire_prod[ins[0]]
        pb = net.wire_prod[ins[1]]
        if pa[0] != "box" or pb[0] != "box":
            continue
        s1, s2 = pa[1], pb[1]
        t1, t2 = net.boxes[s1].term, net.boxes[s2].term
        if not (isinstance(t1, SeqM) and isinstance(t2, SeqM)):
            continue

        def apply(b=b, s1=s1, s2=s2, t1=t1, t2=t2, ins=ins):
            out = net.copy()
            s1_ins = out.box_in_wires(s1)
            s2_ins = out.box_in_wires(s2)
            outw = out.box_out_wires(b)[0]
            xa, ya = _h(t1.a, t1.b), _h(t1.b, t1.c)
            xb, yb = _h(t2.a, t2.b), _h(t2.b, t2.c)
            m0_parts = (xa, xb)
            m1_parts = (ya, yb)
            # s1 becomes the first merge, s2 the second, b the sequencer
            out.boxes[s1] = Box(Merge(m0_parts), m0_parts, (_h(t1.a @ t2.a, t1.b @ t2.b),))
            out.boxes[s2] = Box(Merge(m1_parts), m1_parts, (_h(t1.b @ t2.b, t1.c @ t2.c),))
            out.wire_cons[s1_ins[0]] = ("box", s1, 0)
            out.wire_cons[s2_ins[0]] = ("box", s1, 1)
            out.wire_cons[s1_ins[1]] = ("box", s2, 0)
            out.wire_cons[s2_ins[1]] = ("box", s2, 1)
            for w in ins:
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
            w1 = out.fresh_wire(_h(t1.a @ t2.a, t1.b @ t2.b))
            w2 = out.fresh_wire(_h(t1.b @ t2.b, t1.c @ t2.c))
            out.wire_prod[w1] = ("box", s1, 0)
            out.wire_cons[w1] = ("box", b, 0)
            out.wire_prod[w2] = ("box", s2, 0)
            out.wire_cons[w2] = ("box", b, 1)
            out.boxes[b] = Box(
                SeqM(t1.a @ t2.a, t1.b @ t2.b, t1.c @ t2.c),
                (_h(t1.a @ t2.a, t1.b @ t2.b), _h(t1.b @ t2.b, t1.c @ t2.c)),
                (out.wire_type[outw],),
            )
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E3", (b,), (b, s1, s2), apply)


SEARCH_MATCHERS = (
    _match_e7a_lr,
    _match_e7a_rl,
    _match_e7b_lr,
    _match_e7b_rl,
    _match_d1_rev,
    _match_e6_rev,
    _match_e1_rev,
    _match_e3_rev,
)


# ---------------------------------------------------------------------------
# decide_equal


@dataclass(frozen=True)
class EqualResult:
    verdict: str  # "equal_by_rewriting" | "distinguished_by_model" | "undecided"
    detail: str
    witness: Optional[dict] = None

    def __bool__(self) -> bool:  # pragma: no cover - convenience only
        return self.verdict == "equal_by_rewriting"


def _normal_net(sig: Signature, term: Term, fuel: int) -> tuple[Net, bool]:
    res = normalize(sig, term, fuel)
    return term_to_net(res.term, sig), res.fuel_exhausted


def _search_frontier(sig: Signature, net: Net, fuel_left: list[int]) -> Iterable[Net]:
    for m in find_matches(net, sig, SEARCH_MATCHERS):
        if fuel_left[0] <= 0:
            return
        res = m.apply()
        if res is None:
            continue
        fuel_left[0] -= 1
        yield res


def decide_equal(
    sig: Signature,
    s: Term,
    t: Term,
    *,
    fuel: int = DEFAULT_FUEL,
    search_depth: int = 3,
    search_cap: int = 400,
    dim_bound: int = 2,
    float_samples: int = 8,
    seed: int = 0,
) -> EqualResult:
    """Three-valued equality: rewrite, then search, then models.

    Both terms must have the same arity type (checked).  The search explores
    re-associations (Frobenius slides and un-flattening) around the directed
    normal forms, renormalising after each move; the model sweep enumerates
    Boolean assignments over the symbols that occur, plus seeded float
    assignments.
    """
    st = typecheck(s, sig)
    tt = typecheck(t, sig)
    if st != tt:
        raise HocircError("type-mismatch", f"cannot compare {st} with {tt}")

    ns, ex_s = _normal_net(sig, s, fuel)
    nt, ex_t = _normal_net(sig, t, fuel)
    if canonical_key(ns) == canonical_key(nt):
        return EqualResult("equal_by_rewriting", "normal forms coincide")

    # bounded bidirectional search over undirected moves
    seen_s = {canonical_key(ns): 0}
    seen_t = {canonical_key(nt): 0}
    frontier_s, frontier_t = [ns], [nt]
    budget = [search_cap]
    for depth in range(1, search_depth + 1):
        for frontier, seen, other in (
            (frontier_s, seen_s, seen_t),
            (frontier_t, seen_t, seen_s),
        ):
            new: list[Net] = []
            for net in frontier:
                for child in _search_frontier(sig, net, budget):
                    cterm = net_to_term(child)
                    cres = normalize(sig, cterm, fuel)
                    cnet = term_to_net(cres.term, sig)
                    key = canonical_key(cnet)
                    if key in seen:
                        continue
                    seen[key] = depth
                    if key in other:
                        return EqualResult(
                            "equal_by_rewriting",
                            f"joined by undirected search at depth {depth}",
                        )
                    new.append(cnet)
            frontier[:] = new
        if budget[0] <= 0:
            break

    # model sweep
    bs, ps = gen_names(s)
    bt, pt_ = gen_names(t)
    base_used, poly_used = tuple(sorted(bs | bt)), tuple(sorted(ps | pt_))
    objs = tuple(sorted(objects_in(s, sig) | objects_in(t, sig)))
    total = count_boolean_assignments(sig, dim_bound, objects=objs, gens=base_used, polygens=poly_used)
    assignments: Iterable[ModelAssignment]
    if total <= enumeration_ceiling():
        assignments = enumerate_boolean_assignments(
            sig, dim_bound, objects=objs, gens=base_used, polygens=poly_used
        )
    else:
        rng = make_rng(seed)
        assignments = (
            _random_bool_assignment(sig, dim_bound, rng, objs, base_used, poly_used)
            for _ in range(256)
        )
    for a in assignments:
        ms = eval_poly(s, sig, a)
        mt = eval_poly(t, sig, a)
        if not a.semiring.mat_eq(ms.data, mt.data):
            return EqualResult(
                "distinguished_by_model",
                f"Boolean assignment with dims {a.dims} separates the terms",
                witness=_describe(a),
            )
    rng = make_rng(seed + 1)
    for _ in range(float_samples):
        dims = {o: int(rng.integers(1, dim_bound + 1)) for o in sig.objects}
        a = random_float_assignment(sig, dims, rng, gens=base_used, polygens=poly_used)
        ms = eval_poly(s, sig, a)
        mt = eval_poly(t, sig, a)
        if not a.semiring.mat_eq(ms.data, mt.data):
            return EqualResult(
                "distinguished_by_model",
                f"float assignment with dims {a.dims} separates the terms",
                witness=_describe(a),
            )
    exhausted = " (rewriting fuel exhausted)" if ex_s or ex_t else ""
    return EqualResult("undecided", "no join found and no separating model" + exhausted)


def _random_bool_assignment(sig, dim_bound, rng, objs, gens, polygens) -> ModelAssignment:
    from .matmodel import BOOL, hom_factor_dims, space_dim, word_dim

    dims = {o: int(rng.integers(1, dim_bound + 1)) for o in sig.objects}
    gen_mats = {}
    for name in gens:
        d, c = sig.gen_type(name)
        gen_mats[name] = rng.integers(0, 2, size=(word_dim(c, dims), word_dim(d, dims))).astype(bool)
    poly_mats = {}
    for name in polygens:
        pt = sig.polygen_type(name)
        poly_mats[name] = rng.integers(
            0, 2, size=(space_dim(pt.outputs, dims), space_dim(pt.inputs, dims))
        ).astype(bool)
    return ModelAssignment(BOOL, dims, gen_mats, poly_mats)


def _describe(a: ModelAssignment) -> dict:
    return {
        "semiring": a.semiring.name,
        "dims": dict(a.dims),
        "gens": {k: np.asarray(v).tolist() for k, v in a.gen_mats.items()},
        "polygens": {k: np.asarray(v).tolist() for k, v in a.polygen_mats.items()},
    }
