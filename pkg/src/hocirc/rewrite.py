"""Directed rewriting on wiring networks.

Rules match small box patterns in a :class:`~hocirc.network.Net` and patch
them in place.  Every application is guarded: a patch that would leave a
non-tree network (a cycle, a disconnection, juxtaposed components) is
rejected, because such a graph no longer denotes a term.

The directed system orients the equational theory toward a merge-outermost
normal form:

* bookkeeping ("lift-id", "base-canon", "unary-split", "unary-merge",
  "lift-fuse-seq", "lift-fuse-par") folds composite first-order content into
  single lifted boxes;
* unit and copy laws (E4L, E4R, E5, E8) delete identity states;
* cancellation (E10) removes merge/split pairs;
* braid elimination (E9 on splits, D2 on merges) absorbs permutation
  sandwiches into port reorderings;
* sequencing is right-associated (E1), interchange pushes merges past
  sequential composition (E3), parallel boxes become binary merges (D3), and
  nested merges/splits flatten (D1, E6).

Each rule strictly decreases a lexicographic size measure (parallel boxes,
merges, splits, box count, left-nested sequencing pairs, lifted-term size),
so the system terminates; ``normalize`` carries a fuel bound anyway.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .basecanon import base_canon, is_permutation_term, perm_of_base
from .network import Box, Net, canonical_box_order, canonical_key, net_to_term, term_to_net
from .signature import EMPTY, HomType, Signature, Word
from .terms import (
    BCompose,
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
    SeqM,
    Split,
    Term,
    typecheck,
)


@dataclass
class NetMatch:
    rule: str
    anchor: tuple
    patch_boxes: tuple[int, ...]
    apply: Callable[[], Optional[Net]]


def _producer_box(net: Net, w: int) -> Optional[int]:
    p = net.wire_prod[w]
    return p[1] if p[0] == "box" else None


def _consumer_box(net: Net, w: int) -> Optional[int]:
    c = net.wire_cons[w]
    return c[1] if c[0] == "box" else None


def _replace_atom(net: Net, b: int, term: Term, ins: tuple[HomType, ...], outs: tuple[HomType, ...]) -> Net:
    out = net.copy()
    out.boxes[b] = Box(term, ins, outs)
    return out


def _delete_box_fusing(net: Net, b: int, pairs: list[tuple[int, int]], extra_dead: tuple[int, ...] = ()) -> Optional[Net]:
    """Delete ``b`` (and ``extra_dead``), fusing each (in_wire, out_wire) pair.

    The fused wire keeps the in-wire's producer and takes the out-wire's
    consumer.  Returns None when the result is not tree-shaped.
    """
    out = net.copy()
    for win, wout in pairs:
        out.wire_cons[win] = out.wire_cons.pop(wout)
        out.wire_prod.pop(wout, None)
        del out.wire_type[wout]
        out.open_outs = [win if w == wout else w for w in out.open_outs]
    dead = set((b,) + extra_dead)
    for d in dead:
        del out.boxes[d]
    for w in list(out.wire_type):
        ends = (out.wire_prod.get(w), out.wire_cons.get(w))
        gone = [e is not None and e[0] == "box" and e[1] in dead for e in ends]
        if all(gone):
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
        elif any(gone):
            return None
    if not out.check_tree():
        return None
    return out


def _is_idst(net: Net, b: Optional[int], word: Optional[Word] = None) -> bool:
    if b is None:
        return False
    t = net.boxes[b].term
    return isinstance(t, IdSt) and (word is None or t.a == word)


# ---------------------------------------------------------------------------
# rule matchers
#
# Each matcher takes (net, sig) and yields NetMatch objects.  The anchor is a
# tuple of canonical positions used for deterministic ordering.


def _match_e10(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, Merge):
            continue
        w = net.box_out_wires(b)[0]
        c = _consumer_box(net, w)
        if c is None:
            continue
        ct = net.boxes[c].term
        if not (isinstance(ct, Split) and ct.parts == box.term.parts):
            continue
        m_ins = net.box_in_wires(b)
        s_outs = net.box_out_wires(c)

        def apply(b=b, c=c, w=w, m_ins=m_ins, s_outs=s_outs):
            out = net.copy()
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            del out.boxes[b]
            del out.boxes[c]
            for win, wout in zip(m_ins, s_outs):
                out.wire_cons[win] = out.wire_cons.pop(wout)
                del out.wire_type[wout]
                out.open_outs = [win if x == wout else x for x in out.open_outs]
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E10", (b, c), (b, c), apply)


def _match_unary(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, (Split, Merge)) and len(t.parts) == 1:
            name = "unary-split" if isinstance(t, Split) else "unary-merge"
            win = net.box_in_wires(b)[0]
            wout = net.box_out_wires(b)[0]
            if (
                isinstance(t, Split)
                and net.wire_prod[win][0] == "in"
                and net.wire_cons[wout][0] == "out"
            ):
                # the whole net is this one box: it already is the canonical
                # identity term, so deleting it would not make progress
                continue
            yield NetMatch(name, (b,), (b,), lambda b=b, win=win, wout=wout: _delete_box_fusing(net, b, [(win, wout)]))


def _match_lift_id(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, Lift) and isinstance(t.base, BId):
            w = t.base.word
            yield NetMatch(
                "lift-id", (b,), (b,),
                lambda b=b, w=w: _replace_atom(net, b, IdSt(w), (), (HomType(w, w),)),
            )


def _match_base_canon(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not isinstance(t, Lift):
            continue
        c = base_canon(t.base, sig)
        if c != t.base:
            yield NetMatch(
                "base-canon", (b,), (b,),
                lambda b=b, c=c, box=box: _replace_atom(net, b, Lift(c), box.ins, box.outs),
            )


def _match_e4(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, SeqM):
            continue
        ins = net.box_in_wires(b)
        wout = net.box_out_wires(b)[0]
        p0 = _producer_box(net, ins[0])
        p1 = _producer_box(net, ins[1])
        if box.term.a == box.term.b and _is_idst(net, p0, box.term.a):
            yield NetMatch(
                "E4L", (b,), (b, p0),
                lambda b=b, p=p0, win=ins[1], wout=wout: _delete_box_fusing(net, b, [(win, wout)], (p,)),
            )
        if box.term.b == box.term.c and _is_idst(net, p1, box.term.b):
            yield NetMatch(
                "E4R", (b,), (b, p1),
                lambda b=b, p=p1, win=ins[0], wout=wout: _delete_box_fusing(net, b, [(win, wout)], (p,)),
            )


def _match_e5(net: Net, sig: Signature):
    unit = HomType(EMPTY, EMPTY)
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, ParM):
            ins = net.box_in_wires(b)
            wout = net.box_out_wires(b)[0]
            if t.a == EMPTY and t.a2 == EMPTY and _is_idst(net, _producer_box(net, ins[0]), EMPTY):
                p = _producer_box(net, ins[0])
                yield NetMatch("E5", (b, 0), (b, p),
                               lambda b=b, p=p, win=ins[1], wout=wout: _delete_box_fusing(net, b, [(win, wout)], (p,)))
            if t.b == EMPTY and t.b2 == EMPTY and _is_idst(net, _producer_box(net, ins[1]), EMPTY):
                p = _producer_box(net, ins[1])
                yield NetMatch("E5", (b, 1), (b, p),
                               lambda b=b, p=p, win=ins[0], wout=wout: _delete_box_fusing(net, b, [(win, wout)], (p,)))
        elif isinstance(t, Merge) and len(t.parts) >= 2:
            ins = net.box_in_wires(b)
            for k, part in enumerate(t.parts):
                if part != unit:
                    continue
                p = _producer_box(net, ins[k])
                if not _is_idst(net, p, EMPTY):
                    continue

                def apply(b=b, p=p, k=k, t=t, ins=ins):
                    out = net.copy()
                    parts = t.parts[:k] + t.parts[k + 1 :]
                    del out.boxes[p]
                    dead = ins[k]
                    del out.wire_type[dead]
                    out.wire_prod.pop(dead, None)
                    out.wire_cons.pop(dead, None)
                    out.boxes[b] = Box(Merge(parts), out.boxes[b].ins[:k] + out.boxes[b].ins[k + 1 :], out.boxes[b].outs)
                    for w2, cc in list(out.wire_cons.items()):
                        if cc[0] == "box" and cc[1] == b and cc[2] > k:
                            out.wire_cons[w2] = ("box", b, cc[2] - 1)
                    if not out.check_tree():
                        return None
                    return out

                yield NetMatch("E5", (b, 2 + k), (b, p), apply)


def _match_e8(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, ParM):
            parts = (HomType(t.a, t.a2), HomType(t.b, t.b2))
        elif isinstance(t, Merge) and len(t.parts) >= 2:
            parts = t.parts
        else:
            continue
        ins = net.box_in_wires(b)
        prods = [_producer_box(net, w) for w in ins]
        if not all(p is not None and _is_idst(net, p) and h.dom == h.cod for p, h in zip(prods, parts)):
            continue
        word = Word(*itertools.chain.from_iterable(h.dom.factors for h in parts))

        def apply(b=b, prods=prods, ins=ins, word=word):
            out = net.copy()
            for p, w in zip(prods, ins):
                del out.boxes[p]
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
            out.boxes[b] = Box(IdSt(word), (), out.boxes[b].outs)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E8", (b,), (b,) + tuple(prods), apply)


def _lift_of(net: Net, b: Optional[int]) -> Optional[BaseTerm]:
    """Base term of a Lift or IdSt box (IdSt counts as a lifted identity)."""
    if b is None:
        return None
    t = net.boxes[b].term
    if isinstance(t, Lift):
        return t.base
    if isinstance(t, IdSt):
        return BId(t.a)
    return None


def _match_lift_fuse_seq(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, SeqM):
            continue
        ins = net.box_in_wires(b)
        p0, p1 = _producer_box(net, ins[0]), _producer_box(net, ins[1])
        f, g = _lift_of(net, p0), _lift_of(net, p1)
        if f is None or g is None:
            continue
        if isinstance(net.boxes[p0].term, IdSt) or isinstance(net.boxes[p1].term, IdSt):
            continue  # unit deletion (E4) reports those
        fused = BCompose(f, g)

        def apply(b=b, p0=p0, p1=p1, ins=ins, fused=fused, box=box):
            out = net.copy()
            for p, w in ((p0, ins[0]), (p1, ins[1])):
                del out.boxes[p]
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
            out.boxes[b] = Box(Lift(fused), (), box.outs)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("lift-fuse-seq", (b,), (b, p0, p1), apply)


def _match_lift_fuse_par(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, ParM):
            n = 2
        elif isinstance(t, Merge):
            n = len(t.parts)
            if n < 2:
                continue
        else:
            continue
        ins = net.box_in_wires(b)
        prods = [_producer_box(net, w) for w in ins]
        bases = [_lift_of(net, p) for p in prods]
        if any(x is None for x in bases):
            continue
        if all(isinstance(net.boxes[p].term, IdSt) for p in prods):
            continue  # that is E8
        fused = bases[0]
        for x in bases[1:]:
            fused = BTensor(fused, x)

        def apply(b=b, prods=prods, ins=ins, fused=fused, box=box):
            out = net.copy()
            for p, w in zip(prods, ins):
                del out.boxes[p]
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
            out.boxes[b] = Box(Lift(fused), (), box.outs)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("lift-fuse-par", (b,), (b,) + tuple(prods), apply)


def _match_e1(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, SeqM):
            continue
        w = net.box_out_wires(b)[0]
        c = _consumer_box(net, w)
        if c is None:
            continue
        cc = net.boxes[c].term
        if not isinstance(cc, SeqM):
            continue
        if net.wire_cons[w][2] != 0:
            continue
        # b = SeqM(a, x, y) feeding c = SeqM(a, y, d) at port 0
        a, x, y = box.term.a, box.term.b, box.term.c
        d = cc.c

        def apply(b=b, c=c, w=w, a=a, x=x, y=y, d=d):
            out = net.copy()
            b_ins = out.box_in_wires(b)
            c_ins = out.box_in_wires(c)
            out.boxes[b] = Box(SeqM(x, y, d), (HomType(x, y), HomType(y, d)), (HomType(x, d),))
            out.boxes[c] = Box(SeqM(a, x, d), (HomType(a, x), HomType(x, d)), (HomType(a, d),))
            out.wire_cons[b_ins[0]] = ("box", c, 0)
            out.wire_cons[b_ins[1]] = ("box", b, 0)
            out.wire_cons[c_ins[1]] = ("box", b, 1)
            out.wire_type[w] = HomType(x, d)
            # w stays b -> c but now enters port 1
            out.wire_cons[w] = ("box", c, 1)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E1", (b, c), (b, c), apply)


def _match_d3(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        t = box.term
        if not isinstance(t, ParM):
            continue
        parts = (HomType(t.a, t.a2), HomType(t.b, t.b2))
        yield NetMatch(
            "D3", (b,), (b,),
            lambda b=b, parts=parts, box=box: _replace_atom(net, b, Merge(parts), box.ins, box.outs),
        )


def _match_d1(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, Merge):
            continue
        w = net.box_out_wires(b)[0]
        c = _consumer_box(net, w)
        if c is None:
            continue
        ct = net.boxes[c].term
        if not isinstance(ct, Merge):
            continue
        k = net.wire_cons[w][2]

        def apply(b=b, c=c, w=w, k=k, box=box, ct=ct):
            out = net.copy()
            parts = ct.parts[:k] + box.term.parts + ct.parts[k + 1 :]
            inner = len(box.term.parts)
            b_ins = out.box_in_wires(b)
            # shift consumer ports of c after k by inner-1
            for w2, cc in list(out.wire_cons.items()):
                if cc[0] == "box" and cc[1] == c and cc[2] > k:
                    out.wire_cons[w2] = ("box", c, cc[2] + inner - 1)
            for idx, w2 in enumerate(b_ins):
                out.wire_cons[w2] = ("box", c, k + idx)
            del out.boxes[b]
            del out.wire_type[w]
            out.wire_prod.pop(w, None)
            out.wire_cons.pop(w, None)
            ins = tuple(parts)
            out.boxes[c] = Box(Merge(parts), ins, out.boxes[c].outs)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("D1", (b, c), (b, c), apply)


def _match_e6(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, Split):
            continue
        for k, w in enumerate(net.box_out_wires(b)):
            c = _consumer_box(net, w)
            if c is None:
                continue
            ct = net.boxes[c].term
            if not isinstance(ct, Split):
                continue

            def apply(b=b, c=c, w=w, k=k, box=box, ct=ct):
                out = net.copy()
                parts = box.term.parts[:k] + ct.parts + box.term.parts[k + 1 :]
                inner = len(ct.parts)
                c_outs = out.box_out_wires(c)
                for w2, pp in list(out.wire_prod.items()):
                    if pp[0] == "box" and pp[1] == b and pp[2] > k:
                        out.wire_prod[w2] = ("box", b, pp[2] + inner - 1)
                for idx, w2 in enumerate(c_outs):
                    out.wire_prod[w2] = ("box", b, k + idx)
                del out.boxes[c]
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
                out.boxes[b] = Box(Split(parts), out.boxes[b].ins, tuple(parts))
                if not out.check_tree():
                    return None
                return out

            yield NetMatch("E6", (b, k), (b, c), apply)


def _block_perm(words: list[Word], order: list[int]) -> tuple[int, ...]:
    """Factor permutation sending concat(words) to concat(words[order])."""
    starts = []
    n = 0
    for wd in words:
        starts.append(n)
        n += len(wd)
    out = []
    for k in order:
        out.extend(range(starts[k], starts[k] + len(words[k])))
    return tuple(out)


def _perm_lift(net: Net, b: Optional[int]):
    base = _lift_of(net, b)
    if base is None or not is_permutation_term(base):
        return None
    return base


def _sandwich_above(net: Net, w: int):
    """Match a rotated permutation sandwich producing wire ``w``.

    Returns (source_wire, pre, post, boxes): the sandwich turns the hom at
    ``source_wire`` into the one at ``w`` by pre-composing with the base
    permutation ``pre`` and post-composing with ``post``.  Either half may be
    missing (an identity that earlier steps already deleted); the returned
    base term is then a ``BId`` and ``boxes`` lists only what is present.
    """
    u = _producer_box(net, w)
    if u is None or not isinstance(net.boxes[u].term, SeqM):
        return None
    u_ins = net.box_in_wires(u)
    pre = _perm_lift(net, _producer_box(net, u_ins[0]))
    if pre is not None:
        v = _producer_box(net, u_ins[1])
        if v is not None and isinstance(net.boxes[v].term, SeqM):
            v_ins = net.box_in_wires(v)
            post = _perm_lift(net, _producer_box(net, v_ins[1]))
            if post is not None:
                boxes = (u, _producer_box(net, u_ins[0]), v, _producer_box(net, v_ins[1]))
                return v_ins[0], pre, post, boxes
        # pre half only; the post permutation is an identity
        boxes = (u, _producer_box(net, u_ins[0]))
        return u_ins[1], pre, BId(net.boxes[u].term.c), boxes
    post = _perm_lift(net, _producer_box(net, u_ins[1]))
    if post is not None:
        boxes = (u, _producer_box(net, u_ins[1]))
        return u_ins[0], BId(net.boxes[u].term.a), post, boxes
    return None


def _match_e9_d2(net: Net, sig: Signature):
    # E9: permutation sandwich feeding a Split -> reorder split parts
    for b, box in net.boxes.items():
        t = box.term
        if isinstance(t, Split):
            found = _sandwich_above(net, net.box_in_wires(b)[0])
            if found is None:
                continue
            source, pre, post, sand = found
            parts = list(t.parts)
            n = len(parts)
            doms = [h.dom for h in parts]
            cods = [h.cod for h in parts]
            sigma_pre = perm_of_base(pre, sig)[1]
            sigma_post = perm_of_base(post, sig)[1]
            hit = None
            for order in itertools.permutations(range(n)):
                if _block_perm(doms, list(order)) != sigma_pre:
                    continue
                if _block_perm([cods[k] for k in order], list(_inverse(order))) != sigma_post:
                    continue
                hit = order
                break
            if hit is None or hit == tuple(range(n)):
                continue

            def apply(b=b, source=source, sand=sand, parts=parts, hit=hit):
                out = net.copy()
                new_parts = tuple(parts[k] for k in hit)
                outs = out.box_out_wires(b)
                out.wire_cons[source] = ("box", b, 0)
                for d in sand:
                    del out.boxes[d]
                for wx in [wv for wv in out.wire_type if _dead_wire(out, wv)]:
                    del out.wire_type[wx]
                    out.wire_prod.pop(wx, None)
                    out.wire_cons.pop(wx, None)
                out.boxes[b] = Box(Split(new_parts), (out.wire_type[source],), new_parts)
                for m, k in enumerate(hit):
                    out.wire_prod[outs[k]] = ("box", b, m)
                if not out.check_tree():
                    return None
                return out

            yield NetMatch("E9", (b,), (b,) + sand, apply)
        elif isinstance(t, Merge):
            wout = net.box_out_wires(b)[0]
            found = _sandwich_below(net, wout)
            if found is None:
                continue
            target, pre, post, sand = found
            parts = list(t.parts)
            n = len(parts)
            doms = [h.dom for h in parts]
            cods = [h.cod for h in parts]
            sigma_pre = perm_of_base(pre, sig)[1]
            sigma_post = perm_of_base(post, sig)[1]
            hit = None
            for order in itertools.permutations(range(n)):
                if _block_perm([doms[k] for k in order], list(_inverse(order))) != sigma_pre:
                    continue
                if _block_perm(cods, list(order)) != sigma_post:
                    continue
                hit = order
                break
            if hit is None or hit == tuple(range(n)):
                continue

            def apply(b=b, target=target, sand=sand, parts=parts, hit=hit):
                out = net.copy()
                new_parts = tuple(parts[k] for k in hit)
                ins = out.box_in_wires(b)
                out.wire_prod[target] = ("box", b, 0)
                for d in sand:
                    del out.boxes[d]
                for wx in [wv for wv in out.wire_type if _dead_wire(out, wv)]:
                    del out.wire_type[wx]
                    out.wire_prod.pop(wx, None)
                    out.wire_cons.pop(wx, None)
                out.boxes[b] = Box(Merge(new_parts), new_parts, (out.wire_type[target],))
                for m, k in enumerate(hit):
                    out.wire_cons[ins[k]] = ("box", b, m)
                if not out.check_tree():
                    return None
                return out

            yield NetMatch("D2", (b,), (b,) + sand, apply)


def _dead_wire(net: Net, w: int) -> bool:
    for e in (net.wire_prod.get(w), net.wire_cons.get(w)):
        if e is not None and e[0] == "box" and e[1] not in net.boxes:
            return True
    return False


def _sandwich_below(net: Net, w: int):
    """Match a rotated permutation sandwich consuming wire ``w``.

    Mirror of :func:`_sandwich_above`, tolerating a missing half the same
    way; returns (target_wire, pre, post, boxes).
    """
    v = _consumer_box(net, w)
    if v is None or not isinstance(net.boxes[v].term, SeqM):
        return None
    port = net.wire_cons[w][2]
    v_ins = net.box_in_wires(v)
    if port == 0:
        post = _perm_lift(net, _producer_box(net, v_ins[1]))
        if post is None:
            return None
        vo = net.box_out_wires(v)[0]
        u = _consumer_box(net, vo)
        if (
            u is not None
            and isinstance(net.boxes[u].term, SeqM)
            and net.wire_cons[vo][2] == 1
        ):
            u_ins = net.box_in_wires(u)
            pre = _perm_lift(net, _producer_box(net, u_ins[0]))
            if pre is not None:
                target = net.box_out_wires(u)[0]
                boxes = (v, _producer_box(net, v_ins[1]), u, _producer_box(net, u_ins[0]))
                return target, pre, post, boxes
        # post half only; the pre permutation is an identity
        boxes = (v, _producer_box(net, v_ins[1]))
        return vo, BId(net.boxes[v].term.a), post, boxes
    if port == 1:
        pre = _perm_lift(net, _producer_box(net, v_ins[0]))
        if pre is None:
            return None
        boxes = (v, _producer_box(net, v_ins[0]))
        return net.box_out_wires(v)[0], pre, BId(net.boxes[v].term.c), boxes
    return None


def _inverse(order) -> tuple[int, ...]:
    inv = [0] * len(order)
    for m, k in enumerate(order):
        inv[k] = m
    return tuple(inv)


def _match_e3(net: Net, sig: Signature):
    for b, box in net.boxes.items():
        if not isinstance(box.term, SeqM):
            continue
        ins = net.box_in_wires(b)
        m0 = _producer_box(net, ins[0])
        m1 = _producer_box(net, ins[1])
        if m0 is None or m1 is None:
            continue
        t0, t1 = net.boxes[m0].term, net.boxes[m1].term
        if not (isinstance(t0, Merge) and isinstance(t1, Merge)):
            continue
        if len(t0.parts) != 2 or len(t1.parts) != 2:
            continue
        (xa, xb), (ya, yb) = t0.parts, t1.parts
        # middle word must split identically on both sides
        if (xa.cod, xb.cod) != (ya.dom, yb.dom):
            continue

        def apply(b=b, m0=m0, m1=m1, ins=ins, xa=xa, xb=xb, ya=ya, yb=yb, box=box):
            out = net.copy()
            s1 = out.add_box(Box(SeqM(xa.dom, xa.cod, ya.cod), (xa, ya), (HomType(xa.dom, ya.cod),)))
            s2 = out.add_box(Box(SeqM(xb.dom, xb.cod, yb.cod), (xb, yb), (HomType(xb.dom, yb.cod),)))
            m0_ins = out.box_in_wires(m0)
            m1_ins = out.box_in_wires(m1)
            out.wire_cons[m0_ins[0]] = ("box", s1, 0)
            out.wire_cons[m1_ins[0]] = ("box", s1, 1)
            out.wire_cons[m0_ins[1]] = ("box", s2, 0)
            out.wire_cons[m1_ins[1]] = ("box", s2, 1)
            parts = (HomType(xa.dom, ya.cod), HomType(xb.dom, yb.cod))
            w1 = out.fresh_wire(parts[0])
            w2 = out.fresh_wire(parts[1])
            out.wire_prod[w1] = ("box", s1, 0)
            out.wire_cons[w1] = ("box", b, 0)
            out.wire_prod[w2] = ("box", s2, 0)
            out.wire_cons[w2] = ("box", b, 1)
            for w in ins:
                del out.wire_type[w]
                out.wire_prod.pop(w, None)
                out.wire_cons.pop(w, None)
            del out.boxes[m0]
            del out.boxes[m1]
            out.boxes[b] = Box(Merge(parts), parts, out.boxes[b].outs)
            if not out.check_tree():
                return None
            return out

        yield NetMatch("E3", (b,), (b, m0, m1), apply)


DIRECTED_MATCHERS = (
    _match_e10,
    _match_unary,
    _match_lift_id,
    _match_base_canon,
    _match_e4,
    _match_e5,
    _match_e8,
    _match_lift_fuse_seq,
    _match_lift_fuse_par,
    _match_e1,
    _match_e9_d2,
    _match_d3,
    _match_e3,
    _match_d1,
    _match_e6,
)


def find_matches(net: Net, sig: Signature, matchers=DIRECTED_MATCHERS) -> list[NetMatch]:
    order = {b: k for k, b in enumerate(canonical_box_order(net))}

    def key(m: NetMatch):
        return tuple(
            (0, order[b]) if b in order else (1, b) for b in m.anchor
        )

    out: list[NetMatch] = []
    for matcher in matchers:
        out.extend(sorted(matcher(net, sig), key=key))
    return out


def step_net(net: Net, sig: Signature, matchers=DIRECTED_MATCHERS) -> Optional[tuple[Net, NetMatch]]:
    for m in find_matches(net, sig, matchers):
        res = m.apply()
        if res is not None:
            return res, m
    return None
