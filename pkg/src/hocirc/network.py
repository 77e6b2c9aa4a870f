"""Wiring networks: composition-invariant form of polymorphism terms.

A term built with :class:`~hocirc.terms.Comp` fixes an arbitrary order of
plugging; the laws of composition say that order is irrelevant.  This module
represents a term as a *network*: atomic boxes joined by hom-typed wires,
with ordered lists of open input and output wires.  Two terms that differ
only by re-bracketing of plugging (or by permutation nodes) map to the same
network, and every network arising from a term can be linearised back to a
canonical term.

Because plugging always joins two disjoint terms along a single wire, the
box adjacency graph of any term network is a tree.  That invariant is what
makes linearisation straightforward (every internal wire is a cut) and it is
checked after every rewrite: a patch that would create a cycle or disconnect
the graph is not a valid polymorphism and is rejected.

Wire endpoints are ``("in", k)`` / ``("out", k)`` for open ports and
``("box", b, p)`` for port ``p`` of box ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import HocircError
from .signature import HomType, PolyType, Signature
from .terms import (
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


class NetError(HocircError):
    pass


@dataclass
class Box:
    term: Term  # atomic constructor only
    ins: tuple[HomType, ...]
    outs: tuple[HomType, ...]


class Net:
    def __init__(self):
        self.boxes: dict[int, Box] = {}
        self.wire_type: dict[int, HomType] = {}
        self.wire_prod: dict[int, tuple] = {}
        self.wire_cons: dict[int, tuple] = {}
        self.open_ins: list[int] = []
        self.open_outs: list[int] = []
        self._next_box = 0
        self._next_wire = 0

    # -- construction ------------------------------------------------------

    def fresh_wire(self, h: HomType) -> int:
        w = self._next_wire
        self._next_wire += 1
        self.wire_type[w] = h
        return w

    def add_box(self, box: Box) -> int:
        b = self._next_box
        self._next_box += 1
        self.boxes[b] = box
        return b

    def box_in_wires(self, b: int) -> list[int]:
        out = [-1] * len(self.boxes[b].ins)
        for w, c in self.wire_cons.items():
            if c[0] == "box" and c[1] == b:
                out[c[2]] = w
        return out

    def box_out_wires(self, b: int) -> list[int]:
        out = [-1] * len(self.boxes[b].outs)
        for w, p in self.wire_prod.items():
            if p[0] == "box" and p[1] == b:
                out[p[2]] = w
        return out

    def copy(self) -> "Net":
        out = Net()
        out.boxes = {b: Box(x.term, x.ins, x.outs) for b, x in self.boxes.items()}
        out.wire_type = dict(self.wire_type)
        out.wire_prod = dict(self.wire_prod)
        out.wire_cons = dict(self.wire_cons)
        out.open_ins = list(self.open_ins)
        out.open_outs = list(self.open_outs)
        out._next_box = self._next_box
        out._next_wire = self._next_wire
        return out

    # -- validity ----------------------------------------------------------

    def check_tree(self) -> bool:
        """True when the box adjacency multigraph is a tree touching all boxes.

        Networks with no boxes are valid only as a single bare wire.
        """
        if not self.boxes:
            return len(self.wire_type) == 1
        internal = [
            w
            for w in self.wire_type
            if self.wire_prod[w][0] == "box" and self.wire_cons[w][0] == "box"
        ]
        if len(internal) != len(self.boxes) - 1:
            return False
        # connectivity over internal wires
        adj: dict[int, list[int]] = {b: [] for b in self.boxes}
        for w in internal:
            adj[self.wire_prod[w][1]].append(self.wire_cons[w][1])
            adj[self.wire_cons[w][1]].append(self.wire_prod[w][1])
        seen = set()
        stack = [next(iter(self.boxes))]
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(adj[b])
        return len(seen) == len(self.boxes)

    def poly_type(self) -> PolyType:
        return PolyType(
            tuple(self.wire_type[w] for w in self.open_ins),
            tuple(self.wire_type[w] for w in self.open_outs),
        )


# ---------------------------------------------------------------------------
# term -> net


_ATOMS = (PGen, Lift, SeqM, ParM, IdSt, Split, Merge)


def term_to_net(t: Term, sig: Signature, paths: dict[int, tuple[int, ...]] | None = None) -> Net:
    """Build the network of ``t``.

    When ``paths`` is given it is filled with, for each box id, the position
    of the corresponding atom in ``t`` (child indices; a plug's two sides are
    children 0 and 1, a permutation wrapper has child 0).
    """
    ptype = typecheck(t, sig)
    net = Net()
    ins, outs = _build(t, ptype, net, sig, paths, ())
    net.open_ins = ins
    net.open_outs = outs
    for k, w in enumerate(ins):
        net.wire_prod[w] = ("in", k)
    for k, w in enumerate(outs):
        net.wire_cons[w] = ("out", k)
    return net


def _build(
    t: Term,
    ptype: PolyType,
    net: Net,
    sig: Signature,
    paths: dict[int, tuple[int, ...]] | None,
    at: tuple[int, ...],
) -> tuple[list[int], list[int]]:
    """Add ``t`` to ``net``; return its dangling in/out wires (ends unset)."""
    if isinstance(t, _ATOMS):
        b = net.add_box(Box(t, tuple(ptype.inputs), tuple(ptype.outputs)))
        if paths is not None:
            paths[b] = at
        ins = []
        for p, h in enumerate(ptype.inputs):
            w = net.fresh_wire(h)
            net.wire_cons[w] = ("box", b, p)
            ins.append(w)
        outs = []
        for p, h in enumerate(ptype.outputs):
            w = net.fresh_wire(h)
            net.wire_prod[w] = ("box", b, p)
            outs.append(w)
        return ins, outs
    if isinstance(t, InPerm):
        inner = typecheck(t.term, sig)
        ins, outs = _build(t.term, inner, net, sig, paths, at + (0,))
        return [ins[k] for k in t.perm], outs
    if isinstance(t, OutPerm):
        inner = typecheck(t.term, sig)
        ins, outs = _build(t.term, inner, net, sig, paths, at + (0,))
        return ins, [outs[k] for k in t.perm]
    if isinstance(t, Comp):
        stype = typecheck(t.s, sig)
        ttype = typecheck(t.t, sig)
        s_ins, s_outs = _build(t.s, stype, net, sig, paths, at + (0,))
        t_ins, t_outs = _build(t.t, ttype, net, sig, paths, at + (1,))
        made = s_outs[t.i]
        used = t_ins[t.j]
        # fuse: the producer of `made` now feeds the consumer of `used`
        net.wire_cons[made] = net.wire_cons.pop(used)
        del net.wire_type[used]
        ins = t_ins[: t.j] + s_ins + t_ins[t.j + 1 :]
        outs = s_outs[: t.i] + t_outs + s_outs[t.i + 1 :]
        return ins, outs
    raise NetError("unknown-term", f"cannot build a net from {t!r}")


# ---------------------------------------------------------------------------
# canonical ordering


def canonical_box_order(net: Net) -> list[int]:
    """Deterministic box order: breadth-first from the open ports.

    Starts from open inputs in order, then open outputs, then (for closed
    nets) the box with the smallest atom representation.
    """
    order: list[int] = []
    seen: set[int] = set()
    queue: list[int] = []

    def visit_box(b: int):
        if b in seen:
            return
        seen.add(b)
        order.append(b)
        queue.append(b)

    for w in net.open_ins:
        c = net.wire_cons[w]
        if c[0] == "box":
            visit_box(c[1])
    for w in net.open_outs:
        p = net.wire_prod[w]
        if p[0] == "box":
            visit_box(p[1])
    i = 0
    while i < len(queue) or len(seen) < len(net.boxes):
        if i >= len(queue):
            rest = sorted(
                (b for b in net.boxes if b not in seen),
                key=lambda b: repr(net.boxes[b].term),
            )
            visit_box(rest[0])
            continue
        b = queue[i]
        i += 1
        for w in net.box_in_wires(b):
            p = net.wire_prod[w]
            if p[0] == "box":
                visit_box(p[1])
        for w in net.box_out_wires(b):
            c = net.wire_cons[w]
            if c[0] == "box":
                visit_box(c[1])
    return order


def canonical_key(net: Net):
    """Hashable form; equal exactly for isomorphic nets with equal port orders."""
    order = canonical_box_order(net)
    pos = {b: k for k, b in enumerate(order)}

    def end_key(e):
        if e[0] == "box":
            return ("b", pos[e[1]], e[2])
        return (e[0], e[1])

    boxes = tuple(
        (
            net.boxes[b].term,
            tuple(end_key(net.wire_prod[w]) for w in net.box_in_wires(b)),
            tuple(end_key(net.wire_cons[w]) for w in net.box_out_wires(b)),
        )
        for b in order
    )
    opens = (
        tuple(end_key(net.wire_cons[w]) for w in net.open_ins),
        tuple(end_key(net.wire_prod[w]) for w in net.open_outs),
    )
    return boxes, opens


# ---------------------------------------------------------------------------
# net -> term


def net_to_term(net: Net) -> Term:
    """Canonical term for a tree network.

    The result has the network's open input/output orders; permutation
    wrappers are added at the top when the recursive composition order does
    not already realise them.
    """
    if not net.boxes:
        if len(net.wire_type) != 1:
            raise NetError("not-representable", "network is not a single term")
        h = next(iter(net.wire_type.values()))
        w = next(iter(net.wire_type))
        term: Term = Split((h,))
        ins, outs = [w], [w]
    else:
        if not net.check_tree():
            raise NetError("not-representable", "network is not tree-shaped")
        order = canonical_box_order(net)
        pos = {b: k for k, b in enumerate(order)}
        term, ins, outs = _linearize(net, set(net.boxes), pos)
    # fix open-port order
    want_ins = list(net.open_ins)
    want_outs = list(net.open_outs)
    if ins != want_ins:
        term = InPerm(term, tuple(ins.index(w) for w in want_ins))
    if outs != want_outs:
        term = OutPerm(term, tuple(outs.index(w) for w in want_outs))
    return term


def _linearize(net: Net, region: set[int], pos: dict[int, int]):
    if len(region) == 1:
        b = next(iter(region))
        return net.boxes[b].term, net.box_in_wires(b), net.box_out_wires(b)
    # choose the canonical cut: internal wire with least (producer pos, port)
    cut = None
    cut_key = None
    for w, p in net.wire_prod.items():
        c = net.wire_cons[w]
        if p[0] == "box" and c[0] == "box" and p[1] in region and c[1] in region:
            key = (pos[p[1]], p[2])
            if cut_key is None or key < cut_key:
                cut, cut_key = w, key
    if cut is None:
        raise NetError("not-representable", "no internal wire to cut")
    pb = net.wire_prod[cut][1]
    # producer side: boxes reachable from pb without crossing the cut wire
    side: set[int] = set()
    stack = [pb]
    while stack:
        b = stack.pop()
        if b in side:
            continue
        side.add(b)
        for w in net.box_in_wires(b) + net.box_out_wires(b):
            if w == cut:
                continue
            for e in (net.wire_prod[w], net.wire_cons[w]):
                if e[0] == "box" and e[1] in region and e[1] not in side:
                    stack.append(e[1])
    other = region - side
    s_term, s_ins, s_outs = _linearize(net, side, pos)
    t_term, t_ins, t_outs = _linearize(net, other, pos)
    i = s_outs.index(cut)
    j = t_ins.index(cut)
    term = Comp(s_term, i, t_term, j)
    ins = t_ins[:j] + s_ins + t_ins[j + 1 :]
    outs = s_outs[:i] + t_outs + s_outs[i + 1 :]
    return term, ins, outs
