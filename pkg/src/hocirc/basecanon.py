"""Canonical forms for base terms.

Generator-free base terms denote nothing but a permutation of wire factors,
so they have a genuine canonical form: the insertion-sort factorization of
that permutation into single-factor adjacent braids.  Terms containing
generators are only lightly normalised (flattened, identity units dropped,
generator-free stretches collapsed); no canonicity is claimed for them.
"""

from __future__ import annotations

from .errors import TermTypeError
from .signature import Signature, Word
from .terms import (
    BaseTerm,
    BBraid,
    BCompose,
    BGen,
    BId,
    BTensor,
    base_typecheck,
)


def is_permutation_term(t: BaseTerm) -> bool:
    """True when ``t`` contains no generators (so it denotes a permutation)."""
    if isinstance(t, (BId, BBraid)):
        return True
    if isinstance(t, BCompose):
        return is_permutation_term(t.first) and is_permutation_term(t.second)
    if isinstance(t, BTensor):
        return is_permutation_term(t.left) and is_permutation_term(t.right)
    return False


def perm_of_base(t: BaseTerm, sig: Signature) -> tuple[Word, tuple[int, ...]]:
    """Underlying factor permutation of a generator-free base term.

    Returns ``(dom, perm)`` with ``out[j] = in[perm[j]]``.
    """
    if isinstance(t, BId):
        return t.word, tuple(range(len(t.word)))
    if isinstance(t, BBraid):
        n, m = len(t.left), len(t.right)
        return t.left @ t.right, tuple(range(n, n + m)) + tuple(range(n))
    if isinstance(t, BCompose):
        dom1, p1 = perm_of_base(t.first, sig)
        _dom2, p2 = perm_of_base(t.second, sig)
        if len(p1) != len(p2):
            raise TermTypeError(
                "composition-type-mismatch", "permutation arity mismatch in base composite"
            )
        return dom1, tuple(p1[p2[j]] for j in range(len(p2)))
    if isinstance(t, BTensor):
        dom1, p1 = perm_of_base(t.left, sig)
        dom2, p2 = perm_of_base(t.right, sig)
        n = len(p1)
        return dom1 @ dom2, p1 + tuple(n + k for k in p2)
    raise TermTypeError("unknown-term", f"not a permutation term: {t!r}")


def perm_to_base(dom: Word, perm: tuple[int, ...]) -> BaseTerm:
    """Canonical braid factorization of ``perm`` on the factors of ``dom``.

    Insertion sort: bring the factor destined for each output position into
    place with adjacent transpositions, left to right.  The identity
    permutation yields ``BId(dom)``.
    """
    n = len(perm)
    if list(perm) == list(range(n)):
        return BId(dom)
    cur = list(range(n))  # cur[p] = input slot currently at position p
    layers: list[BaseTerm] = []
    names = list(dom.factors)
    for j in range(n):
        k = cur.index(perm[j], j)
        while k > j:
            p = k - 1
            left = Word(*(names[cur[q]] for q in range(p)))
            x = Word(names[cur[p]])
            y = Word(names[cur[p + 1]])
            right = Word(*(names[cur[q]] for q in range(p + 2, n)))
            layer: BaseTerm = BBraid(x, y)
            if len(right):
                layer = BTensor(layer, BId(right))
            if len(left):
                layer = BTensor(BId(left), layer)
            layers.append(layer)
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
            k = p
    out = layers[0]
    for layer in layers[1:]:
        out = BCompose(out, layer)
    return out


def _flatten_compose(t: BaseTerm) -> list[BaseTerm]:
    if isinstance(t, BCompose):
        return _flatten_compose(t.first) + _flatten_compose(t.second)
    return [t]


def _flatten_tensor(t: BaseTerm) -> list[BaseTerm]:
    if isinstance(t, BTensor):
        return _flatten_tensor(t.left) + _flatten_tensor(t.right)
    return [t]


def base_canon(t: BaseTerm, sig: Signature) -> BaseTerm:
    """Normalise a base term; canonical on the generator-free fragment."""
    if is_permutation_term(t):
        dom, perm = perm_of_base(t, sig)
        return perm_to_base(dom, perm)

    if isinstance(t, (BId, BGen, BBraid)):
        return t

    if isinstance(t, BTensor):
        factors = [base_canon(f, sig) for f in _flatten_tensor(t)]
        # fuse adjacent identities so [id(u), id(v)] prints once
        fused: list[BaseTerm] = []
        for f in factors:
            if isinstance(f, BId) and fused and isinstance(fused[-1], BId):
                fused[-1] = BId(fused[-1].word @ f.word)
            else:
                fused.append(f)
        out = fused[0]
        for f in fused[1:]:
            out = BTensor(out, f)
        return out

    if isinstance(t, BCompose):
        stages = []
        for s in _flatten_compose(t):
            s = base_canon(s, sig)
            if isinstance(s, BId):
                continue  # identity stages are units
            stages.append(s)
        if not stages:
            dom, _cod = base_typecheck(t, sig)
            return BId(dom)
        # collapse generator-free runs of stages to their canonical braid form
        out_stages: list[BaseTerm] = []
        run: list[BaseTerm] = []

        def flush_run():
            if not run:
                return
            if len(run) == 1:
                out_stages.append(run[0])
            else:
                chain = run[0]
                for s in run[1:]:
                    chain = BCompose(chain, s)
                out_stages.append(base_canon(chain, sig))
            run.clear()

        for s in stages:
            if is_permutation_term(s):
                run.append(s)
            else:
                flush_run()
                out_stages.append(s)
        flush_run()
        if not out_stages:
            dom, _cod = base_typecheck(t, sig)
            return BId(dom)
        out = out_stages[0]
        for s in out_stages[1:]:
            out = BCompose(out, s)
        return out

    raise TermTypeError("unknown-term", f"not a base term: {t!r}")
