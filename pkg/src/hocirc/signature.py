"""Object words, hom types, and signatures.

A signature declares a finite set of base objects, a set of typed base
generators (morphisms between object words), and a set of poly-generators
(morphisms between lists of hom types).  Everything downstream — terms, the
law catalogue, matrix models — is parameterised by a signature.

Words multiply with ``@`` and the empty word is :data:`EMPTY`::

    >>> q, r = Word("q"), Word("r")
    >>> (q @ r) @ q == q @ (r @ q)
    True
    >>> len(q @ EMPTY @ r)
    2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import SignatureError


@dataclass(frozen=True)
class BaseObject:
    """A declared base object, identified by name."""

    name: str

    def __str__(self) -> str:
        return self.name


class Word:
    """A finite sequence of base-object names, the free monoid element.

    Immutable and hashable; concatenation is ``@``.
    """

    __slots__ = ("factors",)

    def __init__(self, *factors: str):
        for f in factors:
            if not isinstance(f, str) or not f:
                raise TypeError(f"word factors must be non-empty strings, got {f!r}")
        object.__setattr__(self, "factors", tuple(factors))

    def __matmul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(*self.factors, *other.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[str]:
        return iter(self.factors)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return Word(*self.factors[k])
        return self.factors[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(("Word", self.factors))

    def __repr__(self) -> str:
        return f"Word({', '.join(repr(f) for f in self.factors)})"

    def __str__(self) -> str:
        return " ".join(self.factors) if self.factors else "I"

    def reverse(self) -> "Word":
        return Word(*reversed(self.factors))

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("Word is immutable")


EMPTY = Word()


def tensor_words(*words: Word) -> Word:
    """Concatenate any number of words (monoid multiplication)."""
    out = EMPTY
    for w in words:
        out = out @ w
    return out


@dataclass(frozen=True)
class HomType:
    """The hom type ``[dom, cod]``: the type of a gap from dom to cod."""

    dom: Word
    cod: Word

    def __str__(self) -> str:
        return f"[{self.dom},{self.cod}]"


def hom(dom: Word, cod: Word) -> HomType:
    return HomType(dom, cod)


@dataclass(frozen=True)
class PolyType:
    """Input and output hom lists of a polymorphism."""

    inputs: tuple[HomType, ...]
    outputs: tuple[HomType, ...]

    def __str__(self) -> str:
        ins = ", ".join(str(h) for h in self.inputs) or "."
        outs = ", ".join(str(h) for h in self.outputs) or "."
        return f"{ins} -> {outs}"


@dataclass(frozen=True)
class Signature:
    """Declared objects, base generators, and poly-generators.

    ``gens`` maps a generator name to its (dom, cod) word pair; ``polygens``
    maps a poly-generator name to its :class:`PolyType`.
    """

    objects: tuple[str, ...] = ()
    gens: tuple[tuple[str, tuple[Word, Word]], ...] = ()
    polygens: tuple[tuple[str, PolyType], ...] = ()
    _gen_map: dict = field(init=False, repr=False, compare=False, hash=False, default=None)
    _polygen_map: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_gen_map", dict(self.gens))
        object.__setattr__(self, "_polygen_map", dict(self.polygens))

    def has_object(self, name: str) -> bool:
        return name in self.objects

    def gen_type(self, name: str) -> tuple[Word, Word]:
        try:
            return self._gen_map[name]
        except KeyError:
            raise SignatureError("undeclared-name", f"base generator {name!r} not declared") from None

    def polygen_type(self, name: str) -> PolyType:
        try:
            return self._polygen_map[name]
        except KeyError:
            raise SignatureError("undeclared-name", f"poly generator {name!r} not declared") from None

    def word(self, *names: str) -> Word:
        """Build a word, checking every factor is declared."""
        w = Word(*names)
        self.check_word(w)
        return w

    def check_word(self, w: Word) -> None:
        for f in w:
            if not self.has_object(f):
                raise SignatureError("undeclared-object", f"object {f!r} not declared")


def validate(sig: Signature) -> None:
    """Check well-formedness: no duplicate names, all words over declared objects.

    Raises :class:`SignatureError` on the first violation; validating twice
    is a no-op (validation has no side effects).
    """
    seen: set[str] = set()
    for name in sig.objects:
        if name in seen:
            raise SignatureError("duplicate-name", f"object {name!r} declared twice")
        seen.add(name)
    for name, (dom, cod) in sig.gens:
        if name in seen:
            raise SignatureError("duplicate-name", f"name {name!r} declared twice")
        seen.add(name)
        sig.check_word(dom)
        sig.check_word(cod)
    for name, ptype in sig.polygens:
        if name in seen:
            raise SignatureError("duplicate-name", f"name {name!r} declared twice")
        seen.add(name)
        for h in ptype.inputs + ptype.outputs:
            sig.check_word(h.dom)
            sig.check_word(h.cod)
