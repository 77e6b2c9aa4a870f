"""Readers and writers for the text formats: signatures, terms, models, families.

Four line-oriented/s-expression formats, all UTF-8 with ``#`` comments:

* signature files — ``object q`` / ``gen f : q q -> q`` / ``polygen S : [q,q] -> [q,q]``
  declarations, ``I`` for the empty word, ``.`` for the empty hom list;
* term files — one s-expression per term, or ``let <name> = <sexp>``
  bindings (later expressions may refer to earlier names by bare atom);
* model files — ``semiring bool|f64``, ``dim <object> <n>``, and
  ``mat <name> <rows>x<cols> <entries...>`` rows-major;
* family files — self-contained tabulations: ``dim`` lines, one ``hole``
  line per hole, a ``target`` line, then
  ``entry <x> <x'> <rxc> <bits...> [...] -> <rxc> <bits...>`` rows, one
  context-group per hole on each entry.

Parsers report failures as :class:`ParseError` with line/column; printers
are deterministic, so writing and re-reading is the identity on content.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ParseError
from .grids import GridConfig
from .holes import CellTable, FunctionFamilyLAT
from .matmodel import ModelAssignment, check_assignment, word_dim
from .semiring import BOOL, F64, Semiring
from .signature import EMPTY, HomType, PolyType, Signature, Word, hom
from .terms import (
    BaseTerm,
    BBraid,
    BCompose,
    BGen,
    BId,
    BTensor,
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
    TypedTerm,
    typed,
)

__all__ = [
    "parse_signature",
    "parse_signature_text",
    "format_signature",
    "parse_term",
    "parse_term_text",
    "parse_corpus",
    "parse_corpus_text",
    "format_term",
    "parse_model",
    "parse_model_text",
    "format_model",
    "parse_family",
    "parse_family_text",
    "format_family",
]


# ---------------------------------------------------------------------------
# signatures


def _clean_lines(text: str) -> Iterator[tuple[int, str]]:
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line


def _parse_word_tokens(tokens: Sequence[str], ln: int) -> Word:
    if not tokens:
        raise ParseError("empty word; write 'I' for the unit", ln)
    if list(tokens) == ["I"]:
        return EMPTY
    for t in tokens:
        if t == "I":
            raise ParseError("'I' cannot appear inside a longer word", ln)
    return Word(*tokens)


def _parse_homlist(text: str, ln: int) -> tuple[HomType, ...]:
    text = text.strip()
    if text == ".":
        return ()
    out = []
    for m in re.finditer(r"\[([^],]*),([^]]*)\]|(\S)", text):
        if m.group(3) is not None:
            if m.group(3) == ",":
                continue
            raise ParseError(f"expected [word,word] items, got {m.group(3)!r}", ln)
        dom = _parse_word_tokens(m.group(1).split(), ln)
        cod = _parse_word_tokens(m.group(2).split(), ln)
        out.append(hom(dom, cod))
    if not out:
        raise ParseError(f"expected a hom list or '.', got {text!r}", ln)
    return tuple(out)


def parse_signature_text(text: str) -> Signature:
    objects: list[str] = []
    gens: dict[str, tuple[Word, Word]] = {}
    polygens: dict[str, object] = {}
    for ln, line in _clean_lines(text):
        head, _, rest = line.partition(" ")
        if head == "object":
            name = rest.strip()
            if not name or " " in name:
                raise ParseError("object wants exactly one name", ln)
            objects.append(name)
        elif head in ("gen", "polygen"):
            m = re.fullmatch(r"(\S+)\s*:\s*(.*?)\s*->\s*(.*)", rest.strip())
            if not m:
                raise ParseError(f"malformed {head} declaration", ln)
            name, lhs, rhs = m.group(1), m.group(2), m.group(3)
            if head == "gen":
                gens[name] = (
                    _parse_word_tokens(lhs.split(), ln),
                    _parse_word_tokens(rhs.split(), ln),
                )
            else:
                polygens[name] = PolyType(_parse_homlist(lhs, ln), _parse_homlist(rhs, ln))
        else:
            raise ParseError(f"unknown declaration {head!r}", ln)
    return Signature(tuple(objects), gens, polygens)  # type: ignore[arg-type]


def parse_signature(path: str) -> Signature:
    with open(path, encoding="utf-8") as fh:
        return parse_signature_text(fh.read())


def format_signature(sig: Signature) -> str:
    lines = [f"object {o}" for o in sig.objects]
    for name, (dom, cod) in sig.gens.items():
        lines.append(f"gen {name} : {dom} -> {cod}")
    for name, pt in sig.polygens.items():
        def hl(hs):
            return ", ".join(f"[{h.dom},{h.cod}]" for h in hs) if hs else "."
        lines.append(f"polygen {name} : {hl(pt.inputs)} -> {hl(pt.outputs)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# s-expression terms


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


_ATOM_END = set(" \t\r\n()[]#")


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    ln, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            ln += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()[]":
            toks.append(_Tok(ch, ln, col))
            i += 1
            col += 1
        else:
            j = i
            while j < len(text) and text[j] not in _ATOM_END:
                j += 1
            toks.append(_Tok(text[i:j], ln, col))
            col += j - i
            i = j
    return toks


class _Reader:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str = "token") -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("", 1, 1)
            raise ParseError(f"unexpected end of input, wanted {what}", last.line, last.col)
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next(repr(text))
        if t.text != text:
            raise ParseError(f"expected {text!r}, got {t.text!r}", t.line, t.col)
        return t


def _read_word(r: _Reader) -> Word:
    t = r.next("word")
    if t.text == "I":
        return EMPTY
    if t.text != "(":
        raise ParseError(f"expected a word '(obj ...)' or 'I', got {t.text!r}", t.line, t.col)
    names = []
    while True:
        u = r.next("object name or ')'")
        if u.text == ")":
            break
        if u.text in "([])":
            raise ParseError(f"unexpected {u.text!r} in word", u.line, u.col)
        names.append(u.text)
    return Word(*names)


def _read_hom(r: _Reader) -> HomType:
    r.expect("[")
    dom = _read_word(r)
    cod = _read_word(r)
    r.expect("]")
    return hom(dom, cod)


def _read_perm(r: _Reader) -> tuple[int, ...]:
    r.expect("(")
    out = []
    while True:
        t = r.next("index or ')'")
        if t.text == ")":
            break
        try:
            out.append(int(t.text))
        except ValueError:
            raise ParseError(f"expected an integer, got {t.text!r}", t.line, t.col) from None
    return tuple(out)


def _read_int(r: _Reader) -> int:
    t = r.next("integer")
    try:
        return int(t.text)
    except ValueError:
        raise ParseError(f"expected an integer, got {t.text!r}", t.line, t.col) from None


def _read_base(r: _Reader) -> BaseTerm:
    t = r.next("base term")
    if t.text != "(":
        raise ParseError(f"expected a base term, got {t.text!r}", t.line, t.col)
    head = r.next("base head")
    if head.text == "bid":
        out: BaseTerm = BId(_read_word(r))
    elif head.text == "bgen":
        out = BGen(r.next("generator name").text)
    elif head.text == "braid":
        out = BBraid(_read_word(r), _read_word(r))
    elif head.text == "bcomp":
        out = BCompose(_read_base(r), _read_base(r))
    elif head.text == "btensor":
        out = BTensor(_read_base(r), _read_base(r))
    else:
        raise ParseError(f"unknown base constructor {head.text!r}", head.line, head.col)
    r.expect(")")
    return out


def _read_term(r: _Reader, env: Mapping[str, Term]) -> Term:
    t = r.next("term")
    if t.text != "(":
        if t.text in env:
            return env[t.text]
        raise ParseError(f"expected a term, got {t.text!r}", t.line, t.col)
    head = r.next("term head")
    if head.text == "pgen":
        out: Term = PGen(r.next("name").text)
    elif head.text == "lift":
        out = Lift(_read_base(r))
    elif head.text == "seq":
        out = SeqM(_read_word(r), _read_word(r), _read_word(r))
    elif head.text == "par":
        out = ParM(_read_word(r), _read_word(r), _read_word(r), _read_word(r))
    elif head.text == "id":
        out = IdSt(_read_word(r))
    elif head.text in ("split", "merge"):
        parts = []
        while r.peek() is not None and r.peek().text == "[":
            parts.append(_read_hom(r))
        cls = Split if head.text == "split" else Merge
        out = cls(tuple(parts))
    elif head.text == "comp":
        s = _read_term(r, env)
        i = _read_int(r)
        t2 = _read_term(r, env)
        j = _read_int(r)
        out = Comp(s, i, t2, j)
    elif head.text in ("inperm", "outperm"):
        inner = _read_term(r, env)
        perm = _read_perm(r)
        out = InPerm(inner, perm) if head.text == "inperm" else OutPerm(inner, perm)
    else:
        raise ParseError(f"unknown term constructor {head.text!r}", head.line, head.col)
    r.expect(")")
    return out


def parse_corpus_text(text: str, sig: Signature) -> list[tuple[str, TypedTerm]]:
    """All terms in a file, in order, as ``(name, typed-term)`` pairs.

    Unnamed terms get positional names ``term0``, ``term1``, ...; ``let``
    bindings may be referenced by name further down.
    """
    r = _Reader(_tokenize(text))
    env: dict[str, Term] = {}
    out: list[tuple[str, TypedTerm]] = []
    anon = 0
    while r.peek() is not None:
        t = r.peek()
        if t.text == "let":
            r.next()
            name_t = r.next("binding name")
            if name_t.text in "([])" or name_t.text == "=":
                raise ParseError("let wants a name", name_t.line, name_t.col)
            r.expect("=")
            term = _read_term(r, env)
            env[name_t.text] = term
            out.append((name_t.text, typed(term, sig)))
        else:
            term = _read_term(r, env)
            out.append((f"term{anon}", typed(term, sig)))
            anon += 1
    return out


def parse_corpus(path: str, sig: Signature) -> list[tuple[str, TypedTerm]]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus_text(fh.read(), sig)


def parse_term_text(text: str, sig: Signature) -> TypedTerm:
    """The single (or last) term of a file."""
    entries = parse_corpus_text(text, sig)
    if not entries:
        raise ParseError("no term found", 1, 1)
    return entries[-1][1]


def parse_term(path: str, sig: Signature) -> TypedTerm:
    with open(path, encoding="utf-8") as fh:
        return parse_term_text(fh.read(), sig)


def _w(w: Word) -> str:
    return "I" if not len(w) else "(" + " ".join(w) + ")"


def _fmt_base(b: BaseTerm) -> str:
    if isinstance(b, BId):
        return f"(bid {_w(b.word)})"
    if isinstance(b, BGen):
        return f"(bgen {b.name})"
    if isinstance(b, BBraid):
        return f"(braid {_w(b.left)} {_w(b.right)})"
    if isinstance(b, BCompose):
        return f"(bcomp {_fmt_base(b.first)} {_fmt_base(b.second)})"
    if isinstance(b, BTensor):
        return f"(btensor {_fmt_base(b.left)} {_fmt_base(b.right)})"
    raise TypeError(f"not a base term: {b!r}")


def format_term(t: Term) -> str:
    """Render a term as a single-line s-expression; inverse of the reader."""
    if isinstance(t, PGen):
        return f"(pgen {t.name})"
    if isinstance(t, Lift):
        return f"(lift {_fmt_base(t.base)})"
    if isinstance(t, SeqM):
        return f"(seq {_w(t.a)} {_w(t.b)} {_w(t.c)})"
    if isinstance(t, ParM):
        return f"(par {_w(t.a)} {_w(t.a2)} {_w(t.b)} {_w(t.b2)})"
    if isinstance(t, IdSt):
        return f"(id {_w(t.a)})"
    if isinstance(t, (Split, Merge)):
        head = "split" if isinstance(t, Split) else "merge"
        parts = " ".join(f"[{_w(h.dom)} {_w(h.cod)}]" for h in t.parts)
        return f"({head} {parts})" if parts else f"({head})"
    if isinstance(t, Comp):
        return f"(comp {format_term(t.s)} {t.i} {format_term(t.t)} {t.j})"
    if isinstance(t, InPerm):
        return f"(inperm {format_term(t.term)} ({' '.join(map(str, t.perm))}))"
    if isinstance(t, OutPerm):
        return f"(outperm {format_term(t.term)} ({' '.join(map(str, t.perm))}))"
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# models


def parse_model_text(text: str, sig: Signature) -> ModelAssignment:
    semiring: Semiring | None = None
    dims: dict[str, int] = {}
    gen_mats: dict[str, np.ndarray] = {}
    polygen_mats: dict[str, np.ndarray] = {}
    for ln, line in _clean_lines(text):
        parts = line.split()
        if parts[0] == "semiring":
            if len(parts) != 2 or parts[1] not in ("bool", "f64"):
                raise ParseError("semiring wants 'bool' or 'f64'", ln)
            semiring = BOOL if parts[1] == "bool" else F64
        elif parts[0] == "dim":
            if len(parts) != 3:
                raise ParseError("dim wants an object and a size", ln)
            if parts[1] not in sig.objects:
                raise ParseError(f"unknown object {parts[1]!r}", ln)
            try:
                dims[parts[1]] = int(parts[2])
            except ValueError:
                raise ParseError(f"bad dimension {parts[2]!r}", ln) from None
        elif parts[0] == "mat":
            if len(parts) < 3:
                raise ParseError("mat wants a name and a shape", ln)
            name = parts[1]
            m = re.fullmatch(r"(\d+)x(\d+)", parts[2])
            if not m:
                raise ParseError(f"bad shape {parts[2]!r}, want RxC", ln)
            rows, cols = int(m.group(1)), int(m.group(2))
            entries = parts[3:]
            if len(entries) != rows * cols:
                raise ParseError(
                    f"matrix {name!r} wants {rows * cols} entries, got {len(entries)}", ln
                )
            try:
                vals = [float(e) for e in entries]
            except ValueError:
                raise ParseError(f"bad matrix entry in {name!r}", ln) from None
            arr = np.array(vals, dtype=np.float64).reshape(rows, cols)
            if name in sig.gens:
                gen_mats[name] = arr
            elif name in sig.polygens:
                polygen_mats[name] = arr
            else:
                raise ParseError(f"unknown generator {name!r}", ln)
        else:
            raise ParseError(f"unknown model declaration {parts[0]!r}", ln)
    if semiring is None:
        raise ParseError("model file needs a 'semiring' line")
    missing = [o for o in sig.objects if o not in dims]
    if missing:
        raise ParseError(f"missing dim lines for {missing}")
    if semiring is BOOL:
        for mats in (gen_mats, polygen_mats):
            for name, arr in mats.items():
                if not np.isin(arr, (0.0, 1.0)).all():
                    raise ParseError(f"Boolean matrix {name!r} has non-0/1 entries")
                mats[name] = arr.astype(np.uint8)
    asg = ModelAssignment(semiring, dims, gen_mats, polygen_mats)
    check_assignment(sig, asg)
    return asg


def parse_model(path: str, sig: Signature) -> ModelAssignment:
    with open(path, encoding="utf-8") as fh:
        return parse_model_text(fh.read(), sig)


def _fmt_entries(arr: np.ndarray) -> str:
    if arr.dtype == np.uint8 or np.issubdtype(arr.dtype, np.integer):
        return " ".join(str(int(v)) for v in arr.reshape(-1))
    return " ".join(repr(float(v)) for v in arr.reshape(-1))


def format_model(sig: Signature, asg: ModelAssignment) -> str:
    lines = [f"semiring {'bool' if asg.semiring is BOOL else 'f64'}"]
    for o in sig.objects:
        lines.append(f"dim {o} {asg.dims[o]}")
    for name in sorted(asg.gen_mats):
        a = asg.gen_mats[name]
        lines.append(f"mat {name} {a.shape[0]}x{a.shape[1]} {_fmt_entries(a)}")
    for name in sorted(asg.polygen_mats):
        a = asg.polygen_mats[name]
        lines.append(f"mat {name} {a.shape[0]}x{a.shape[1]} {_fmt_entries(a)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# families


def _word_from_str(tokens: list[str], ln: int) -> Word:
    return _parse_word_tokens(tokens, ln)


def _split_line_words(rest: str, ln: int) -> tuple[Word, Word]:
    r = _Reader(_tokenize(rest))
    a = _read_word(r)
    b = _read_word(r)
    if r.peek() is not None:
        t = r.peek()
        raise ParseError(f"trailing tokens after words: {t.text!r}", ln)
    return a, b


def parse_family_text(text: str, grid: GridConfig) -> FunctionFamilyLAT:
    """A tabulated family from its text form; entries may be partial.

    Layout: ``name``, ``dim`` and ``hole``/``target`` header lines, then
    one ``entry`` line per tabulated filling.
    """
    name = "T"
    dims: dict[str, int] = {}
    holes: list[HomType] = []
    target: HomType | None = None
    entries: list[tuple[int, list[str]]] = []
    for ln, line in _clean_lines(text):
        parts = line.split()
        if parts[0] == "name":
            name = parts[1] if len(parts) > 1 else "T"
        elif parts[0] == "dim":
            if len(parts) != 3:
                raise ParseError("dim wants an object and a size", ln)
            try:
                dims[parts[1]] = int(parts[2])
            except ValueError:
                raise ParseError(f"bad dimension {parts[2]!r}", ln) from None
        elif parts[0] == "hole":
            a, b = _split_line_words(line.partition(" ")[2], ln)
            holes.append(hom(a, b))
        elif parts[0] == "target":
            a, b = _split_line_words(line.partition(" ")[2], ln)
            target = hom(a, b)
        elif parts[0] == "entry":
            entries.append((ln, parts[1:]))
        else:
            raise ParseError(f"unknown family declaration {parts[0]!r}", ln)
    if target is None or not holes:
        raise ParseError("family file needs hole and target lines")
    if not dims:
        raise ParseError("family file needs dim lines")

    fam = FunctionFamilyLAT(holes, target, dims, grid, name=name)

    def read_matrix(r: _Reader, ln: int) -> np.ndarray:
        shape_t = r.next("RxC shape")
        m = re.fullmatch(r"(\d+)x(\d+)", shape_t.text)
        if not m:
            raise ParseError(f"bad shape {shape_t.text!r}", ln, shape_t.col)
        rows, cols = int(m.group(1)), int(m.group(2))
        vals = []
        for _ in range(rows * cols):
            t = r.next("matrix bit")
            if t.text not in ("0", "1"):
                raise ParseError(f"family matrices are 0/1, got {t.text!r}", ln, t.col)
            vals.append(int(t.text))
        return np.array(vals, dtype=np.uint8).reshape(rows, cols)

    tables: dict[tuple[HomType, ...], dict[int, np.ndarray]] = {}
    for ln, parts in entries:
        r = _Reader(_tokenize(" ".join(parts)))
        ctxs = []
        fillings = []
        for i in range(len(holes)):
            x = _read_word(r)
            xp = _read_word(r)
            ctxs.append(hom(x, xp))
            mat = read_matrix(r, ln)
            want = fam.hole_shape(i, ctxs[-1])
            if mat.shape != want:
                raise ParseError(
                    f"hole {i} filling wants shape {want[0]}x{want[1]}, got "
                    f"{mat.shape[0]}x{mat.shape[1]}",
                    ln,
                )
            fillings.append(mat)
        arrow = r.next("'->'")
        if arrow.text != "->":
            raise ParseError(f"expected '->', got {arrow.text!r}", ln, arrow.col)
        out = read_matrix(r, ln)
        key = tuple(ctxs)
        want = fam.value_shape(key)
        if out.shape != want:
            raise ParseError(
                f"value wants shape {want[0]}x{want[1]}, got {out.shape[0]}x{out.shape[1]}", ln
            )
        code = 0
        shift = 0
        for i in range(len(holes) - 1, -1, -1):
            bits = fam.hole_bits(i, key[i])
            flat = fillings[i].reshape(-1)
            c = 0
            for k in range(flat.size):
                c |= int(flat[k]) << k
            code |= c << shift
            shift += bits
        cell = tables.setdefault(key, {})
        if code in cell:
            raise ParseError(f"duplicate entry for code {code}", ln)
        cell[code] = out

    for key, values in sorted(tables.items(), key=lambda kv: str(kv[0])):
        total = 1
        for i in range(len(holes)):
            total <<= fam.hole_bits(i, key[i])
        rows, cols = fam.value_shape(key)
        data = np.zeros((total, rows, cols), dtype=np.uint8)
        present = np.zeros(total, dtype=bool)
        for code, mat in values.items():
            if code >= total:
                raise ParseError(f"entry code {code} out of range for cell {key}")
            data[code] = mat
            present[code] = True
        fam.cells[key] = CellTable(
            key, data, None if present.all() else present
        )
    fam.restrict_cells = tuple(sorted(fam.cells, key=str))
    return fam


def parse_family(path: str, grid: GridConfig) -> FunctionFamilyLAT:
    with open(path, encoding="utf-8") as fh:
        return parse_family_text(fh.read(), grid)


def format_family(fam: FunctionFamilyLAT) -> str:
    """Render a family's tabulated cells; pairs with :func:`parse_family_text`."""
    lines = [f"name {fam.name}"]
    for o in sorted(fam.dims):
        lines.append(f"dim {o} {fam.dims[o]}")
    for h in fam.holes:
        lines.append(f"hole {_w(h.dom)} {_w(h.cod)}")
    lines.append(f"target {_w(fam.target.dom)} {_w(fam.target.cod)}")
    for key in sorted(fam.cells, key=str):
        cell = fam.cells[key]
        total = cell.data.shape[0]
        for code in range(total):
            if cell.present is not None and not cell.present[code]:
                continue
            groups = []
            rem = code
            shifts = []
            for i in range(len(fam.holes) - 1, -1, -1):
                bits = fam.hole_bits(i, key[i])
                shifts.append((i, rem & ((1 << bits) - 1)))
                rem >>= bits
            for i, sub in reversed(shifts):
                rows, cols = fam.hole_shape(i, key[i])
                flat = [(sub >> k) & 1 for k in range(rows * cols)]
                groups.append(
                    f"{_w(key[i].dom)} {_w(key[i].cod)} {rows}x{cols} "
                    + " ".join(map(str, flat))
                )
            val = cell.data[code]
            lines.append(
                "entry "
                + " ".join(groups)
                + f" -> {val.shape[0]}x{val.shape[1]} "
                + " ".join(str(int(v)) for v in val.reshape(-1))
            )
    return "\n".join(lines) + "\n"
