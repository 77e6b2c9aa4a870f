"""The property suites behind `check`, `laws`, and `embed check`.

Each suite quantifies one family of claims over a finite, seeded slice of
the theory — law instances over small words, exhaustive Boolean model
sweeps, random term pairs — and reports flat :class:`CaseRow` streams
plus suite-specific extras (the faithfulness agreement matrix, recorded
seeds).  All randomness flows through ``subrng(seed, ...)`` paths, so a
seed pins every report byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from itertools import islice, product
from typing import Iterable, Sequence

import numpy as np

from .embed import (
    apply_elements,
    check_faithful_pair,
    check_lat_of_F,
    check_profunctor_axioms,
    check_profunctor_axioms_float,
    check_strength_axioms,
    check_strength_axioms_float,
    probe_element,
    element_vector,
    StrongProfunctorView,
)
from .errors import HocircError, TermTypeError
from .grids import GridConfig, subrng
from .holes import (
    DSupermap,
    behavioral_equal,
    check_lat,
    check_lat_multi,
    check_lat_single,
    check_slot,
    family_from_dsupermap,
    identity_family,
)
from .laws import Law, instantiate, law_catalogue, law_hash, normalize
from .matmodel import (
    ModelAssignment,
    eval_cost,
    eval_poly,
    word_dim,
)
from .report import CaseRow
from .sampling import (
    equal_variant,
    random_composable_pair,
    random_single_output_term,
    random_term_with_output,
    swap_generator,
)
from .semiring import BOOL, F64
from .signature import EMPTY, HomType, Signature, Word, hom
from .terms import Comp, Merge, Split, Term, typecheck
from .embed import f_pointwise_equal

__all__ = [
    "SuiteResult",
    "demo_signature",
    "law_suite",
    "derived_suite",
    "cotensor_suite",
    "profunctor_suite",
    "strength_suite",
    "multifunctor_suite",
    "lat_suite",
    "faithful_suite",
    "supermap_suite",
    "quotient_suite",
    "embed_suites",
    "EMBED_SUITES",
]


@dataclass
class SuiteResult:
    """Rows plus any suite-specific extras (seeds, agreement counts)."""

    rows: list[CaseRow] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def add(self, suite: str, case: str, ok: bool, witness: str = "") -> None:
        self.rows.append(CaseRow(suite, case, "PASS" if ok else "FAIL", witness))

    def extend(self, other: "SuiteResult") -> None:
        self.rows.extend(other.rows)
        self.data.update(other.data)


def demo_signature() -> Signature:
    """The two-object signature the CLI and fixtures run on."""
    q, r = Word("q"), Word("r")
    return Signature(
        objects=("q", "r"),
        gens={
            "f": (q, q),
            "g": (q, q),
            "h": (q, r),
            "h2": (q, r),
            "k": (r, q),
            "m": (q @ q, q),
            "w": (q, q @ q),
            "e": (EMPTY, q),
            "t": (q, EMPTY),
        },
        polygens={},
    )


# ---------------------------------------------------------------------------
# laws (criterion: model soundness of the presentation)


def _structural_dim_maps(bound: int) -> list[dict[str, int]]:
    out = []
    for dq in range(1, bound + 1):
        for dr in range(1, bound + 1):
            out.append({"q": dq, "r": dr})
    return out


def _law_tuples(law: Law, seed: int, cap: int) -> list[tuple[Word, ...]]:
    """A deterministic covering family of word tuples for one law.

    Exhaustive over the pool filtered by total length when small enough;
    otherwise a seeded selection of ``cap`` tuples.
    """
    q, r = Word("q"), Word("r")
    if law.arity <= 6:
        pool = [EMPTY, q, r, q @ q, q @ r, r @ q, r @ r]
    else:
        pool = [EMPTY, q, r]
    filtered = [
        ws
        for ws in product(pool, repeat=law.arity)
        if sum(len(w) for w in ws) <= 6
    ]
    if len(filtered) <= cap:
        return filtered
    rng = subrng(seed, "law-tuples", law.name)
    idx = np.sort(rng.choice(len(filtered), size=cap, replace=False))
    return [filtered[int(i)] for i in idx]


def _inst_hash(law: Law, words: Sequence[Word]) -> str:
    payload = law_hash(law) + "|" + "|".join(str(w) for w in words)
    return hashlib.sha256(payload.encode()).hexdigest()[:10]


_COST_CAP = 2_000_000


def law_suite(
    sig: Signature | None = None,
    seed: int = 0,
    dim_bound: int = 2,
    float_dim_bound: int = 3,
    float_samples: int = 100,
    cap: int = 60,
    laws: Iterable[Law] | None = None,
    suite_name: str = "laws",
) -> SuiteResult:
    """Every law holds in every matrix model, on a covering instance family.

    Boolean: exhaustive over dimension maps up to ``dim_bound``.  Float:
    ``float_samples`` seeded draws per law, spread over its instances,
    checked entrywise to 1e-9.
    """
    sig = sig or demo_signature()
    res = SuiteResult()
    for law in laws if laws is not None else law_catalogue():
        tuples = _law_tuples(law, seed, cap)
        insts = []
        for ws in tuples:
            lhs, rhs = instantiate(law, sig, ws)
            insts.append((ws, lhs, rhs))
        for ws, lhs, rhs in insts:
            ih = _inst_hash(law, ws)
            bad = ""
            for dims in _structural_dim_maps(dim_bound):
                if eval_cost(lhs, sig, dims) + eval_cost(rhs, sig, dims) > _COST_CAP:
                    continue
                asg = ModelAssignment(BOOL, dims)
                ml = eval_poly(lhs, sig, asg)
                mr = eval_poly(rhs, sig, asg)
                if not BOOL.mat_eq(ml.data, mr.data):
                    bad = f"boolean dims {dims} separate the sides"
                    break
            res.add(suite_name, f"{law.name}:{ih}:bool", not bad, bad)
        rng = subrng(seed, "law-float", law.name)
        bad = ""
        for _ in range(float_samples):
            ws, lhs, rhs = insts[int(rng.integers(len(insts)))]
            dims = {o: int(rng.integers(1, float_dim_bound + 1)) for o in sig.objects}
            if eval_cost(lhs, sig, dims) + eval_cost(rhs, sig, dims) > _COST_CAP:
                continue
            asg = ModelAssignment(F64, dims)
            ml = eval_poly(lhs, sig, asg)
            mr = eval_poly(rhs, sig, asg)
            if not np.allclose(ml.data, mr.data, atol=1e-9, rtol=0):
                bad = f"float dims {dims} separate {law.name} at words {[str(w) for w in ws]}"
                break
        res.add(suite_name, f"{law.name}:{law_hash(law)[:10]}:f64", not bad, bad)
    return res


def derived_suite(sig: Signature | None = None, seed: int = 0, fuel: int = 10000) -> SuiteResult:
    """Derived laws are reachable by rewriting and hold in all models."""
    sig = sig or demo_signature()
    res = SuiteResult()
    q, r = Word("q"), Word("r")
    derived = [l for l in law_catalogue() if l.origin == "derived"]
    for law in derived:
        ws = tuple((q, r)[k % 2] for k in range(law.arity))
        lhs, rhs = instantiate(law, sig, ws)
        nl = normalize(sig, lhs, fuel)
        nr = normalize(sig, rhs, fuel)
        from .network import canonical_key, term_to_net

        joined = canonical_key(term_to_net(nl.term, sig)) == canonical_key(
            term_to_net(nr.term, sig)
        )
        steps = nl.step_count + nr.step_count
        res.add(
            "derived",
            f"{law.name}:rewrite",
            joined and not (nl.fuel_exhausted or nr.fuel_exhausted),
            "" if joined else f"normal forms differ after {steps} steps",
        )
    model_rows = law_suite(
        sig, seed=seed, laws=derived, cap=40, float_samples=60, suite_name="derived"
    )
    res.extend(model_rows)
    return res


# ---------------------------------------------------------------------------
# cotensor (split/merge inverse sweep)


def _hom_lists(total: int, max_parts: int) -> list[tuple[HomType, ...]]:
    words: list[Word] = [EMPTY]
    frontier = [EMPTY]
    for _ in range(total):
        frontier = [w @ Word(o) for w in frontier for o in ("q", "r")]
        words.extend(frontier)
    homs = [
        hom(d, c) for d in words for c in words if len(d) + len(c) <= total
    ]
    out: list[tuple[HomType, ...]] = []

    def rec(prefix: tuple[HomType, ...], letters: int) -> None:
        if prefix:
            out.append(prefix)
        if len(prefix) == max_parts:
            return
        for h in homs:
            l = len(h.dom) + len(h.cod)
            if letters + l <= total:
                rec(prefix + (h,), letters + l)

    rec((), 0)
    return out


def cotensor_suite(sig: Signature | None = None, dim_bound: int = 2, max_parts: int = 3) -> SuiteResult:
    """Split and Merge are mutually inverse matrices for every part list.

    Part lists range over total word length <= 4 (and at most
    ``max_parts`` parts, since trivial ``[I,I]`` parts could pad a list
    forever), at every dimension map up to ``dim_bound``.
    """
    sig = sig or demo_signature()
    res = SuiteResult()
    maps = _structural_dim_maps(dim_bound)
    for parts in _hom_lists(4, max_parts):
        label = ",".join(str(h) for h in parts)
        bad = ""
        for dims in maps:
            asg = ModelAssignment(BOOL, dims)
            ms = eval_poly(Split(parts), sig, asg).data
            mm = eval_poly(Merge(parts), sig, asg).data
            if not (
                np.array_equal(BOOL.matmul(ms, mm), np.eye(ms.shape[0], dtype=ms.dtype))
                and np.array_equal(BOOL.matmul(mm, ms), np.eye(mm.shape[0], dtype=mm.dtype))
            ):
                bad = f"not inverse at dims {dims}"
                break
        res.add("cotensor", label, not bad, bad)
    return res


# ---------------------------------------------------------------------------
# embed: axiom suites


def _embed_objects() -> list[HomType]:
    q, r = Word("q"), Word("r")
    return [hom(EMPTY, EMPTY), hom(q, q), hom(EMPTY, q), hom(q, r)]


def profunctor_suite(grid: GridConfig, dims: dict[str, int] | None = None) -> SuiteResult:
    res = SuiteResult()
    dims = dims or {"q": 2, "r": 2}
    fdims = {o: 3 for o in dims}
    for obj in _embed_objects():
        view = StrongProfunctorView(obj, dims, grid)
        r1 = check_profunctor_axioms(view)
        res.add("profunctor", f"{obj}:bool", r1.ok, r1.witness)
        r2 = check_profunctor_axioms_float(obj, fdims, grid, n=100)
        res.add("profunctor", f"{obj}:float", r2.ok, r2.witness)
    return res


def strength_suite(grid: GridConfig, dims: dict[str, int] | None = None) -> SuiteResult:
    res = SuiteResult()
    dims = dims or {"q": 2, "r": 2}
    fdims = {o: 3 for o in dims}
    for obj in _embed_objects():
        view = StrongProfunctorView(obj, dims, grid)
        r1 = check_strength_axioms(view)
        res.add("strength", f"{obj}:bool", r1.ok, r1.witness)
        r2 = check_strength_axioms_float(obj, fdims, grid, n=100)
        res.add("strength", f"{obj}:float", r2.ok, r2.witness)
    return res


# ---------------------------------------------------------------------------
# embed: multifunctoriality


def _with_probes(sig: Signature, inputs: Sequence[HomType], ctxs: Sequence[HomType]) -> Signature:
    gens = dict(sig.gens)
    for i, (h, c) in enumerate(zip(inputs, ctxs)):
        gens[f"__prb{i}"] = (h.dom @ c.dom, h.cod @ c.cod)
    return Signature(sig.objects, gens, sig.polygens)


def _sample_assignment(
    sig: Signature, names: Iterable[str], dims: dict[str, int], rng: np.random.Generator
) -> ModelAssignment:
    mats = {}
    for n in sorted(names):
        d, c = sig.gen_type(n)
        mats[n] = (rng.random((word_dim(c, dims), word_dim(d, dims))) < 0.5).astype(np.uint8)
    return ModelAssignment(BOOL, dims, mats, {})


def multifunctor_suite(
    sig: Signature | None = None, grid: GridConfig | None = None, n_pairs: int = 50, n_asg: int = 24
) -> SuiteResult:
    """F sends plugging to plugging: assembled elements match, extensionally.

    For each sampled composable pair, probe elements are fed both to
    ``F(Comp(s, 0, t, j))`` and through ``F(t)`` after ``F(s)``; the two
    resulting elements must agree at every sampled Boolean assignment.
    """
    sig = sig or demo_signature()
    grid = grid or GridConfig()
    res = SuiteResult()
    dims = grid.dims_for(sig.objects)
    q = Word(sig.objects[0])
    for p in range(n_pairs):
        rng = subrng(grid.seed, "multifunctor", p)
        pair = random_composable_pair(sig, rng, size=5, max_inputs=2)
        comp = pair.composite
        ptype = typecheck(comp, sig)
        ctxs = [
            hom(q, q) if (p + i) % 3 == 0 else hom(EMPTY, EMPTY)
            for i in range(len(ptype.inputs))
        ]
        sig2 = _with_probes(sig, ptype.inputs, ctxs)
        els = [
            probe_element(sig2, f"__prb{i}", h, c)
            for i, (h, c) in enumerate(zip(ptype.inputs, ctxs))
        ]
        n_t = len(typecheck(pair.t, sig).inputs)
        pre = els[: pair.j]
        n_s = len(typecheck(pair.s, sig).inputs)
        mid = els[pair.j : pair.j + n_s]
        post = els[pair.j + n_s :]
        lhs = apply_elements(sig2, comp, els)
        inner = apply_elements(sig2, pair.s, mid)
        rhs = apply_elements(sig2, pair.t, pre + [inner] + post)
        if lhs.ctx_factors != rhs.ctx_factors:
            res.add("multifunctor", f"pair-{p}", False, "context factors disagree")
            continue
        names = set(n for n in sig2.gens if n.startswith("__prb"))
        from .terms import gen_names

        b1, _ = gen_names(lhs.term)
        names |= b1
        bad = ""
        for a in range(n_asg):
            asg = _sample_assignment(sig2, names, dims, subrng(grid.seed, "mf-asg", p, a))
            vl = element_vector(sig2, lhs, asg)
            vr = element_vector(sig2, rhs, asg)
            if not np.array_equal(vl, vr):
                bad = f"assignment {a} separates the assemblies"
                break
        res.add("multifunctor", f"pair-{p}", not bad, bad)
    return res


# ---------------------------------------------------------------------------
# embed: LAT structure of F


def lat_suite(
    sig: Signature | None = None, grid: GridConfig | None = None, n_terms: int = 100
) -> SuiteResult:
    """Tabulated F(S) is locally applicable for random ``S``, both axes."""
    sig = sig or demo_signature()
    grid = grid or GridConfig()
    res = SuiteResult()
    for i in range(n_terms):
        rng = subrng(grid.seed, "lat-terms", i)
        term = None
        for _ in range(16):
            cand = random_single_output_term(sig, rng, size=6, max_inputs=2, word_cap=1)
            if typecheck(cand, sig).inputs:
                term = cand
                break
        if term is None:
            term = Split((hom(Word(sig.objects[0]), Word(sig.objects[0])),))
        r = check_lat_of_F(sig, term, grid, max_assignments=1)
        res.add("lat", f"term-{i}", r.ok, r.witness)
    return res


# ---------------------------------------------------------------------------
# embed: faithfulness


def faithful_suite(
    sig: Signature | None = None,
    grid: GridConfig | None = None,
    n_pairs: int = 200,
    min_class: int = 20,
    max_extra: int = 200,
) -> SuiteResult:
    """behavioral_equal and pointwise F-equality agree, pair by pair.

    Pairs mix equal variants, generator swaps, and independent same-type
    terms; generation continues past ``n_pairs`` (recording every seed
    index) until both verdict classes hold at least ``min_class`` pairs.
    """
    sig = sig or demo_signature()
    grid = grid or GridConfig()
    res = SuiteResult()
    agreement = np.zeros((2, 2), dtype=np.int64)
    n_eq = n_df = 0
    seeds: list[int] = []
    i = 0
    while i < n_pairs or (
        (n_eq < min_class or n_df < min_class) and i < n_pairs + max_extra
    ):
        rng = subrng(grid.seed, "faithful", i)
        kind = i % 4
        if kind in (0, 2):
            t = random_single_output_term(sig, rng, size=5, max_inputs=1 if kind == 2 else 0)
            partner = equal_variant(sig, rng, t)
        else:
            t = random_single_output_term(sig, rng, size=5, max_inputs=0)
            if kind == 3:
                partner = swap_generator(sig, rng, t)
                if partner is None:
                    partner = random_term_with_output(
                        sig, rng, typecheck(t, sig).outputs[0], size=5, max_inputs=0
                    )
            else:
                partner = random_term_with_output(
                    sig, rng, typecheck(t, sig).outputs[0], size=5, max_inputs=0
                )
        b, f, agree = check_faithful_pair(sig, t, partner, grid)
        agreement[0 if b else 1, 0 if f else 1] += 1
        n_eq += b
        n_df += not b
        seeds.append(i)
        res.add(
            "faithful",
            f"pair-{i}",
            agree,
            "" if agree else f"behavioural={b} but F-equality={f}",
        )
        i += 1
    res.data["agreement"] = agreement
    res.data["seeds"] = seeds
    res.data["class_counts"] = {"equal": n_eq, "distinguished": n_df}
    return res


# ---------------------------------------------------------------------------
# supermap toolbox sweep


def _random_core_supermap(
    rng: np.random.Generator, n_holes: int, dims: dict[str, int]
) -> DSupermap:
    q, r = Word("q"), Word("r")
    pool = [hom(q, q), hom(q, r), hom(r, q), hom(EMPTY, q), hom(q, EMPTY), hom(r, r)]
    holes = tuple(pool[int(rng.integers(len(pool)))] for _ in range(n_holes))
    target = pool[int(rng.integers(len(pool)))]
    rows = word_dim(target.cod, dims)
    cols = word_dim(target.dom, dims)
    for h in holes:
        rows *= word_dim(h.dom, dims)
        cols *= word_dim(h.cod, dims)
    core = (rng.random((rows, cols)) < 0.5).astype(np.uint8)
    return DSupermap(holes, target, core, dims)


def supermap_suite(
    grid: GridConfig | None = None, n_cores: int = 30, n_slots: int = 8
) -> SuiteResult:
    """Random dense cores induce families passing the LAT checks; a flipped
    table bit always breaks them; the identity family is a slot."""
    grid = grid or GridConfig()
    res = SuiteResult()
    dims = {"q": 2, "r": 2}
    singles = []
    for c in range(n_cores):
        rng = subrng(grid.seed, "cores", c)
        n_holes = 1 + c % 2
        S = _random_core_supermap(rng, n_holes, dims)
        fam = family_from_dsupermap(S, grid, name=f"S{c}")
        r = check_lat_single(fam) if n_holes == 1 else check_lat_multi(fam)
        res.add("supermap", f"core-{c}:lat", r.ok, r.witness)
        cells = fam.grid_cells()
        if cells:
            bad = fam.mutated(cells[0], code=1 % (1 << fam.cell_bits(cells[0])), bit=0)
            rb = check_lat(bad)
            res.add(
                "supermap",
                f"core-{c}:mutation",
                not rb.ok and rb.witness != "",
                "" if not rb.ok else "flip went undetected",
            )
        if n_holes == 1:
            singles.append(fam)
    q = Word("q")
    ident = identity_family(hom(q, q), dims, grid)
    for k, fam in enumerate(singles[:n_slots]):
        r = check_slot(ident, fam)
        res.add("supermap", f"slot-id-vs-S{fam.name[1:]}", r.ok, r.witness)
    return res


# ---------------------------------------------------------------------------
# behavioural quotient congruence


def quotient_suite(
    sig: Signature | None = None, grid: GridConfig | None = None, n_pairs: int = 100
) -> SuiteResult:
    """behavioral_equal is a congruence for plugging.

    For equal pairs (s, s2) and (inner, inner2), the composites
    ``Comp(inner, 0, s, j)`` and ``Comp(inner2, 0, s2, j)`` must stay
    behaviourally equal.
    """
    sig = sig or demo_signature()
    grid = grid or GridConfig()
    res = SuiteResult()
    for p in range(n_pairs):
        rng = subrng(grid.seed, "quotient", p)
        pair = random_composable_pair(sig, rng, size=4, max_inputs=2)
        outer2 = equal_variant(sig, rng, pair.t, allow_perm=False)
        inner2 = equal_variant(sig, rng, pair.s, allow_perm=False)
        lhs = Comp(pair.s, 0, pair.t, pair.j)
        rhs = Comp(inner2, 0, outer2, pair.j)
        try:
            r = behavioral_equal(sig, lhs, rhs, grid)
            res.add("quotient", f"pair-{p}", r.equal, r.witness)
        except HocircError as e:
            res.add("quotient", f"pair-{p}", False, str(e))
    return res


# ---------------------------------------------------------------------------
# aggregation for the embed CLI


EMBED_SUITES = ("profunctor", "strength", "multifunctor", "lat", "faithful")


def embed_suites(
    which: str,
    sig: Signature | None = None,
    grid: GridConfig | None = None,
    n_multifunctor: int = 50,
    n_lat: int = 100,
    n_faithful: int = 200,
) -> SuiteResult:
    """Run one named embed suite, or all of them."""
    sig = sig or demo_signature()
    grid = grid or GridConfig()
    res = SuiteResult()
    wanted = EMBED_SUITES if which == "all" else (which,)
    for name in wanted:
        if name == "profunctor":
            res.extend(profunctor_suite(grid))
        elif name == "strength":
            res.extend(strength_suite(grid))
        elif name == "multifunctor":
            res.extend(multifunctor_suite(sig, grid, n_pairs=n_multifunctor))
        elif name == "lat":
            res.extend(lat_suite(sig, grid, n_terms=n_lat))
        elif name == "faithful":
            res.extend(faithful_suite(sig, grid, n_pairs=n_faithful))
        else:
            raise HocircError("unknown-suite", f"no embed suite named {which!r}")
    return res
