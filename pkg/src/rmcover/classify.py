"""Orbit classification of quotient windows under AGL(m,2).

The exact oracle is a breadth-first closure over the whole window, feasible
whenever 2^dim fits the guard.  Large windows are handled by the cover-set
pipeline instead: decompose along the last variable, keep one g per class of
the lower window, reduce the h part by the stabilizer of g, then split the
surviving cover entries into orbits with the distribution invariants and the
backtracking equivalence test.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Optional, Sequence

import numpy as np

from . import boolfun as bf
from .group import (
    AffineTransformation,
    agl_generators,
    agl_order,
    compose,
    identity,
    invert,
)
from .quotient import (
    QuotientFunction,
    QuotientSpace,
    action_matrix,
    apply_key,
    compose_decomposition,
    multiply_affine_form,
    q_apply_affine,
    quotient_space,
)

DEFAULT_SPACE_GUARD = 1 << 26
DEFAULT_INNER_GUARD = 1 << 24
DEFAULT_STAB_ORBIT_GUARD = 1 << 16
DEFAULT_CLOSURE_GUARD = 1 << 16
DEFAULT_STAB_GEN_CAP = 128


class SpaceTooLargeError(RuntimeError):
    """The requested enumeration exceeds the configured guard."""


class UndecidableError(RuntimeError):
    """A class lookup could not be decided within the given budget."""


def classification_digest(space: QuotientSpace, reps: Sequence[int]) -> str:
    h = hashlib.sha256()
    h.update(f"{space.s},{space.t},{space.m}|".encode())
    h.update(",".join(format(k, "x") for k in reps).encode())
    return h.hexdigest()[:16]


@dataclass
class Classification:
    """Ordered orbit representatives of one window, with optional extras.

    Class indices are pinned by the representative order; the digest commits
    to that numbering and travels with every invariant signature derived
    from it.
    """

    space: QuotientSpace
    reps: list[int]
    orbit_sizes: Optional[list[int]] = None
    stabilizer_gens: Optional[list[Optional[list[AffineTransformation]]]] = None
    lookup: Optional[np.ndarray] = None
    provenance: str = ""
    generators: Optional[list[AffineTransformation]] = None
    digest: str = field(default="")
    # classification of the next window down, used by class_of when this
    # window is too large for a complete lookup; never serialized
    fallback_sub: Optional["Classification"] = field(default=None, repr=False)
    _rep_index: Optional[dict] = field(default=None, repr=False)
    _rep_jhat: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.digest:
            self.digest = classification_digest(self.space, self.reps)

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def rep_function(self, idx: int) -> QuotientFunction:
        return self.space.function(self.reps[idx])

    def rep_functions(self) -> list[QuotientFunction]:
        return [self.space.function(k) for k in self.reps]

    def rep_index(self, key: int) -> Optional[int]:
        if self._rep_index is None:
            self._rep_index = {k: i for i, k in enumerate(self.reps)}
        return self._rep_index.get(key)

    def ensure_lookup(self, *, space_guard: int = DEFAULT_SPACE_GUARD) -> None:
        """Rebuild the complete orbit map by BFS if it is missing."""
        if self.lookup is not None:
            return
        gens = self.generators or agl_generators(self.space.m)
        rebuilt = orbit_enumerate(
            *self.space.params,
            gens,
            space_guard=space_guard,
            stabilizers=False,
        )
        if rebuilt.reps != self.reps:
            raise ValueError(
                "stored representatives disagree with the BFS rebuild; "
                "refusing to attach a lookup with a different numbering"
            )
        self.lookup = rebuilt.lookup
        if self.orbit_sizes is None:
            self.orbit_sizes = rebuilt.orbit_sizes

    def ensure_classifiable(self, *, space_guard: int = DEFAULT_SPACE_GUARD) -> None:
        """Make class_of usable: attach a lookup, or validate the fallback chain.

        Windows beyond the enumeration guard are classifiable through
        invariant bucketing plus equivalence against the stored
        representatives, which needs a classifiable window one level down.
        """
        if self.lookup is not None:
            return
        try:
            self.ensure_lookup(space_guard=space_guard)
        except SpaceTooLargeError:
            if self.fallback_sub is None:
                raise
            self.fallback_sub.ensure_classifiable(space_guard=space_guard)


# --- exact orbit enumeration ------------------------------------------------


def _byte_tables(images: Sequence[int], dim: int) -> np.ndarray:
    nchunks = max(1, (dim + 7) // 8)
    tables = np.zeros((nchunks, 256), dtype=np.int64)
    for c in range(nchunks):
        base = 8 * c
        tab = tables[c]
        for b in range(1, 256):
            low = b & -b
            idx = base + low.bit_length() - 1
            img = images[idx] if idx < dim else 0
            tab[b] = tab[b ^ low] ^ img
    return tables


def _apply_tables(keys: np.ndarray, tables: np.ndarray) -> np.ndarray:
    acc = tables[0][keys & 255]
    for c in range(1, len(tables)):
        acc = acc ^ tables[c][(keys >> (8 * c)) & 255]
    return acc


def orbit_enumerate(
    s: int,
    t: int,
    m: int,
    generators: Optional[Sequence[AffineTransformation]] = None,
    *,
    space_guard: int = DEFAULT_SPACE_GUARD,
    stabilizers: bool | str = "auto",
    stab_orbit_guard: int = DEFAULT_STAB_ORBIT_GUARD,
    closure_guard: int = DEFAULT_CLOSURE_GUARD,
    stab_gen_cap: int = DEFAULT_STAB_GEN_CAP,
) -> Classification:
    """Exact classification of a window by BFS over all of its elements.

    Representatives are the smallest key of each orbit, listed in increasing
    order, so the numbering is deterministic.  Returns the complete lookup
    and, for orbits within the stabilizer guard, Schreier generators of the
    per-representative stabilizers.
    """
    space = quotient_space(s, t, m)
    n = 1 << space.dim
    if n > space_guard:
        raise SpaceTooLargeError(
            f"window has 2^{space.dim} elements, guard allows {space_guard}"
        )
    gens = list(generators) if generators is not None else agl_generators(m)
    images_per_gen = [action_matrix(space, g) for g in gens]
    tables = [_byte_tables(images, space.dim) for images in images_per_gen]

    lookup = np.full(n, -1, dtype=np.int32)
    reps: list[int] = []
    sizes: list[int] = []

    remaining = np.flatnonzero(lookup < 0)
    while remaining.size:
        start = int(remaining[0])
        cls = len(reps)
        reps.append(start)
        lookup[start] = cls
        frontier = np.array([start], dtype=np.int64)
        size = 1
        while frontier.size:
            parts = []
            for tab in tables:
                img = _apply_tables(frontier, tab)
                fresh = img[lookup[img] < 0]
                if fresh.size:
                    fresh = np.unique(fresh)
                    lookup[fresh] = cls
                    parts.append(fresh)
                    size += fresh.size
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        sizes.append(size)
        remaining = np.flatnonzero(lookup < 0)

    stab_lists: Optional[list[Optional[list[AffineTransformation]]]] = None
    if stabilizers:
        stab_lists = []
        for cls, rep in enumerate(reps):
            if sizes[cls] > stab_orbit_guard:
                if stabilizers != "auto":
                    raise SpaceTooLargeError(
                        f"orbit of size {sizes[cls]} exceeds the stabilizer guard"
                    )
                stab_lists.append(None)
                continue
            stab_lists.append(
                _orbit_stabilizer_gens(
                    m,
                    gens,
                    images_per_gen,
                    rep,
                    sizes[cls],
                    closure_guard=closure_guard,
                    gen_cap=stab_gen_cap,
                )
            )

    return Classification(
        space=space,
        reps=reps,
        orbit_sizes=sizes,
        stabilizer_gens=stab_lists,
        lookup=lookup,
        provenance=f"oracle-bfs gens={len(gens)}",
        generators=gens,
    )


def _group_closure(gens: Sequence[AffineTransformation], m: int, limit: int) -> Optional[set]:
    """Element set generated by gens, or None once it exceeds the limit."""
    ident = identity(m)
    seen = {(ident.rows, ident.trans)}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = compose(cur, g)
            key = (nxt.rows, nxt.trans)
            if key not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(key)
                queue.append(nxt)
    return seen


def _orbit_stabilizer_gens(
    m: int,
    gens: Sequence[AffineTransformation],
    images_per_gen: Sequence[Sequence[int]],
    rep: int,
    orbit_size: int,
    *,
    closure_guard: int,
    gen_cap: int,
) -> list[AffineTransformation]:
    """Schreier generators of the stabilizer of rep, from a transversal BFS.

    When the stabilizer order (known from orbit-stabilizer) fits the closure
    guard, the list is pruned greedily until the generated closure has full
    size; otherwise the deduplicated generators are kept up to a cap.
    """
    transversal: dict[int, AffineTransformation] = {rep: identity(m)}
    order: list[int] = [rep]
    queue = deque([rep])
    while queue:
        x = queue.popleft()
        tx = transversal[x]
        for gi, images in enumerate(images_per_gen):
            y = apply_key(images, x)
            if y not in transversal:
                transversal[y] = compose(tx, gens[gi])
                order.append(y)
                queue.append(y)
    assert len(transversal) == orbit_size
    inv_transversal = {y: invert(ty) for y, ty in transversal.items()}

    stab_order = agl_order(m) // orbit_size
    prune = stab_order <= closure_guard
    ident_key = (identity(m).rows, 0)
    seen = {ident_key}
    selected: list[AffineTransformation] = []
    closure: set = {ident_key}

    for x in order:
        tx = transversal[x]
        for gi, images in enumerate(images_per_gen):
            y = apply_key(images, x)
            sg = compose(compose(tx, gens[gi]), inv_transversal[y])
            key = (sg.rows, sg.trans)
            if key in seen:
                continue
            seen.add(key)
            if prune:
                if key in closure:
                    continue
                selected.append(sg)
                closure = _group_closure(selected, m, stab_order + 1)
                assert closure is not None and len(closure) <= stab_order
                if len(closure) == stab_order:
                    return selected
            else:
                selected.append(sg)
                if len(selected) >= gen_cap:
                    return selected
    return selected


def stabilizer_generators(
    rep: QuotientFunction, classification: Classification
) -> list[AffineTransformation]:
    """Generators of the stabilizer of a stored representative."""
    if rep.space.params != classification.space.params:
        raise ValueError("space mismatch")
    idx = classification.rep_index(rep.key)
    if idx is None:
        raise ValueError("function is not a stored representative")
    stored = (
        classification.stabilizer_gens[idx]
        if classification.stabilizer_gens is not None
        else None
    )
    if stored is not None:
        return stored
    gens = classification.generators or agl_generators(rep.m)
    images = [action_matrix(rep.space, g) for g in gens]
    size = (
        classification.orbit_sizes[idx]
        if classification.orbit_sizes is not None
        else _orbit_size_bfs(images, rep.key)
    )
    if size > DEFAULT_STAB_ORBIT_GUARD:
        raise SpaceTooLargeError("orbit exceeds the stabilizer guard")
    out = _orbit_stabilizer_gens(
        rep.m,
        gens,
        images,
        rep.key,
        size,
        closure_guard=DEFAULT_CLOSURE_GUARD,
        gen_cap=DEFAULT_STAB_GEN_CAP,
    )
    if classification.stabilizer_gens is not None:
        classification.stabilizer_gens[idx] = out
    return out


def _orbit_size_bfs(images_per_gen: Sequence[Sequence[int]], start: int) -> int:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for images in images_per_gen:
            y = apply_key(images, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen)


# --- cover sets --------------------------------------------------------------


@dataclass
class CoverSet:
    """Entries (g class index, h key) whose recompositions meet every orbit."""

    s: int
    t: int
    m: int
    size: int
    entries: Iterable[tuple[int, int]]

    def assembled(self, sub: Classification) -> Iterable[QuotientFunction]:
        h_space = quotient_space(self.s, self.t, self.m - 1)
        for g_idx, h_key in self.entries:
            yield compose_decomposition(
                sub.rep_function(g_idx), h_space.function(h_key)
            )


def _check_sub(s: int, t: int, m: int, sub: Classification) -> None:
    expect = (max(s - 1, 0), t - 1, m - 1)
    if tuple(sub.space.params) != expect:
        raise ValueError(
            f"sub-classification covers {sub.space.params}, expected {expect}"
        )


class _ProductEntries:
    """Re-iterable lazy product of class indices with all h keys."""

    def __init__(self, n_classes: int, n_h: int):
        self.n_classes = n_classes
        self.n_h = n_h

    def __iter__(self):
        for g_idx in range(self.n_classes):
            for h_key in range(self.n_h):
                yield (g_idx, h_key)


def initial_cover_set(s: int, t: int, m: int, sub: Classification) -> CoverSet:
    """Product cover set: every class of the lower window against all h."""
    _check_sub(s, t, m, sub)
    h_space = quotient_space(s, t, m - 1)
    size = sub.n_classes * (1 << h_space.dim)
    return CoverSet(s, t, m, size, _ProductEntries(sub.n_classes, 1 << h_space.dim))


def reduce_cover_set(
    s: int,
    t: int,
    m: int,
    sub: Classification,
    *,
    inner_guard: int = DEFAULT_INNER_GUARD,
) -> CoverSet:
    """Cover set reduced by the stabilizer action on the h part.

    For each g, the h window is partitioned under the group generated by
    h -> h o u for u in the stabilizer of g together with the translations
    h -> h + alpha*g over affine forms alpha; one minimal representative
    per orbit survives.
    """
    _check_sub(s, t, m, sub)
    if sub.stabilizer_gens is None:
        raise ValueError("sub-classification carries no stabilizer generators")
    h_space = quotient_space(s, t, m - 1)
    n = 1 << h_space.dim
    if n > inner_guard:
        raise SpaceTooLargeError(
            f"h window has 2^{h_space.dim} elements, guard allows {inner_guard}"
        )

    entries: list[tuple[int, int]] = []
    for g_idx in range(sub.n_classes):
        stab = sub.stabilizer_gens[g_idx]
        if stab is None:
            raise ValueError(f"missing stabilizer generators for class {g_idx}")
        g_fn = sub.rep_function(g_idx)
        tables = [
            _byte_tables(action_matrix(h_space, u), h_space.dim) for u in stab
        ]
        consts = []
        for alpha_mask in [0] + [1 << i for i in range(m - 1)]:
            shift = multiply_affine_form(1 << alpha_mask, g_fn, s, t)
            if shift.key:
                consts.append(shift.key)

        visited = np.zeros(n, dtype=bool)
        remaining = np.flatnonzero(~visited)
        while remaining.size:
            start = int(remaining[0])
            entries.append((g_idx, start))
            visited[start] = True
            frontier = np.array([start], dtype=np.int64)
            while frontier.size:
                parts = []
                imgs = [_apply_tables(frontier, tab) for tab in tables]
                imgs += [frontier ^ c for c in consts]
                for img in imgs:
                    fresh = img[~visited[img]]
                    if fresh.size:
                        fresh = np.unique(fresh)
                        visited[fresh] = True
                        parts.append(fresh)
                frontier = (
                    np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
                )
            remaining = np.flatnonzero(~visited)

    return CoverSet(s, t, m, len(entries), entries)


# --- class lookup and the pipeline -------------------------------------------


DEFAULT_BUDGET_RETRIES = 3

_RESEED = 0x9E3779B9  # additive reseed step for fresh search randomization


def _equivalent_with_retries(rep_fn, qf, sub, iter_budget, seed, retries):
    """Equivalence with fresh pre-composition seeds while Undefined.

    Re-randomizing re-orders the candidate tree without changing the set of
    candidates, so it can only turn Undefined into a decided verdict.
    Returns (verdict, calls, undefined_count).
    """
    from .equivalence import UNDEFINED, equivalent

    calls = 0
    undefined = 0
    for attempt in range(max(1, retries)):
        out = equivalent(
            rep_fn, qf, sub, iter_budget=iter_budget,
            rng=Random(seed + attempt * _RESEED),
        )
        calls += 1
        if out.verdict != UNDEFINED:
            return out.verdict, calls, undefined
        undefined += 1
    return UNDEFINED, calls, undefined


def class_of(
    qf: QuotientFunction,
    classification: Classification,
    *,
    sub: Optional[Classification] = None,
    iter_budget: int = 4096,
    retries: int = DEFAULT_BUDGET_RETRIES,
    rng: Optional[Random] = None,
) -> int:
    """Orbit index of qf in the given classification.

    Uses the complete lookup when present; otherwise buckets by the Walsh
    distribution invariant and confirms with the equivalence search, which
    needs the lower-window classification ``sub`` (or the attached fallback).
    """
    if qf.space.params != classification.space.params:
        raise ValueError("space mismatch")
    if classification.lookup is not None:
        return int(classification.lookup[qf.key])

    from .equivalence import EQUIV, UNDEFINED
    from .invariant import class_map, j_hat_signature

    if sub is None:
        sub = classification.fallback_sub
    if sub is None:
        raise UndecidableError(
            "classification has no lookup; provide the lower-window "
            "classification for invariant bucketing"
        )
    base_seed = (rng or Random(0)).getrandbits(32)
    sig = j_hat_signature(class_map(qf, sub))
    if classification._rep_jhat is None:
        classification._rep_jhat = [
            j_hat_signature(class_map(r, sub)) for r in classification.rep_functions()
        ]
    candidates = [
        i for i, rsig in enumerate(classification._rep_jhat) if rsig == sig
    ]
    undecided = []
    for i in candidates:
        verdict, _, _ = _equivalent_with_retries(
            classification.rep_function(i), qf, sub, iter_budget,
            _pair_seed(base_seed, classification.reps[i], qf.key), retries,
        )
        if verdict == EQUIV:
            return i
        if verdict == UNDEFINED:
            undecided.append(i)
    if undecided:
        raise UndecidableError(
            f"budget exhausted against candidate classes {undecided}"
        )
    raise UndecidableError("no candidate class matched; classification incomplete?")


@dataclass
class PipelineReport:
    space: tuple[int, int, int]
    initial_cover_size: int
    reduced_cover_size: int
    n_buckets: int
    n_classes: int
    equivalence_calls: int
    undefined_outcomes: int
    unresolved_pairs: list[tuple[int, int]]
    seed: int
    budget_iter: int


def classify_pipeline(
    s: int,
    t: int,
    m: int,
    sub: Classification,
    *,
    budget_iter: int = 4096,
    retries: int = DEFAULT_BUDGET_RETRIES,
    seed: int = 0,
    inner_guard: int = DEFAULT_INNER_GUARD,
    jobs: int = 1,
) -> tuple[Classification, PipelineReport]:
    """Cover set, invariant bucketing, equivalence: the full classifier.

    Within a bucket, candidates are merged by the equivalence search, with
    fresh search randomization up to ``retries`` times while the budget runs
    out; a still-Undefined outcome never merges or drops a candidate
    silently, it is surfaced as an unresolved pair in the report.
    """
    _check_sub(s, t, m, sub)
    sub.ensure_classifiable()
    from .invariant import class_map, j_hat_signature

    space = quotient_space(s, t, m)
    initial_size = sub.n_classes * (1 << quotient_space(s, t, m - 1).dim)
    cover = reduce_cover_set(s, t, m, sub, inner_guard=inner_guard)

    buckets: dict = {}
    for f in cover.assembled(sub):
        sig = j_hat_signature(class_map(f, sub))
        buckets.setdefault(sig, []).append(f.key)

    tasks = sorted(buckets.values(), key=lambda keys: (len(keys), keys), reverse=True)
    if jobs > 1 and len(tasks) > 1:
        from .parallel import resolve_buckets_parallel

        results = resolve_buckets_parallel(
            space.params, sub, tasks, budget_iter, seed, jobs, retries
        )
    else:
        results = [
            _resolve_bucket(space, sub, keys, budget_iter, seed, retries)
            for keys in tasks
        ]

    rep_keys: list[int] = []
    unresolved: list[tuple[int, int]] = []
    calls = 0
    undefined = 0
    for keys, pairs, ncalls, nundef in results:
        rep_keys.extend(keys)
        unresolved.extend(pairs)
        calls += ncalls
        undefined += nundef
    rep_keys.sort()

    cls = Classification(
        space=space,
        reps=rep_keys,
        provenance=f"pipeline sub={sub.digest} seed={seed} iter={budget_iter}",
        generators=None,
    )
    report = PipelineReport(
        space=space.params,
        initial_cover_size=initial_size,
        reduced_cover_size=cover.size,
        n_buckets=len(buckets),
        n_classes=len(rep_keys),
        equivalence_calls=calls,
        undefined_outcomes=undefined,
        unresolved_pairs=unresolved,
        seed=seed,
        budget_iter=budget_iter,
    )
    return cls, report


def _pair_seed(seed: int, a: int, b: int) -> int:
    mix = hashlib.sha256(f"{seed}|{a:x}|{b:x}".encode()).digest()
    return int.from_bytes(mix[:8], "big")


def _resolve_bucket(space, sub, keys, budget_iter, seed, retries=DEFAULT_BUDGET_RETRIES):
    """Merge one invariant bucket; returns (reps, unresolved, calls, undefined)."""
    from .equivalence import EQUIV, UNDEFINED

    reps: list[int] = []
    unresolved: list[tuple[int, int]] = []
    calls = 0
    undefined = 0
    for key in sorted(keys):
        fn = space.function(key)
        merged = False
        ambiguous = []
        for rkey in reps:
            verdict, ncalls, nundef = _equivalent_with_retries(
                space.function(rkey), fn, sub, budget_iter,
                _pair_seed(seed, rkey, key), retries,
            )
            calls += ncalls
            undefined += nundef
            if verdict == EQUIV:
                merged = True
                break
            if verdict == UNDEFINED:
                ambiguous.append(rkey)
        if not merged:
            reps.append(key)
            unresolved.extend((rkey, key) for rkey in ambiguous)
    return reps, unresolved, calls, undefined


# --- classification files -----------------------------------------------------


def _encode_affine(g: AffineTransformation) -> str:
    return ",".join(format(r, "x") for r in g.rows) + ";" + format(g.trans, "x")


def _decode_affine(text: str, m: int) -> AffineTransformation:
    rows_text, _, trans_text = text.partition(";")
    rows = tuple(int(p, 16) for p in rows_text.split(","))
    return AffineTransformation(m, rows, int(trans_text or "0", 16))


def save_classification(cls: Classification, path: str) -> None:
    s, t, m = cls.space.params
    lines = [
        "#%rmcover classification v1",
        f"#%space {s} {t} {m}",
        f"#%provenance {cls.provenance}",
        f"#%digest {cls.digest}",
    ]
    for g in cls.generators or []:
        lines.append("G " + _encode_affine(g))
    for i, key in enumerate(cls.reps):
        size = cls.orbit_sizes[i] if cls.orbit_sizes is not None else "-"
        anf = bf.anf_to_string(bf.AnfPolynomial(m, cls.space.anf_from_key(key)))
        lines.append(f"R {i} {size} {anf}")
    if cls.stabilizer_gens is not None:
        for i, gens in enumerate(cls.stabilizer_gens):
            if gens is None:
                continue
            if not gens:
                lines.append(f"S {i} -")  # trivial stabilizer, not "unknown"
            for g in gens:
                lines.append(f"S {i} " + _encode_affine(g))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_classification(path: str) -> Classification:
    space = None
    declared_digest = ""
    provenance = ""
    generators: list[AffineTransformation] = []
    reps: list[int] = []
    sizes: list = []
    stab: dict[int, list[AffineTransformation]] = {}
    m = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                if line.startswith("#%space"):
                    s, t, m = (int(p) for p in line.split()[1:])
                    space = quotient_space(s, t, m)
                elif line.startswith("#%provenance"):
                    provenance = line.split(None, 1)[1] if " " in line else ""
                elif line.startswith("#%digest"):
                    declared_digest = line.split()[1]
                elif line.startswith("#"):
                    continue
                elif line.startswith("G "):
                    generators.append(_decode_affine(line[2:], m))
                elif line.startswith("R "):
                    _, idx, size, anf = line.split(None, 3)
                    if int(idx) != len(reps):
                        raise ValueError("class indices out of order")
                    key = space.key_from_anf(bf.anf_from_string(anf, m).coeffs)
                    reps.append(key)
                    sizes.append(None if size == "-" else int(size))
                elif line.startswith("S "):
                    _, idx, enc = line.split(None, 2)
                    bucket = stab.setdefault(int(idx), [])
                    if enc != "-":
                        bucket.append(_decode_affine(enc, m))
                else:
                    raise ValueError(f"unrecognized record {line.split()[0]!r}")
            except (ValueError, IndexError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if space is None:
        raise ValueError(f"{path}: missing space header")
    digest = classification_digest(space, reps)
    if declared_digest and declared_digest != digest:
        raise ValueError(
            f"{path}: digest mismatch (file says {declared_digest}, "
            f"content hashes to {digest})"
        )
    orbit_sizes = None if any(x is None for x in sizes) else [int(x) for x in sizes]
    stab_lists = None
    if stab:
        stab_lists = [stab.get(i) for i in range(len(reps))]
    return Classification(
        space=space,
        reps=reps,
        orbit_sizes=orbit_sizes,
        stabilizer_gens=stab_lists,
        lookup=None,
        provenance=provenance,
        generators=generators or None,
        digest=digest,
    )
