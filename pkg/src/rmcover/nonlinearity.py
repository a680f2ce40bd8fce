"""Reed-Muller nonlinearity: probabilistic probe, exact oracles, radius bounds.

The order-k nonlinearity of f is its Hamming distance to RM(k,m), i.e. the
coset-leader weight of its coset.  Exact values come from the Walsh spectrum
(k = 1) or from full codeword/coset enumeration at small sizes; beyond that a
randomized row-elimination probe produces small-weight coset members, which
upper-bound the nonlinearity and accumulate non-existence evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from random import Random
from typing import Optional, Sequence

import numpy as np

from . import boolfun as bf
from .boolfun import BooleanFunction
from .group import gf2_rank

DEFAULT_ENUM_GUARD = 1 << 22
DEFAULT_COSET_GUARD = 1 << 26
_PIVOT_RETRY_CAP = 1 << 12


class InfeasibleError(RuntimeError):
    """Exact computation is out of reach for these parameters."""


def rm_dimension(k: int, m: int) -> int:
    return sum(math.comb(m, i) for i in range(k + 1))


@dataclass(frozen=True)
class GeneratorMatrix:
    """Monomial evaluation rows of RM(k,m), by (degree, mask) ascending."""

    k: int
    m: int
    rows: tuple[int, ...]

    @property
    def nrows(self) -> int:
        return len(self.rows)


def rm_generator_matrix(k: int, m: int) -> GeneratorMatrix:
    if not 0 <= k <= m:
        raise ValueError(f"order must be within 0..{m}")
    masks = sorted(range(1 << m), key=lambda s: (s.bit_count(), s))
    rows = []
    for mask in masks:
        if mask.bit_count() > k:
            continue
        tt = 0
        for x in range(1 << m):
            if x & mask == mask:
                tt |= 1 << x
        rows.append(tt)
    return GeneratorMatrix(k, m, tuple(rows))


def walsh_spectrum(f: BooleanFunction) -> np.ndarray:
    """Signed Walsh spectrum W(b) = sum_x (-1)^(f(x) + b.x)."""
    n = 1 << f.m
    raw = np.frombuffer(f.tt.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    arr = np.unpackbits(raw, bitorder="little", count=n).astype(np.int32)
    w = 1 - 2 * arr
    h = 1
    while h < n:
        w = w.reshape(-1, 2, h)
        top = w[:, 0, :] + w[:, 1, :]
        bot = w[:, 0, :] - w[:, 1, :]
        w = np.stack([top, bot], axis=1).reshape(-1)
        h *= 2
    return w


def _first_order_nl(f: BooleanFunction) -> int:
    w = walsh_spectrum(f)
    return (1 << (f.m - 1)) - int(np.max(np.abs(w))) // 2


@dataclass(frozen=True)
class ProbeResult:
    found: bool
    best_weight: int
    passes_used: int
    seed: Optional[int] = None


def nl_probe(
    k: int,
    m: int,
    f: BooleanFunction,
    iter_budget: int,
    limit: int,
    rng: Random,
    *,
    check_coset: bool = False,
) -> ProbeResult:
    """Randomized row-elimination probe for small-weight coset members.

    Each pass sweeps every row of a working copy of the RM(k,m) generator
    matrix: a random pivot column is drawn among the set positions of the
    row, the row is eliminated from the rows below it, and from f when f is
    set at the pivot.  Row operations keep the matrix row-equivalent to the
    generator matrix and keep f inside its original coset, so every recorded
    weight upper-bounds the nonlinearity.  Stops as soon as a weight at most
    ``limit`` appears.
    """
    if f.m != m:
        raise ValueError("dimension mismatch")
    gen = rm_generator_matrix(k, m)
    n = 1 << m
    if n <= 64:
        return _probe_small(gen, f, iter_budget, limit, rng, check_coset)
    nwords = (n + 63) // 64
    g = np.zeros((gen.nrows, nwords), dtype=np.uint64)
    for i, row in enumerate(gen.rows):
        g[i] = np.frombuffer(int(row).to_bytes(nwords * 8, "little"), dtype=np.uint64)
    fv = np.frombuffer(int(f.tt).to_bytes(nwords * 8, "little"), dtype=np.uint64).copy()

    orig_rows = gen.rows
    orig_tt = f.tt
    best = int(np.bitwise_count(fv).sum())
    passes = 0
    found = best <= limit
    nrows = gen.nrows
    while not found and passes < iter_budget:
        passes += 1
        for i in range(nrows):
            row = g[i]
            p = _random_pivot_words(row, n, rng)
            word, bit = divmod(p, 64)
            bitmask = np.uint64(1 << bit)
            below = g[i + 1 :]
            sel = (below[:, word] & bitmask).astype(bool)
            below[sel] ^= row
            if fv[word] & bitmask:
                fv ^= row
        w = int(np.bitwise_count(fv).sum())
        if w < best:
            best = w
        if check_coset:
            rows_now = [
                int.from_bytes(g[i].tobytes(), "little") for i in range(len(g))
            ]
            f_now = int.from_bytes(fv.tobytes(), "little")
            _assert_coset_preserved(rows_now, f_now, orig_rows, orig_tt)
        if w <= limit:
            found = True
    return ProbeResult(found, best, passes)


def _probe_small(gen: GeneratorMatrix, f: BooleanFunction, iter_budget, limit, rng, check_coset):
    """Single-word sweep loop; same draws and algebra as the packed path."""
    n = 1 << f.m
    g = list(gen.rows)
    fv = f.tt
    best = fv.bit_count()
    passes = 0
    found = best <= limit
    nrows = len(g)
    while not found and passes < iter_budget:
        passes += 1
        for i in range(nrows):
            row = g[i]
            p = _random_pivot_int(row, n, rng)
            bit = 1 << p
            for j in range(i + 1, nrows):
                if g[j] & bit:
                    g[j] ^= row
            if fv & bit:
                fv ^= row
        w = fv.bit_count()
        if w < best:
            best = w
        if check_coset:
            _assert_coset_preserved(g, fv, gen.rows, f.tt)
        if w <= limit:
            found = True
    return ProbeResult(found, best, passes)


def _random_pivot_int(row: int, n: int, rng: Random) -> int:
    for _ in range(_PIVOT_RETRY_CAP):
        p = rng.randrange(n)
        if (row >> p) & 1:
            return p
    return rng.choice(_set_positions(row))


def _random_pivot_words(row: np.ndarray, n: int, rng: Random) -> int:
    for _ in range(_PIVOT_RETRY_CAP):
        p = rng.randrange(n)
        if (int(row[p >> 6]) >> (p & 63)) & 1:
            return p
    # pathological luck: fall back to an explicit choice among the set bits
    return rng.choice(_set_positions(int.from_bytes(row.tobytes(), "little")))


def _set_positions(val: int) -> list[int]:
    positions = []
    while val:
        low = val & -val
        positions.append(low.bit_length() - 1)
        val ^= low
    return positions


def _assert_coset_preserved(rows_now, f_now, orig_rows, orig_tt):
    if gf2_rank(rows_now) != len(orig_rows):
        raise AssertionError("working matrix lost rank")
    if gf2_rank(list(orig_rows) + list(rows_now)) != len(orig_rows):
        raise AssertionError("working matrix left the row space")
    diff = f_now ^ orig_tt
    if gf2_rank(list(orig_rows) + [diff]) != len(orig_rows):
        raise AssertionError("working function left its coset")


def exact_nonlinearity(
    k: int,
    m: int,
    f: BooleanFunction,
    *,
    enum_guard: int = DEFAULT_ENUM_GUARD,
) -> int:
    """Exact coset-leader weight: Walsh for k = 1, enumeration when it fits."""
    if f.m != m:
        raise ValueError("dimension mismatch")
    if k == 1:
        return _first_order_nl(f)
    dim = rm_dimension(k, m)
    if (1 << dim) > enum_guard:
        raise InfeasibleError(
            f"RM({k},{m}) has 2^{dim} codewords, enumeration guard allows {enum_guard}"
        )
    rows = rm_generator_matrix(k, m).rows
    best = f.tt.bit_count()
    c = 0
    tt = f.tt
    for i in range(1, 1 << dim):
        c ^= rows[(i & -i).bit_length() - 1]
        w = (tt ^ c).bit_count()
        if w < best:
            best = w
            if best == 0:
                break
    return best


def covering_radius_exact(
    k: int,
    m: int,
    *,
    coset_guard: int = DEFAULT_COSET_GUARD,
    enum_guard: int = DEFAULT_ENUM_GUARD,
) -> int:
    """Max coset-leader weight over all cosets of RM(k,m), by full enumeration.

    Coset representatives are the ANF vectors supported on monomials of
    degree above k.  The k = 1 case batches the Walsh spectra of whole blocks
    of cosets; the general case enumerates codewords per coset and is guarded
    by total work.
    """
    dim = rm_dimension(k, m)
    n = 1 << m
    n_cosets = 1 << (n - dim)
    if n_cosets > coset_guard:
        raise InfeasibleError(
            f"2^{n - dim} cosets exceed the guard {coset_guard}"
        )
    free_masks = [mask for mask in range(n) if mask.bit_count() > k]
    assert len(free_masks) == n - dim
    if k == 1:
        return _radius_first_order_batched(m, free_masks)
    total_work = n_cosets * (1 << dim)
    if total_work > enum_guard * 16:
        raise InfeasibleError(
            f"coset enumeration needs {n_cosets} x 2^{dim} codeword scans"
        )
    rows = rm_generator_matrix(k, m).rows
    radius = 0
    anf = 0
    for i in range(n_cosets):
        if i:
            anf ^= 1 << free_masks[(i & -i).bit_length() - 1]
        tt = bf.mobius_transform(anf, m)
        best = tt.bit_count()
        c = 0
        for j in range(1, 1 << dim):
            c ^= rows[(j & -j).bit_length() - 1]
            w = (tt ^ c).bit_count()
            if w < best:
                best = w
        if best > radius:
            radius = best
    return radius


def _radius_first_order_batched(m: int, free_masks: list[int]) -> int:
    # one column per coset, one row per point: butterflies become contiguous
    # row operations; WHT values stay within +-2^m so int8 suffices for m <= 5
    n = 1 << m
    n_free = len(free_masks)
    batch_bits = min(n_free, 18)
    batch = 1 << batch_bits
    dtype = np.int8 if m <= 5 else np.int32
    radius = 0
    base_idx = np.arange(batch, dtype=np.int64)
    for start in range(0, 1 << n_free, batch):
        idx = start + base_idx
        anf = np.zeros((n, batch), dtype=dtype)
        for j, mask in enumerate(free_masks):
            anf[mask] = (idx >> j) & 1
        for i in range(m):
            h = 1 << i
            for base in range(0, n, 2 * h):
                anf[base + h : base + 2 * h] ^= anf[base : base + h]
        w = (1 - 2 * anf).astype(dtype)
        h = 1
        while h < n:
            for base in range(0, n, 2 * h):
                top = w[base : base + h] + w[base + h : base + 2 * h]
                bot = w[base : base + h] - w[base + h : base + 2 * h]
                w[base : base + h] = top
                w[base + h : base + 2 * h] = bot
            h *= 2
        nl = (n // 2) - np.max(np.abs(w), axis=0).astype(np.int64) // 2
        m_nl = int(nl.max())
        if m_nl > radius:
            radius = m_nl
    return radius


def relative_rho(
    k: int,
    t: int,
    m: int,
    reps,
    *,
    probe_iter: int = 1 << 16,
    rng: Optional[Random] = None,
    enum_guard: int = DEFAULT_ENUM_GUARD,
) -> tuple[int, bool]:
    """Covering radius of RM(k,m) relative to RM(t,m), over representatives.

    Exact per-representative nonlinearities give a certified value; where
    enumeration is infeasible the probe supplies upper-bound evidence only
    and the result is flagged uncertified.
    """
    if t <= k:
        return 0, True
    if tuple(reps.space.params) != (k + 1, t, m):
        raise ValueError(f"representatives must classify ({k + 1},{t},{m})")
    rng = rng or Random(0)
    certified = True
    value = 0
    for fn in reps.rep_functions():
        lift = fn.lift()
        try:
            nl = exact_nonlinearity(k, m, lift, enum_guard=enum_guard)
        except InfeasibleError:
            certified = False
            nl = nl_probe(k, m, lift, probe_iter, 0, rng).best_weight
        if nl > value:
            value = nl
    return value, certified


# --- covering radius bound bookkeeping ---------------------------------------


@dataclass
class Bound:
    lo: int
    hi: int
    provenance: str = ""

    def tighten_lo(self, v: int, why: str) -> bool:
        if v > self.lo:
            self.lo = v
            self.provenance += f" lo:{why}"
            return True
        return False

    def tighten_hi(self, v: int, why: str) -> bool:
        if v < self.hi:
            self.hi = v
            self.provenance += f" hi:{why}"
            return True
        return False


class InconsistentTableError(ValueError):
    """A derived lower bound exceeded an upper bound."""


@dataclass
class RadiusTable:
    """Known or derived rho(k,m) intervals, plus relative rho_t(k,m) entries."""

    absolute: dict = field(default_factory=dict)
    relative: dict = field(default_factory=dict)

    def set_exact(self, k: int, m: int, value: int, provenance: str = "input") -> None:
        self.absolute[(k, m)] = Bound(value, value, provenance)

    def set_interval(self, k, m, lo, hi, provenance: str = "input") -> None:
        self.absolute[(k, m)] = Bound(lo, hi, provenance)

    def set_relative(self, k, t, m, lo, hi=None, provenance: str = "input") -> None:
        self.relative[(k, t, m)] = Bound(lo, hi if hi is not None else lo, provenance)

    def bound(self, k: int, m: int) -> Optional[Bound]:
        return self.absolute.get((k, m))

    def copy(self) -> "RadiusTable":
        out = RadiusTable()
        out.absolute = {key: Bound(b.lo, b.hi, b.provenance) for key, b in self.absolute.items()}
        out.relative = {key: Bound(b.lo, b.hi, b.provenance) for key, b in self.relative.items()}
        return out


def bounds_propagate(table: RadiusTable) -> RadiusTable:
    """Closure of the interval table under the radius inequalities.

    Uses the doubling bound rho(k,m) >= 2 rho(k,m-1), the restriction bound
    rho(k,m) >= rho(k-1,m-1), the addition bound
    rho(k,m) <= rho(k,m-1) + rho(k-1,m-1), and the relative split
    rho_t(k,m) <= rho(k,m) <= rho_t(k,m) + rho(t,m).  Raises on any interval
    that ends up empty.
    """
    out = table.copy()
    for (k, t, m) in out.relative:
        if (k, m) not in out.absolute:
            out.absolute[(k, m)] = Bound(0, 1 << m, "init")
    changed = True
    while changed:
        changed = False
        for (k, m), b in list(out.absolute.items()):
            up = out.absolute.get((k, m + 1))
            if up is not None:
                changed |= up.tighten_lo(2 * b.lo, f"2*rho({k},{m})")
                changed |= b.tighten_hi(up.hi // 2, f"rho({k},{m + 1})/2")
            diag = out.absolute.get((k + 1, m + 1))
            if diag is not None:
                changed |= diag.tighten_lo(b.lo, f"rho({k},{m})")
                changed |= b.tighten_hi(diag.hi, f"rho({k + 1},{m + 1})")
            side = out.absolute.get((k - 1, m))
            if side is not None and up is not None:
                changed |= up.tighten_hi(
                    b.hi + side.hi, f"rho({k},{m})+rho({k - 1},{m})"
                )
                changed |= b.tighten_lo(
                    up.lo - side.hi, f"rho({k},{m + 1})-rho({k - 1},{m})"
                )
                changed |= side.tighten_lo(
                    up.lo - b.hi, f"rho({k},{m + 1})-rho({k},{m})"
                )
        for (k, t, m), rb in list(out.relative.items()):
            ab = out.absolute.get((k, m))
            tb = out.absolute.get((t, m))
            if ab is not None:
                changed |= ab.tighten_lo(rb.lo, f"rho_{t}({k},{m})")
                changed |= rb.tighten_hi(ab.hi, f"rho({k},{m})")
            if ab is not None and tb is not None:
                changed |= ab.tighten_hi(
                    rb.hi + tb.hi, f"rho_{t}({k},{m})+rho({t},{m})"
                )
        for key, b in list(out.absolute.items()) + list(out.relative.items()):
            if b.lo > b.hi:
                raise InconsistentTableError(
                    f"entry {key} has empty interval [{b.lo},{b.hi}]"
                    f" (provenance:{b.provenance})"
                )
    return out


# --- odd-weight reduction and representative scans ----------------------------


def odd_weight_reduction(h: BooleanFunction) -> int:
    """The point a with h + dirac(a) of degree <= m-2, for odd-weight h.

    An odd-weight function has full degree and its top ANF coefficients
    match those of a single dirac spike, which is read off directly.
    """
    if bf.weight(h) % 2 == 0:
        raise ValueError("function has even weight")
    m = h.m
    anf = bf.to_anf(h).coeffs
    full = (1 << m) - 1
    a = 0
    for i in range(m):
        abar = (anf >> (full ^ (1 << i))) & 1
        a |= (abar ^ 1) << i
    return a


@dataclass
class ScanEntry:
    index: int
    shift: Optional[int]
    result: ProbeResult


@dataclass
class ScanReport:
    k: int
    limit: int
    entries: list[ScanEntry]

    @property
    def found(self) -> list[ScanEntry]:
        return [e for e in self.entries if e.result.found]

    @property
    def not_found(self) -> list[ScanEntry]:
        return [e for e in self.entries if not e.result.found]


def scan_representatives(
    k: int,
    reps,
    limit: int,
    iter_budget: int,
    rng: Optional[Random] = None,
    *,
    dirac_translates: bool = False,
    seed: Optional[int] = None,
    jobs: int = 1,
) -> ScanReport:
    """Probe every representative (optionally every dirac translate of it).

    Partitions the representatives into those with an exhibited coset member
    of weight at most ``limit`` and those where the budget found none.
    """
    m = reps.space.m
    if seed is None:
        seed = (rng or Random(0)).getrandbits(32)
    items = []
    for idx, fn in enumerate(reps.rep_functions()):
        tt = fn.lift().tt
        if dirac_translates:
            for a in range(1 << m):
                items.append((idx, a, tt ^ (1 << a)))
        else:
            items.append((idx, None, tt))
    if jobs > 1:
        from .parallel import probe_batch_parallel

        results = probe_batch_parallel(k, m, items, iter_budget, limit, seed, jobs)
    else:
        results = []
        for idx, shift, tt in items:
            salt = shift if shift is not None else -1
            item_seed = seed * 1000003 + idx * 65537 + salt + 1
            r = nl_probe(k, m, BooleanFunction(m, tt), iter_budget, limit, Random(item_seed))
            results.append(ProbeResult(r.found, r.best_weight, r.passes_used, item_seed))
    entries = [
        ScanEntry(idx, shift, res) for (idx, shift, _), res in zip(items, results)
    ]
    return ScanReport(k, limit, entries)
