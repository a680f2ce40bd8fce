"""Tri-state affine-equivalence testing in windows with s = t-1 (or s = t).

Two functions in the same window are equivalent when one is the affine
composition of the other modulo the window floor.  The test filters on the
Walsh distribution invariant, then searches depth-first for a linear
candidate compatible with the Walsh transforms of the derivative class maps,
and finally completes each candidate with an affine part through the
derivative-subspace membership check.  Every returned witness is re-verified
by direct recomposition before it is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Optional, Sequence

from .group import AffineTransformation, SingularMatrixError, compose, invert_rows
from .invariant import class_map, fourier_map, j_hat_signature
from .quotient import QuotientFunction, delta_membership, q_apply_affine

EQUIV = "Equiv"
NOT_EQUIV = "NotEquiv"
UNDEFINED = "Undefined"


@dataclass(frozen=True)
class EquivalenceOutcome:
    verdict: str
    witness: Optional[AffineTransformation]
    candidates_tested: int
    budget_used: int


def _check_window(f: QuotientFunction) -> None:
    if f.s not in (f.t - 1, f.t):
        raise ValueError("equivalence search needs a window with s in {t-1, t}")


def candidate_checking(
    a_rows: Sequence[int], f: QuotientFunction, fp: QuotientFunction
) -> Optional[int]:
    """Affine part a with fp = f o (A, a) in the window, or None.

    A candidate linear part A works exactly when fp o A^-1 + f lies in the
    span of the derivatives of f; the solving direction is returned.  In an
    s = t window translations act trivially, so the check degenerates to
    exact equality of fp o A^-1 and f.
    """
    if f.space.params != fp.space.params:
        raise ValueError("space mismatch")
    _check_window(f)
    m = f.m
    ainv = invert_rows(a_rows, m)  # raises SingularMatrixError on bad candidates
    g = q_apply_affine(fp, AffineTransformation(m, ainv, 0)) ^ f
    if f.s == f.t:
        return 0 if g.key == 0 else None
    a = delta_membership(f, g)
    if a is None:
        return None
    if q_apply_affine(f, AffineTransformation(m, tuple(a_rows), a)) != fp:
        return None
    return a


def admissible(
    images: Sequence[int],
    y: int,
    i: int,
    fh_f: Sequence[int],
    fh_fp: Sequence[int],
    image_set: Optional[set] = None,
) -> bool:
    """Whether mapping basis vector b_i to y can extend the partial candidate.

    ``images`` holds the candidate images of the span of b_1..b_{i-1},
    indexed by subset integer.  The extension is admissible when it keeps the
    Walsh values matched on the enlarged span and keeps the map injective.
    """
    half = 1 << (i - 1)
    if image_set is None:
        image_set = set(images[z] for z in range(half))
    if y in image_set:
        return False
    for z in range(half):
        if fh_fp[images[z] ^ y] != fh_f[z | half]:
            return False
    return True


def equivalent(
    f: QuotientFunction,
    fp: QuotientFunction,
    sub,
    *,
    iter_budget: int = 4096,
    rng: Optional[Random] = None,
) -> EquivalenceOutcome:
    """Decide Equiv / NotEquiv / Undefined for two window elements.

    Distinct Walsh distribution invariants settle NotEquiv outright.
    Otherwise f is pre-composed with a random affine map (which only
    re-randomizes the deterministic search order), candidates are built
    basis vector by basis vector, and each fully built candidate is checked
    for an affine completion.  The budget counts fully built candidates that
    fail the completion check; exhausting the candidate tree yields
    NotEquiv, exhausting the budget yields Undefined.
    """
    if f.space.params != fp.space.params:
        raise ValueError("space mismatch")
    _check_window(f)
    rng = rng or Random(0)
    m = f.m
    n = 1 << m

    sub.ensure_classifiable()
    sig_f = j_hat_signature(class_map(f, sub))
    sig_fp = j_hat_signature(class_map(fp, sub))
    if sig_f != sig_fp:
        return EquivalenceOutcome(NOT_EQUIV, None, 0, 0)

    from .group import random_affine

    sr = random_affine(m, rng)
    fr = q_apply_affine(f, sr)
    fh_f = fourier_map(class_map(fr, sub))
    fh_fp = fourier_map(class_map(fp, sub))

    # Candidate images are tried in a per-level shuffled order.  When the
    # transform values barely constrain the search (near-flat spectra), a
    # fixed ascending order would spend the whole budget inside one barren
    # prefix subtree; shuffling keeps the completed candidates spread out
    # while the seeded rng keeps the call deterministic.
    orders = []
    for _ in range(m):
        level = list(range(n))
        rng.shuffle(level)
        orders.append(level)

    images = [0] * n
    image_set: set[int] = set()
    state = {"verdict": NOT_EQUIV, "witness": None, "tested": 0, "budget": iter_budget}

    def search(i: int) -> None:
        if i > m:
            rows = tuple(images[1 << j] for j in range(m))
            # A = transpose(A*): the rows of A are the basis images under A*.
            state["tested"] += 1
            try:
                a = candidate_checking(rows, fr, fp)
            except SingularMatrixError:
                a = None
            if a is not None:
                witness = compose(sr, AffineTransformation(m, rows, a))
                assert q_apply_affine(f, witness) == fp
                state["verdict"] = EQUIV
                state["witness"] = witness
                return
            state["budget"] -= 1
            if state["budget"] < 0:
                state["verdict"] = UNDEFINED
            return
        half = 1 << (i - 1)
        for y in orders[i - 1]:
            if state["verdict"] != NOT_EQUIV:
                return
            if admissible(images, y, i, fh_f, fh_fp, image_set):
                for z in range(half):
                    img = images[z] ^ y
                    images[z | half] = img
                    image_set.add(img)
                search(i + 1)
                for z in range(half):
                    image_set.discard(images[z | half])

    image_set.add(0)
    search(1)
    failed = iter_budget - state["budget"]
    return EquivalenceOutcome(state["verdict"], state["witness"], state["tested"], failed)
