"""GF(2) matrix algebra and the affine general linear group AGL(m,2).

Matrices are tuples of int row masks: bit j of rows[i] is the entry in row i,
column j.  Vectors are plain ints (bit j = coordinate j+1).  An affine map
s = (A, a) acts on points by s(x) = A*x + a and must have invertible A.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence


class SingularMatrixError(ValueError):
    """Raised when a matrix expected to be invertible over GF(2) is not."""


def matvec(rows: Sequence[int], x: int) -> int:
    """Multiply the bit matrix by the vector x over GF(2)."""
    y = 0
    for i, row in enumerate(rows):
        y |= ((row & x).bit_count() & 1) << i
    return y


def mat_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Row-mask product: row i of a*b is the GF(2) sum of rows of b selected by a[i]."""
    out = []
    for row in a:
        acc = 0
        r = row
        while r:
            low = r & -r
            acc ^= b[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return tuple(out)


def identity_rows(m: int) -> tuple[int, ...]:
    return tuple(1 << i for i in range(m))


def transpose_rows(rows: Sequence[int], m: int) -> tuple[int, ...]:
    out = [0] * m
    for i, row in enumerate(rows):
        for j in range(m):
            out[j] |= ((row >> j) & 1) << i
    return tuple(out)


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) by elimination on int bitsets."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def invert_rows(rows: Sequence[int], m: int) -> tuple[int, ...]:
    """Invert an m x m bit matrix; raises SingularMatrixError if rank < m."""
    work = list(rows)
    inv = list(identity_rows(m))
    for col in range(m):
        pivot = None
        for r in range(col, m):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        work[col], work[pivot] = work[pivot], work[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        for r in range(m):
            if r != col and ((work[r] >> col) & 1):
                work[r] ^= work[col]
                inv[r] ^= inv[col]
    return tuple(inv)


@dataclass(frozen=True)
class LinearMap:
    """An m x m bit matrix with no invertibility requirement."""

    m: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.m:
            raise ValueError("row count does not match dimension")
        mask = (1 << self.m) - 1
        if any(row & ~mask for row in self.rows):
            raise ValueError("row mask exceeds dimension")

    def apply(self, x: int) -> int:
        return matvec(self.rows, x)


@dataclass(frozen=True)
class AffineTransformation:
    """Invertible affine map x -> A*x + a on F_2^m."""

    m: int
    rows: tuple[int, ...]
    trans: int = 0

    def __post_init__(self):
        if len(self.rows) != self.m:
            raise ValueError("row count does not match dimension")
        mask = (1 << self.m) - 1
        if any(row & ~mask for row in self.rows) or self.trans & ~mask:
            raise ValueError("mask exceeds dimension")
        if gf2_rank(self.rows) != self.m:
            raise SingularMatrixError("linear part is singular")

    def apply(self, x: int) -> int:
        return matvec(self.rows, x) ^ self.trans


def identity(m: int) -> AffineTransformation:
    return AffineTransformation(m, identity_rows(m), 0)


def translation(m: int, a: int) -> AffineTransformation:
    return AffineTransformation(m, identity_rows(m), a)


def compose(s1: AffineTransformation, s2: AffineTransformation) -> AffineTransformation:
    """Composition s1(s2(x)): A = A1*A2, a = A1*a2 + a1."""
    if s1.m != s2.m:
        raise ValueError("dimension mismatch")
    return AffineTransformation(
        s1.m, mat_mul(s1.rows, s2.rows), matvec(s1.rows, s2.trans) ^ s1.trans
    )


def invert(s: AffineTransformation) -> AffineTransformation:
    inv = invert_rows(s.rows, s.m)
    return AffineTransformation(s.m, inv, matvec(inv, s.trans))


def random_affine(m: int, rng: Random) -> AffineTransformation:
    """Uniform element of AGL(m,2): rejection-sample the linear part on rank."""
    while True:
        rows = tuple(rng.getrandbits(m) for _ in range(m))
        if gf2_rank(rows) == m:
            return AffineTransformation(m, rows, rng.getrandbits(m))


def transvection(v: int, theta: int, m: int) -> AffineTransformation:
    """The map x -> x + theta(x)*v where theta is a linear-form mask with theta(v)=0."""
    if v == 0:
        raise ValueError("direction must be nonzero")
    if (theta & v).bit_count() & 1:
        raise ValueError("theta(v) must vanish")
    rows = list(identity_rows(m))
    for i in range(m):
        if (v >> i) & 1:
            rows[i] ^= theta
    return AffineTransformation(m, tuple(rows), 0)


def agl_generators(m: int) -> list[AffineTransformation]:
    """A small generating set of AGL(m,2).

    Adjacent elementary transvections x_i += x_{i+1}, one coordinate cycle and
    a unit translation; the generated closure is the full group.
    """
    gens = []
    for i in range(m - 1):
        rows = list(identity_rows(m))
        rows[i] |= 1 << (i + 1)
        gens.append(AffineTransformation(m, tuple(rows), 0))
    if m >= 2:
        cycle = tuple(1 << ((i + 1) % m) for i in range(m))
        gens.append(AffineTransformation(m, cycle, 0))
    gens.append(translation(m, 1))
    return gens


def agl_order(m: int) -> int:
    """|AGL(m,2)| = 2^m * prod_{i<m} (2^m - 2^i)."""
    order = 1 << m
    for i in range(m):
        order *= (1 << m) - (1 << i)
    return order


def adjoint_inverse(astar: LinearMap) -> LinearMap:
    """Recover the search matrix's partner under the Walsh pairing.

    If A* satisfies fourier(f2)(A* x) = fourier(f1)(x) for all x, the returned
    A is the matrix with classmap(f2)(v) = classmap(f1)(A v); the two are
    exchanged by transposition.
    """
    if gf2_rank(astar.rows) != astar.m:
        raise SingularMatrixError("candidate matrix is singular")
    return LinearMap(astar.m, transpose_rows(astar.rows, astar.m))


def transformation_digest(s: AffineTransformation) -> str:
    packed = ",".join(format(r, "x") for r in s.rows) + ";" + format(s.trans, "x")
    return hashlib.sha256(packed.encode()).hexdigest()[:12]
