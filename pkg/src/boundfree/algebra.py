"""Exact scalars and the two matrix families used throughout the package.

Scalars are :class:`fractions.Fraction` values. ``UTMat2`` is a 2x2
upper-triangular rational matrix; ``IntMat`` is a square integer matrix of
runtime dimension stored sparsely (only nonzero entries), which keeps the
large Kronecker-product gadgets of the encoder cheap to multiply.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class RationalFormatError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``-?INT(/POSINT)?`` into a reduced Fraction.

    >>> parse_rational("-6/4")
    Fraction(-3, 2)
    """
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise RationalFormatError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise RationalFormatError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or text")
    return Fraction(x)


# ---------------------------------------------------------------------------
# 2x2 upper-triangular rational matrices
# ---------------------------------------------------------------------------


class NotUpperTriangular(ValueError):
    pass


@dataclass(frozen=True)
class UTMat2:
    """The matrix ``[[e11, e12], [0, e22]]`` with exact rational entries."""

    e11: Fraction
    e12: Fraction
    e22: Fraction

    def __post_init__(self):
        for name in ("e11", "e12", "e22"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def identity(cls) -> UTMat2:
        return cls(1, 0, 1)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> UTMat2:
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("expected a 2x2 matrix")
        if as_rational(rows[1][0]) != 0:
            raise NotUpperTriangular("lower-left entry must be 0")
        return cls(rows[0][0], rows[0][1], rows[1][1])

    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.e11, self.e12), (Fraction(0), self.e22))

    @property
    def det(self) -> Fraction:
        return self.e11 * self.e22

    def is_singular(self) -> bool:
        return self.det == 0

    def key(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.e11, self.e12, self.e22)

    def __matmul__(self, other: UTMat2) -> UTMat2:
        if not isinstance(other, UTMat2):
            return NotImplemented
        return UTMat2(
            self.e11 * other.e11,
            self.e11 * other.e12 + self.e12 * other.e22,
            self.e22 * other.e22,
        )

    def scale(self, c: RationalLike) -> UTMat2:
        c = as_rational(c)
        return UTMat2(c * self.e11, c * self.e12, c * self.e22)

    def __pow__(self, n: int) -> UTMat2:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = UTMat2.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __str__(self):
        f = format_rational
        return f"[[{f(self.e11)}, {f(self.e12)}], [0, {f(self.e22)}]]"


def matprod(mats: Iterable[UTMat2]) -> UTMat2:
    result = UTMat2.identity()
    for m in mats:
        result = result @ m
    return result


class SingularKind(enum.Enum):
    BOTTOM_ROW_ZERO = "BottomRowZero"  # [[a, b], [0, 0]], a != 0
    TOP_LEFT_ZERO = "TopLeftZero"  # [[0, b], [0, c]], c != 0
    ZERO = "Zero"  # both diagonal entries zero; M @ M == 0


@dataclass(frozen=True)
class CanonicalForm:
    """``M = c * [[a, b], [0, 1]]`` for a nonsingular ``M``."""

    c: Fraction
    a: Fraction
    b: Fraction

    def reconstruct(self) -> UTMat2:
        return UTMat2(self.c * self.a, self.c * self.b, self.c)


def canonical_form(m: UTMat2) -> CanonicalForm | SingularKind:
    if m.e11 != 0 and m.e22 != 0:
        return CanonicalForm(c=m.e22, a=m.e11 / m.e22, b=m.e12 / m.e22)
    if m.e11 != 0:
        return SingularKind.BOTTOM_ROW_ZERO
    if m.e22 != 0:
        return SingularKind.TOP_LEFT_ZERO
    return SingularKind.ZERO


# ---------------------------------------------------------------------------
# k x k integer matrices (sparse)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IntMat:
    """Square integer matrix of dimension ``k`` holding only nonzero entries.

    Indices are 0-based: the 1-based entry ``(1, k)`` is ``m[0, k - 1]``.
    With ``upper=True`` the constructor checks that nothing sits below the
    diagonal.
    """

    k: int
    entries: Mapping[tuple[int, int], int]
    upper: bool = field(default=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise IndexError(f"entry ({i}, {j}) outside a {self.k}x{self.k} matrix")
            if int(v) != v:
                raise ValueError("IntMat entries must be integers")
            if v:
                clean[(i, j)] = int(v)
        object.__setattr__(self, "entries", MappingProxyType(clean))
        if self.upper and not self.is_upper_triangular():
            raise NotUpperTriangular("nonzero entry below the diagonal")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], upper: bool = False) -> IntMat:
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ValueError("matrix must be square")
        return cls(k, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}, upper)

    @classmethod
    def identity(cls, k: int) -> IntMat:
        return cls(k, {(i, i): 1 for i in range(k)}, upper=True)

    @classmethod
    def zero(cls, k: int) -> IntMat:
        return cls(k, {}, upper=True)

    def to_rows(self) -> list[list[int]]:
        rows = [[0] * self.k for _ in range(self.k)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def is_upper_triangular(self) -> bool:
        return all(i <= j for i, j in self.entries)

    @cached_property
    def _row_index(self) -> dict[int, list[tuple[int, int]]]:
        idx: dict[int, list[tuple[int, int]]] = {}
        for (i, j), v in self.entries.items():
            idx.setdefault(i, []).append((j, v))
        return idx

    def __matmul__(self, other: IntMat) -> IntMat:
        if not isinstance(other, IntMat):
            return NotImplemented
        if self.k != other.k:
            raise ValueError(f"dimension mismatch: {self.k} vs {other.k}")
        out: dict[tuple[int, int], int] = {}
        rows_b = other._row_index
        for (i, l), a in self.entries.items():
            for j, b in rows_b.get(l, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntMat(self.k, out, upper=self.upper and other.upper)

    def __pow__(self, n: int) -> IntMat:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = IntMat.identity(self.k)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def scale(self, c: int) -> IntMat:
        return IntMat(self.k, {ij: c * v for ij, v in self.entries.items()}, self.upper)

    def __eq__(self, other):
        if not isinstance(other, IntMat):
            return NotImplemented
        return self.k == other.k and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.k, frozenset(self.entries.items())))

    def __repr__(self):
        return f"IntMat(k={self.k}, entries={dict(self.entries)!r})"


def kronecker(a: IntMat, b: IntMat) -> IntMat:
    kb = b.k
    out = {}
    for (i1, j1), v1 in a.entries.items():
        for (i2, j2), v2 in b.entries.items():
            out[(i1 * kb + i2, j1 * kb + j2)] = v1 * v2
    return IntMat(a.k * kb, out, upper=a.upper and b.upper)


def direct_sum(*mats: IntMat) -> IntMat:
    if not mats:
        raise ValueError("direct_sum needs at least one matrix")
    out = {}
    offset = 0
    for m in mats:
        for (i, j), v in m.entries.items():
            out[(i + offset, j + offset)] = v
        offset += m.k
    return IntMat(offset, out, upper=all(m.upper for m in mats))


def unit_matrix(k: int) -> IntMat:
    """E_k: the single nonzero entry is a 1 in the top-right corner."""
    if k < 1:
        raise ValueError("k must be positive")
    return IntMat(k, {(0, k - 1): 1}, upper=True)


def intmat_chain(mats: Iterable[IntMat]) -> IntMat:
    """Left-to-right product of a nonempty sequence of matrices."""
    it = iter(mats)
    result = next(it)
    for m in it:
        result = result @ m
    return result
