"""Positional values of digit words in a rational base.

A digit is identified with its rational value, so a ``DigitWord`` is simply a
tuple of Fractions stored most-significant digit first: the word
``w_{n-1} ... w_1 w_0`` has value ``sum(w_i * r**i)``.

The two matrix identities that turn products of upper-triangular matrices
into such values live here as well: :func:`power_closed_form` for powers of
``c * [[a, b], [0, 1]]`` and :func:`digit_sequence` for a product
``N_1 M^{m_1} N_2 ... N_s M^{m_s} N_{s+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .algebra import CanonicalForm, RationalLike, UTMat2, as_rational, format_rational, parse_rational

DigitWord = tuple[Fraction, ...]


class BadBase(ValueError):
    pass


class SingularInput(ValueError):
    pass


class BadArity(ValueError):
    pass


@dataclass(frozen=True)
class Base:
    """A base ``r = u / v`` with ``u, v`` coprime, ``v > 0`` and ``r`` not in {-1, 0, 1}."""

    r: Fraction

    def __post_init__(self):
        r = as_rational(self.r)
        if r in (-1, 0, 1):
            raise BadBase(f"base must not be -1, 0 or 1 (got {r})")
        object.__setattr__(self, "r", r)

    @property
    def u(self) -> int:
        return self.r.numerator

    @property
    def v(self) -> int:
        return self.r.denominator


def word(*digits: RationalLike) -> DigitWord:
    return tuple(as_rational(d) for d in digits)


def parse_word(text: str) -> DigitWord:
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_rational(part) for part in text.split(","))


def format_word(w: Sequence[Fraction]) -> str:
    return ",".join(format_rational(d) for d in w)


def value_of(w: Iterable[RationalLike], r: RationalLike | Base) -> Fraction:
    """Value of the MSD-first word ``w`` in base ``r`` (Horner evaluation)."""
    if isinstance(r, Base):
        r = r.r
    r = as_rational(r)
    total = Fraction(0)
    for d in w:
        total = total * r + d
    return total


def scale_digits(w: Sequence[Fraction], factor: RationalLike) -> DigitWord:
    factor = as_rational(factor)
    if factor == 0:
        raise ValueError("scale factor must be nonzero")
    return tuple(d * factor for d in w)


def common_denominator(digits: Iterable[Fraction]) -> int:
    """Least positive integer turning every digit into an integer."""
    return lcm(1, *(Fraction(d).denominator for d in digits))


def power_closed_form(c: RationalLike, a: RationalLike, b: RationalLike, n: int) -> UTMat2:
    """``(c * [[a, b], [0, 1]]) ** n`` via ``c^n [[a^n, val_a(b^n)], [0, 1]]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    c, a, b = as_rational(c), as_rational(a), as_rational(b)
    cn = c**n
    return UTMat2(cn * a**n, cn * value_of((b,) * n, a), cn)


@dataclass(frozen=True)
class DigitSequence:
    """Digits ``q_1..q_{s+1}`` and ``p_1..p_s`` describing a block product.

    For exponents ``m_1..m_s >= 1``::

        N_1 M^{m_1} ... N_s M^{m_s} N_{s+1}
            = c^{sum m} [[d1 * a^{sum m}, val_a(q_1 p_1^{m_s-1} q_2 ... p_s^{m_1-1} q_{s+1})],
                         [0,              d2]]

    ``s == 0`` is allowed and describes the single matrix ``N_1`` (its
    upper-right entry is ``q_1``).
    """

    q: tuple[Fraction, ...]
    p: tuple[Fraction, ...]
    d1: Fraction
    d2: Fraction
    c: Fraction
    a: Fraction

    @property
    def s(self) -> int:
        return len(self.p)

    def digits(self) -> frozenset[Fraction]:
        return frozenset(self.q) | frozenset(self.p)

    def matrix(self, exponents: Sequence[int]) -> UTMat2:
        """Evaluate the closed form at the given block exponents."""
        total = sum(exponents)
        w = instantiate_word(self, exponents)
        ct = self.c**total
        return UTMat2(ct * self.d1 * self.a**total, ct * value_of(w, self.a), ct * self.d2)


def digit_sequence(cf: CanonicalForm, blocks: Sequence[UTMat2]) -> DigitSequence:
    """Compute the digit sequence for ``N_1 M^{m_1} ... M^{m_s} N_{s+1}``.

    ``cf`` is the canonical form of ``M``; ``blocks`` holds ``N_1..N_{s+1}``.
    Built by the same induction that proves the identity: start from ``N_1``
    alone and absorb one ``M^{m} N`` factor at a time.
    """
    if not blocks:
        raise BadArity("need at least one block matrix")
    if cf.a == 0 or cf.c == 0:
        raise SingularInput("M must be nonsingular")
    for i, n in enumerate(blocks, 1):
        if n.is_singular():
            raise SingularInput(f"N_{i} is singular")
    b = cf.b
    first = blocks[0]
    q: list[Fraction] = [first.e12]
    p: list[Fraction] = []
    d1, d2 = first.e11, first.e22
    for n in blocks[1:]:
        A, B, C = n.e11, n.e12, n.e22
        q = [d1 * B, C * (d1 * b + q[0])] + [C * x for x in q[1:]]
        p = [d1 * C * b] + [C * x for x in p]
        d1, d2 = d1 * A, d2 * C
    return DigitSequence(tuple(q), tuple(p), d1, d2, cf.c, cf.a)


def instantiate_word(seq: DigitSequence, exponents: Sequence[int]) -> DigitWord:
    """``q_1 p_1^{m_s-1} q_2 ... q_s p_s^{m_1-1} q_{s+1}`` for exponents ``m_1..m_s``."""
    s = seq.s
    if len(exponents) != s:
        raise BadArity(f"expected {s} exponents, got {len(exponents)}")
    if any(m < 1 for m in exponents):
        raise ValueError("exponents must be >= 1")
    out: list[Fraction] = []
    for i in range(s):
        out.append(seq.q[i])
        out.extend([seq.p[i]] * (exponents[s - 1 - i] - 1))
    out.append(seq.q[s])
    return tuple(out)
