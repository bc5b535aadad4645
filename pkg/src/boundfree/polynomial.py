"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .algebra import RationalFormatError, RationalLike, as_rational, format_rational, parse_rational

Monomial = tuple[int, ...]


class PolynomialFormatError(ValueError):
    pass


class Polynomial:
    """``terms`` maps exponent vectors of length ``arity`` to nonzero coefficients."""

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], RationalLike] | None = None):
        if arity < 1:
            raise ValueError("arity must be positive")
        clean: dict[Monomial, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != arity or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for arity {arity}")
            c = clean.get(exps, Fraction(0)) + as_rational(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self.arity = arity
        self.terms = MappingProxyType(dict(sorted(clean.items())))
        self._hash = None

    @classmethod
    def constant(cls, arity: int, c: RationalLike) -> Polynomial:
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def variable(cls, arity: int, i: int) -> Polynomial:
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= arity:
            raise IndexError(f"variable index {i} outside 1..{arity}")
        return cls(arity, {tuple(int(j == i - 1) for j in range(arity)): 1})

    @classmethod
    def variables(cls, arity: int) -> list[Polynomial]:
        return [cls.variable(arity, i) for i in range(1, arity + 1)]

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        return Polynomial.constant(self.arity, as_rational(other))

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.arity, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        terms: dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.arity, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.arity, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    # queries ---------------------------------------------------------------

    def __call__(self, *args: RationalLike) -> Fraction:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        vals = [as_rational(a) for a in args]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        """Degree in the 1-based variable ``x_i``."""
        return max((e[i - 1] for e in self.terms), default=0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def denominator_lcm(self) -> int:
        return lcm(1, *(c.denominator for c in self.terms.values()))

    def substitute(self, args: Sequence[Polynomial | RationalLike]) -> Polynomial:
        """Compose: replace ``x_i`` by ``args[i-1]``; all polynomial args share one arity."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} substitutions, got {len(args)}")
        arities = {a.arity for a in args if isinstance(a, Polynomial)}
        if len(arities) > 1:
            raise ValueError("substituted polynomials must share an arity")
        arity = arities.pop() if arities else 1
        args = [a if isinstance(a, Polynomial) else Polynomial.constant(arity, a) for a in args]
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            if (i, e) not in cache:
                cache[(i, e)] = args[i] ** e
            return cache[(i, e)]

        result = Polynomial(arity)
        for exps, c in self.terms.items():
            term = Polynomial.constant(arity, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def extend(self, arity: int) -> Polynomial:
        """Same polynomial viewed in more variables (new ones appended)."""
        if arity < self.arity:
            raise ValueError("cannot shrink arity")
        pad = (0,) * (arity - self.arity)
        return Polynomial(arity, {e + pad: c for e, c in self.terms.items()})

    # text / json -----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict[str, Any]:
        return {
            "arity": self.arity,
            "terms": [{"coeff": format_rational(c), "exps": list(e)} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Any) -> Polynomial:
        if not isinstance(data, dict) or "arity" not in data or "terms" not in data:
            raise PolynomialFormatError('polynomial must be an object with "arity" and "terms"')
        arity = data["arity"]
        if not isinstance(arity, int) or isinstance(arity, bool) or arity < 1:
            raise PolynomialFormatError('"arity" must be a positive integer')
        if not isinstance(data["terms"], list):
            raise PolynomialFormatError('"terms" must be a list')
        terms: dict[Monomial, Fraction] = {}
        for term in data["terms"]:
            try:
                coeff = parse_rational(term["coeff"])
                exps = tuple(term["exps"])
            except (KeyError, TypeError, RationalFormatError) as exc:
                raise PolynomialFormatError(f"bad term {term!r}: {exc}") from None
            if len(exps) != arity or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps):
                raise PolynomialFormatError(f"bad exponent vector in term {term!r}")
            terms[exps] = terms.get(exps, 0) + coeff
        return cls(arity, terms)


def from_terms(arity: int, pairs: Iterable[tuple[RationalLike, Sequence[int]]]) -> Polynomial:
    """Build from ``(coefficient, exponents)`` pairs; repeated monomials add up."""
    terms: dict[Monomial, Fraction] = {}
    for c, e in pairs:
        e = tuple(e)
        terms[e] = terms.get(e, 0) + as_rational(c)
    return Polynomial(arity, terms)
