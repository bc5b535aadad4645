"""Compile integer polynomials into products of upper-triangular integer matrices.

A *gadget* for a polynomial ``p`` in ``t`` variables is a tuple
``(A, M, N, B)`` of ``k x k`` upper-triangular integer matrices with::

    A M^{a_1} N M^{a_2} N ... N M^{a_t} B == p(a_1, ..., a_t) * E_k

for every vector of nonnegative integers ``a``. Gadgets for single variables
and constants are combined with direct sums (addition), Kronecker products
(multiplication) and scaling of ``A``.

The second half builds the Cantor pairing polynomials and the polynomial
``Q = e * C_{m+1}(x_1, ..., x_m, P^2 x_{m+1})`` whose collisions at a fixed
first argument mirror the solvability of ``P(a, x_2, ..., x_m) = 0``; the
morphism ``mu_a`` then turns such collisions into equal matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Any, Sequence

from .algebra import IntMat, direct_sum, kronecker, unit_matrix
from .polynomial import Polynomial

MAX_DIMENSION = 2**14


class ArityMismatch(ValueError):
    pass


class NonIntegerCoefficient(ValueError):
    pass


class MalformedGadget(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    t: int
    A: IntMat
    M: IntMat
    N: IntMat
    B: IntMat

    def __post_init__(self):
        ks = {m.k for m in (self.A, self.M, self.N, self.B)}
        if len(ks) != 1:
            raise MalformedGadget(f"gadget matrices have different dimensions {sorted(ks)}")

    @property
    def k(self) -> int:
        return self.A.k

    def matrices(self) -> tuple[IntMat, IntMat, IntMat, IntMat]:
        return (self.A, self.M, self.N, self.B)

    def is_upper_triangular(self) -> bool:
        return all(m.is_upper_triangular() for m in self.matrices())

    def to_json(self) -> dict[str, Any]:
        return {"k": self.k, **{name: m.to_rows() for name, m in zip("AMNB", self.matrices())}}


def _check_same_arity(g1: Gadget, g2: Gadget) -> None:
    if g1.t != g2.t:
        raise ArityMismatch(f"gadgets for {g1.t} and {g2.t} variables cannot be combined")


def variable_gadget(t: int, i: int) -> Gadget:
    """Gadget of dimension ``2t`` realizing ``p(a) = a_i`` (1-based ``i``)."""
    if not 1 <= i <= t:
        raise IndexError(f"variable index {i} outside 1..{t}")
    k = 2 * t
    A = IntMat(k, {(0, 0): 1}, upper=True)
    B = IntMat(k, {(k - 1, k - 1): 1}, upper=True)
    m = {(j, j): 1 for j in range(k)}
    m[(2 * i - 2, 2 * i - 1)] = 1
    M = IntMat(k, m, upper=True)
    # identity blocks on the block superdiagonal
    N = IntMat(k, {(2 * b + j, 2 * b + 2 + j): 1 for b in range(t - 1) for j in range(2)}, upper=True)
    return Gadget(t, A, M, N, B)


def constant_gadget(t: int, c: int) -> Gadget:
    """``A = c E_2`` with identity ``M, N, B``: the product is ``c E_2`` for every ``a``."""
    I2 = IntMat.identity(2)
    return Gadget(t, unit_matrix(2).scale(int(c)), I2, I2, I2)


def sum_gadget(g1: Gadget, g2: Gadget) -> Gadget:
    _check_same_arity(g1, g2)
    k = g1.k + g2.k
    first_row = IntMat(k, {(0, j): 1 for j in range(k)}, upper=True)
    last_col = IntMat(k, {(i, k - 1): 1 for i in range(k)}, upper=True)
    return Gadget(
        g1.t,
        first_row @ direct_sum(g1.A, g2.A),
        direct_sum(g1.M, g2.M),
        direct_sum(g1.N, g2.N),
        direct_sum(g1.B, g2.B) @ last_col,
    )


def product_gadget(g1: Gadget, g2: Gadget) -> Gadget:
    _check_same_arity(g1, g2)
    return Gadget(g1.t, *(kronecker(x, y) for x, y in zip(g1.matrices(), g2.matrices())))


def scale_gadget(g: Gadget, c: int) -> Gadget:
    return Gadget(g.t, g.A.scale(int(c)), g.M, g.N, g.B)


def _monomial_gadget(t: int, exps: Sequence[int], coeff: int) -> Gadget:
    if not any(exps):
        return constant_gadget(t, coeff)
    g = None
    for i, e in enumerate(exps, 1):
        for _ in range(e):
            v = variable_gadget(t, i)
            g = v if g is None else product_gadget(g, v)
    return scale_gadget(g, coeff)


def compiled_dimension(p: Polynomial) -> int:
    """Dimension ``compile_polynomial(p)`` would produce, without building it."""
    if p.is_zero():
        return 2
    return sum(2 if not any(e) else (2 * p.arity) ** sum(e) for e in p.terms)


def compile_polynomial(p: Polynomial) -> Gadget:
    if not p.is_integral():
        raise NonIntegerCoefficient("only polynomials with integer coefficients can be compiled")
    if p.is_zero():
        return constant_gadget(p.arity, 0)
    g = None
    for exps, coeff in p.terms.items():
        mg = _monomial_gadget(p.arity, exps, int(coeff))
        g = mg if g is None else sum_gadget(g, mg)
    return g


def gadget_product(g: Gadget, a: Sequence[int]) -> IntMat:
    """``A M^{a_1} N ... N M^{a_t} B`` multiplied left to right."""
    if len(a) != g.t or any(x < 0 for x in a):
        raise ValueError(f"need {g.t} nonnegative integers")
    result = g.A
    for idx, x in enumerate(a):
        if idx:
            result = result @ g.N
        for _ in range(x):
            result = result @ g.M
    return result @ g.B


def _corner_value(mat: IntMat) -> int:
    corner = (0, mat.k - 1)
    stray = [ij for ij in mat.entries if ij != corner]
    if stray:
        raise MalformedGadget(f"product has nonzero entries off the top-right corner, e.g. at {stray[0]}")
    return mat[corner]


def evaluate_gadget(g: Gadget, a: Sequence[int]) -> int:
    return _corner_value(gadget_product(g, a))


# ---------------------------------------------------------------------------
# Cantor polynomials and the Q construction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cantor_polynomial(k: int) -> Polynomial:
    """``C_2(x, y) = (x + y)(x + y + 1)/2 + y`` and ``C_{k+1} = C_2(C_k, x_{k+1})``."""
    if k < 2:
        raise ValueError("Cantor polynomials start at k = 2")
    x1, x2 = Polynomial.variables(2)
    c2 = Fraction(1, 2) * (x1 + x2) * (x1 + x2 + 1) + x2
    if k == 2:
        return c2
    prev = cantor_polynomial(k - 1).extend(k)
    return c2.substitute([prev, Polynomial.variable(k, k)])


@lru_cache(maxsize=None)
def build_Q(P: Polynomial) -> tuple[Polynomial, int]:
    """``(Q, e)`` with ``Q = e * C_{m+1}(x_1..x_m, P^2 x_{m+1})`` and ``e`` the least integer scale."""
    if not P.is_integral():
        raise NonIntegerCoefficient("P must have integer coefficients")
    m = P.arity
    xs = Polynomial.variables(m + 1)
    lifted = P.extend(m + 1)
    unscaled = cantor_polynomial(m + 1).substitute(xs[:m] + [lifted**2 * xs[m]])
    e = unscaled.denominator_lcm()
    return unscaled * e, e


def lemma7_check(P: Polynomial, a: int, bound: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First pair ``b != c`` in ``[0, bound]^m`` (lexicographic scan) with ``Q(a, b) == Q(a, c)``."""
    Q, _ = build_Q(P)
    seen: dict[Fraction, tuple[int, ...]] = {}
    for b in cartesian(range(bound + 1), repeat=P.arity):
        v = Q(a, *b)
        if v in seen:
            return seen[v], b
        seen[v] = b
    return None


@lru_cache(maxsize=8)
def _q_gadget(P: Polynomial) -> Gadget:
    return compile_polynomial(build_Q(P)[0])


def mu_a_images(P: Polynomial, a: int) -> dict[str, IntMat]:
    """Images of ``z1, x, y, z2`` under ``mu_a``; ``mu_a(z1) = mu(z1 x^a y)``."""
    g = _q_gadget(P)
    z1 = g.A
    for _ in range(a):
        z1 = z1 @ g.M
    return {"z1": z1 @ g.N, "x": g.M, "y": g.N, "z2": g.B}


def mu_a_products(P: Polynomial, a: int, exps: Sequence[int]) -> IntMat:
    """``mu_a(z1 x^{e_1} y x^{e_2} y ... y x^{e_m} z2)``, equal to ``Q(a, e) E_k``."""
    if len(exps) != P.arity or any(x < 0 for x in exps):
        raise ValueError(f"need {P.arity} nonnegative exponents")
    images = mu_a_images(P, a)
    result = images["z1"]
    for idx, x in enumerate(exps):
        if idx:
            result = result @ images["y"]
        for _ in range(x):
            result = result @ images["x"]
    return result @ images["z2"]
