"""Injectivity of a morphism into 2x2 upper-triangular rational matrices on
``L_t = z_1 x* z_2 x* ... z_t x* z_{t+1}``.

A word of ``L_t`` is identified with its exponent vector ``(m_1, ..., m_t)``
and maps to ``N_1 M^{m_1} N_2 ... N_t M^{m_t} N_{t+1}`` where ``M`` is the
image of ``x`` and ``N_i`` the image of ``z_i``. All ``N_i`` must be
nonsingular.

The procedure dispatches on ``M``: singular, ``a = -1``, ``a = 1`` (with
``M = c [[a, b], [0, 1]]``) are settled directly; every other case is split
over the sub-languages where a fixed set ``K`` of exponents is zero, and each
pair of sub-languages is reduced to emptiness of a product of a pattern
automaton with the equal-value automaton for base ``a``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

from .algebra import (
    CanonicalForm,
    RationalFormatError,
    SingularKind,
    UTMat2,
    canonical_form,
    format_rational,
    parse_rational,
)
from .automata import (
    PatternSpec,
    ambiguity_check,
    equality_automaton,
    loop_counts,
    pair_pattern_automaton,
    pattern_automaton,
    product,
    reverse,
    shortest_accepting_run,
)
from .numeration import DigitSequence, common_denominator, digit_sequence

Exponents = tuple[int, ...]


class UnsupportedInstance(ValueError):
    """Some image of ``z_i`` is singular; no general procedure is known for that case."""


class InstanceFormatError(ValueError):
    pass


class Branch(enum.Enum):
    SINGULAR_X_T1 = "SingularX-t1"
    SINGULAR_X_TGE2 = "SingularX-tGe2"
    A_MINUS1_T1 = "AMinus1-t1"
    A_MINUS1_TGE2 = "AMinus1-tGe2"
    A1_T1 = "A1-t1"
    A1_T2 = "A1-t2"
    A1_TGE3 = "A1-tGe3"
    MAIN_PAIR_COLLISION = "Main-PairCollision"
    MAIN_SELF_AMBIGUITY = "Main-SelfAmbiguity"
    MAIN_SELF_COLLISION = "Main-SelfCollision"
    MAIN_INJECTIVE = "Main-Injective"
    PROBLEM_B_VACUOUS = "ProblemB-Vacuous"


@dataclass(frozen=True)
class Instance:
    """``t``, the image of ``x`` and the ``t + 1`` images of ``z_1..z_{t+1}``.

    Singular ``z`` images are rejected unless ``strict=False``, which the
    brute-force oracle uses for instances outside the decidable class.
    """

    t: int
    x: UTMat2
    z: tuple[UTMat2, ...]
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(self.z))
        if self.t < 1:
            raise ValueError("t must be a positive integer")
        if len(self.z) != self.t + 1:
            raise ValueError(f"expected {self.t + 1} z matrices, got {len(self.z)}")
        if self.strict:
            for i, n in enumerate(self.z, 1):
                if n.is_singular():
                    raise UnsupportedInstance(
                        f"image of z_{i} is singular; the procedure requires every z image to be nonsingular"
                    )

    def image(self, exponents: Sequence[int]) -> UTMat2:
        if len(exponents) != self.t or any(m < 0 for m in exponents):
            raise ValueError(f"need {self.t} nonnegative exponents")
        result = self.z[0]
        for m, n in zip(exponents, self.z[1:]):
            result = result @ (self.x**m) @ n
        return result


@dataclass(frozen=True)
class Verdict:
    injective: bool
    branch: Branch
    witness: tuple[Exponents, Exponents] | None = None

    def to_json(self) -> dict[str, Any]:
        w = None
        if self.witness is not None:
            w = {"left": list(self.witness[0]), "right": list(self.witness[1])}
        return {"injective": self.injective, "branch": self.branch.value, "witness": w}


def _collision(branch: Branch, left: Sequence[int], right: Sequence[int]) -> Verdict:
    pair = tuple(sorted((tuple(left), tuple(right))))
    return Verdict(False, branch, pair)


def verify_witness(inst: Instance, left: Sequence[int], right: Sequence[int]) -> bool:
    if tuple(left) == tuple(right):
        return False
    return inst.image(left) == inst.image(right)


# ---------------------------------------------------------------------------
# special cases
# ---------------------------------------------------------------------------


def branch_singular_x(inst: Instance, kind: SingularKind) -> Verdict:
    t = inst.t
    if t >= 2:
        pad = (0,) * (t - 2)
        return _collision(Branch.SINGULAR_X_TGE2, (2, 1) + pad, (1, 2) + pad)
    m = inst.x
    if kind is SingularKind.ZERO:
        # M @ M == 0 always; M itself is zero only when e12 == 0 too
        if m.e12 == 0:
            return _collision(Branch.SINGULAR_X_T1, (1,), (2,))
        return _collision(Branch.SINGULAR_X_T1, (2,), (3,))
    # M^n = a^(n-1) M with a the nonzero diagonal entry
    a = m.e11 if kind is SingularKind.BOTTOM_ROW_ZERO else m.e22
    if a == 1:
        return _collision(Branch.SINGULAR_X_T1, (1,), (2,))
    if a == -1:
        return _collision(Branch.SINGULAR_X_T1, (1,), (3,))
    return Verdict(True, Branch.SINGULAR_X_T1)


def branch_a_minus1(inst: Instance, cf: CanonicalForm) -> Verdict:
    # M^2 = c^2 I, so M^2 commutes with everything
    t = inst.t
    if t >= 2:
        pad = (0,) * (t - 2)
        return _collision(Branch.A_MINUS1_TGE2, (2, 0) + pad, (0, 2) + pad)
    if cf.c in (1, -1):
        return _collision(Branch.A_MINUS1_T1, (0,), (2,))
    # |det M^n| = c^(2n) separates all powers
    return Verdict(True, Branch.A_MINUS1_T1)


def _integer_kernel_vector(rows: list[list[Fraction]], n: int) -> list[int] | None:
    """A nonzero integer vector annihilated by every row, or None if only 0 is."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    vec = [Fraction(0)] * n
    vec[free[0]] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -mat[i][free[0]]
    den = common_denominator(vec)
    return [int(x * den) for x in vec]


def _a1_weights(inst: Instance) -> list[Fraction]:
    """Weight of ``m_i`` in the scaled upper-right entry: ``A_1..A_i * C_{i+1}..C_{t+1}``."""
    weights = []
    for i in range(1, inst.t + 1):
        w = Fraction(1)
        for n in inst.z[:i]:
            w *= n.e11
        for n in inst.z[i:]:
            w *= n.e22
        weights.append(w)
    return weights


def branch_a_1(inst: Instance, cf: CanonicalForm) -> Verdict:
    """``M = c [[1, b], [0, 1]]``.

    The image of exponent vector ``m`` is ``c^{sum m}`` times a matrix with
    constant diagonal and upper-right entry ``const + b * sum(w_i m_i)``. Two
    vectors collide iff their difference ``delta`` satisfies
    ``b * sum(w_i delta_i) == 0``, ``sum(delta) == 0`` when ``c`` is not
    +-1, and ``sum(delta)`` even when ``c == -1``.
    """
    t = inst.t
    branch = {1: Branch.A1_T1, 2: Branch.A1_T2}.get(t, Branch.A1_TGE3)
    rows: list[list[Fraction]] = []
    if cf.c not in (1, -1):
        rows.append([Fraction(1)] * t)
    if cf.b != 0:
        rows.append(_a1_weights(inst))
    delta = _integer_kernel_vector(rows, t)
    if delta is None:
        return Verdict(True, branch)
    if cf.c == -1 and sum(delta) % 2:
        delta = [2 * x for x in delta]
    left = [max(x, 0) for x in delta]
    right = [max(-x, 0) for x in delta]
    return _collision(branch, left, right)


# ---------------------------------------------------------------------------
# main case: a not in {-1, 0, 1}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetProblem:
    """Words of ``L_t`` whose exponents vanish exactly on ``K``.

    ``collapsed`` multiplies the ``z`` images that become adjacent once the
    zero blocks disappear; ``free`` lists the positions (1-based) that keep a
    positive exponent, in order.
    """

    t: int
    K: frozenset[int]
    free: tuple[int, ...]
    collapsed: tuple[UTMat2, ...]
    seq: DigitSequence

    @property
    def s(self) -> int:
        return len(self.free)

    def pattern(self, scale: int = 1) -> PatternSpec:
        return PatternSpec(tuple(q * scale for q in self.seq.q), tuple(p * scale for p in self.seq.p))

    def expand(self, exponents: Sequence[int]) -> Exponents:
        full = [0] * self.t
        for pos, m in zip(self.free, exponents):
            full[pos - 1] = m
        return tuple(full)


def subset_problem(inst: Instance, K: frozenset[int] | set[int], cf: CanonicalForm) -> SubsetProblem:
    K = frozenset(K)
    if not K <= set(range(1, inst.t + 1)):
        raise ValueError("K must be a subset of 1..t")
    free = tuple(i for i in range(1, inst.t + 1) if i not in K)
    collapsed = []
    current = inst.z[0]
    for i in range(1, inst.t + 1):
        if i in K:
            current = current @ inst.z[i]
        else:
            collapsed.append(current)
            current = inst.z[i]
    collapsed.append(current)
    return SubsetProblem(inst.t, K, free, tuple(collapsed), digit_sequence(cf, collapsed))


def _exponents_from_run(run: Sequence[int], s: int) -> Exponents:
    # the loop at pattern position i repeats p_i, which carries exponent m_{s+1-i} - 1
    return tuple(n + 1 for n in reversed(loop_counts(run, s)))


def check_pair(pa: SubsetProblem, pb: SubsetProblem, same: bool, inst: Instance | None = None) -> Verdict:
    """Search for colliding words, one from each sub-language.

    With ``same`` set the two problems are the same sub-language and the
    words must differ. The returned Verdict covers only this pair: a
    collision branch with a witness, ``ProblemB-Vacuous`` when exactly one
    side has no free exponent, or ``Main-Injective``.
    """
    if pa.s == 0 or pb.s == 0:
        if pa.s != pb.s:
            # lengths force a^(sum k) == 1, impossible for a not in {-1, 0, 1}
            return Verdict(True, Branch.PROBLEM_B_VACUOUS)
        return Verdict(True, Branch.MAIN_INJECTIVE)

    a = pa.seq.a
    if same:
        amb = ambiguity_check(pattern_automaton(pa.pattern()))
        if amb is not None:
            _, run1, run2 = amb
            left = pa.expand(_exponents_from_run(run1, pa.s))
            right = pa.expand(_exponents_from_run(run2, pa.s))
            return _checked(inst, _collision(Branch.MAIN_SELF_AMBIGUITY, left, right))

    scale = common_denominator(pa.seq.digits() | pb.seq.digits())
    top, bottom = pa.pattern(scale), pb.pattern(scale)
    digits = {int(x) for x in top.letters() | bottom.letters()}
    if abs(a) > 1:
        # equal-value automaton reads least significant digit first
        eq = equality_automaton(a, digits)
        patterns = reverse(pair_pattern_automaton(top, bottom, require_diff=same, alphabet=eq.alphabet))
    else:
        # base 1/a read most significant first decides equality in base a
        eq = equality_automaton(1 / a, digits)
        patterns = pair_pattern_automaton(top, bottom, require_diff=same, alphabet=eq.alphabet)
    found = shortest_accepting_run(product(patterns, eq))
    if found is None:
        return Verdict(True, Branch.MAIN_INJECTIVE)
    _, path = found
    top_run = [state[0][0] for state in path]
    bottom_run = [state[0][1] for state in path]
    left = pa.expand(_exponents_from_run(top_run, pa.s))
    right = pb.expand(_exponents_from_run(bottom_run, pb.s))
    branch = Branch.MAIN_SELF_COLLISION if same else Branch.MAIN_PAIR_COLLISION
    return _checked(inst, _collision(branch, left, right))


def _checked(inst: Instance | None, verdict: Verdict) -> Verdict:
    if inst is not None and verdict.witness is not None and not verify_witness(inst, *verdict.witness):
        raise RuntimeError(f"internal error: witness {verdict.witness} does not verify")
    return verdict


def subsets(t: int) -> list[frozenset[int]]:
    """All subsets of 1..t, by size and then lexicographically."""
    return [frozenset(c) for r in range(t + 1) for c in combinations(range(1, t + 1), r)]


def main_algorithm(inst: Instance, cf: CanonicalForm) -> Verdict:
    problems = [subset_problem(inst, K, cf) for K in subsets(inst.t)]
    for i, pa in enumerate(problems):
        for j in range(i, len(problems)):
            verdict = check_pair(pa, problems[j], same=(i == j), inst=inst)
            if not verdict.injective:
                return verdict
    return Verdict(True, Branch.MAIN_INJECTIVE)


def decide(inst: Instance) -> Verdict:
    for i, n in enumerate(inst.z, 1):
        if n.is_singular():
            raise UnsupportedInstance(
                f"image of z_{i} is singular; the procedure requires every z image to be nonsingular"
            )
    cf = canonical_form(inst.x)
    if isinstance(cf, SingularKind):
        verdict = branch_singular_x(inst, cf)
    elif cf.a == -1:
        verdict = branch_a_minus1(inst, cf)
    elif cf.a == 1:
        verdict = branch_a_1(inst, cf)
    else:
        verdict = main_algorithm(inst, cf)
    return _checked(inst, verdict)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _matrix_from_json(obj: Any, what: str) -> UTMat2:
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj)):
        raise InstanceFormatError(f"{what}: expected a 2x2 array")
    try:
        entries = [[parse_rational(e) if isinstance(e, str) else None for e in row] for row in obj]
    except RationalFormatError as exc:
        raise InstanceFormatError(f"{what}: {exc}") from None
    if any(e is None for row in entries for e in row):
        raise InstanceFormatError(f"{what}: entries must be rational strings")
    if entries[1][0] != 0:
        raise InstanceFormatError(f"{what}: lower-left entry must be \"0\"")
    return UTMat2(entries[0][0], entries[0][1], entries[1][1])


def _matrix_to_json(m: UTMat2) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.rows()]


def instance_from_json(data: Any, strict: bool = True) -> Instance:
    if not isinstance(data, dict) or set(data) != {"t", "x", "z"}:
        raise InstanceFormatError('instance must be an object with keys "t", "x", "z"')
    t = data["t"]
    if not isinstance(t, int) or isinstance(t, bool) or t < 1:
        raise InstanceFormatError('"t" must be a positive integer')
    if not isinstance(data["z"], list) or len(data["z"]) != t + 1:
        raise InstanceFormatError(f'"z" must list {t + 1} matrices')
    x = _matrix_from_json(data["x"], "x")
    z = [_matrix_from_json(m, f"z[{i}]") for i, m in enumerate(data["z"])]
    return Instance(t, x, tuple(z), strict=strict)


def instance_to_json(inst: Instance) -> dict[str, Any]:
    return {"t": inst.t, "x": _matrix_to_json(inst.x), "z": [_matrix_to_json(n) for n in inst.z]}
