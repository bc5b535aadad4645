"""Brute-force ground truth used to cross-check the decision procedure."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Any

from .decider import Exponents, Instance
from .numeration import DigitSequence, instantiate_word


@dataclass(frozen=True)
class CollisionReport:
    found: bool
    pairs: tuple[tuple[Exponents, Exponents], ...]
    bound: int

    def to_json(self) -> dict[str, Any]:
        return {
            "found": self.found,
            "bound": self.bound,
            "pairs": [{"left": list(a), "right": list(b)} for a, b in self.pairs],
        }


def search_collisions(inst: Instance, bound: int = 6) -> CollisionReport:
    """All pairs of exponent vectors in ``[0, bound]^t`` with equal images."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    powers = [inst.x**0]
    for _ in range(bound):
        powers.append(powers[-1] @ inst.x)
    groups: dict[tuple, list[Exponents]] = {}
    for exps in product(range(bound + 1), repeat=inst.t):
        image = inst.z[0]
        for m, n in zip(exps, inst.z[1:]):
            image = image @ powers[m] @ n
        groups.setdefault(image.key(), []).append(exps)
    pairs = sorted(pair for members in groups.values() for pair in combinations(members, 2))
    return CollisionReport(bool(pairs), tuple(pairs), bound)


def tuple_collision_bruteforce(seq: DigitSequence, bound: int = 4) -> tuple[Exponents, Exponents] | None:
    """Two distinct exponent tuples in ``[1, bound]^s`` giving the same digit word."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if seq.s == 0:
        return None
    seen: dict[tuple, Exponents] = {}
    for exps in product(range(1, bound + 1), repeat=seq.s):
        w = instantiate_word(seq, exps)
        if w in seen:
            return seen[w], exps
        seen[w] = exps
    return None
