"""The CHSH game over GF(Q) and its zero-biased input variant.

Two non-communicating players receive inputs x and y, answer a and b, and
win when a + b = x * y.  Inputs are uniform in the plain game; in the biased
variant each player independently receives 0 with probability gamma and a
uniform nonzero element otherwise.  All probabilities are exact rationals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as _field
from fractions import Fraction
from typing import NamedTuple

from .errors import CapabilityError, FieldMismatchError
from .field import FieldElement, FieldSpec

BRUTE_FORCE_MAX_Q = 9


@dataclass(frozen=True)
class GameDist:
    """Per-player input distribution: mass gamma on 0, uniform elsewhere."""

    field: FieldSpec
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.field.q == 1 and self.gamma != 1:
            raise ValueError("gamma must be 1 for a one-element field")

    @classmethod
    def uniform(cls, field: FieldSpec) -> "GameDist":
        return cls(field, Fraction(1, field.q))

    @property
    def is_uniform(self) -> bool:
        return self.gamma == Fraction(1, self.field.q)

    def mass(self, index: int) -> Fraction:
        if index == 0:
            return self.gamma
        return (1 - self.gamma) / (self.field.q - 1)

    def weights(self) -> tuple[list[int], int]:
        """Integer masses over a common denominator, for fast exact scoring."""
        q = self.field.q
        num, den = self.gamma.numerator, self.gamma.denominator
        d = den * (q - 1) if q > 1 else den
        w = [(den - num)] * q
        w[0] = num * (q - 1) if q > 1 else num
        return w, d


@dataclass(frozen=True)
class DetStrategy:
    """Deterministic pair of response tables, indexed in canonical order."""

    field: FieldSpec
    s1: tuple[int, ...]
    s2: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s1", tuple(self.s1))
        object.__setattr__(self, "s2", tuple(self.s2))
        q = self.field.q
        for name, table in (("s1", self.s1), ("s2", self.s2)):
            if len(table) != q or any(not 0 <= v < q for v in table):
                raise ValueError(f"{name} must be {q} valid element indices")

    @classmethod
    def zeros(cls, field: FieldSpec) -> "DetStrategy":
        return cls(field, (0,) * field.q, (0,) * field.q)

    @classmethod
    def random(cls, field: FieldSpec, rng: random.Random) -> "DetStrategy":
        q = field.q
        return cls(field,
                   tuple(rng.randrange(q) for _ in range(q)),
                   tuple(rng.randrange(q) for _ in range(q)))

    def to_dict(self) -> dict:
        return {"field": self.field.describe(), "s1": list(self.s1), "s2": list(self.s2)}

    @classmethod
    def from_dict(cls, data: dict) -> "DetStrategy":
        return cls(FieldSpec.from_description(data["field"]),
                   tuple(data["s1"]), tuple(data["s2"]))


@dataclass
class GameValueResult:
    """A game value together with the strategy that attains it."""

    value: Fraction
    strategy: DetStrategy
    method: str
    meta: dict = _field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "value_float": float(self.value),
            "strategy": self.strategy.to_dict(),
            "method": self.method,
            "meta": dict(self.meta),
        }


def _check_same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a} vs {b}")


def win_probability(strategy: DetStrategy, dist: GameDist) -> Fraction:
    """Exact winning probability of a deterministic strategy, by Q^2 sum."""
    _check_same_field(strategy.field, dist.field)
    spec = strategy.field
    w, den = dist.weights()
    score = _score(spec, strategy.s1, strategy.s2, w)
    return Fraction(score, den * den)


def _score(spec: FieldSpec, s1, s2, w) -> int:
    q = spec.q
    add, mul = spec.add, spec.mul
    total = 0
    for x in range(q):
        s1x = s1[x]
        wx = w[x]
        if not wx:
            continue
        for y in range(q):
            if add(s1x, s2[y]) == mul(x, y):
                total += wx * w[y]
    return total


def _greedy_best_s2(spec: FieldSpec, s1, w) -> tuple[tuple[int, ...], int]:
    """Optimal player-2 table against a fixed s1, ties to the smallest index.

    Returns the table and the total integer score (weights squared scale).
    """
    q = spec.q
    add, mul, sub = spec.add, spec.mul, spec.sub
    s2 = []
    total = 0
    for y in range(q):
        best_b, best_score = 0, -1
        for b in range(q):
            score = 0
            for x in range(q):
                # wins iff b = x*y - s1(x)
                if b == sub(mul(x, y), s1[x]):
                    score += w[x]
            if score > best_score:
                best_b, best_score = b, score
        s2.append(best_b)
        total += w[y] * best_score
    return tuple(s2), total


def _greedy_best_s1(spec: FieldSpec, s2, w) -> tuple[tuple[int, ...], int]:
    q = spec.q
    mul, sub = spec.mul, spec.sub
    s1 = []
    total = 0
    for x in range(q):
        best_a, best_score = 0, -1
        for a in range(q):
            score = 0
            for y in range(q):
                if a == sub(mul(x, y), s2[y]):
                    score += w[y]
            if score > best_score:
                best_a, best_score = a, score
        s1.append(best_a)
        total += w[x] * best_score
    return tuple(s1), total


def brute_force_value(dist: GameDist) -> GameValueResult:
    """Exact optimum over deterministic strategy pairs.

    Enumerates every s1 table and pairs it with the greedy best-response s2,
    which attains the per-s1 optimum, so the overall maximum is exact.
    Deterministic strategies suffice: randomized ones are convex mixtures.
    """
    spec = dist.field
    q = spec.q
    if q > BRUTE_FORCE_MAX_Q:
        raise CapabilityError(
            f"brute force is capped at Q <= {BRUTE_FORCE_MAX_Q} (got Q={q});"
            " use best_response_search")
    w, den = dist.weights()
    best_score = -1
    best_pair = None
    for s1 in itertools.product(range(q), repeat=q):
        s2, score = _greedy_best_s2(spec, s1, w)
        if score > best_score:
            best_score = score
            best_pair = (s1, s2)
    strategy = DetStrategy(spec, *best_pair)
    return GameValueResult(Fraction(best_score, den * den), strategy,
                           "brute_force", {"q": q})


def best_response_search(dist: GameDist, restarts: int = 8,
                         max_iters: int = 200, seed: int = 0) -> GameValueResult:
    """Local search by alternating exact best responses from random starts.

    The returned value is an exactly evaluated feasible strategy, hence a
    certified lower bound on the game value.  The constant-shift degeneracy
    (adding c to s1, subtracting it from s2) is removed by renormalizing
    s2(0) = 0 after every update.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    spec = dist.field
    q = spec.q
    w, den = dist.weights()
    rng = random.Random(f"{seed}:best-response-search")
    best_score = -1
    best_pair = None
    all_converged = True
    for _ in range(restarts):
        s1 = tuple(rng.randrange(q) for _ in range(q))
        s2 = tuple(rng.randrange(q) for _ in range(q))
        converged = False
        for _ in range(max_iters):
            prev = (s1, s2)
            s2, _sc = _greedy_best_s2(spec, s1, w)
            s1, s2 = _normalize(spec, s1, s2)
            s1, score = _greedy_best_s1(spec, s2, w)
            if (s1, s2) == prev:
                converged = True
                break
        all_converged = all_converged and converged
        if score > best_score:
            best_score = score
            best_pair = (s1, s2)
    strategy = DetStrategy(spec, *best_pair)
    return GameValueResult(Fraction(best_score, den * den), strategy,
                           "best_response_search",
                           {"restarts": restarts, "max_iters": max_iters,
                            "seed": seed, "converged": all_converged})


def _normalize(spec: FieldSpec, s1, s2):
    c = s2[0]
    if c == 0:
        return tuple(s1), tuple(s2)
    return (tuple(spec.add(a, c) for a in s1),
            tuple(spec.sub(b, c) for b in s2))


def _idx(v) -> int:
    return v.index if isinstance(v, FieldElement) else int(v)


def shift_strategy(strategy: DetStrategy, u, v) -> DetStrategy:
    """Translate a strategy's winning set by (-u, -v).

    The new tables are s1'(x) = s1(x+u) - x*v and
    s2'(y) = s2(y+v) - y*u - u*v; the shifted pair wins on (x, y) exactly
    when the original wins on (x+u, y+v).
    """
    spec = strategy.field
    u, v = _idx(u), _idx(v)
    add, sub, mul = spec.add, spec.sub, spec.mul
    uv = mul(u, v)
    s1 = tuple(sub(strategy.s1[add(x, u)], mul(x, v)) for x in range(spec.q))
    s2 = tuple(sub(sub(strategy.s2[add(y, v)], mul(y, u)), uv)
               for y in range(spec.q))
    return DetStrategy(spec, s1, s2)


class BestShift(NamedTuple):
    u: int
    v: int
    strategy: DetStrategy
    value: Fraction


def best_shift(strategy: DetStrategy, dist: GameDist) -> BestShift:
    """Best translate of a strategy under a (typically biased) distribution.

    Enumerates all Q^2 shifts; since the average of the shifted values over
    (u, v) equals the uniform winning probability, the maximum is at least
    the uniform value of the input strategy.
    """
    _check_same_field(strategy.field, dist.field)
    q = strategy.field.q
    best = None
    for u in range(q):
        for v in range(q):
            shifted = shift_strategy(strategy, u, v)
            value = win_probability(shifted, dist)
            if best is None or value > best.value:
                best = BestShift(u, v, shifted, value)
    return best
