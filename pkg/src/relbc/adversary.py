"""Cheating strategies under explicit signaling constraints.

A cheating committer is split across two locations that alternate rounds.
What each round's function may read is fixed by a causal model: the current
challenge, every challenge old enough to have propagated across (rho rounds),
and every challenge received at the same location (same round parity).  The
committed bit is modeled as an extra challenge delivered at the decision
round k0 and propagating the same way.

The recursive attack spends rho+1 rounds per step: it stays silent, computes
the corrective factor eta for the prefix, then plays a two-player game on the
windowed challenge products; a win, a zero final challenge, or eta = 0 each
make the step's condition collapse, which drives the acceptance probability
towards 1 exponentially in the number of steps.

Strategies are built in sign-flipped response space (see
protocol.tilde_transform) and converted back at the boundary.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as _field
from fractions import Fraction
from typing import Callable, Optional

from .field import FieldSpec
from .games import DetStrategy
from .protocol import ProtocolParams, Variant


@dataclass(frozen=True)
class CausalModel:
    """Propagation time in rounds (even, >= 2) and decision round for the bit."""

    rho: int = 2
    k0: int = 0

    def __post_init__(self):
        if self.rho < 2 or self.rho % 2 != 0:
            raise ValueError(f"propagation time must be an even integer >= 2,"
                             f" got {self.rho}")
        if self.k0 < 0:
            raise ValueError(f"decision time must be >= 0, got {self.k0}")

    def challenge_visible(self, k: int, j: int) -> bool:
        """May the round-k function read challenge j?"""
        if j == k:
            return True
        if j > k:
            return False
        return j <= k - self.rho or (k - j) % 2 == 0

    def d_visible(self, k: int) -> bool:
        """The bit is a pseudo-challenge delivered at round k0."""
        return k >= self.k0 + self.rho or (k >= self.k0 and (k - self.k0) % 2 == 0)

    def view(self, k: int, d: int, challenges: tuple[int, ...]) -> "CausalView":
        known = {j: challenges[j - 1] for j in range(1, len(challenges) + 1)
                 if self.challenge_visible(k, j)}
        return CausalView(k, known.get(k), known,
                          d if self.d_visible(k) else None)


@dataclass(frozen=True)
class CausalView:
    """Everything a round function is allowed to read."""

    round_index: int
    current: Optional[int]
    known: dict[int, int]
    d: Optional[int]

    def x(self, j: int) -> int:
        if j not in self.known:
            raise LookupError(
                f"challenge x_{j} is not visible at round {self.round_index}")
        return self.known[j]


RoundFn = Callable[[int, tuple[int, ...], CausalView, dict[int, int]], int]


def compute_eta(spec: FieldSpec, d: int, challenges: tuple[int, ...],
                ytildes: tuple[int, ...]) -> int:
    """Corrective factor of a prefix: d*prod(x_j) - sum_i ytilde_i*prod_{j>i}(x_j).

    Zero exactly when the symmetrized acceptance condition already holds for
    the prefix.
    """
    if len(challenges) != len(ytildes):
        raise ValueError("prefix challenge and response lengths differ")
    total = 0
    suffix = 1
    for x, yt in zip(reversed(challenges), reversed(ytildes)):
        total = spec.add(total, spec.mul(yt, suffix))
        suffix = spec.mul(suffix, x)
    return spec.sub(spec.mul(d, suffix), total)


@dataclass
class CheatStrategy:
    """Per-round deterministic response functions for one protocol variant.

    Round functions take (d, challenges, view, cache) and return a
    sign-flipped response; cache maps earlier rounds to their sign-flipped
    outputs so recursive constructions need not recompute the prefix.
    Compliant functions read only the view and cache; compliance is audited
    by causality_check, which perturbs inputs outside the view.
    """

    field: FieldSpec
    variant: Variant
    m: int
    model: CausalModel
    rounds: tuple[RoundFn, ...]
    lineage: str = "custom"
    game_strategy: Optional[DetStrategy] = None
    meta: dict = _field(default_factory=dict)

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if len(self.rounds) != self.params.n_rounds:
            raise ValueError(
                f"{len(self.rounds)} round functions for {self.params.n_rounds}"
                " protocol rounds")

    @property
    def params(self) -> ProtocolParams:
        return ProtocolParams(self.field, self.m, self.variant)

    @property
    def n_challenges(self) -> int:
        return self.params.n_challenges

    def _fill(self, upto: int, d: int, xs: tuple[int, ...],
              cache: dict[int, int]) -> None:
        for k in range(1, upto + 1):
            if k not in cache:
                view = self.model.view(k, d, xs)
                cache[k] = self.rounds[k - 1](d, xs, view, cache)

    def respond(self, k: int, d: int, xs: tuple[int, ...],
                cache: Optional[dict[int, int]] = None) -> int:
        """Actual (un-flipped) response at round k for the given challenges."""
        if cache is None:
            cache = {}
        self._fill(k, d, xs, cache)
        yt = cache[k]
        return yt if k % 2 == 1 else self.field.neg(yt)

    def responses(self, d: int, xs: tuple[int, ...]) -> tuple[int, ...]:
        cache: dict[int, int] = {}
        n = len(self.rounds)
        self._fill(n, d, xs, cache)
        neg = self.field.neg
        return tuple(cache[k] if k % 2 == 1 else neg(cache[k])
                     for k in range(1, n + 1))


def _zero_round(d, xs, view, cache) -> int:
    return 0


def _eta_at(spec: FieldSpec, prefix: int, view: CausalView,
            cache: dict[int, int]) -> int:
    if view.d is None:
        raise LookupError(f"bit not yet known at round {view.round_index}")
    challenges = tuple(view.x(j) for j in range(1, prefix + 1))
    ytildes = tuple(cache[i] for i in range(1, prefix + 1))
    return compute_eta(spec, view.d, challenges, ytildes)


def _tower_rounds(spec: FieldSpec, m: int, model: CausalModel,
                  game_strategy: DetStrategy) -> list[RoundFn]:
    rho, k0 = model.rho, model.k0
    steps = (m - k0) // (rho + 1)
    rounds: list[RoundFn] = [_zero_round] * k0

    def make_first(prefix: int) -> RoundFn:
        ka = prefix + rho
        window = [j for j in range(prefix + 1, ka + 1) if (ka - j) % 2 == 0]
        s1 = game_strategy.s1

        def fn(d, xs, view, cache):
            eta = _eta_at(spec, prefix, view, cache)
            xin = 1
            for j in window:
                xin = spec.mul(xin, view.x(j))
            return spec.mul(eta, s1[xin])
        return fn

    def make_second(prefix: int) -> RoundFn:
        kb = prefix + rho + 1
        window = [j for j in range(prefix + 1, prefix + rho + 1)
                  if (kb - j) % 2 == 0]
        s2 = game_strategy.s2

        def fn(d, xs, view, cache):
            eta = _eta_at(spec, prefix, view, cache)
            yin = 1
            for j in window:
                yin = spec.mul(yin, view.x(j))
            return spec.mul(spec.mul(eta, s2[yin]), view.x(kb))
        return fn

    for s in range(steps):
        prefix = k0 + s * (rho + 1)
        rounds.extend([_zero_round] * (rho - 1))
        rounds.append(make_first(prefix))
        rounds.append(make_second(prefix))
    return rounds


def attack_base(spec: FieldSpec, m: int, game_strategy: DetStrategy
                ) -> CheatStrategy:
    """Recursive attack on the symmetrized protocol, three rounds per step.

    Requires m to be a positive multiple of 3; use build_attack for other
    lengths.  The plugged game strategy is evaluated on uniform inputs.
    """
    if m < 3 or m % 3 != 0:
        raise ValueError(
            f"the three-round tower needs m to be a positive multiple of 3"
            f" (got {m}); use build_attack to pad other lengths")
    return attack_general(spec, m, CausalModel(rho=2, k0=0), game_strategy,
                          lineage="base")


def attack_general(spec: FieldSpec, m: int, model: CausalModel,
                   game_strategy: DetStrategy, lineage: str = "general"
                   ) -> CheatStrategy:
    """Recursive attack with rho+1 rounds per step and a quiet prefix of k0.

    The plugged strategy plays on products of rho/2 fresh challenges per
    side, so each side's game input is 0 with probability
    gamma = 1 - (1 - 1/Q)^(rho/2); the strategy should be chosen for that
    biased input distribution.
    """
    if game_strategy.field != spec:
        raise ValueError("game strategy is over a different field")
    steps, rem = divmod(m - model.k0, model.rho + 1)
    if steps < 1 or rem != 0:
        nearest = model.k0 + max(1, steps) * (model.rho + 1)
        raise ValueError(
            f"m = {m} is not of tower form k0 + k*(rho+1) with k >= 1 for"
            f" {model}; nearest valid tower is m = {nearest}")
    rounds = _tower_rounds(spec, m, model, game_strategy)
    return CheatStrategy(spec, Variant.SYMMETRIZED, m, model, tuple(rounds),
                         lineage=lineage, game_strategy=game_strategy,
                         meta={"steps": steps})


def tower_gamma(spec: FieldSpec, model: CausalModel) -> Fraction:
    """Probability that one side's windowed challenge product is zero."""
    return 1 - (1 - Fraction(1, spec.q)) ** (model.rho // 2)


def symmetrize_up(s: CheatStrategy) -> CheatStrategy:
    """Lift a standard-variant strategy to the symmetrized protocol.

    Rounds 1..m-1 are unchanged; the final response is the old final
    response times the fresh last challenge.  Whenever the original wins a
    point, the lifted strategy wins all its extensions.
    """
    if s.variant is not Variant.STANDARD:
        raise ValueError("symmetrize_up expects a standard-variant strategy")
    m = s.params.n_rounds
    model = s.model
    old_final = s.rounds[m - 1]
    spec = s.field

    def final(d, xs, view, cache):
        inner = model.view(m, d, xs[:-1])
        return spec.mul(view.x(m), old_final(d, xs[:-1], inner, cache))

    return CheatStrategy(spec, Variant.SYMMETRIZED, m, model,
                         s.rounds[:-1] + (final,),
                         lineage=f"symmetrize_up({s.lineage})",
                         game_strategy=s.game_strategy, meta=dict(s.meta))


def desymmetrize(s: CheatStrategy) -> CheatStrategy:
    """Turn a symmetrized-variant strategy into one for the next-longer
    standard protocol by appending a constant-zero final round.

    The acceptance condition of the longer protocol with a zero final
    response is exactly the symmetrized condition, so the probability
    carries over unchanged.
    """
    if s.variant is not Variant.SYMMETRIZED:
        raise ValueError("desymmetrize expects a symmetrized-variant strategy")
    return CheatStrategy(s.field, Variant.STANDARD, s.m + 1, s.model,
                         s.rounds + (_zero_round,),
                         lineage=f"desymmetrize({s.lineage})",
                         game_strategy=s.game_strategy, meta=dict(s.meta))


def extend_symmetrized(s: CheatStrategy, extra: int) -> CheatStrategy:
    """Pad a symmetrized strategy with silent rounds.

    Each padding round leaves the acceptance deficit multiplied by
    (1 - 1/Q): the new condition holds when the old one did or the new
    final challenge is zero.
    """
    if s.variant is not Variant.SYMMETRIZED:
        raise ValueError("extend_symmetrized expects a symmetrized strategy")
    if extra < 0:
        raise ValueError("extra must be >= 0")
    if extra == 0:
        return s
    return CheatStrategy(s.field, Variant.SYMMETRIZED, s.m + extra, s.model,
                         s.rounds + (_zero_round,) * extra,
                         lineage=f"pad+{extra}({s.lineage})",
                         game_strategy=s.game_strategy, meta=dict(s.meta))


def zeros_strategy(spec: FieldSpec, variant: Variant, m: int,
                   model: Optional[CausalModel] = None) -> CheatStrategy:
    """Always answer zero; wins whenever d = 0 or any challenge product dies."""
    model = model or CausalModel()
    n_rounds = ProtocolParams(spec, m, variant).n_rounds
    return CheatStrategy(spec, variant, m, model, (_zero_round,) * n_rounds,
                         lineage="zeros")


def build_attack(spec: FieldSpec, variant: Variant, m: int,
                 model: CausalModel, game_strategy: DetStrategy
                 ) -> CheatStrategy:
    """Attack for an arbitrary protocol length.

    Builds the largest strict tower that fits and pads the remaining rounds
    with silent rounds (symmetrized) or the silent final round (standard).
    """
    variant = Variant(variant)
    if variant is Variant.STANDARD:
        if m - 1 < 2:
            return zeros_strategy(spec, variant, m, model)
        return desymmetrize(
            build_attack(spec, Variant.SYMMETRIZED, m - 1, model, game_strategy))
    steps = (m - model.k0) // (model.rho + 1)
    if steps < 1:
        return zeros_strategy(spec, variant, m, model)
    tower_m = model.k0 + steps * (model.rho + 1)
    tower = attack_general(spec, tower_m, model, game_strategy)
    return extend_symmetrized(tower, m - tower_m)


@dataclass
class CausalityReport:
    violations: list[dict]
    trials: int
    rounds_checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "trials": self.trials,
                "rounds_checked": self.rounds_checked,
                "violations": list(self.violations)}


def causality_check(s: CheatStrategy, model: Optional[CausalModel] = None,
                    trials: int = 100, seed: int = 0) -> CausalityReport:
    """Audit a strategy against a causal model by input perturbation.

    For each round and trial, every input outside the round's view is
    perturbed one at a time; any change in the round's output is recorded
    as a violation.  Report-only; compliant strategies yield zero
    violations.
    """
    model = model or s.model
    rng = random.Random(f"{seed}:causality")
    q = s.field.q
    n_ch = s.n_challenges
    n_rounds = len(s.rounds)
    violations: list[dict] = []
    for k in range(1, n_rounds + 1):
        hidden = [j for j in range(1, n_ch + 1)
                  if not model.challenge_visible(k, j)]
        d_hidden = not model.d_visible(k)
        for t in range(trials):
            d = rng.randrange(2)
            xs = tuple(rng.randrange(q) for _ in range(n_ch))
            base = s.respond(k, d, xs)
            if d_hidden and s.respond(k, 1 - d, xs) != base:
                violations.append({"round": k, "input": "d", "trial": t})
            for j in hidden:
                alt = (xs[j - 1] + rng.randrange(1, q)) % q if q > 1 else xs[j - 1]
                pert = xs[:j - 1] + (alt,) + xs[j:]
                if s.respond(k, d, pert) != base:
                    violations.append({"round": k, "input": f"x{j}", "trial": t})
    return CausalityReport(violations, trials, n_rounds)
