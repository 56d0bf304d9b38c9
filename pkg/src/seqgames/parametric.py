"""Stage-indexed games with affine payoffs, such as the all-pay dollar auction.

A ``ParametricGame`` is a finite family of shapes.  Entering a shape at
stage ``n``, the owner picks a move that either ends the game at a leaf
whose per-player payoffs are affine in ``n``, or advances to another shape
at stage ``n + 1``.  Stationary profiles choose one move per shape, so
equilibrium inequalities can be decided symbolically for all stages at
once by comparing affine coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Union

from .core import FiniteGame, GameError, Leaf, Node, OutcomeVector, ShapeMismatch
from .cyclic import CyclicGame, SearchSpaceTooLarge
from .finite import SpeReport, Violation

DEFAULT_SEARCH_BOUND = 2**20


class UnknownShape(GameError):
    """A shape name is not defined in the game."""


class InvalidValue(GameError):
    """The auctioned object's value must be a positive integer."""


@dataclass(frozen=True)
class AffineValue:
    """Exact integer affine form ``const + slope * n`` over stages n >= 0."""

    const: int
    slope: int

    def at(self, stage: int) -> int:
        return self.const + self.slope * stage

    def shifted(self, offset: int) -> "AffineValue":
        """The same quantity as a function of a stage ``offset`` steps earlier."""
        return AffineValue(self.const + self.slope * offset, self.slope)

    def __str__(self) -> str:
        if self.slope == 0:
            return str(self.const)
        sign = "+" if self.slope > 0 else "-"
        return f"{self.const}{sign}{abs(self.slope)}*n"


def affine(const: int, slope: int = 0) -> AffineValue:
    return AffineValue(const, slope)


def affine_leq(f: AffineValue, g: AffineValue, start: int = 0) -> bool:
    """True iff ``f(n) <= g(n)`` for every integer ``n >= start``.

    Decided from coefficients: a strictly larger slope eventually wins, so
    compare slopes first, then the values at ``start``.
    """
    if f.slope == g.slope:
        return f.const <= g.const
    if f.slope < g.slope:
        return f.at(start) <= g.at(start)
    return False


@dataclass(frozen=True)
class AffineLeaf:
    outcome: tuple[AffineValue, ...]


@dataclass(frozen=True)
class Advance:
    shape: str


@dataclass(frozen=True)
class Shape:
    owner: int
    moves: tuple[tuple[str, Union[AffineLeaf, Advance]], ...]

    def target(self, label: str) -> Union[AffineLeaf, Advance]:
        for name, tgt in self.moves:
            if name == label:
                return tgt
        raise KeyError(label)

    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.moves)


@dataclass(frozen=True)
class ParametricGame:
    shapes: Mapping[str, Shape]
    start: str


#: One chosen move label per shape name.
StationaryProfile = Mapping[str, str]


@dataclass(frozen=True)
class ConvergesAffine:
    """Play reaches a leaf after ``steps`` moves; the outcome is expressed
    as affine functions of the stage at which play entered."""

    steps: int
    outcome: tuple[AffineValue, ...]


@dataclass(frozen=True)
class Divergent:
    pass


DIVERGENT = Divergent()

InducedParamResult = Union[ConvergesAffine, Divergent]


def check_stationary(game: ParametricGame, profile: StationaryProfile) -> None:
    if set(profile) != set(game.shapes):
        raise ShapeMismatch("profile must choose exactly one move per shape")
    for name, shape in game.shapes.items():
        if profile[name] not in shape.labels():
            raise ShapeMismatch(f"choice {profile[name]!r} at {name!r} is not a move label")


def induced_outcome_param(
    game: ParametricGame, profile: StationaryProfile, from_shape: str | None = None
) -> InducedParamResult:
    """Follow the profile's moves from ``from_shape`` at symbolic stage n.

    The profile is stationary, so revisiting a shape proves divergence;
    otherwise a leaf is reached within as many moves as there are shapes.
    """
    name = game.start if from_shape is None else from_shape
    if name not in game.shapes:
        raise UnknownShape(name)
    check_stationary(game, profile)
    seen: set[str] = set()
    offset = 0
    steps = 0
    while True:
        if name in seen:
            return DIVERGENT
        seen.add(name)
        target = game.shapes[name].target(profile[name])
        steps += 1
        if isinstance(target, AffineLeaf):
            return ConvergesAffine(steps, tuple(v.shifted(offset) for v in target.outcome))
        offset += 1
        if target.shape not in game.shapes:
            raise UnknownShape(target.shape)
        name = target.shape


@dataclass(frozen=True)
class EntryStages:
    """Stages at which a shape can be entered under some play.

    ``stages`` lists the reachable entry stages up to twice the shape
    count; when ``bounded`` the list is exhaustive (a longer path would
    repeat a shape, and a repeat pumps the set to infinity).
    """

    stages: tuple[int, ...]
    bounded: bool


def entry_stages(game: ParametricGame) -> dict[str, EntryStages]:
    """Per shape, the set of stages at which it can be entered.

    Every advance adds one stage, so entry stages are path lengths from the
    start.  Any path at least as long as the shape count passes a cycle,
    making the set unbounded, and an unbounded set always has a witness no
    longer than twice the shape count.
    """
    count = len(game.shapes)
    horizon = 2 * count
    reach: dict[str, set[int]] = {name: set() for name in game.shapes}
    reach[game.start].add(0)
    current = {game.start}
    for depth in range(1, horizon + 1):
        nxt: set[str] = set()
        for name in current:
            for _label, target in game.shapes[name].moves:
                if isinstance(target, Advance):
                    nxt.add(target.shape)
        for name in nxt:
            reach[name].add(depth)
        current = nxt
    return {
        name: EntryStages(tuple(sorted(stages)), bounded=all(d < count for d in stages))
        for name, stages in reach.items()
    }


def _holds_at_entries(deviation: AffineValue, base: AffineValue, info: EntryStages) -> bool:
    """Whether deviation(n) <= base(n) at every entry stage of a shape.

    Finite entry sets are checked pointwise.  Unbounded sets are exact
    under the slope rule: an affine inequality fails on a half-line, and
    an unbounded set always meets a nonempty half-line.
    """
    if not info.stages:
        return affine_leq(deviation, base, 0)
    if info.bounded:
        return all(deviation.at(stage) <= base.at(stage) for stage in info.stages)
    return affine_leq(deviation, base, info.stages[0])


def check_spe_param(game: ParametricGame, profile: StationaryProfile) -> SpeReport:
    """Symbolic equilibrium check over all stages at once.

    Requires convergence from every shape; then, per shape, every
    alternative move's value (affine in the entry stage) must not exceed
    the profile's value at any stage where the shape is actually entered.
    A deviation with divergent continuation never improves on a payoff.
    """
    check_stationary(game, profile)
    results = {name: induced_outcome_param(game, profile, name) for name in game.shapes}
    divergent = tuple(name for name, r in results.items() if isinstance(r, Divergent))
    if divergent:
        return SpeReport((), divergent)
    entries = entry_stages(game)
    violations: list[Violation] = []
    for name, shape in game.shapes.items():
        result = results[name]
        assert isinstance(result, ConvergesAffine)
        base = result.outcome[shape.owner]
        for label, target in shape.moves:
            if label == profile[name]:
                continue
            if isinstance(target, AffineLeaf):
                deviation = target.outcome[shape.owner]
            else:
                continuation = results[target.shape]
                if isinstance(continuation, Divergent):
                    continue
                deviation = continuation.outcome[shape.owner].shifted(1)
            if not _holds_at_entries(deviation, base, entries[name]):
                violations.append(Violation(name, label, base, deviation))
    return SpeReport(tuple(violations))


def enumerate_stationary_spe(
    game: ParametricGame, bound: int = DEFAULT_SEARCH_BOUND
) -> list[StationaryProfile]:
    """Brute-force all stationary profiles and keep the equilibria, in
    canonical order (shape declaration order, move order per shape)."""
    space = math.prod(len(shape.moves) for shape in game.shapes.values())
    if space > bound:
        raise SearchSpaceTooLarge(f"{space} stationary profiles exceed bound {bound}")
    names = list(game.shapes)
    accepted: list[StationaryProfile] = []
    for combo in itertools.product(*(game.shapes[name].labels() for name in names)):
        profile = dict(zip(names, combo))
        if check_spe_param(game, profile).ok:
            accepted.append(profile)
    return accepted


def dollar_auction(value: int) -> ParametricGame:
    """Shubik's all-pay ascending auction with unit bids, two bidders.

    At stage n the mover either abandons, leaving their standing bid of
    n - 1 sunk (nothing is sunk at stage 0, where no bid exists) while the
    opponent wins the object worth ``value`` against their bid of n, or
    bids n + 1, advancing the opponent to stage n + 1.  Three shapes: a
    stage-0 entry shape for the first bidder and a uniform alternating
    pair for stages n >= 1.
    """
    if value < 1:
        raise InvalidValue(f"object value must be >= 1, got {value}")
    zero = affine(0)
    entry = Shape(0, (("a", AffineLeaf((zero, zero))), ("c", Advance("B"))))
    alice = Shape(0, (("a", AffineLeaf((affine(1, -1), affine(value, -1)))), ("c", Advance("B"))))
    bertrand = Shape(1, (("a", AffineLeaf((affine(value, -1), affine(1, -1)))), ("c", Advance("A"))))
    return ParametricGame({"A0": entry, "A": alice, "B": bertrand}, "A0")


def instantiate(game: ParametricGame, max_stage: int, terminal: OutcomeVector) -> FiniteGame:
    """Concrete finite tree covering stages ``0 .. max_stage - 1``.

    Affine payoffs are evaluated at the stage where their leaf is taken;
    an advance that would enter stage ``max_stage`` is replaced by
    ``Leaf(terminal)``.
    """
    if max_stage < 1:
        raise ValueError("max_stage must be positive")

    def rec(name: str, stage: int) -> Node:
        if name not in game.shapes:
            raise UnknownShape(name)
        shape = game.shapes[name]
        branches: list[tuple[str, FiniteGame]] = []
        for label, target in shape.moves:
            if isinstance(target, AffineLeaf):
                branches.append((label, Leaf(tuple(v.at(stage) for v in target.outcome))))
            elif stage + 1 == max_stage:
                branches.append((label, Leaf(tuple(terminal))))
            else:
                branches.append((label, rec(target.shape, stage + 1)))
        return Node(shape.owner, tuple(branches))

    return rec(game.start, 0)


def instantiate_profile(
    game: ParametricGame, profile: StationaryProfile, max_stage: int
) -> dict[tuple[str, ...], str]:
    """Restrict a stationary profile to the tree built by ``instantiate``."""
    check_stationary(game, profile)
    if max_stage < 1:
        raise ValueError("max_stage must be positive")
    out: dict[tuple[str, ...], str] = {}

    def rec(name: str, stage: int, path: tuple[str, ...]) -> None:
        shape = game.shapes[name]
        out[path] = profile[name]
        for label, target in shape.moves:
            if isinstance(target, Advance) and stage + 1 < max_stage:
                rec(target.shape, stage + 1, path + (label,))

    rec(game.start, 0, ())
    return out


def from_cyclic(game: CyclicGame) -> ParametricGame:
    """Embed a cyclic game as a constant-payoff (slope 0) parametric game."""
    shapes: dict[str, Shape] = {}
    for name, node in game.nodes.items():
        moves: list[tuple[str, Union[AffineLeaf, Advance]]] = []
        for label, target in node.edges:
            if isinstance(target, Leaf):
                moves.append((label, AffineLeaf(tuple(affine(v) for v in target.outcome))))
            else:
                moves.append((label, Advance(target)))
        shapes[name] = Shape(node.owner, tuple(moves))
    return ParametricGame(shapes, game.start)
