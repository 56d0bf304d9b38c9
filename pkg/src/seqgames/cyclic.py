"""Infinite games represented as finite cyclic graphs.

A ``CyclicGame`` is a directed graph of decision nodes whose edges point at
other nodes or at payoff leaves; it stands for the infinite tree obtained by
unrolling it forever.  Strategies are positional: one chosen edge per node,
independent of history.  A profile is accepted as an equilibrium when its
induced play converges from every node and no one-shot deviation improves
the deviating owner's payoff; a deviation whose continuation diverges ranks
strictly below every convergent outcome, because divergent play never
reaches a payoff.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Union

from .core import GameError, Leaf, Node, FiniteGame, OutcomeVector, ShapeMismatch
from .finite import SpeReport, Violation

DEFAULT_SEARCH_BOUND = 2**20


class UnknownNode(GameError):
    """A node name is not defined in the game."""


class SearchSpaceTooLarge(GameError):
    """The positional-profile space exceeds the configured bound."""


@dataclass(frozen=True)
class CyclicNode:
    owner: int
    edges: tuple[tuple[str, Union[str, Leaf]], ...]

    def target(self, label: str) -> Union[str, Leaf]:
        for name, tgt in self.edges:
            if name == label:
                return tgt
        raise KeyError(label)

    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.edges)


@dataclass(frozen=True)
class CyclicGame:
    nodes: Mapping[str, CyclicNode]
    start: str


#: One chosen edge label per node name.
PositionalProfile = Mapping[str, str]


@dataclass(frozen=True)
class Converges:
    path: tuple[str, ...]
    outcome: OutcomeVector


@dataclass(frozen=True)
class Diverges:
    stem: tuple[str, ...]
    cycle: tuple[str, ...]


InducedResult = Union[Converges, Diverges]


def check_positional(game: CyclicGame, profile: PositionalProfile) -> None:
    if set(profile) != set(game.nodes):
        raise ShapeMismatch("profile must choose exactly one edge per node")
    for name, node in game.nodes.items():
        if profile[name] not in node.labels():
            raise ShapeMismatch(f"choice {profile[name]!r} at {name!r} is not an edge label")


def induced_outcome(
    game: CyclicGame, profile: PositionalProfile, from_node: str | None = None
) -> InducedResult:
    """Follow the profile's choices from ``from_node`` (default: start).

    Choices are positional, so revisiting a node proves divergence; the
    returned lasso splits the visited nodes at the first repeat.
    """
    name = game.start if from_node is None else from_node
    if name not in game.nodes:
        raise UnknownNode(name)
    check_positional(game, profile)
    path: list[str] = []
    seen: dict[str, int] = {}
    while True:
        if name in seen:
            first = seen[name]
            return Diverges(stem=tuple(path[:first]), cycle=tuple(path[first:]))
        seen[name] = len(path)
        path.append(name)
        target = game.nodes[name].target(profile[name])
        if isinstance(target, Leaf):
            return Converges(tuple(path), target.outcome)
        if target not in game.nodes:
            raise UnknownNode(target)
        name = target


def check_spe_cyclic(game: CyclicGame, profile: PositionalProfile) -> SpeReport:
    """Equilibrium check: convergence from every node plus one-shot deviations.

    The report lists nodes from which the profile diverges; when none exist,
    each node's alternatives are priced by deviating once and resuming the
    profile (a divergent continuation can never improve on a payoff).
    """
    check_positional(game, profile)
    divergent = tuple(
        name
        for name in game.nodes
        if isinstance(induced_outcome(game, profile, name), Diverges)
    )
    if divergent:
        return SpeReport((), divergent)
    violations: list[Violation] = []
    for name, node in game.nodes.items():
        result = induced_outcome(game, profile, name)
        assert isinstance(result, Converges)
        base = result.outcome[node.owner]
        for label, target in node.edges:
            if label == profile[name]:
                continue
            if isinstance(target, Leaf):
                deviation = target.outcome[node.owner]
            else:
                continuation = induced_outcome(game, profile, target)
                if isinstance(continuation, Diverges):
                    continue
                deviation = continuation.outcome[node.owner]
            if deviation > base:
                violations.append(Violation(name, label, base, deviation))
    return SpeReport(tuple(violations))


def enumerate_positional_spe(
    game: CyclicGame, bound: int = DEFAULT_SEARCH_BOUND
) -> list[PositionalProfile]:
    """Brute-force all positional profiles and keep the equilibria.

    Profiles are generated in canonical order: node declaration order, edge
    order within each node.
    """
    space = math.prod(len(node.edges) for node in game.nodes.values())
    if space > bound:
        raise SearchSpaceTooLarge(f"{space} positional profiles exceed bound {bound}")
    names = list(game.nodes)
    accepted: list[PositionalProfile] = []
    for combo in itertools.product(*(game.nodes[name].labels() for name in names)):
        profile = dict(zip(names, combo))
        if check_spe_cyclic(game, profile).ok:
            accepted.append(profile)
    return accepted


def unfold(game: CyclicGame, depth: int, terminal: OutcomeVector) -> FiniteGame:
    """Unroll the graph from the start into a tree of ``depth`` decision layers.

    Leaf edges stay leaves at any layer; a decision node that would appear
    at layer ``depth + 1`` is replaced by ``Leaf(terminal)``.
    """
    if depth < 1:
        raise ValueError("depth must be positive")

    def rec(name: str, layer: int) -> Node:
        if name not in game.nodes:
            raise UnknownNode(name)
        node = game.nodes[name]
        branches: list[tuple[str, FiniteGame]] = []
        for label, target in node.edges:
            if isinstance(target, Leaf):
                branches.append((label, target))
            elif layer == depth:
                branches.append((label, Leaf(tuple(terminal))))
            else:
                branches.append((label, rec(target, layer + 1)))
        return Node(node.owner, tuple(branches))

    return rec(game.start, 1)


def unfold_profile(
    game: CyclicGame, profile: PositionalProfile, depth: int
) -> dict[tuple[str, ...], str]:
    """Restrict a positional profile to the tree built by ``unfold``.

    Every decision node of the unfolded tree corresponds to a graph node;
    the restriction plays the positional choice there.  Independent of the
    terminal used to cut the unfolding.
    """
    check_positional(game, profile)
    if depth < 1:
        raise ValueError("depth must be positive")
    out: dict[tuple[str, ...], str] = {}

    def rec(name: str, layer: int, path: tuple[str, ...]) -> None:
        node = game.nodes[name]
        out[path] = profile[name]
        for label, target in node.edges:
            if isinstance(target, Leaf) or layer == depth:
                continue
            rec(target, layer + 1, path + (label,))

    rec(game.start, 1, ())
    return out
