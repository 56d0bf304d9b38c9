"""Backward induction on finite two-player trees.

``solve`` returns one equilibrium profile under a tie policy,
``enumerate_equilibria`` returns every equilibrium (one per combination of
tie resolutions) and ``check_spe`` verifies a candidate profile by testing
one-shot deviations at every decision node, reachable or not.  For finite
trees the one-shot test coincides with arbitrary strategy deviations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .core import (
    FiniteGame,
    Leaf,
    Node,
    OutcomeVector,
    PlayLine,
    TreeProfile,
    check_profile,
    require_two_players,
)

DEFAULT_CAP = 1024


class TiePolicy(Enum):
    """Deterministic resolution of payoff ties, in branch order."""

    FIRST_BRANCH = "first"
    LAST_BRANCH = "last"


@dataclass(frozen=True)
class Violation:
    """A one-shot deviation that strictly improves the node owner's utility.

    ``where`` is a node path for tree games and a node or shape name for
    graph games; the two value fields are ints there and affine values for
    stage-parametric games.
    """

    where: Union[PlayLine, str]
    action: str
    profile_value: object
    deviation_value: object


@dataclass(frozen=True)
class SpeReport:
    violations: tuple[Violation, ...] = ()
    divergences: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations and not self.divergences


@dataclass(frozen=True)
class Enumeration:
    profiles: tuple[TreeProfile, ...]
    truncated: bool


def solve(game: FiniteGame, ties: TiePolicy = TiePolicy.FIRST_BRANCH) -> TreeProfile:
    """Compute one backward-induction profile.

    Equilibrium values are computed bottom-up in a single pass; at every
    node the owner's best branch is chosen, ties resolved by ``ties``.
    """
    require_two_players(game)
    profile: dict[PlayLine, str] = {}

    def walk(sub: FiniteGame, path: PlayLine) -> OutcomeVector:
        if isinstance(sub, Leaf):
            return sub.outcome
        values = [walk(child, path + (label,)) for label, child in sub.branches]
        best = max(value[sub.owner] for value in values)
        tied = [i for i, value in enumerate(values) if value[sub.owner] == best]
        pick = tied[0] if ties is TiePolicy.FIRST_BRANCH else tied[-1]
        profile[path] = sub.branches[pick][0]
        return values[pick]

    walk(game, ())
    return profile


def enumerate_equilibria(game: FiniteGame, cap: int = DEFAULT_CAP) -> Enumeration:
    """Enumerate all backward-induction profiles in canonical branch order.

    A profile is included when, at every node, its choice maximizes the
    owner's utility among the branch values induced by the profile below.
    The result is truncated at ``cap`` profiles, flagged rather than failed:
    tie sets multiply, so the full set can be exponential.
    """
    require_two_players(game)
    if cap < 1:
        raise ValueError("cap must be positive")

    def rec(sub: FiniteGame, path: PlayLine) -> list[tuple[dict, OutcomeVector]]:
        if isinstance(sub, Leaf):
            return [({}, sub.outcome)]
        branch_sets = [rec(child, path + (label,)) for label, child in sub.branches]
        out: list[tuple[dict, OutcomeVector]] = []
        for combo in itertools.product(*branch_sets):
            values = [value for _fragment, value in combo]
            best = max(value[sub.owner] for value in values)
            for i, (label, _child) in enumerate(sub.branches):
                if values[i][sub.owner] != best:
                    continue
                merged: dict[PlayLine, str] = {path: label}
                for fragment, _value in combo:
                    merged.update(fragment)
                out.append((merged, values[i]))
            if len(out) > cap:
                break
        # Keeping one extra entry lets the caller detect truncation; any
        # subtree overflow implies at least as many profiles at the root.
        return out[: cap + 1]

    items = rec(game, ())
    return Enumeration(tuple(prof for prof, _value in items[:cap]), truncated=len(items) > cap)


def check_spe(game: FiniteGame, profile: TreeProfile) -> SpeReport:
    """Test the one-shot deviation property at every decision node.

    For each node, the owner's utility of following the profile is compared
    against each single deviation followed by the profile; any strict
    improvement is reported.
    """
    require_two_players(game)
    check_profile(game, profile)
    violations: list[Violation] = []

    def outcome_from(sub: FiniteGame, path: PlayLine) -> OutcomeVector:
        while isinstance(sub, Node):
            label = profile[path]
            sub = sub.branch(label)
            path = path + (label,)
        return sub.outcome

    def walk(sub: FiniteGame, path: PlayLine) -> None:
        if isinstance(sub, Leaf):
            return
        base = outcome_from(sub, path)[sub.owner]
        for label, child in sub.branches:
            if label == profile[path]:
                continue
            deviation = outcome_from(child, path + (label,))[sub.owner]
            if deviation > base:
                violations.append(Violation(path, label, base, deviation))
        for label, child in sub.branches:
            walk(child, path + (label,))

    walk(game, ())
    return SpeReport(tuple(violations))
