"""Shared game builders, independent oracles, and random generators.

The oracles here deliberately avoid the library's solver code paths: the
brute-force equilibrium filter enumerates every profile and tests the
one-deviation property by direct tree walks, so it can referee
``enumerate_equilibria`` and ``check_spe``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from seqgames.core import FiniteGame, Leaf, Node, leaf, node
from seqgames.cyclic import CyclicGame, CyclicNode
from seqgames.matrix import MatrixGame, matrix_game
from seqgames.parametric import Advance, AffineLeaf, ParametricGame, Shape, affine

# --- the recurring games ---------------------------------------------------


def pennies_seq() -> Node:
    """Three-move coin matching: Alice, Bertrand, Alice; one point per
    adjacent match for Alice, per mismatch for Bertrand."""
    after_pp = node(0, ("p", leaf(2, 0)), ("f", leaf(1, 1)))
    after_pf = node(0, ("p", leaf(0, 2)), ("f", leaf(1, 1)))
    after_fp = node(0, ("p", leaf(1, 1)), ("f", leaf(0, 2)))
    after_ff = node(0, ("p", leaf(1, 1)), ("f", leaf(2, 0)))
    bert_p = node(1, ("p", after_pp), ("f", after_pf))
    bert_f = node(1, ("p", after_fp), ("f", after_ff))
    return node(0, ("p", bert_p), ("f", bert_f))


def pennies_equilibrium(root_choice: str) -> dict:
    """The two backward-induction profiles differ only at the root."""
    return {
        (): root_choice,
        ("p",): "f",
        ("p", "p"): "p",
        ("p", "f"): "f",
        ("f",): "p",
        ("f", "p"): "p",
        ("f", "f"): "f",
    }


def chain01(rounds: int) -> FiniteGame:
    """Alternating abandon/continue chain of the given length."""
    current: FiniteGame = leaf(*((1, 0) if rounds % 2 else (0, 1)))
    for i in reversed(range(rounds)):
        owner = i % 2
        drop = leaf(0, 1) if owner == 0 else leaf(1, 0)
        current = node(owner, ("a", drop), ("c", current))
    return current


def loop01() -> CyclicGame:
    """The two-node abandon/continue loop."""
    return CyclicGame(
        {
            "A": CyclicNode(0, (("a", leaf(0, 1)), ("c", "B"))),
            "B": CyclicNode(1, (("a", leaf(1, 0)), ("c", "A"))),
        },
        "A",
    )


# --- independent oracles ---------------------------------------------------


def all_plays(game: FiniteGame) -> list[tuple[str, ...]]:
    if isinstance(game, Leaf):
        return [()]
    plays = []
    for label, child in game.branches:
        plays.extend((label,) + rest for rest in all_plays(child))
    return plays


def follow_profile(sub: FiniteGame, profile: dict, path: tuple[str, ...]) -> tuple[int, ...]:
    while isinstance(sub, Node):
        label = profile[path]
        sub = sub.branch(label)
        path = path + (label,)
    return sub.outcome


def one_deviation_stable(game: FiniteGame, profile: dict) -> bool:
    """Direct statement of the equilibrium property, without bottom-up values."""

    def stable_at(sub: FiniteGame, path: tuple[str, ...]) -> bool:
        if isinstance(sub, Leaf):
            return True
        base = follow_profile(sub, profile, path)[sub.owner]
        for label, child in sub.branches:
            if label == profile[path]:
                continue
            if follow_profile(child, profile, path + (label,))[sub.owner] > base:
                return False
        return all(stable_at(child, path + (label,)) for label, child in sub.branches)

    return stable_at(game, ())


def tree_paths(game: FiniteGame) -> list[tuple[str, ...]]:
    if isinstance(game, Leaf):
        return []
    paths = [()]
    for label, child in game.branches:
        paths.extend((label,) + rest for rest in tree_paths(child))
    return paths


def all_profiles(game: FiniteGame) -> list[dict]:
    paths = tree_paths(game)
    options = []
    for path in paths:
        sub = game
        for label in path:
            sub = sub.branch(label)
        options.append(sub.labels())
    return [dict(zip(paths, combo)) for combo in itertools.product(*options)]


def brute_equilibria(game: FiniteGame) -> list[dict]:
    """All profiles passing the one-deviation filter (exhaustive search)."""
    return [profile for profile in all_profiles(game) if one_deviation_stable(game, profile)]


def count_nodes(game: FiniteGame) -> int:
    if isinstance(game, Leaf):
        return 1
    return 1 + sum(count_nodes(child) for _label, child in game.branches)


# --- random generators (seeded, deterministic) ------------------------------

_LABELS = ("x", "y", "z")


def random_tree(rng: random.Random, max_nodes: int = 12, payoff_max: int = 3) -> Node:
    """Small random two-player tree with at most ``max_nodes`` nodes total;
    the narrow payoff range makes ties frequent."""

    def attempt() -> FiniteGame:
        pool = [rng.randint(3, max_nodes)]

        def build(depth: int) -> FiniteGame:
            pool[0] -= 1
            width = rng.choice((2, 2, 2, 3))
            if depth >= 4 or pool[0] < width or rng.random() < 0.3:
                return leaf(rng.randint(0, payoff_max), rng.randint(0, payoff_max))
            owner = rng.randint(0, 1)
            return node(owner, *((_LABELS[i], build(depth + 1)) for i in range(width)))

        return build(0)

    while True:
        tree = attempt()
        if isinstance(tree, Node) and count_nodes(tree) <= max_nodes:
            return tree


def random_profile(rng: random.Random, game: FiniteGame) -> dict:
    profile = {}
    for path in tree_paths(game):
        sub = game
        for label in path:
            sub = sub.branch(label)
        profile[path] = rng.choice(sub.labels())
    return profile


def random_cyclic(rng: random.Random, max_nodes: int = 4) -> CyclicGame:
    names = [f"N{i}" for i in range(rng.randint(1, max_nodes))]
    nodes = {}
    for name in names:
        width = rng.randint(1, 3)
        edges = []
        for label in _LABELS[:width]:
            if rng.random() < 0.5:
                edges.append((label, leaf(rng.randint(0, 3), rng.randint(0, 3))))
            else:
                edges.append((label, rng.choice(names)))
        nodes[name] = CyclicNode(rng.randint(0, 1), tuple(edges))
    return CyclicGame(nodes, names[0])


def random_parametric(rng: random.Random, max_shapes: int = 4) -> ParametricGame:
    names = [f"S{i}" for i in range(rng.randint(1, max_shapes))]
    shapes = {}
    for name in names:
        width = rng.randint(1, 3)
        moves = []
        for label in _LABELS[:width]:
            if rng.random() < 0.5:
                outcome = tuple(
                    affine(rng.randint(-5, 5), rng.randint(-2, 2)) for _ in range(2)
                )
                moves.append((label, AffineLeaf(outcome)))
            else:
                moves.append((label, Advance(rng.choice(names))))
        shapes[name] = Shape(rng.randint(0, 1), tuple(moves))
    return ParametricGame(shapes, names[0])


def random_matrix(rng: random.Random, max_side: int = 4) -> MatrixGame:
    rows = rng.randint(1, max_side)
    cols = rng.randint(1, max_side)
    entries = [
        [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(cols)]
        for _ in range(rows)
    ]
    return matrix_game(entries, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
