"""Cyclic-game equilibrium checking, enumeration, and unfolding."""

from __future__ import annotations

import itertools
import random

import pytest
from helpers import chain01, loop01, random_cyclic

from seqgames.core import Leaf, ShapeMismatch, leaf, node
from seqgames.cyclic import (
    Converges,
    CyclicGame,
    CyclicNode,
    Diverges,
    SearchSpaceTooLarge,
    UnknownNode,
    check_spe_cyclic,
    enumerate_positional_spe,
    induced_outcome,
    unfold,
    unfold_profile,
)
from seqgames.finite import check_spe, enumerate_equilibria


def trace_outcome(game: CyclicGame, profile: dict, start: str, bound: int):
    """Independent induced-play oracle: step-by-step with an explicit bound."""
    name = start
    for _ in range(bound):
        target = dict(game.nodes[name].edges)[profile[name]]
        if isinstance(target, Leaf):
            return target.outcome
        name = target
    return None  # no leaf within bound: divergent for positional profiles


def reference_is_spe(game: CyclicGame, profile: dict) -> bool:
    """Independently coded acceptance test via bounded tracing."""
    bound = len(game.nodes) + 1
    values = {name: trace_outcome(game, profile, name, bound) for name in game.nodes}
    if any(value is None for value in values.values()):
        return False
    for name, node_ in game.nodes.items():
        base = values[name][node_.owner]
        for label, target in node_.edges:
            if label == profile[name]:
                continue
            after = target.outcome if isinstance(target, Leaf) else values[target]
            if after is not None and after[node_.owner] > base:
                return False
    return True


class TestInducedOutcome:
    def test_alice_abandons_from_start(self):
        result = induced_outcome(loop01(), {"A": "a", "B": "c"}, "A")
        assert result == Converges(("A",), (0, 1))

    def test_both_continue_diverges(self):
        result = induced_outcome(loop01(), {"A": "c", "B": "c"}, "A")
        assert result == Diverges(stem=(), cycle=("A", "B"))

    def test_immediate_abandon_from_b(self):
        result = induced_outcome(loop01(), {"A": "c", "B": "a"}, "B")
        assert result == Converges(("B",), (1, 0))

    def test_default_start(self):
        assert induced_outcome(loop01(), {"A": "a", "B": "c"}) == Converges(("A",), (0, 1))

    def test_stem_before_cycle(self):
        game = CyclicGame(
            {
                "S": CyclicNode(0, (("go", "A"),)),
                "A": CyclicNode(0, (("a", leaf(0, 1)), ("c", "B"))),
                "B": CyclicNode(1, (("a", leaf(1, 0)), ("c", "A"))),
            },
            "S",
        )
        result = induced_outcome(game, {"S": "go", "A": "c", "B": "c"})
        assert result == Diverges(stem=("S",), cycle=("A", "B"))

    def test_unknown_node(self):
        with pytest.raises(UnknownNode):
            induced_outcome(loop01(), {"A": "a", "B": "c"}, "Z")

    def test_invalid_profile(self):
        with pytest.raises(ShapeMismatch):
            induced_outcome(loop01(), {"A": "a"})

    def test_convergent_path_length_bounded_by_node_count(self):
        rng = random.Random(3)
        for _ in range(80):
            game = random_cyclic(rng)
            for profile in _profiles(game):
                result = induced_outcome(game, profile)
                if isinstance(result, Converges):
                    assert len(result.path) <= len(game.nodes)
                    assert len(set(result.path)) == len(result.path)


def _profiles(game: CyclicGame):
    names = list(game.nodes)
    for combo in itertools.product(*(game.nodes[n].labels() for n in names)):
        yield dict(zip(names, combo))


class TestCheckSpe:
    def test_alice_abandons_is_equilibrium(self):
        assert check_spe_cyclic(loop01(), {"A": "a", "B": "c"}).ok

    def test_alice_continues_is_equilibrium(self):
        assert check_spe_cyclic(loop01(), {"A": "c", "B": "a"}).ok

    def test_both_abandon_rejected_with_deviation_at_a(self):
        report = check_spe_cyclic(loop01(), {"A": "a", "B": "a"})
        assert not report.ok
        violation = next(v for v in report.violations if v.where == "A")
        assert violation.action == "c"
        assert violation.profile_value == 0
        assert violation.deviation_value == 1

    def test_both_continue_rejected_for_divergence(self):
        report = check_spe_cyclic(loop01(), {"A": "c", "B": "c"})
        assert not report.ok
        assert report.divergences == ("A", "B")
        assert report.violations == ()

    def test_agrees_with_reference_checker_on_random_games(self):
        rng = random.Random(29)
        for _ in range(60):
            game = random_cyclic(rng)
            for profile in _profiles(game):
                assert check_spe_cyclic(game, profile).ok == reference_is_spe(game, profile)


class TestEnumerate:
    def test_loop_has_exactly_two_equilibria(self):
        assert enumerate_positional_spe(loop01()) == [
            {"A": "a", "B": "c"},
            {"A": "c", "B": "a"},
        ]

    def test_single_node_single_edge(self):
        game = CyclicGame({"N": CyclicNode(0, (("stop", leaf(4, 2)),))}, "N")
        assert enumerate_positional_spe(game) == [{"N": "stop"}]

    def test_raised_abandon_payoff_changes_the_set(self):
        # abandoning now pays Alice 2, strictly better than the (1,0) she can
        # force by continuing, so only her abandoning equilibrium survives
        game = CyclicGame(
            {
                "A": CyclicNode(0, (("a", leaf(2, 1)), ("c", "B"))),
                "B": CyclicNode(1, (("a", leaf(1, 0)), ("c", "A"))),
            },
            "A",
        )
        accepted = enumerate_positional_spe(game)
        assert accepted == [{"A": "a", "B": "c"}]
        assert [p for p in _profiles(game) if reference_is_spe(game, p)] == accepted

    def test_matches_filtering_definition(self):
        rng = random.Random(31)
        for _ in range(40):
            game = random_cyclic(rng)
            expected = [p for p in _profiles(game) if check_spe_cyclic(game, p).ok]
            assert enumerate_positional_spe(game) == expected

    def test_search_space_bound(self):
        nodes = {
            f"N{i}": CyclicNode(0, tuple((lab, leaf(0, 1)) for lab in ("x", "y", "z")))
            for i in range(3)
        }
        game = CyclicGame(nodes, "N0")
        with pytest.raises(SearchSpaceTooLarge):
            enumerate_positional_spe(game, bound=26)


class TestUnfold:
    def test_depth_seven_gives_the_seven_round_chain(self):
        assert unfold(loop01(), 7, (1, 0)) == chain01(7)

    def test_depth_six_gives_the_six_round_chain(self):
        assert unfold(loop01(), 6, (0, 1)) == chain01(6)

    def test_depth_one(self):
        assert unfold(loop01(), 1, (9, 9)) == node(0, ("a", leaf(0, 1)), ("c", leaf(9, 9)))

    def test_depth_must_be_positive(self):
        with pytest.raises(ValueError):
            unfold(loop01(), 0, (0, 0))

    def test_accepted_profiles_survive_truncation(self):
        # cutting at the profile's own continuation value keeps it subgame
        # perfect at every depth
        game = loop01()
        for profile in enumerate_positional_spe(game):
            for depth in range(1, 21):
                boundary = "A" if depth % 2 == 0 else "B"
                cut_value = induced_outcome(game, profile, boundary)
                assert isinstance(cut_value, Converges)
                tree = unfold(game, depth, cut_value.outcome)
                restriction = unfold_profile(game, profile, depth)
                assert check_spe(tree, restriction).ok

    def test_unfold_profile_keys_match_tree(self):
        from helpers import tree_paths

        game = loop01()
        for depth in (1, 3, 6):
            tree = unfold(game, depth, (0, 0))
            restriction = unfold_profile(game, {"A": "a", "B": "c"}, depth)
            assert set(restriction) == set(tree_paths(tree))


class TestNonExtrapolation:
    def test_finite_answers_oscillate_with_depth(self):
        game = loop01()
        for depth in range(1, 13):
            expected = (1, 0) if depth % 2 else (0, 1)
            tree = unfold(game, depth, expected)
            result = enumerate_equilibria(tree)
            assert not result.truncated
            from seqgames.core import induced_play

            outcomes = {induced_play(tree, p)[1] for p in result.profiles}
            assert outcomes == {expected}
