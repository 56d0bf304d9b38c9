"""Two-player constant-sum matrix games solved exactly in rationals.

The row player's payoffs are given as a matrix of fractions; the column
player receives the constant sum minus the entry.  ``solve_constant_sum``
finds an exact minimax/maximin pair by exhaustive support enumeration with
rational Gaussian elimination, so results carry no rounding at all.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .core import GameError

SUPPORT_LIMIT = 9


class TooLarge(GameError):
    """Support enumeration is bounded at 9x9 matrices."""


class DimensionMismatch(GameError):
    """A distribution's length does not fit the matrix."""


@dataclass(frozen=True)
class MatrixGame:
    payoffs: tuple[tuple[Fraction, ...], ...]
    total: Fraction

    @property
    def rows(self) -> int:
        return len(self.payoffs)

    @property
    def cols(self) -> int:
        return len(self.payoffs[0])


@dataclass(frozen=True)
class MixedProfile:
    row: tuple[Fraction, ...]
    column: tuple[Fraction, ...]
    value: Fraction


def matrix_game(rows: Iterable[Iterable[object]], total: object) -> MatrixGame:
    """Build a game from any Fraction-convertible entries."""
    payoffs = tuple(tuple(Fraction(entry) for entry in row) for row in rows)
    if not payoffs or not payoffs[0]:
        raise ValueError("matrix must have at least one row and one column")
    if any(len(row) != len(payoffs[0]) for row in payoffs):
        raise ValueError("matrix rows must have equal length")
    return MatrixGame(payoffs, Fraction(total))


def _solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(rows)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [x / factor for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                scale = aug[r][col]
                aug[r] = [x - scale * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _lex_supports(size: int) -> list[tuple[int, ...]]:
    subsets = itertools.chain.from_iterable(
        itertools.combinations(range(size), k) for k in range(1, size + 1)
    )
    return sorted(subsets)


def _equalizing_mix(
    matrix: Sequence[Sequence[Fraction]], support: tuple[int, ...], against: tuple[int, ...]
) -> tuple[list[Fraction], Fraction] | None:
    """Mix on ``support`` making every column of ``against`` worth the same
    value v: solve sum_i x_i M[i][j] = v for j in against, sum x_i = 1."""
    k = len(support)
    rows = [[matrix[i][j] for i in support] + [Fraction(-1)] for j in against]
    rows.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    solution = _solve_linear(rows, rhs)
    if solution is None:
        return None
    return solution[:k], solution[k]


def _optimal_mix(matrix: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], Fraction]:
    """Maximin strategy for the row player of ``matrix``.

    Square support pairs are scanned with the row support in lexicographic
    order over all nonempty subsets; among the accepted solutions for the
    first workable row support, the lexicographically smallest distribution
    is returned.  A square-kernel solution always exists.
    """
    n_rows, n_cols = len(matrix), len(matrix[0])
    transposed = [[matrix[i][j] for i in range(n_rows)] for j in range(n_cols)]
    for support in _lex_supports(n_rows):
        candidates: list[tuple[tuple[Fraction, ...], Fraction]] = []
        for against in itertools.combinations(range(n_cols), len(support)):
            solved = _equalizing_mix(matrix, support, against)
            if solved is None:
                continue
            mix_on_support, value = solved
            if any(p < 0 for p in mix_on_support):
                continue
            dual = _equalizing_mix(transposed, against, support)
            if dual is None:
                continue
            opponent_mix, opponent_value = dual
            if opponent_value != value or any(p < 0 for p in opponent_mix):
                continue
            x = [Fraction(0)] * n_rows
            for idx, p in zip(support, mix_on_support):
                x[idx] = p
            y = [Fraction(0)] * n_cols
            for idx, p in zip(against, opponent_mix):
                y[idx] = p
            # x must guarantee >= value against every column and y must cap
            # every row at value; together they certify value as the game value.
            if any(sum(x[i] * matrix[i][j] for i in range(n_rows)) < value for j in range(n_cols)):
                continue
            if any(sum(matrix[i][j] * y[j] for j in range(n_cols)) > value for i in range(n_rows)):
                continue
            candidates.append((tuple(x), value))
        if candidates:
            return min(candidates)
    raise AssertionError("no square-kernel solution found; unreachable for valid input")


def solve_constant_sum(game: MatrixGame) -> MixedProfile:
    """Exact minimax/maximin pair, deterministic under ties.

    Each side is solved independently: the column player's own payoff
    matrix is ``total - payoffs`` transposed, and the same enumeration runs
    on it, so symmetric games get identical distributions on both sides.
    """
    if game.rows > SUPPORT_LIMIT or game.cols > SUPPORT_LIMIT:
        raise TooLarge(f"support enumeration bounded at {SUPPORT_LIMIT}x{SUPPORT_LIMIT}")
    x, value = _optimal_mix(game.payoffs)
    column_view = [
        [game.total - game.payoffs[i][j] for i in range(game.rows)] for j in range(game.cols)
    ]
    y, column_value = _optimal_mix(column_view)
    assert value + column_value == game.total
    return MixedProfile(x, y, value)


def best_response_value(
    game: MatrixGame, opponent_mix: Sequence[Fraction], side: Literal["row", "column"]
) -> Fraction:
    """Maximum expected payoff over the responder's pure strategies."""
    mix = [Fraction(p) for p in opponent_mix]
    expected_len = game.cols if side == "row" else game.rows
    if len(mix) != expected_len:
        raise DimensionMismatch(f"expected a distribution of length {expected_len}, got {len(mix)}")
    if any(p < 0 for p in mix) or sum(mix) != 1:
        raise ValueError("opponent_mix must be a probability distribution")
    if side == "row":
        return max(
            sum(game.payoffs[i][j] * mix[j] for j in range(game.cols)) for i in range(game.rows)
        )
    return max(
        game.total - sum(mix[i] * game.payoffs[i][j] for i in range(game.rows))
        for j in range(game.cols)
    )
