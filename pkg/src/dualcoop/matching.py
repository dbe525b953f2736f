"""Per-period pairing, game draws, and cognitive-mode draws.

Assortativity in cognition is mechanical: with probability A a single
Bernoulli(K) draw fixes both members' modes, otherwise each member draws
independently. This makes p(I|I) - p(I|D) equal A exactly for K in (0,1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import ConfigError


class CognitiveMode(enum.Enum):
    INTUITION = "intuition"
    DELIBERATION = "deliberation"


@dataclass(frozen=True)
class MatchDraw:
    """Realized structure of one period: pairs, game per pair, modes per pair."""

    pairs: np.ndarray        # (n_pairs, 2) agent indices, a perfect matching
    game_index: np.ndarray   # (n_pairs,) 0/1
    intuition: np.ndarray    # (n_pairs, 2) bool, True = intuition

    def modes(self, pair: int) -> tuple[CognitiveMode, CognitiveMode]:
        to_mode = lambda b: CognitiveMode.INTUITION if b else CognitiveMode.DELIBERATION
        return to_mode(self.intuition[pair, 0]), to_mode(self.intuition[pair, 1])


def pair_population(M: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random perfect matching: shuffle, then pair adjacent slots."""
    if M < 2 or M % 2 != 0:
        raise ConfigError(f"population size must be even and >= 2, got {M}")
    return rng.permutation(M).reshape(M // 2, 2)


def draw_games(n: int, p_game1: float, rng: np.random.Generator) -> np.ndarray:
    """One game draw per pair: 1 with probability p_game1, else 0."""
    return (rng.random(n) < p_game1).astype(np.int64)


def draw_game(p_game1: float, rng: np.random.Generator) -> int:
    return int(draw_games(1, p_game1, rng)[0])


def draw_modes_batch(
    n: int, K: float, A: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Cognitive modes for n pairs; returns (intuition_first, intuition_second).

    Per pair: with probability A one Bernoulli(K) draw applies to both
    members (True = intuition); with probability 1 - A the second member
    redraws independently. Three uniforms are consumed per pair regardless
    of the branch, which keeps the stream layout fixed.
    """
    u = rng.random((3, n))
    shared = u[0] < A
    first = u[1] < K
    second = np.where(shared, first, u[2] < K)
    return first, second


def draw_modes(K: float, A: float, rng: np.random.Generator) -> tuple[CognitiveMode, CognitiveMode]:
    """Modes of a single pair (scalar view of draw_modes_batch)."""
    first, second = draw_modes_batch(1, K, A, rng)
    to_mode = lambda b: CognitiveMode.INTUITION if b else CognitiveMode.DELIBERATION
    return to_mode(first[0]), to_mode(second[0])


def draw_match(
    M: int, K: float, A: float, p_game1: float, rng: np.random.Generator
) -> MatchDraw:
    """Full draw for one period: pairing, then per-pair game and modes."""
    pairs = pair_population(M, rng)
    n = M // 2
    games = draw_games(n, p_game1, rng)
    first, second = draw_modes_batch(n, K, A, rng)
    return MatchDraw(pairs=pairs, game_index=games, intuition=np.stack([first, second], axis=1))
