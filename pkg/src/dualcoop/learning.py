"""Choice rules and the reinforcement memory update.

Intuition picks the action with the best remembered reward; deliberation
either plays the game's dominant action (prescribed) or runs the same
argmax on a per-game memory (learned). The memory update is exponential
smoothing of the chosen action's slot, i.e. myopic Q-learning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matching import CognitiveMode
from .model import AgentMemory, ConfigError, Scenario, dominant_action


@dataclass(frozen=True)
class LearningParams:
    alpha: float
    tie_epsilon: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0,1], got {self.alpha}")
        if self.tie_epsilon < 0:
            raise ConfigError("tie_epsilon must be non-negative")


def argmax_with_tie(values: np.ndarray, tie_epsilon: float, rng: np.random.Generator) -> int:
    """Index of the larger of two values; a uniform coin inside the tie band.

    Consumes one rng draw only when |values[0] - values[1]| <= tie_epsilon.
    """
    diff = values[0] - values[1]
    if abs(diff) <= tie_epsilon:
        return 0 if rng.random() < 0.5 else 1
    return 0 if diff > 0 else 1


def intuitive_choice(memory: AgentMemory, params: LearningParams, rng: np.random.Generator) -> int:
    """Game-blind choice: argmax of the action memory, coin on a tie."""
    return argmax_with_tie(memory.r_bar, params.tie_epsilon, rng)


def prescribed_deliberation(scenario: Scenario, game_index: int) -> int:
    """Dominant action of the recognized game."""
    dom = dominant_action(scenario.game(game_index))
    if dom is None:
        raise ConfigError(f"game {game_index} has no dominant action to prescribe")
    return dom[0]


def learned_deliberation(
    memory: AgentMemory, game_index: int, params: LearningParams, rng: np.random.Generator
) -> int:
    """Argmax over the game-specific deliberative memory, coin on a tie."""
    if memory.deliberative is None:
        raise ConfigError("learned deliberation requires deliberative memories")
    return argmax_with_tie(memory.deliberative[game_index], params.tie_epsilon, rng)


def update_memory(
    memory: AgentMemory,
    chosen_action: int,
    reward: float,
    params: LearningParams,
    mode: CognitiveMode,
    game_index: int,
) -> AgentMemory:
    """Credit the realized reward to the chosen action's slot.

    The intuitive memory updates on every decision, whatever the mode; that
    is the channel through which deliberate play shapes the heuristic. Under
    deliberation an existing per-game memory slot updates by the same rule.
    The other slots are untouched.
    """
    out = memory.copy()
    a = params.alpha
    out.r_bar[chosen_action] = (1 - a) * out.r_bar[chosen_action] + a * reward
    if mode is CognitiveMode.DELIBERATION and out.deliberative is not None:
        old = out.deliberative[game_index, chosen_action]
        out.deliberative[game_index, chosen_action] = (1 - a) * old + a * reward
    return out
