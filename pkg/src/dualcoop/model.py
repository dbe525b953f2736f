"""Games, scenarios, agent memory and run configuration.

A scenario is a pair of symmetric 2x2 games; one of the two is drawn for
each interaction. Agents carry an action-indexed reward memory that drives
intuitive play, plus optional per-game memories for learned deliberation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

N_ACTIONS = 2


class ConfigError(ValueError):
    """Invalid model or experiment configuration."""


class Dominance(enum.Enum):
    STRICT = "strict"
    WEAK = "weak"


class ScenarioKind(str, enum.Enum):
    PD_MIXED = "pd_mixed"
    DOUBLE_ONE_SHOT = "double_one_shot"
    DOUBLE_REPEATED = "double_repeated"


class DeliberationRule(str, enum.Enum):
    PRESCRIBED = "prescribed"
    LEARNED = "learned"


@dataclass(frozen=True)
class PayoffTable:
    """Row-player payoffs of a symmetric 2x2 game, ``entry[own][opponent]``."""

    entries: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self) -> None:
        flat = [v for row in self.entries for v in row]
        if len(self.entries) != 2 or any(len(r) != 2 for r in self.entries):
            raise ConfigError("payoff table must be 2x2")
        if any(v < 0 for v in flat):
            raise ConfigError("payoff entries must be non-negative")

    def payoff(self, own: int, opponent: int) -> float:
        return self.entries[own][opponent]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


@dataclass(frozen=True)
class Scenario:
    """Two symmetric stage games mixed per pair per period.

    ``game1`` is drawn with probability ``p_game1``, ``game0`` otherwise.
    ``cooperative_action_index`` is set only when one action is meaningfully
    "more cooperative" in both games (the mixed dilemma); the double-game
    scenarios report per-action play rates instead.
    """

    game0: PayoffTable
    game1: PayoffTable
    p_game1: float
    action_labels: tuple[str, str] = ("C", "D")
    cooperative_action_index: int | None = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_game1 <= 1.0:
            raise ConfigError(f"p_game1 must be in [0,1], got {self.p_game1}")
        if self.cooperative_action_index not in (None, 0, 1):
            raise ConfigError("cooperative_action_index must be None, 0 or 1")

    def game(self, index: int) -> PayoffTable:
        return self.game1 if index else self.game0

    def payoff_tensor(self) -> np.ndarray:
        """Stacked payoffs, shape (2 games, 2 own actions, 2 opponent actions)."""
        return np.stack([self.game0.as_array(), self.game1.as_array()])

    def to_dict(self) -> dict:
        return {
            "game0": [list(r) for r in self.game0.entries],
            "game1": [list(r) for r in self.game1.entries],
            "p_game1": self.p_game1,
            "action_labels": list(self.action_labels),
            "cooperative_action_index": self.cooperative_action_index,
        }

    @staticmethod
    def from_dict(d: dict) -> "Scenario":
        if "kind" in d:
            return canonical_scenario(
                ScenarioKind(d["kind"]), d.get("b", 4.0), d.get("c", 1.0), d.get("p", 0.5)
            )
        to_table = lambda rows: PayoffTable(tuple(tuple(float(v) for v in r) for r in rows))
        return Scenario(
            game0=to_table(d["game0"]),
            game1=to_table(d["game1"]),
            p_game1=float(d["p_game1"]),
            action_labels=tuple(d.get("action_labels", ("C", "D"))),
            cooperative_action_index=d.get("cooperative_action_index"),
        )


def canonical_scenario(kind: ScenarioKind | str, b: float, c: float, p: float) -> Scenario:
    """Build one of the three canonical two-game scenarios.

    All three are parameterized by rewards b > c > 0. The mixed dilemma pairs
    a one-shot social dilemma (defection strictly dominant) with a repeated
    one (cooperation weakly dominant). The double scenarios pair a game with
    its action-permuted twin.
    """
    kind = ScenarioKind(kind)
    if not (b > c > 0):
        raise ConfigError(f"need b > c > 0, got b={b}, c={c}")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"p must be in [0,1], got {p}")
    d = b + c
    if kind is ScenarioKind.PD_MIXED:
        one_shot = PayoffTable(((b, 0.0), (d, c)))
        repeated = PayoffTable(((b, c), (c, c)))
        return Scenario(one_shot, repeated, p, ("C", "D"), cooperative_action_index=0)
    if kind is ScenarioKind.DOUBLE_ONE_SHOT:
        # twin one-shot dilemmas; dominant action S in game0, F in game1
        s_dominant = PayoffTable(((b, 0.0), (d, c)))
        f_dominant = PayoffTable(((c, d), (0.0, b)))
        return Scenario(s_dominant, f_dominant, p, ("F", "S"), cooperative_action_index=None)
    # twin repeated dilemmas; weakly dominant action S in game0, F in game1
    s_dominant = PayoffTable(((c, c), (c, b)))
    f_dominant = PayoffTable(((b, c), (c, c)))
    return Scenario(s_dominant, f_dominant, p, ("F", "S"), cooperative_action_index=None)


def dominant_action(game: PayoffTable) -> tuple[int, Dominance] | None:
    """Action weakly or strictly dominating the other, or None.

    Mutual weak dominance (identical rows) counts as no dominant action.
    """
    a = game.as_array()
    for act in (0, 1):
        other = 1 - act
        diffs = a[act] - a[other]
        if np.all(diffs > 0):
            return act, Dominance.STRICT
        if np.all(diffs >= 0) and np.any(diffs > 0):
            return act, Dominance.WEAK
    return None


@dataclass
class AgentMemory:
    """Per-action reward statistics; one slot per action.

    ``deliberative`` holds two extra per-game memories (shape 2 games x 2
    actions) used only under the learned deliberation rule.
    """

    r_bar: np.ndarray
    deliberative: np.ndarray | None = None

    @staticmethod
    def fresh(initial: float = 0.0, learned: bool = False) -> "AgentMemory":
        delib = np.full((2, N_ACTIONS), initial, dtype=float) if learned else None
        return AgentMemory(np.full(N_ACTIONS, initial, dtype=float), delib)

    def copy(self) -> "AgentMemory":
        return AgentMemory(
            self.r_bar.copy(),
            None if self.deliberative is None else self.deliberative.copy(),
        )


@dataclass(frozen=True)
class SimConfig:
    """Full configuration of one simulation run."""

    M: int
    T: int
    K: float
    A: float
    alpha: float
    scenario: Scenario
    deliberation_rule: DeliberationRule = DeliberationRule.PRESCRIBED
    seed: int = 1234
    initial_memory: float = 0.0
    tie_epsilon: float = 1e-9
    burn_in: int = 0

    def __post_init__(self) -> None:
        if self.M <= 0 or self.M % 2 != 0:
            raise ConfigError(f"M must be a positive even integer, got {self.M}")
        if self.T <= 0:
            raise ConfigError(f"T must be positive, got {self.T}")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0,1], got {self.alpha}")
        for name in ("K", "A"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0,1], got {v}")
        if self.tie_epsilon < 0:
            raise ConfigError("tie_epsilon must be non-negative")
        if not 0 <= self.burn_in < self.T:
            raise ConfigError(f"burn_in must be in [0, T), got {self.burn_in}")

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "T": self.T,
            "K": self.K,
            "A": self.A,
            "alpha": self.alpha,
            "scenario": self.scenario.to_dict(),
            "deliberation_rule": self.deliberation_rule.value,
            "seed": self.seed,
            "initial_memory": self.initial_memory,
            "tie_epsilon": self.tie_epsilon,
            "burn_in": self.burn_in,
        }

    @staticmethod
    def from_dict(d: dict) -> "SimConfig":
        sc = d["scenario"]
        scenario = sc if isinstance(sc, Scenario) else Scenario.from_dict(sc)
        return SimConfig(
            M=int(d["M"]),
            T=int(d["T"]),
            K=float(d["K"]),
            A=float(d["A"]),
            alpha=float(d["alpha"]),
            scenario=scenario,
            deliberation_rule=DeliberationRule(d.get("deliberation_rule", "prescribed")),
            seed=int(d.get("seed", 1234)),
            initial_memory=float(d.get("initial_memory", 0.0)),
            tie_epsilon=float(d.get("tie_epsilon", 1e-9)),
            burn_in=int(d.get("burn_in", 0)),
        )
