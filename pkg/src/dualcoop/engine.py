"""Period loop: match, choose, pay, learn; plus replications over seeds.

The loop is vectorized over pairs but follows the per-agent rules exactly:
choices use the argmax-with-tie rule from :mod:`dualcoop.learning`, memory
slots update by exponential smoothing, and all randomness flows through one
generator owned by the run, so identical (config, seed) means bit-identical
output. One tie coin per decision is drawn whether or not a tie occurs,
which keeps the stream layout independent of the realized memories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .learning import prescribed_deliberation
from .matching import draw_games, draw_modes_batch, pair_population
from .model import DeliberationRule, SimConfig

AGGREGATE_FIELDS = (
    "intuitive_coop_rate",
    "deliberative_coop_rate",
    "total_coop_rate",
    "intuitive_rate_a0",
    "intuitive_rate_a1",
    "deliberative_rate_a0",
    "deliberative_rate_a1",
    "delib_coop_rate_game0",
    "delib_coop_rate_game1",
    "mean_reward",
    "intuition_share",
)


@dataclass
class MetricsSeries:
    """Per-period decision counts and rewards for one run.

    ``counts[t, mode, game, action]`` with mode 0 = intuition and
    1 = deliberation; ``reward[t]`` is the sum of payoffs paid in period t.
    Aggregates exclude the first ``burn_in`` periods.
    """

    counts: np.ndarray
    reward: np.ndarray
    M: int
    burn_in: int
    action_labels: tuple[str, str]
    cooperative_action_index: int | None

    @property
    def T(self) -> int:
        return self.counts.shape[0]

    @property
    def intuitive_counts(self) -> np.ndarray:
        return self.counts[:, 0].sum(axis=(1, 2))

    @property
    def intuitive_action_counts(self) -> np.ndarray:
        return self.counts[:, 0].sum(axis=1)

    @property
    def deliberative_counts(self) -> np.ndarray:
        return self.counts[:, 1].sum(axis=(1, 2))

    @property
    def deliberative_action_counts(self) -> np.ndarray:
        return self.counts[:, 1].sum(axis=1)

    @property
    def deliberative_game_action_counts(self) -> np.ndarray:
        """Deliberative plays split by game, shape (T, game, action)."""
        return self.counts[:, 1]

    def aggregates(self) -> dict[str, float]:
        """Pooled post-burn-in rates and the mean reward per agent-period."""
        c = self.counts[self.burn_in:].sum(axis=0)
        decisions = self.M * (self.T - self.burn_in)
        rate = lambda num, den: float(num) / float(den) if den > 0 else float("nan")
        coop = self.cooperative_action_index
        out = {
            "intuitive_rate_a0": rate(c[0, :, 0].sum(), c[0].sum()),
            "intuitive_rate_a1": rate(c[0, :, 1].sum(), c[0].sum()),
            "deliberative_rate_a0": rate(c[1, :, 0].sum(), c[1].sum()),
            "deliberative_rate_a1": rate(c[1, :, 1].sum(), c[1].sum()),
            "mean_reward": float(self.reward[self.burn_in:].sum()) / decisions,
            "intuition_share": rate(c[0].sum(), decisions),
        }
        if coop is None:
            nan = float("nan")
            out.update(
                intuitive_coop_rate=nan,
                deliberative_coop_rate=nan,
                total_coop_rate=nan,
                delib_coop_rate_game0=nan,
                delib_coop_rate_game1=nan,
            )
        else:
            out.update(
                intuitive_coop_rate=rate(c[0, :, coop].sum(), c[0].sum()),
                deliberative_coop_rate=rate(c[1, :, coop].sum(), c[1].sum()),
                total_coop_rate=rate(c[:, :, coop].sum(), decisions),
                delib_coop_rate_game0=rate(c[1, 0, coop], c[1, 0].sum()),
                delib_coop_rate_game1=rate(c[1, 1, coop], c[1, 1].sum()),
            )
        return {k: out[k] for k in AGGREGATE_FIELDS}


def _batched_argmax(diff: np.ndarray, coins: np.ndarray, tie_eps: float) -> np.ndarray:
    """Vector form of the argmax-with-tie rule over value differences."""
    tie_action = (coins >= 0.5).astype(np.int64)
    return np.where(diff > tie_eps, 0, np.where(diff < -tie_eps, 1, tie_action))


def run(config: SimConfig) -> MetricsSeries:
    """Simulate one run of T periods over M agents."""
    scen = config.scenario
    payoff = scen.payoff_tensor()
    learned = config.deliberation_rule is DeliberationRule.LEARNED
    if not learned:
        prescribed = np.array(
            [prescribed_deliberation(scen, 0), prescribed_deliberation(scen, 1)]
        )
    rng = np.random.default_rng(config.seed)
    M, T = config.M, config.T
    n_pairs = M // 2
    eps = config.tie_epsilon

    r_bar = np.full((M, 2), config.initial_memory, dtype=float)
    delib_mem = np.full((M, 2, 2), config.initial_memory, dtype=float) if learned else None

    counts = np.zeros((T, 2, 2, 2), dtype=np.int64)
    reward = np.zeros(T, dtype=float)
    alpha = config.alpha

    for t in range(T):
        pairs = pair_population(M, rng)
        left, right = pairs[:, 0], pairs[:, 1]
        games = draw_games(n_pairs, scen.p_game1, rng)
        int_left, int_right = draw_modes_batch(n_pairs, config.K, config.A, rng)
        coins = rng.random((2, n_pairs))

        acts = []
        for idx, intuition, coin in ((left, int_left, coins[0]), (right, int_right, coins[1])):
            intuitive = _batched_argmax(r_bar[idx, 0] - r_bar[idx, 1], coin, eps)
            if learned:
                dm = delib_mem[idx, games]
                deliberate = _batched_argmax(dm[:, 0] - dm[:, 1], coin, eps)
            else:
                deliberate = prescribed[games]
            acts.append(np.where(intuition, intuitive, deliberate))
        act_left, act_right = acts

        pay_left = payoff[games, act_left, act_right]
        pay_right = payoff[games, act_right, act_left]

        r_bar[left, act_left] = (1 - alpha) * r_bar[left, act_left] + alpha * pay_left
        r_bar[right, act_right] = (1 - alpha) * r_bar[right, act_right] + alpha * pay_right
        if learned:
            for idx, intuition, act, pay in (
                (left, int_left, act_left, pay_left),
                (right, int_right, act_right, pay_right),
            ):
                m = ~intuition
                old = delib_mem[idx[m], games[m], act[m]]
                delib_mem[idx[m], games[m], act[m]] = (1 - alpha) * old + alpha * pay[m]

        code = np.concatenate(
            [
                (~int_left) * 4 + games * 2 + act_left,
                (~int_right) * 4 + games * 2 + act_right,
            ]
        )
        counts[t] = np.bincount(code, minlength=8).reshape(2, 2, 2)
        reward[t] = pay_left.sum() + pay_right.sum()

    return MetricsSeries(
        counts=counts,
        reward=reward,
        M=M,
        burn_in=config.burn_in,
        action_labels=scen.action_labels,
        cooperative_action_index=scen.cooperative_action_index,
    )


@dataclass
class ReplicationStats:
    """Mean and standard error of each aggregate metric over seeds."""

    n_seeds: int
    mean: dict[str, float]
    se: dict[str, float]
    per_seed: dict[str, np.ndarray]
    series: list[MetricsSeries] | None = None


def run_replications(
    config: SimConfig, n_seeds: int, keep_series: bool = False
) -> ReplicationStats:
    """Run with seeds seed, seed+1, ... and summarize the aggregates.

    SE is the sample standard deviation over seeds divided by sqrt(n_seeds),
    reported as 0 for a single seed. Replications share no state and can be
    reduced in any order; they are executed sequentially here.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    rows = []
    series = [] if keep_series else None
    for i in range(n_seeds):
        ms = run(config.with_(seed=config.seed + i))
        rows.append(ms.aggregates())
        if keep_series:
            series.append(ms)
    per_seed = {k: np.array([r[k] for r in rows]) for k in AGGREGATE_FIELDS}
    mean = {k: float(np.mean(v)) for k, v in per_seed.items()}
    se = {
        k: (float(np.std(v, ddof=1) / np.sqrt(n_seeds)) if n_seeds > 1 else 0.0)
        for k, v in per_seed.items()
    }
    return ReplicationStats(n_seeds=n_seeds, mean=mean, se=se, per_seed=per_seed, series=series)
