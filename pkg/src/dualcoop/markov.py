"""Exact analysis of one agent's memory chain under full assortativity.

With learning rate 1 and perfectly assorted modes, an agent's memory pair
(reward remembered for each action) lives on the six states
{0, c, b} x {c, d} with d = b + c. Transition probabilities depend on the
mode probability K, the repeated-game probability p, and the intuitive
cooperation rate x of the rest of the population. Consistency requires the
agent's own long-run intuitive cooperation rate to equal x; this module
finds those fixed points and labels their stability under the monotone
aggregate adjustment heuristic (aggregate play drifts toward the
individual best response, so a root is attracting when the response curve
crosses the diagonal from above).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import ConfigError

N_STATES = 6
_SOLVE_TOL = 1e-10
_POWER_TOL = 1e-12


class DegenerateChainError(ValueError):
    """The chain has more than one closed communicating class."""


class MemoryClass(enum.Enum):
    S1 = 1  # remembered cooperation reward above defection reward
    S2 = 2  # equal
    S3 = 3  # below


@dataclass(frozen=True)
class MemoryState:
    """One memory state: remembered rewards (r_c, r_d) for the two actions."""

    r_c: float
    r_d: float

    def memory_class(self) -> MemoryClass:
        if self.r_c > self.r_d:
            return MemoryClass.S1
        if self.r_c == self.r_d:
            return MemoryClass.S2
        return MemoryClass.S3


def state_space(b: float = 4.0, c: float = 1.0) -> list[MemoryState]:
    """The six states in fixed order: r_c minor over {0,c,b}, r_d over {c,d}."""
    if not b > c > 0:
        raise ConfigError(f"need b > c > 0, got b={b}, c={c}")
    d = b + c
    return [MemoryState(rc, rd) for rd in (c, d) for rc in (0.0, c, b)]


def reward_distribution(
    cls: MemoryClass, K: float, p: float, x_bar: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-period reward law for an agent whose memory lies in ``cls``.

    Returns (P[reward to the cooperation slot = 0, c, b],
             P[reward to the defection slot = c, d]).
    Exactly one of the five events occurs each period, so the entries sum
    to 1. The opponent shares the agent's mode (full assortativity),
    cooperates intuitively with probability x_bar, and deliberation plays
    the dominant action of the drawn game.
    """
    for name, v in (("K", K), ("p", p), ("x_bar", x_bar)):
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"{name} must be in [0,1], got {v}")
    if cls is MemoryClass.S1:
        p_c = np.array([K * (1 - p) * (1 - x_bar), K * p * (1 - x_bar), (1 - K) * p + K * x_bar])
        p_d = np.array([(1 - K) * (1 - p), 0.0])
    elif cls is MemoryClass.S2:
        p_c = np.array(
            [
                0.5 * K * (1 - p) * (1 - x_bar),
                0.5 * K * p * (1 - x_bar),
                (1 - K) * p + 0.5 * K * x_bar,
            ]
        )
        p_d = np.array(
            [
                (1 - K) * (1 - p) + 0.5 * K * (1 - x_bar) + 0.5 * K * p * x_bar,
                0.5 * K * (1 - p) * x_bar,
            ]
        )
    else:
        p_c = np.array([0.0, 0.0, (1 - K) * p])
        p_d = np.array(
            [(1 - K) * (1 - p) + K * (1 - x_bar) + K * p * x_bar, K * (1 - p) * x_bar]
        )
    return p_c, p_d


def build_transition(
    K: float, p: float, x_bar: float, b: float = 4.0, c: float = 1.0
) -> np.ndarray:
    """6x6 transition matrix of the memory chain.

    Only one memory slot changes per period (the slot of the played
    action), so entries where both coordinates differ are exactly zero, and
    the self-loop collects the probability of rewriting either slot with
    the value it already holds.
    """
    states = state_space(b, c)
    c_levels = (0.0, c, b)
    d_levels = (c, b + c)
    T = np.zeros((N_STATES, N_STATES))
    for i, st in enumerate(states):
        p_c, p_d = reward_distribution(st.memory_class(), K, p, x_bar)
        ci = c_levels.index(st.r_c)
        di = d_levels.index(st.r_d)
        for cj in range(3):
            if cj != ci:
                T[i, di * 3 + cj] = p_c[cj]
        for dj in range(2):
            if dj != di:
                T[i, dj * 3 + ci] = p_d[dj]
        T[i, i] = p_c[ci] + p_d[di]
    return T


def _closed_classes(T: np.ndarray) -> int:
    """Number of closed communicating classes of the chain."""
    n = T.shape[0]
    adj = (T > 0.0) | np.eye(n, dtype=bool)
    reach = adj.copy()
    for _ in range(n):
        reach = reach | (reach @ reach)
    closed = 0
    seen: set[frozenset] = set()
    for i in range(n):
        comm = frozenset(j for j in range(n) if reach[i, j] and reach[j, i])
        if comm in seen:
            continue
        seen.add(comm)
        outside = [j for j in range(n) if j not in comm]
        if not outside or not reach[list(comm)][:, outside].any():
            closed += 1
    return closed


def _power_iteration(T: np.ndarray, start: np.ndarray, tol: float = _POWER_TOL) -> np.ndarray:
    pi = np.asarray(start, dtype=float)
    pi = pi / pi.sum()
    for _ in range(1_000_000):
        nxt = pi @ T
        if np.max(np.abs(nxt - pi)) <= tol:
            return nxt
        pi = nxt
    return pi


def invariant_distribution(T: np.ndarray, start: np.ndarray | None = None) -> np.ndarray:
    """Stationary distribution pi with pi T = pi and sum(pi) = 1.

    Solved as a linear system with the normalization constraint; power
    iteration is the fallback when the solve is ill-conditioned. When the
    chain has multiple closed classes the stationary distribution is not
    unique: raises DegenerateChainError unless ``start`` is given, in which
    case the limit distribution reached from that start is returned.
    """
    T = np.asarray(T, dtype=float)
    n = T.shape[0]
    if not np.allclose(T.sum(axis=1), 1.0, atol=1e-9):
        raise ValueError("not a stochastic matrix")
    if _closed_classes(T) != 1:
        if start is None:
            raise DegenerateChainError(
                "multiple recurrent classes; pass a start distribution for the limit"
            )
        return _power_iteration(T, start)
    A = np.vstack([T.T - np.eye(n), np.ones(n)])
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    pi, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    if np.max(np.abs(pi @ T - pi)) > _SOLVE_TOL:
        pi = _power_iteration(T, pi if pi.min() >= 0 else np.full(n, 1.0 / n))
    return pi


def intuitive_coop_rate(
    K: float,
    p: float,
    x_bar: float,
    b: float = 4.0,
    c: float = 1.0,
    start: np.ndarray | None = None,
) -> float:
    """Long-run intuitive cooperation probability of one agent given x_bar.

    The mass of the state where cooperation is remembered best plus half
    the mass of the tied state.
    """
    T = build_transition(K, p, x_bar, b, c)
    pi = invariant_distribution(T, start=start)
    states = state_space(b, c)
    out = 0.0
    for i, st in enumerate(states):
        cls = st.memory_class()
        if cls is MemoryClass.S1:
            out += pi[i]
        elif cls is MemoryClass.S2:
            out += 0.5 * pi[i]
    return float(out)


@dataclass(frozen=True)
class FixedPoint:
    x: float
    stability: str  # "attracting" | "repelling"


def find_fixed_points(
    K: float,
    p: float,
    grid_size: int = 1000,
    tol: float = 1e-9,
    b: float = 4.0,
    c: float = 1.0,
) -> list[FixedPoint]:
    """Solutions of the consistency condition x = individual response(x).

    Scans g(x) = response(x) - x on a uniform grid, bisects every sign
    change down to |g| <= tol, and always includes x = 1. A root is
    attracting when g > 0 just below it and g < 0 just above (one-sided at
    the boundaries). Stability labels inherit the monotone-adjustment
    heuristic rather than a derivative, since g can be non-smooth at ties.
    Degenerate boundary parameters are evaluated as the chain limit from a
    uniform start.
    """
    if grid_size < 100:
        raise ConfigError("grid_size must be >= 100")
    uniform = np.full(N_STATES, 1.0 / N_STATES)

    def g(x: float) -> float:
        return intuitive_coop_rate(K, p, x, b, c, start=uniform) - x

    xs = np.linspace(0.0, 1.0, grid_size + 1)
    gs = np.array([g(x) for x in xs])

    roots: list[float] = []
    for i in range(grid_size):
        if abs(gs[i]) <= tol:
            roots.append(float(xs[i]))
            continue
        if gs[i] * gs[i + 1] < 0 and abs(gs[i + 1]) > tol:
            lo, hi, g_lo = xs[i], xs[i + 1], gs[i]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                g_mid = g(mid)
                if abs(g_mid) <= tol or hi - lo < 1e-14:
                    lo = hi = mid
                    break
                if g_lo * g_mid < 0:
                    hi = mid
                else:
                    lo, g_lo = mid, g_mid
            roots.append(0.5 * (lo + hi))
    if abs(gs[-1]) <= tol:
        roots.append(1.0)
    if not any(abs(r - 1.0) <= max(tol, 1e-7) for r in roots):
        roots.append(1.0)

    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > max(10 * tol, 1e-8):
            deduped.append(r)
        elif abs(r - 1.0) < 1e-12:
            deduped[-1] = 1.0

    out = []
    for i, r in enumerate(deduped):
        delta = 1e-4
        if i > 0:
            delta = min(delta, 0.5 * (r - deduped[i - 1]))
        if i + 1 < len(deduped):
            delta = min(delta, 0.5 * (deduped[i + 1] - r))
        below = g(max(r - delta, 0.0)) if r > 0 else None
        above = g(min(r + delta, 1.0)) if r < 1 else None
        if below is None:
            attracting = above is not None and above < 0
        elif above is None:
            attracting = below > 0
        else:
            attracting = below > 0 and above < 0
        out.append(FixedPoint(x=float(r), stability="attracting" if attracting else "repelling"))
    return out


def attracting_fixed_points(fps: list[FixedPoint]) -> list[float]:
    return [fp.x for fp in fps if fp.stability == "attracting"]
