"""Closed forms for where assortativity in cognition comes from.

Two generative stories: interacting partners share a state of the world
that shifts how likely deliberation is (state-based), or partners are
matched assortatively on a type that shifts it (type-based). Both induce
p(D|D) > p(D|I) exactly when the deliberation propensities differ, and the
gap has an exact product form, so the zero cases come out as literal
zeros rather than cancellation noise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ConfigError


class UndefinedConditionalError(ValueError):
    """No deliberators or no intuitors: a conditional is 0/0."""


@dataclass(frozen=True)
class StateBasedParams:
    """Two states of the world with different intuition propensities."""

    pA: float  # probability of state A, interior
    kA: float  # P(intuition | state A)
    kB: float  # P(intuition | state B)

    def __post_init__(self) -> None:
        if not 0.0 < self.pA < 1.0:
            raise ConfigError(f"pA must be in (0,1), got {self.pA}")
        for name in ("kA", "kB"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0,1], got {v}")


@dataclass(frozen=True)
class TypeBasedParams:
    """Two agent types, matched assortatively, with different propensities.

    ``a_types`` is the assortativity-in-types index: the induced
    conditionals are p(X|X) = a + (1-a) q and p(X|Y) = (1-a) q, which
    satisfy the matching balance q p(Y|X) = (1-q) p(X|Y).
    """

    q: float        # fraction of type X, interior
    a_types: float  # assortativity in types
    kX: float       # P(intuition | type X)
    kY: float       # P(intuition | type Y)

    def __post_init__(self) -> None:
        if not 0.0 < self.q < 1.0:
            raise ConfigError(f"q must be in (0,1), got {self.q}")
        for name in ("a_types", "kX", "kY"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0,1], got {v}")

    def p_x_given_x(self) -> float:
        return self.a_types + (1 - self.a_types) * self.q

    def p_x_given_y(self) -> float:
        return (1 - self.a_types) * self.q


@dataclass(frozen=True)
class CognitionAssortReport:
    """Marginal mode probabilities, partner-mode conditionals, and their gap."""

    pD: float
    pI: float
    pD_given_D: float
    pD_given_I: float
    delta: float  # pD_given_D - pD_given_I; positive means assortativity in cognition


def state_based_report(params: StateBasedParams) -> CognitionAssortReport:
    """Assortativity in cognition induced by a shared state of the world.

    delta reduces to pA pB (kA - kB)^2 / (pD pI), so it is positive exactly
    when the two states differ in their intuition propensity.
    """
    pA, kA, kB = params.pA, params.kA, params.kB
    pB = 1.0 - pA
    pD = pA * (1 - kA) + pB * (1 - kB)
    pI = pA * kA + pB * kB
    if pD == 0.0 or pI == 0.0:
        raise UndefinedConditionalError(
            f"conditionals undefined: pD={pD}, pI={pI} (kA={kA}, kB={kB})"
        )
    pDD = pA * (1 - kA) ** 2 + pB * (1 - kB) ** 2
    pDI = pA * (1 - kA) * kA + pB * (1 - kB) * kB
    delta = pA * pB * (kA - kB) ** 2 / (pD * pI)
    return CognitionAssortReport(
        pD=pD, pI=pI, pD_given_D=pDD / pD, pD_given_I=pDI / pI, delta=delta
    )


def type_based_report(params: TypeBasedParams) -> CognitionAssortReport:
    """Assortativity in cognition induced by assortativity in types.

    delta reduces to a q (1-q) (kX - kY)^2 / (pD pI): zero when matching is
    random in types (a = 0) or the types behave alike (kX = kY), positive
    otherwise.
    """
    q, a, kX, kY = params.q, params.a_types, params.kX, params.kY
    dX, dY = 1 - kX, 1 - kY
    pD = q * dX + (1 - q) * dY
    pI = q * kX + (1 - q) * kY
    if pD == 0.0 or pI == 0.0:
        raise UndefinedConditionalError(
            f"conditionals undefined: pD={pD}, pI={pI} (kX={kX}, kY={kY})"
        )
    # ordered pair-type masses under the induced conditionals
    m_xx = q * params.p_x_given_x()
    m_xy = q * (1 - params.p_x_given_x())
    m_yx = (1 - q) * params.p_x_given_y()
    m_yy = (1 - q) * (1 - params.p_x_given_y())
    pDD = m_xx * dX * dX + m_xy * dX * dY + m_yx * dY * dX + m_yy * dY * dY
    pDI = m_xx * dX * kX + m_xy * dX * kY + m_yx * dY * kX + m_yy * dY * kY
    delta = a * q * (1 - q) * (kX - kY) ** 2 / (pD * pI)
    return CognitionAssortReport(
        pD=pD, pI=pI, pD_given_D=pDD / pD, pD_given_I=pDI / pI, delta=delta
    )
