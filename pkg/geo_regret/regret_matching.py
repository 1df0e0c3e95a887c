"""Smooth regret matching updates of a single player's mixed strategy.

Three rule variants are supported:

* ``standard``: push the strategy towards its regret vector,
  ``(s + r*lam) / (1 + r*|lam|)``.
* ``generalized``: as above, after transforming each regret component with an
  alpha preset and with a rate that may depend on the whole profile.
* ``convex_target``: move the strategy towards a target point of the
  simplex by the convex combination ``s/(1+r) + r*target/(1+r)``.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .exceptions import NumericalError, RuleError, ShapeError
from .models import MixedStrategy, PlayerRegret, RegretReport


logger = logging.getLogger(__name__)

STANDARD = "standard"
GENERALIZED = "generalized"
CONVEX_TARGET = "convex_target"

VARIANT_NAMES = {
    "standard": STANDARD,
    "general": GENERALIZED,
    "generalized": GENERALIZED,
    "convex": CONVEX_TARGET,
    "convex_target": CONVEX_TARGET,
}


def _check_rate(rate: float) -> float:
    rate = float(rate)
    if not (np.isfinite(rate) and rate > 0):
        raise RuleError(f"Adjustment rate must be a positive finite number, got {rate!r}")
    return rate


@dataclass(frozen=True)
class AlphaTransform:
    """Componentwise transform of a regret vector with alpha(0) = 0 and alpha(x) >= 0."""

    kind: str = "identity"
    parameter: float = 1.0

    def __post_init__(self):
        if self.kind not in ("identity", "power", "deadzone"):
            raise RuleError(f"Unknown alpha preset '{self.kind}'")
        if self.kind == "power" and not self.parameter > 0:
            raise RuleError(f"power alpha needs an exponent > 0, got {self.parameter}")
        if self.kind == "deadzone" and not self.parameter >= 0:
            raise RuleError(f"deadzone alpha needs a threshold >= 0, got {self.parameter}")
        sample = self(np.array([0.0, 1.0, 2.0]))
        if sample[0] != 0.0 or np.any(sample < 0):
            raise RuleError(f"alpha preset {self.describe()} must map 0 to 0 and stay nonnegative")

    def __call__(self, regret: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return regret
        if self.kind == "power":
            return np.power(regret, self.parameter)
        return np.maximum(regret - self.parameter, 0.0)

    def describe(self) -> str:
        return self.kind if self.kind == "identity" else f"{self.kind}:{self.parameter:g}"


@dataclass(frozen=True)
class RateFunction:
    """Adjustment rate as a function of the current profile.

    ``constant`` returns c; ``damped`` returns c / (1 + total regret sum of
    all players).
    """

    kind: str = "constant"
    value: float = 0.05

    def __post_init__(self):
        if self.kind not in ("constant", "damped"):
            raise RuleError(f"Unknown rate function '{self.kind}'")
        _check_rate(self.value)

    def evaluate(self, report: Optional[RegretReport] = None) -> float:
        if self.kind == "constant":
            return self.value
        if report is None:
            raise RuleError("damped rate needs the regret report of the current profile")
        return self.value / (1.0 + report.overall)

    def describe(self) -> str:
        return f"{self.value:g}" if self.kind == "constant" else f"damped:{self.value:g}"


@dataclass(frozen=True)
class TargetMap:
    """Continuous map from a player's situation to a target point of its simplex.

    ``softmax`` weighs pure strategies by exp(vertex payoff / temperature);
    ``constant`` always returns the same weights.
    """

    kind: str = "softmax"
    temperature: float = 1.0
    weights: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "softmax":
            if not self.temperature > 0:
                raise RuleError(f"softmax temperature must be > 0, got {self.temperature}")
        elif self.kind == "constant":
            MixedStrategy(np.array(self.weights, dtype=float))
        else:
            raise RuleError(f"Unknown target map '{self.kind}'")

    def target(self, vertex_payoffs: np.ndarray) -> MixedStrategy:
        if self.kind == "constant":
            if len(self.weights) != len(vertex_payoffs):
                raise ShapeError(
                    f"Constant target has {len(self.weights)} weights for a player with {len(vertex_payoffs)} strategies"
                )
            return MixedStrategy(np.array(self.weights, dtype=float))
        scaled = (vertex_payoffs - np.max(vertex_payoffs)) / self.temperature
        weights = np.exp(scaled)
        return MixedStrategy(weights / weights.sum())

    def describe(self) -> str:
        if self.kind == "softmax":
            return f"softmax:{self.temperature:g}"
        return "constant:" + "/".join(f"{w:g}" for w in self.weights)


@dataclass(frozen=True)
class UpdateRule:
    """How one player updates its strategy at each iteration."""

    variant: str = STANDARD
    rate: RateFunction = RateFunction()
    alpha: AlphaTransform = AlphaTransform()
    target: Optional[TargetMap] = None

    def __post_init__(self):
        if self.variant not in (STANDARD, GENERALIZED, CONVEX_TARGET):
            raise RuleError(f"Unknown rule variant '{self.variant}'")
        if self.variant == STANDARD and (self.alpha.kind != "identity" or self.rate.kind != "constant"):
            raise RuleError("standard rule takes a constant rate and no alpha preset; use the generalized variant")
        if self.variant == CONVEX_TARGET and self.target is None:
            raise RuleError("convex_target rule needs a target map")
        if self.variant != CONVEX_TARGET and self.target is not None:
            raise RuleError(f"{self.variant} rule does not take a target map")

    @classmethod
    def standard(cls, rate: float) -> "UpdateRule":
        return cls(STANDARD, RateFunction("constant", rate))

    @classmethod
    def generalized(cls, rate: float, alpha: AlphaTransform = AlphaTransform(), damped: bool = False) -> "UpdateRule":
        return cls(GENERALIZED, RateFunction("damped" if damped else "constant", rate), alpha)

    @classmethod
    def convex(cls, rate: float, target: TargetMap) -> "UpdateRule":
        return cls(CONVEX_TARGET, RateFunction("constant", rate), target=target)

    def describe(self) -> str:
        """Canonical rule spec string, parseable by parse_rule_spec."""
        if self.variant == STANDARD:
            return f"standard:r={self.rate.describe()}"
        if self.variant == GENERALIZED:
            return f"general:r={self.rate.describe()},alpha={self.alpha.describe()}"
        return f"convex:r={self.rate.describe()},target={self.target.describe()}"


def psi_update(strategy: MixedStrategy, regret: np.ndarray, rate: float) -> MixedStrategy:
    """Push a mixed strategy towards its regret vector.

    Args:
        strategy: Current mixed strategy s.
        regret: Regret vector lam, componentwise >= 0, same length as s.
        rate: Adjustment rate r > 0.

    Returns:
        (s + r*lam) / (1 + r*|lam|); s itself when |lam| is zero.
    """
    rate = _check_rate(rate)
    regret = np.asarray(regret, dtype=float)
    if regret.shape != strategy.weights.shape:
        raise ShapeError(f"Regret vector of shape {regret.shape} for strategy of length {strategy.size}")
    if np.any(regret < 0):
        raise RuleError(f"Regret components must be nonnegative, got minimum {regret.min()!r}")
    total = float(np.sum(regret))
    if total == 0.0:
        return strategy
    weights = (strategy.weights + rate * regret) / (1.0 + rate * total)
    if not np.all(np.isfinite(weights)):
        raise NumericalError(f"Non-finite strategy after update with rate {rate!r}")
    return MixedStrategy(weights)


def psi_update_general(
    strategy: MixedStrategy, regret: np.ndarray, rule: UpdateRule, context: Optional[RegretReport] = None
) -> MixedStrategy:
    """Generalized update: alpha-transformed regret and profile-dependent rate.

    ``context`` is the regret report of the current profile, consulted by
    rate functions such as ``damped``.
    """
    transformed = rule.alpha(np.asarray(regret, dtype=float))
    return psi_update(strategy, transformed, rule.rate.evaluate(context))


def convex_update(state: MixedStrategy, target: MixedStrategy, rate: float) -> MixedStrategy:
    """Convex combination s/(1+r) + r*target/(1+r).

    The L2 distance to the target shrinks by exactly 1/(1+r).
    """
    rate = _check_rate(rate)
    if target.size != state.size:
        raise ShapeError(f"Target of length {target.size} for state of length {state.size}")
    weights = state.weights / (1.0 + rate) + (rate / (1.0 + rate)) * target.weights
    return MixedStrategy(weights)


def cosine_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine of the angle between two nonzero vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ShapeError(f"Vectors of shapes {u.shape} and {v.shape}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValueError("cosine_angle is undefined for zero vectors")
    return float(np.clip(np.dot(u, v) / (norm_u * norm_v), -1.0, 1.0))


def apply_rule(
    strategy: MixedStrategy, player_regret: PlayerRegret, rule: UpdateRule, report: RegretReport
) -> MixedStrategy:
    """Update one player's strategy from its regret quantities under ``rule``."""
    if rule.variant == STANDARD:
        return psi_update(strategy, player_regret.regret_vector, rule.rate.evaluate(report))
    if rule.variant == GENERALIZED:
        return psi_update_general(strategy, player_regret.regret_vector, rule, report)
    target = rule.target.target(player_regret.vertex_payoffs)
    return convex_update(strategy, target, rule.rate.evaluate(report))


def _parse_number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise RuleError(f"Invalid number '{text}' for {what}") from None


def _parse_rate(text: str) -> RateFunction:
    kind, sep, value = text.partition(":")
    if not sep:
        return RateFunction("constant", _parse_number(text, "rate"))
    return RateFunction(kind, _parse_number(value, f"{kind} rate"))


def _parse_alpha(text: str) -> AlphaTransform:
    kind, sep, value = text.partition(":")
    if kind == "identity":
        return AlphaTransform()
    if not sep:
        raise RuleError(f"alpha preset '{kind}' needs a parameter, e.g. {kind}:2")
    return AlphaTransform(kind, _parse_number(value, f"alpha {kind}"))


def _parse_target(text: str) -> TargetMap:
    kind, sep, value = text.partition(":")
    if kind == "softmax":
        return TargetMap("softmax", temperature=_parse_number(value, "softmax temperature") if sep else 1.0)
    if kind == "constant":
        weights = tuple(_parse_number(w, "constant target weight") for w in value.split("/") if w)
        return TargetMap("constant", weights=weights)
    raise RuleError(f"Unknown target map '{kind}'")


def parse_rule_spec(spec: str) -> UpdateRule:
    """Parse a rule spec string.

    Examples: ``standard:r=0.05``, ``general:r=0.05,alpha=power:2``,
    ``general:r=damped:0.5``, ``convex:r=0.5,target=softmax:1.0``.
    """
    head, _, tail = spec.strip().partition(":")
    variant = VARIANT_NAMES.get(head.strip())
    if variant is None:
        raise RuleError(f"Unknown rule variant '{head}' in rule spec '{spec}'")
    options = {}
    for item in filter(None, (part.strip() for part in tail.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise RuleError(f"Expected key=value in rule spec '{spec}', got '{item}'")
        options[key.strip()] = value.strip()

    unknown = set(options) - {"r", "alpha", "target"}
    if unknown:
        raise RuleError(f"Unknown rule spec keys {sorted(unknown)} in '{spec}'")
    if "r" not in options:
        raise RuleError(f"Rule spec '{spec}' needs a rate, e.g. r=0.05")

    rate = _parse_rate(options["r"])
    alpha = _parse_alpha(options["alpha"]) if "alpha" in options else AlphaTransform()
    target = _parse_target(options["target"]) if "target" in options else None
    return UpdateRule(variant, rate, alpha, target)
