"""Two-level rule for declaring the sign of an effect.

H0: theta = 0 is tested at a primary level ``alpha1``.  When it is
rejected, the sign of the estimate is also declared if H0 is rejected at
the stricter level ``alpha2 = 2 * alpha1 * alpha_s``.  Among rejections at
``alpha1``, the probability of declaring the wrong sign is then at most
``alpha_s``.

``alpha1`` has to be fixed before looking at the data: the sign p-value
``p_sign = p1 / (2 * alpha1)`` is only meaningful for a prespecified
``alpha1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import distributions as dist
from .errors import DomainError


class Decision(enum.Enum):
    NOT_SIGNIFICANT = "not_significant"
    SIGNIFICANT_NO_SIGN = "significant_no_sign"
    SIGNIFICANT_POS = "significant_pos"
    SIGNIFICANT_NEG = "significant_neg"

    @property
    def rejected(self) -> bool:
        return self is not Decision.NOT_SIGNIFICANT

    @property
    def sign(self) -> int | None:
        """+1 or -1 when a sign was declared, else None."""
        if self is Decision.SIGNIFICANT_POS:
            return 1
        if self is Decision.SIGNIFICANT_NEG:
            return -1
        return None

    @property
    def sign_declared(self) -> bool:
        return self.sign is not None

    @property
    def rank(self) -> int:
        """Strength of the conclusion: 0 none, 1 theta != 0, 2 sign known."""
        if not self.rejected:
            return 0
        return 2 if self.sign_declared else 1


@dataclass(frozen=True)
class SignPolicy:
    alpha1: float
    alpha_s: float
    alpha2: float = field(init=False)

    def __post_init__(self):
        a1, a_s = float(self.alpha1), float(self.alpha_s)
        if not 0.0 < a1 < 1.0:
            raise DomainError(f"alpha1 must lie in (0, 1), got {a1!r}")
        if not 0.0 < a_s <= 0.5:
            raise DomainError(f"alpha_s must lie in (0, 1/2], got {a_s!r}")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha_s", a_s)
        object.__setattr__(self, "alpha2", 2.0 * a1 * a_s)


def make_policy(alpha1: float, alpha_s: float) -> SignPolicy:
    return SignPolicy(alpha1, alpha_s)


@dataclass(frozen=True)
class SignTestReport:
    z: float
    p1: float
    decision: Decision
    p_sign: float | None


def two_sided_p(z: float, df: float = math.inf) -> float:
    """2 * P(T > |z|), taken from the upper tail directly."""
    return min(1.0, 2.0 * dist.t_sf(abs(z), df))


def decide(estimate: float, se: float, df: float = math.inf, *,
           policy: SignPolicy) -> SignTestReport:
    """Apply the two-level rule to one estimate.

    A p-value equal to a level counts as a rejection at that level.
    """
    estimate, se = float(estimate), float(se)
    if math.isnan(estimate) or math.isinf(estimate):
        raise DomainError(f"estimate must be finite, got {estimate!r}")
    if not se > 0 or math.isinf(se):
        raise DomainError(f"se must be positive and finite, got {se!r}")

    z = estimate / se
    p1 = two_sided_p(z, df)
    if p1 > policy.alpha1:
        return SignTestReport(z, p1, Decision.NOT_SIGNIFICANT, None)
    if p1 <= policy.alpha2 and estimate != 0.0:
        decision = Decision.SIGNIFICANT_POS if estimate > 0 else Decision.SIGNIFICANT_NEG
    else:
        decision = Decision.SIGNIFICANT_NO_SIGN
    return SignTestReport(z, p1, decision, p1 / (2.0 * policy.alpha1))


def sign_error_bound(policy: SignPolicy, crude: bool = False) -> float:
    """Worst-case P(wrong sign declared | rejection at alpha1).

    Equal to ``alpha_s``.  ``crude=True`` drops the factor 1/2, i.e. counts
    every alpha2 rejection as a potential sign error.
    """
    return 2.0 * policy.alpha_s if crude else policy.alpha_s


def level_bound(alpha1: float, alpha2: float, crude: bool = False) -> float:
    """Sign-error bound ``(1/2) * alpha2 / alpha1`` for arbitrary levels."""
    alpha1, alpha2 = float(alpha1), float(alpha2)
    if not 0.0 < alpha2 <= alpha1 < 1.0:
        raise DomainError("need 0 < alpha2 <= alpha1 < 1")
    ratio = alpha2 / alpha1
    return ratio if crude else 0.5 * ratio


def sign_declaration_power(effect_over_tau: float,
                           policy: SignPolicy) -> tuple[float, float]:
    """Probability of rejecting at alpha2, and of doing so with the right sign.

    Returns ``(total, correct_sign)`` for a true effect of
    ``effect_over_tau`` standard errors.
    """
    d = float(effect_over_tau)
    if math.isnan(d) or d < 0:
        raise DomainError(f"effect/tau must be nonnegative, got {d!r}")
    z2 = dist.norm_isf(policy.alpha2 / 2.0)
    correct = dist.norm_cdf(-z2 + d)
    return correct + dist.norm_cdf(-z2 - d), correct
