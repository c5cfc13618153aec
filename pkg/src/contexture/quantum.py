"""Singlet-state probabilities for spin measurements along detector angles.

For analyzer directions ``a`` and ``b`` the probability of both outcomes
being ``+1`` is ``cos^2((a - b)/2) / 2``, so ``E[AB] = cos(a - b)``.  Angles
that are integer multiples of pi/4 are snapped to exact values in
``Q(sqrt 2)``; everything else stays in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .context_data import PVector
from .scalar import SQRT2

__all__ = [
    "FLOAT_TOL",
    "AngleConfig",
    "singlet_p",
    "exact_cos",
    "pvector_from_angles",
    "chsh_value",
    "parse_angle",
]

FLOAT_TOL = 1e-9
_SNAP_TOL = 1e-12

# cos(k pi / 4) for k = 0..7
_COS = (
    Fraction(1),
    SQRT2 / 2,
    Fraction(0),
    -SQRT2 / 2,
    Fraction(-1),
    -SQRT2 / 2,
    Fraction(0),
    SQRT2 / 2,
)


@dataclass(frozen=True)
class AngleConfig:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    def differences(self) -> tuple:
        """``(a1-b1, a1-b2, a2-b1, a2-b2)``."""
        return (
            self.alpha1 - self.beta1,
            self.alpha1 - self.beta2,
            self.alpha2 - self.beta1,
            self.alpha2 - self.beta2,
        )


def singlet_p(a: float, b: float) -> float:
    return 0.5 * math.cos((a - b) / 2) ** 2


def exact_cos(theta: float):
    """``cos(theta)`` exactly when ``theta`` is a multiple of pi/4, else None."""
    k = theta / (math.pi / 4)
    n = round(k)
    if abs(k - n) > _SNAP_TOL * max(1.0, abs(k)):
        return None
    return _COS[n % 8]


def pvector_from_angles(cfg: AngleConfig, snap: bool = True):
    """``p_ij = singlet_p(alpha_i, beta_j)``.

    With ``snap`` and all angle differences multiples of pi/4 the result is an
    exact :class:`PVector`; otherwise a tuple of floats.
    """
    diffs = cfg.differences()
    if snap:
        cosines = [exact_cos(d) for d in diffs]
        if all(c is not None for c in cosines):
            return PVector(*((1 + c) / 4 for c in cosines))
    return tuple(0.25 * (1 + math.cos(d)) for d in diffs)


def chsh_value(cfg: AngleConfig) -> float:
    """``cos(a1-b1) + cos(a1-b2) + cos(a2-b1) - cos(a2-b2)``."""
    d = cfg.differences()
    return math.cos(d[0]) + math.cos(d[1]) + math.cos(d[2]) - math.cos(d[3])


def parse_angle(text: str) -> float:
    """Radians, or a rational multiple of pi such as ``"1/4pi"``, ``"-1/4 pi"``
    or ``"pi/2"``."""
    s = text.strip().lower().replace(" ", "")
    if "pi" not in s:
        return float(s)
    if s.count("pi") != 1:
        raise ValueError(f"malformed angle {text!r}")
    before, after = s.split("pi")
    if after:
        if before not in ("", "+", "-") or not after.startswith("/"):
            raise ValueError(f"malformed angle {text!r}")
        coef = Fraction(1, int(after[1:]))
        if before == "-":
            coef = -coef
    else:
        before = before.rstrip("*")
        if before in ("", "+"):
            coef = Fraction(1)
        elif before == "-":
            coef = Fraction(-1)
        else:
            coef = Fraction(before)
    return float(coef) * math.pi
