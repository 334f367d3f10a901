"""Scalar trigonometric filter values for the oscillatory block.

The stiff block of every problem here is ``upsilon * identity``, so the
matrix functions the one-stage trigonometric scheme applies blockwise
(cos, sinc and the two update weights) collapse to scalars that depend
only on ``x = h * upsilon``.  They are computed once per ``(h, upsilon)``
pair and reused for every step of a constant-stepsize run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: switchover to the Taylor polynomial; both branches agree to < 1e-16
#: relative at this magnitude.
SINC_TAYLOR_THRESHOLD = 1e-4

#: hard floor below which an update weight counts as vanished.
B_MIN = 1e-8


class CoefficientVanishes(ArithmeticError):
    """A stepsize put an update weight at (numerically) zero."""


def sinc(x: float) -> float:
    """sin(x)/x with the removable singularity filled in.

    Even by construction (the sign of ``x`` is dropped first), continuous
    across the Taylor/direct switchover, range [-0.2173, 1].
    """
    x = abs(float(x))
    if x < SINC_TAYLOR_THRESHOLD:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


@dataclass(frozen=True)
class FilterTable:
    """Filter values for one (h, upsilon) pair.

    ``*_slow`` entries are the x -> 0 limits applied to the non-oscillatory
    block; ``*_fast`` entries are evaluated at ``x = hu = h * upsilon``.
    """

    h: float
    hu: float
    cos_half: float
    sinc_half: float
    cos_full: float
    sinc_full: float
    bbar_slow: float
    b_slow: float
    bbar_fast: float
    b_fast: float


def build_filter_table(h: float, upsilon: float) -> FilterTable:
    """Evaluate all filter scalars for stepsize ``h`` and frequency ``upsilon``.

    Raises CoefficientVanishes when either fast-block update weight falls
    at or below ``B_MIN`` in magnitude (the scheme would lose its feedback
    onto the oscillatory components there).
    """
    if h <= 0.0:
        raise ValueError(f"stepsize must be positive, got {h}")
    if upsilon < 0.0:
        raise ValueError(f"upsilon must be nonnegative, got {upsilon}")
    x = h * upsilon
    cos_half = math.cos(0.5 * x)
    sinc_half = sinc(0.5 * x)
    bbar_fast = 0.5 * sinc_half * sinc_half
    b_fast = cos_half * sinc_half
    if abs(b_fast) <= B_MIN or abs(bbar_fast) <= B_MIN:
        raise CoefficientVanishes(
            f"update weights vanish at h*upsilon = {x!r} "
            f"(b1 = {b_fast!r}, bbar1 = {bbar_fast!r}); choose another stepsize"
        )
    return FilterTable(
        h=h,
        hu=x,
        cos_half=cos_half,
        sinc_half=sinc_half,
        cos_full=math.cos(x),
        sinc_full=sinc(x),
        bbar_slow=0.5,
        b_slow=1.0,
        bbar_fast=bbar_fast,
        b_fast=b_fast,
    )
