"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from conecalc.cone import normalized


@st.composite
def reduced_vectors(draw, n_max: int = 3, mu_max: int = 12, n_min: int = 0):
    """Reduced area vectors (f = 1) strictly inside the cone for every g >= 1."""
    n = draw(st.integers(min_value=n_min, max_value=n_max))
    sixteenths = []
    for i in range(n):
        upper = 15 if i == 0 else sixteenths[-1]
        if i == 1:
            upper = min(upper, 16 - sixteenths[0])
        sixteenths.append(draw(st.integers(min_value=1, max_value=upper)))
    mu = Fraction(draw(st.integers(min_value=8, max_value=4 * mu_max)), 4)
    return normalized(mu, [Fraction(k, 16) for k in sixteenths])
