"""Tabulated percolation constants and derived radius helpers.

Two conventions matter when talking about the continuum threshold.  The
tabulated gamma* values follow the overlapping-spheres convention (spheres
of radius gamma*  n^{-1/d} percolate when they overlap), so the threshold
expressed as a *connection distance* between graph vertices is twice that.
Both are exposed under separate names so they are never conflated.
"""

import math

# Continuum percolation constants, indexed by dimension (2..11).
GAMMA_STAR = {
    2: 0.5992373341,
    3: 0.4341989179,
    4: 0.4031827664,
    5: 0.4007817822,
    6: 0.4067135508,
    7: 0.4178609367,
    8: 0.4317877097,
    9: 0.447061366,
    10: 0.462335684,
    11: 0.4773913785,
}

# Lattice site-retention thresholds, indexed by dimension (2..13).
P_STAR = {
    2: 0.5,
    3: 0.24881182,
    4: 0.1601314,
    5: 0.118172,
    6: 0.0942019,
    7: 0.0786752,
    8: 0.06770839,
    9: 0.05949601,
    10: 0.05309258,
    11: 0.04794969,
    12: 0.04372386,
    13: 0.04018762,
}

# Distance-based connection factor: the radius at which a giant component
# actually emerges in a graph that links points within distance r.
CONNECTION_FACTOR = 2.0


def ball_volume(d: int) -> float:
    """Lebesgue volume of the d-dimensional unit ball."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def gamma_star(d: int) -> float:
    """Tabulated gamma* for dimension d; raises for untabulated d."""
    try:
        return GAMMA_STAR[d]
    except KeyError:
        raise ValueError(
            f"no tabulated gamma* constant for d={d} (tabulated range 2..11); "
            "use gamma_star_asymptotic for an approximation"
        ) from None


def gamma_star_asymptotic(d: int) -> float:
    """Large-d approximation gamma* ~ 1 / (2 b_d^(1/d)).

    Kept separate from the tabulated constants so approximate values are
    never silently substituted for measured ones.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return 1.0 / (2.0 * ball_volume(d) ** (1.0 / d))


def connection_gamma(d: int) -> float:
    """Critical constant in the connection-distance convention (2 * gamma*)."""
    return CONNECTION_FACTOR * gamma_star(d)


def p_star(d: int) -> float:
    """Tabulated lattice retention threshold p* for dimension d."""
    try:
        return P_STAR[d]
    except KeyError:
        raise ValueError(f"no tabulated p* constant for d={d} (tabulated range 2..13)") from None
