"""Closed-form reference values in exact rational arithmetic.

Weingarten coefficients for the unitary group at moments k <= 2 and k = 4
(the only ones the averages below need), the exact Haar-average linear
stabilizer entropies for the bipartite and tripartite scenarios, and the
leading-order expressions. Everything is evaluated over ``fractions.Fraction``
and converted to float only at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoExactFormulaError, SingularRegimeError

SCENARIOS = ("bipartite_haar", "bipartite_product", "tripartite_pair", "tripartite_triple")


@dataclass(frozen=True)
class ScenarioDims:
    """Power-of-two dimensions of one averaging scenario.

    ``d_e`` is the bipartite entanglement dimension 2^E; the tripartite
    fields are the Bell/GHZ content dimensions 2^{b_AB} etc. (C itself is a
    spectator and never enters the closed forms).
    """

    scenario: str
    d_a: int = 1
    d_b: int = 1
    d_e: int = 1
    d_ab: int = 1
    d_ac: int = 1
    d_bc: int = 1
    d_g: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        for name in ("d_a", "d_b", "d_e", "d_ab", "d_ac", "d_bc", "d_g"):
            v = getattr(self, name)
            if v < 1 or v & (v - 1):
                raise ValueError(f"{name}={v} must be a power of two >= 1")

    @classmethod
    def bipartite_haar(cls, n_a: int, e: int) -> "ScenarioDims":
        return cls("bipartite_haar", d_a=1 << n_a, d_e=1 << e)

    @classmethod
    def bipartite_product(cls, n_a: int, n_b: int, e: int) -> "ScenarioDims":
        return cls("bipartite_product", d_a=1 << n_a, d_b=1 << n_b, d_e=1 << e)

    @classmethod
    def tripartite_pair(cls, n_a: int, n_b: int, g: int, b_ab: int, b_ac: int, b_bc: int) -> "ScenarioDims":
        return cls(
            "tripartite_pair",
            d_a=1 << n_a,
            d_b=1 << n_b,
            d_ab=1 << b_ab,
            d_ac=1 << b_ac,
            d_bc=1 << b_bc,
            d_g=1 << g,
        )


# ---------------------------------------------------------------------------
# Weingarten coefficients
# ---------------------------------------------------------------------------

_FOURTH_MOMENT_NUMERATORS = {
    (1, 1, 1, 1): lambda n: n**4 - 8 * n**2 + 6,
    (2, 1, 1): lambda n: -(n**3) + 4 * n,
    (2, 2): lambda n: n**2 + 6,
    (3, 1): lambda n: 2 * n**2 - 6,
    (4,): lambda n: -5 * n,
}


def weingarten4(cycle_type, n: int) -> Fraction:
    """Exact Weingarten coefficient for U(n).

    Fourth-moment cycle types (1,1,1,1), (2,1,1), (2,2), (3,1), (4) share the
    denominator n^2 (n^2-1)(n^2-4)(n^2-9); the first- and second-moment
    coefficients (1), (1,1), (2) are included for the k <= 2 sanity checks.
    """
    ct = tuple(sorted(cycle_type, reverse=True))
    if ct == (1,):
        if n < 1:
            raise SingularRegimeError("V_1 needs n >= 1")
        return Fraction(1, n)
    if ct in ((1, 1), (2,)):
        if n < 2:
            raise SingularRegimeError("second-moment coefficients need n >= 2")
        if ct == (1, 1):
            return Fraction(1, n**2 - 1)
        return Fraction(-1, n * (n**2 - 1))
    if ct in _FOURTH_MOMENT_NUMERATORS:
        if n < 4:
            raise SingularRegimeError(
                f"fourth-moment coefficients are singular at n={n} (need n >= 4)"
            )
        den = n**2 * (n**2 - 1) * (n**2 - 4) * (n**2 - 9)
        return Fraction(_FOURTH_MOMENT_NUMERATORS[ct](n), den)
    raise ValueError(f"unsupported cycle type {cycle_type}")


# ---------------------------------------------------------------------------
# Exact averages
# ---------------------------------------------------------------------------

def _require_haar_dim(name: str, d: int):
    if d < 4:
        raise SingularRegimeError(
            f"exact average is singular for {name}={d}; Haar-acted subsystems need dimension >= 4"
        )


def _exact_bipartite_haar(d_a: int, d_e: int) -> Fraction:
    a, e = Fraction(d_a), Fraction(d_e)
    one_minus = 4 * (a**2 * e**2 - 3 * a * e - 6 * e**2 + 6) / (a * (a**2 - 9) * e**3)
    return 1 - one_minus


def _exact_bipartite_product(d_a: int, d_b: int, d_e: int) -> Fraction:
    a, b, e = Fraction(d_a), Fraction(d_b), Fraction(d_e)
    poly = (
        a**2 * b**2 * e * (e**2 + 3)
        - 6 * a * b * (a + b) * (e**2 + 1)
        - 6 * (a**2 + b**2 - 9) * e * (e**2 - 1)
        + 3 * a * b * e * (e**2 + 11)
    )
    one_minus = 4 * poly / (a * b * (a**2 - 9) * (b**2 - 9) * e**3)
    return 1 - one_minus


def _exact_tripartite_pair(d: ScenarioDims) -> Fraction:
    a, b = Fraction(d.d_a), Fraction(d.d_b)
    ab, ac, bc, g = Fraction(d.d_ab), Fraction(d.d_ac), Fraction(d.d_bc), Fraction(d.d_g)
    poly = (
        a**2 * b**2 * ab**3 * ac**2 * bc**2 * g**2
        + 3 * a**2 * b**2 * ab * ac**2 * bc**2 * g
        - 6 * a**2 * ab**3 * ac**2 * bc**2 * g**2
        - 6 * a**2 * ab**2 * ac**2 * b * bc * g
        - 18 * a**2 * ab * ac**2 * bc**2 * g
        + 24 * a**2 * ab * ac**2
        - 6 * a**2 * ac**2 * b * bc
        + 3 * a * ab**3 * ac * b * bc * g
        - 6 * a * ab**2 * ac * b**2 * bc**2 * g
        + 36 * a * ab**2 * ac * bc**2 * g
        - 36 * a * ab**2 * ac
        + 3 * a * ab * ac * b * bc * g
        + 30 * a * ab * ac * b * bc
        - 6 * a * ac * b**2 * bc**2
        + 36 * a * ac * bc**2
        - 36 * a * ac
        - 6 * ab**3 * ac**2 * b**2 * bc**2 * g**2
        + 36 * ab**3 * ac**2 * bc**2 * g**2
        + 18 * ab**3
        + 36 * ab**2 * ac**2 * b * bc * g
        - 36 * ab**2 * b * bc
        - 18 * ab * ac**2 * b**2 * bc**2 * g
        + 108 * ab * ac**2 * bc**2 * g
        - 144 * ab * ac**2
        + 24 * ab * b**2 * bc**2
        - 144 * ab * bc**2
        + 126 * ab
        + 36 * ac**2 * b * bc
        - 36 * b * bc
    )
    den = a * b * (a**2 - 9) * (b**2 - 9) * ab**3 * ac**3 * bc**3 * g**3
    return 1 - 4 * poly / den


def exact_average_y(dims: ScenarioDims) -> Fraction:
    """Exact Haar-average linear stabilizer entropy for the scenario."""
    if dims.scenario == "bipartite_haar":
        _require_haar_dim("D_A", dims.d_a)
        return _exact_bipartite_haar(dims.d_a, dims.d_e)
    if dims.scenario == "bipartite_product":
        _require_haar_dim("D_A", dims.d_a)
        _require_haar_dim("D_B", dims.d_b)
        return _exact_bipartite_product(dims.d_a, dims.d_b, dims.d_e)
    if dims.scenario == "tripartite_pair":
        _require_haar_dim("D_A", dims.d_a)
        _require_haar_dim("D_B", dims.d_b)
        return _exact_tripartite_pair(dims)
    raise NoExactFormulaError(f"no exact closed form for scenario {dims.scenario!r}")


# ---------------------------------------------------------------------------
# Leading-order expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeadingOrder:
    """Leading-order average with its companion M2 and a reliability flag.

    ``correction`` is the non-unit part of the bracket; when it exceeds 0.5
    the truncation cannot be trusted and ``reliable`` is False.
    """

    y: float
    m2: float
    correction: float
    reliable: bool


def _leading(suppression_bits: int, bracket_correction: float) -> LeadingOrder:
    one_minus = 4.0 * 2.0 ** (-suppression_bits) * (1.0 + bracket_correction)
    m2 = -math.log2(one_minus) if one_minus > 0 else math.inf
    return LeadingOrder(
        y=1.0 - one_minus,
        m2=m2,
        correction=bracket_correction,
        reliable=bracket_correction <= 0.5,
    )


def leading_average_y(
    scenario: str,
    n_a: int = 0,
    n_b: int = 0,
    n_c: int = 0,
    e: int = 0,
    g: int = 0,
    b_ab: int = 0,
    b_ac: int = 0,
    b_bc: int = 0,
) -> LeadingOrder:
    """Leading-order averages: bipartite 1 - 4*2^{-|A|-E}; product
    1 - 4*2^{-N}(1 + 3*2^{-2E}); tripartite pair
    1 - 4*2^{-|A|-|B|-g-b_AC-b_BC}(1 + 3*2^{-2b_AB-g}); triple with the five
    cross terms. The companion M2 is -log2 of the leading 1 - Y."""
    if min(n_a, n_b, n_c, e, g, b_ab, b_ac, b_bc) < 0:
        raise ValueError("all qubit/entanglement counts must be non-negative")
    if scenario == "bipartite_haar":
        return _leading(n_a + e, 0.0)
    if scenario == "bipartite_product":
        return _leading(n_a + n_b, 3.0 * 2.0 ** (-2 * e))
    if scenario == "tripartite_pair":
        return _leading(n_a + n_b + g + b_ac + b_bc, 3.0 * 2.0 ** (-2 * b_ab - g))
    if scenario == "tripartite_triple":
        corr = (
            3.0 * 2.0 ** (-2 * b_ab - 2 * b_ac - 2 * g)
            + 3.0 * 2.0 ** (-2 * b_ab - 2 * b_bc - 2 * g)
            + 3.0 * 2.0 ** (-2 * b_ac - 2 * b_bc - 2 * g)
            + 1.5 * 2.0 ** (-2 * b_ab - 2 * b_ac - 2 * b_bc - 2 * g)
            + 4.5 * 2.0 ** (-2 * b_ab - 2 * b_ac - 2 * b_bc - 3 * g)
        )
        return _leading(n_a + n_b + n_c, corr)
    raise ValueError(f"unknown scenario {scenario!r}")


def haar_state_average_y(n: int) -> Fraction:
    """Exact Haar-random-state average Y = 1 - 4/(2^n + 3)."""
    return 1 - Fraction(4, (1 << n) + 3)
