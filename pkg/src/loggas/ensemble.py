"""Analytic inputs and ensemble observables.

Moments are the primary representation: every formula downstream
consumes only m_k (or the shifted m-hat), so exactness survives even
for weights like the Gaussian whose moments carry a sqrt(pi) tag.
Pointwise weight values exist only for named weights; explicit moment
lists support all the algebra but only weightless correlation factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exterior import (
    ModelShape,
    Multivector,
    blade_weights,
    divided_wedge_power,
    hyperpfaffian,
    omega,
    star,
    wedge,
)
from .scalars import SCALE_FLOATS, Tagged, as_float, format_rational, rational
from .spine import _multiplicity_factor, epsilon, structure_table


class MomentRangeError(IndexError):
    """Moment index outside the stored range (an error, never zero)."""


class MomentSequence:
    """m_0 .. m_D, exact rationals with an optional common scale tag.

    values may also be floats (oracle output); exactness is then the
    caller's concern.  Shifted access mhat(p, K) = m_{p+K} is legal for
    p in [-K, D-K] and raises outside that window.
    """

    __slots__ = ("values", "scale_symbol")

    def __init__(self, values, scale_symbol: str | None = None):
        vals = []
        for v in values:
            vals.append(v if isinstance(v, float) else rational(v))
        if not vals:
            raise ValueError("empty moment sequence")
        if scale_symbol is not None and scale_symbol not in SCALE_FLOATS:
            raise ValueError(f"unknown scale symbol {scale_symbol!r}")
        self.values = tuple(vals)
        self.scale_symbol = scale_symbol

    @property
    def D(self) -> int:
        return len(self.values) - 1

    def m(self, k: int):
        if not 0 <= k <= self.D:
            raise MomentRangeError(f"m_{k} outside stored range 0..{self.D}")
        v = self.values[k]
        if self.scale_symbol is None or isinstance(v, float):
            return v
        return Tagged(v, 1, self.scale_symbol)

    def mhat(self, p: int, K: int):
        if not -K <= p <= self.D - K:
            raise MomentRangeError(
                f"mhat_{p} outside shifted range [{-K}, {self.D - K}]"
            )
        return self.m(p + K)

    def scaled(self, c) -> "MomentSequence":
        c = rational(c)
        return MomentSequence([v * c for v in self.values], self.scale_symbol)

    def as_float(self) -> "MomentSequence":
        scale = SCALE_FLOATS[self.scale_symbol] if self.scale_symbol else 1.0
        return MomentSequence([float(v) * scale for v in self.values], None)

    def __eq__(self, other):
        if not isinstance(other, MomentSequence):
            return NotImplemented
        return self.values == other.values and self.scale_symbol == other.scale_symbol

    def to_json_dict(self) -> dict:
        scale = None
        if self.scale_symbol is not None:
            scale = {"symbol": self.scale_symbol, "float": SCALE_FLOATS[self.scale_symbol]}
        return {
            "scale": scale,
            "moments": [
                v if isinstance(v, float) else format_rational(v) for v in self.values
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MomentSequence":
        scale = data.get("scale")
        symbol = scale["symbol"] if scale else None
        return cls(list(data["moments"]), symbol)


def double_factorial_odd(k: int) -> int:
    """(2k-1)!! with the empty-product convention at k = 0."""
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out


@dataclass(frozen=True)
class NamedWeight:
    """uniform on [a, b], Gaussian exp(-x^2), or an explicit list."""

    kind: str  # "uniform" | "gaussian" | "explicit"
    a: object = None
    b: object = None
    explicit: MomentSequence | None = None

    @classmethod
    def uniform(cls, a, b) -> "NamedWeight":
        a, b = rational(a), rational(b)
        if not b > a:
            raise ValueError("uniform weight needs a < b")
        return cls("uniform", a, b)

    @classmethod
    def gaussian(cls) -> "NamedWeight":
        return cls("gaussian")

    @classmethod
    def from_moments(cls, moments: MomentSequence) -> "NamedWeight":
        return cls("explicit", explicit=moments)

    def moments(self, D: int) -> MomentSequence:
        if self.kind == "uniform":
            vals = [
                (self.b ** (k + 1) - self.a ** (k + 1)) / (k + 1) for k in range(D + 1)
            ]
            return MomentSequence(vals)
        if self.kind == "gaussian":
            vals = []
            for k in range(D + 1):
                if k % 2:
                    vals.append(rational(0))
                else:
                    h = k // 2
                    vals.append(rational(double_factorial_odd(h)) / 2**h)
            return MomentSequence(vals, "sqrt_pi")
        if self.explicit.D < D:
            raise MomentRangeError(
                f"explicit moments stop at D={self.explicit.D}, need {D}"
            )
        return self.explicit

    def density_exact(self, x):
        """Pointwise weight at rational x, or None when that value is
        irrational (Gaussian) or unknown (explicit moments)."""
        if self.kind == "uniform":
            x = rational(x)
            return rational(1) if self.a <= x <= self.b else rational(0)
        return None

    def density_float(self, x: float) -> float:
        if self.kind == "uniform":
            return 1.0 if float(self.a) <= x <= float(self.b) else 0.0
        if self.kind == "gaussian":
            return math.exp(-x * x)
        raise ValueError("explicit-moment weights have no pointwise density")

    def label(self) -> str:
        if self.kind == "uniform":
            return f"uniform:{format_rational(self.a)},{format_rational(self.b)}"
        return self.kind


def gram_form(moments: MomentSequence, shape: ModelShape, route: str = "blade") -> Multivector:
    """gamma = sum_p mhat_p eps_p; blade route uses the equivalent
    closed form Gr_J = w_J * m_{sum(J) - L(L-1)/2}."""
    if moments.D < 2 * shape.K:
        raise MomentRangeError(
            f"need moments through m_{2 * shape.K}, have D={moments.D}"
        )
    if route == "blade":
        shift = shape.L * (shape.L - 1) // 2
        terms = {}
        for mask, (w, degsum) in blade_weights(shape).items():
            c = w * moments.m(degsum - shift)
            terms[mask] = c
        return Multivector(shape, terms, shape.L)
    if route == "modes":
        out = None
        for p in range(-shape.K, shape.K + 1):
            piece = epsilon(p, shape).scale(moments.mhat(p, shape.K))
            out = piece if out is None else out + piece
        return out
    raise ValueError(f"unknown gram route {route!r}")


def partition_function(moments: MomentSequence, shape: ModelShape, route: str = "hyperpfaffian"):
    """Z by either the hyperpfaffian of gamma or the structure-table
    polynomial; the two must agree exactly."""
    if route == "hyperpfaffian":
        return hyperpfaffian(gram_form(moments, shape))
    if route == "structure_poly":
        table = structure_table(shape)
        total = rational(0)
        for key, C in table.entries.items():
            prod = rational(C)
            for p in key:
                prod = prod * moments.mhat(p, shape.K)
            total = total + prod / _multiplicity_factor(key)
        return total
    raise ValueError(f"unknown partition route {route!r}")


def correlation(
    points,
    weight: NamedWeight,
    shape: ModelShape,
    weightless: bool = False,
    mode: str = "exact",
):
    """R_m(x_1..x_m) = (prod w(x_i)/Z) * star(omega(x_1)^..^omega(x_m)^Gamma).

    weightless=True omits the prod w(x_i) prefactor (the only option
    for explicit-moment weights).
    """
    m = len(points)
    if not 1 <= m <= shape.M:
        raise ValueError(f"need 1..{shape.M} points, got {m}")
    moments = weight.moments(2 * shape.K)
    if mode == "float":
        moments = moments.as_float()
        points = [float(as_float(x)) for x in points]
    prefactor = 1.0 if mode == "float" else rational(1)
    if not weightless:
        for x in points:
            if mode == "float":
                prefactor *= weight.density_float(x)
            else:
                d = weight.density_exact(x)
                if d is None:
                    raise ValueError(
                        "no exact pointwise weight; use weightless=True or float mode"
                    )
                prefactor = prefactor * d
    gamma = gram_form(moments, shape)
    form = divided_wedge_power(gamma, shape.M - m)
    for x in reversed(points):
        form = wedge(omega(x, shape), form)
    Z = hyperpfaffian(gamma)
    return prefactor * star(form) / Z


def r1_normalization(moments: MomentSequence, shape: ModelShape):
    """Exact moment-integration of R_1: star(gamma ^ Gamma_-)/Z.

    Integrating omega(x) against the weight turns it into gamma, so
    this is the x-integral of the unnormalized density; must equal M.
    """
    gamma = gram_form(moments, shape)
    background = divided_wedge_power(gamma, shape.M - 1)
    return star(wedge(gamma, background)) / hyperpfaffian(gamma)
