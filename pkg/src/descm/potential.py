"""Anharmonic Coulombic potentials on the half-line.

A potential is a sparse Laurent polynomial

    V(x) = a_{-2}/x**2 + a_{-1}/x + sum_{i=1}^{n} a_i x**i,

with ``a_{-2} >= 0``, no constant term and a positive leading coefficient.
The module also implements the dilation ``x = tau*y`` which maps the
coefficients to ``tau**(j+2) * a_j`` and the eigenvalues to ``E * tau**2``,
and the boundary asymptotics (Frobenius exponent at the origin, WKB decay
at infinity) needed to pick the collocation mesh.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "Potential",
    "ScaledPotential",
    "AsymptoticData",
    "evaluate",
    "scale",
    "unscale_eigenvalue",
    "asymptotics",
    "BUILTIN_POTENTIALS",
    "builtin",
]

MIN_POWER = -2


@dataclass(frozen=True)
class Potential:
    """Sparse potential ``sum_j a_j x**j`` with integer powers in [-2, n].

    Parameters
    ----------
    terms : iterable of (power, coefficient)
        Zero coefficients are dropped.  Powers must be distinct integers
        ``>= -2``; the constant term must vanish and the highest power must
        be ``>= 1`` with a positive coefficient.
    """

    terms: tuple[tuple[int, float], ...]

    def __init__(self, terms: Iterable[tuple[int, float]] | Mapping[int, float]):
        if isinstance(terms, Mapping):
            terms = terms.items()
        seen: dict[int, float] = {}
        for power, coeff in terms:
            if isinstance(power, bool) or int(power) != power:
                raise ParameterError(f"power {power!r} is not an integer")
            power = int(power)
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ParameterError(f"coefficient of x^{power} is not finite")
            if power in seen:
                raise ParameterError(f"power {power} appears more than once")
            if power < MIN_POWER:
                raise ParameterError(f"power {power} is below the minimum power {MIN_POWER}")
            seen[power] = coeff
        if seen.get(0, 0.0) != 0.0:
            raise ParameterError("the constant coefficient a_0 must be zero")
        nonzero = {j: c for j, c in seen.items() if c != 0.0}
        if not nonzero or max(nonzero) < 1:
            raise ParameterError("the potential needs a positive power x^n with n >= 1")
        n = max(nonzero)
        if nonzero[n] <= 0.0:
            raise ParameterError(f"leading coefficient a_{n} must be positive")
        if nonzero.get(-2, 0.0) < 0.0:
            raise ParameterError("a_{-2} must be non-negative")
        object.__setattr__(self, "terms", tuple(sorted(nonzero.items())))

    @property
    def n(self) -> int:
        """Highest power."""
        return self.terms[-1][0]

    def coefficient(self, power: int) -> float:
        return dict(self.terms).get(power, 0.0)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self) -> str:
        parts = []
        for j, c in self.terms:
            parts.append(f"{c:+g}" + ("" if j == 0 else f"*x^{j}"))
        return " ".join(parts)


@dataclass(frozen=True)
class ScaledPotential:
    """Potential after the dilation ``x = tau*y``."""

    base: Potential
    tau: float
    scaled_coefficients: tuple[tuple[int, float], ...]

    @property
    def as_potential(self) -> Potential:
        return Potential(self.scaled_coefficients)


@dataclass(frozen=True)
class AsymptoticData:
    """Boundary behaviour of bound states.

    ``psi ~ x**frobenius_root`` as x -> 0+ and
    ``psi ~ x**wkb_prefactor_power * exp(-wkb_rate * x**wkb_power)`` as x -> oo.
    """

    frobenius_root: float
    wkb_rate: float
    wkb_power: float
    wkb_prefactor_power: float


def evaluate(p: Potential, x):
    """Evaluate ``V(x)`` for scalar or array ``x > 0``."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("the potential is singular at x <= 0")
    total = np.zeros_like(xa)
    for j, c in p.terms:
        total = total + c * xa**j
    if total.ndim == 0:
        return float(total)
    return total


def scale(p: Potential, tau: float) -> ScaledPotential:
    """Coefficients of the dilated problem: ``a_j -> tau**(j+2) * a_j``."""
    tau = float(tau)
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"scaling factor must be positive and finite, got {tau}")
    scaled = tuple((j, tau ** (j + 2) * c) for j, c in p.terms)
    return ScaledPotential(base=p, tau=tau, scaled_coefficients=scaled)


def unscale_eigenvalue(scaled_E, tau: float):
    """Map an eigenvalue of the dilated problem back: ``E = E_scaled / tau**2``."""
    tau = float(tau)
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"scaling factor must be positive and finite, got {tau}")
    return scaled_E / tau**2


def asymptotics(p: Potential) -> AsymptoticData:
    a_m2 = p.coefficient(-2)
    n = p.n
    a_n = p.coefficient(n)
    # larger indicial root of -r(r-1) + a_{-2} = 0
    r = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * a_m2))
    return AsymptoticData(
        frobenius_root=r,
        wkb_rate=2.0 * math.sqrt(a_n) / (n + 2),
        wkb_power=(n + 2) / 2.0,
        wkb_prefactor_power=-n / 4.0,
    )


# Test potentials with closed-form ground states.
BUILTIN_POTENTIALS: dict[str, tuple[Potential, float]] = {
    "V1": (Potential({-2: 2.0, -1: -16.0, 1: 2.0, 2: 1 / 16}), -59 / 4),
    "V2": (Potential({-2: 6.0, -1: -24.0, 1: 2.0, 2: 1 / 16}), -57 / 4),
    "V3": (Potential({-2: 15 / 4, -1: -20.0, 1: 2.0, 2: 1 / 16}), -58 / 4),
    "V4": (Potential({-2: 35 / 4, -1: -28.0, 1: 2.0, 2: 1 / 16}), -14.0),
    "V5": (Potential({-2: 2.0, 2: 1.0}), 5.0),
    "V6": (Potential({-2: 3 / 4, 2: 1.0}), 4.0),
}


def builtin(name: str) -> tuple[Potential, float]:
    """Return ``(potential, exact ground-state energy)`` for ``"V1"`` ... ``"V6"``."""
    try:
        return BUILTIN_POTENTIALS[name.upper()]
    except KeyError:
        raise ParameterError(
            f"unknown built-in potential {name!r}; choose one of {sorted(BUILTIN_POTENTIALS)}"
        ) from None
