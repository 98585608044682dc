"""Sinc collocation of the transformed radial equation.

With nodes ``t_k = k h`` (k = -N..N) the symmetrised equation
``-v'' + Vt(t) v = E phi'(t)**2 v`` becomes the pencil ``H v = E D v`` with

    H[j, k] = -delta2(j - k) / h**2 + Vt(k h) [j == k]
    D[k, k] = phi'(k h)**2

``D`` is diagonal and positive, so the pencil is reduced exactly to the
symmetric matrix ``A = D^{-1/2} H D^{-1/2}`` and handed to LAPACK.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from . import kernels
from .errors import AssemblyError, DomainError, NumericError, ParameterError, UnderflowError
from .maps import ConformalMap, DecayProfile, GeneralizedMap, RateMode, decay_profile, transformed_potential
from .potential import Potential, scale

__all__ = [
    "delta2",
    "sinc_basis",
    "lambert_w",
    "mesh_size",
    "CollocationSystem",
    "SpectrumResult",
    "assemble",
    "solve",
    "pencil_eigenvalues",
    "spectrum",
    "D_UNDERFLOW",
]

D_UNDERFLOW = 1e-300


def delta2(j: int, k: int) -> float:
    """Second-derivative weight of the Sinc basis at node k for basis j."""
    m = j - k
    if m == 0:
        return -math.pi**2 / 3.0
    return -2.0 * (-1.0) ** (m % 2) / (m * m)


def sinc_basis(j: int, h: float, x):
    """``S(j, h)(x) = sinc(x/h - j)`` with the value 1 at ``x = j h``."""
    if not h > 0:
        raise ParameterError(f"mesh size must be positive, got {h}")
    return np.sinc(np.asarray(x, dtype=float) / h - j)[()]


def lambert_w(x: float) -> float:
    """Principal branch of Lambert W on ``[0, oo)``, by Halley iteration."""
    x = float(x)
    if not x >= 0:
        raise DomainError(f"lambert_w is only implemented for x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if x < 3.0:
        w = math.log1p(x) * (1.0 - math.log1p(math.log1p(x)) / (2.0 + math.log1p(x)))
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


def mesh_size(N: int, profile: DecayProfile) -> float:
    """Mesh size ``W(pi d gamma N / B) / (gamma N)`` for ``2N+1`` nodes."""
    if N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")
    g = profile.gamma
    return lambert_w(math.pi * profile.d_strip * g * N / profile.B) / (g * N)


@dataclass(frozen=True)
class CollocationSystem:
    """Assembled pencil.

    ``D_diag`` holds the diagonal of D; ``reduced`` is ``D^{-1/2} H D^{-1/2}``.
    """

    N: int
    h: float
    tau: float
    nodes: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)
    D_diag: np.ndarray = field(repr=False)
    reduced: np.ndarray = field(repr=False)
    profile: DecayProfile | None = None

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.D_diag)

    @property
    def size(self) -> int:
        return 2 * self.N + 1


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues of one collocation pencil, in ascending order.

    ``eigenvalues`` belong to the (possibly dilated) problem that was
    assembled; :attr:`energies` maps them back with ``E / tau**2``.
    """

    eigenvalues: np.ndarray
    condition_number: float
    N: int
    h: float
    tau: float
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def energies(self) -> np.ndarray:
        return self.eigenvalues / self.tau**2


def assemble(
    p: Potential,
    m: ConformalMap,
    tau: float,
    N: int,
    profile: DecayProfile | None = None,
    rate_mode: RateMode | str = RateMode.CARRIED_HALF,
) -> CollocationSystem:
    """Assemble the pencil for potential ``p`` dilated by ``tau``.

    If ``profile`` is omitted it is derived from the dilated potential with
    :func:`descm.maps.decay_profile` in ``rate_mode``.
    """
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")
    N = int(N)
    sp = scale(p, tau).as_potential if tau != 1.0 else p
    if profile is None:
        profile = decay_profile(m, sp, rate_mode)
    h = mesh_size(N, profile)
    nodes = np.arange(-N, N + 1) * h
    with np.errstate(over="ignore", invalid="ignore"):
        vt = transformed_potential(m, sp, nodes)
    bad = np.flatnonzero(~np.isfinite(vt))
    if bad.size:
        k = int(bad[0]) - N
        raise AssemblyError(f"transformed potential is not finite at node k={k} (t={k * h:.6g})")
    phi1 = m.evaluate(nodes)[1]
    d_diag = phi1 * phi1
    with np.errstate(divide="ignore", under="ignore"):
        s = 1.0 / phi1
    with np.errstate(invalid="ignore", over="ignore"):
        H, A = kernels.assemble(vt, s, h)
    return CollocationSystem(N=N, h=h, tau=float(tau), nodes=nodes, H=H, D_diag=d_diag, reduced=A, profile=profile)


def _condition(eigenvalues: np.ndarray) -> float:
    mags = np.abs(eigenvalues)
    lo = mags.min()
    return math.inf if lo == 0.0 else float(mags.max() / lo)


def solve(sys: CollocationSystem, vectors: bool = False, condition: str = "reduced") -> SpectrumResult:
    """Eigenvalues of the pencil ``(H, D)`` via the symmetric reduction.

    Parameters
    ----------
    condition : {"reduced", "product"}
        ``"reduced"`` reports cond(A) of the reduced matrix (the ratio of its
        extreme eigenvalue magnitudes); ``"product"`` reports cond(H) * cond(D).

    Raises
    ------
    UnderflowError
        Some diagonal entry of D is below ``1e-300``.
    NumericError
        The reduced matrix contains non-finite entries.
    """
    d = sys.D_diag
    if np.any(~(d >= D_UNDERFLOW)):
        k = int(np.flatnonzero(~(d >= D_UNDERFLOW))[0]) - sys.N
        raise UnderflowError(f"D underflows at node k={k} (phi' is saturated); reduce N or rescale")
    if not np.all(np.isfinite(sys.reduced)):
        raise NumericError("reduced matrix contains non-finite entries")
    if vectors:
        w, v = eigh(sys.reduced, check_finite=False)
    else:
        w, v = eigh(sys.reduced, eigvals_only=True, check_finite=False), None
    if condition == "reduced":
        cond = _condition(w)
    elif condition == "product":
        cond = float(np.linalg.cond(sys.H) * (d.max() / d.min()))
    else:
        raise ParameterError(f"unknown condition-number mode {condition!r}")
    return SpectrumResult(eigenvalues=w, condition_number=cond, N=sys.N, h=sys.h, tau=sys.tau, eigenvectors=v)


def pencil_eigenvalues(H, d) -> np.ndarray:
    """Eigenvalues of ``H v = E diag(d) v`` for symmetric ``H`` and ``d > 0``."""
    H = np.asarray(H, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise ParameterError("D must have strictly positive diagonal")
    s = 1.0 / np.sqrt(d)
    return eigh(H * np.multiply.outer(s, s), eigvals_only=True)


def spectrum(
    p: Potential,
    N: int,
    tau: float = 1.0,
    m: ConformalMap | None = None,
    rate_mode: RateMode | str = RateMode.CARRIED_HALF,
    profile: DecayProfile | None = None,
    condition: str = "reduced",
) -> SpectrumResult:
    """Assemble and solve in one call (generalized map with default parameters unless given)."""
    m = GeneralizedMap() if m is None else m
    return solve(assemble(p, m, tau, N, profile=profile, rate_mode=rate_mode), condition=condition)
