"""Convergence studies over the collocation size N."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence


from .errors import DescmError, InsufficientDataError, MetricError, ParameterError
from .maps import ConformalMap, DecayProfile, GeneralizedMap, RateMode, decay_profile
from .potential import Potential, scale
from .solver import assemble, solve

__all__ = [
    "DEFAULT_THRESHOLD",
    "CONDITION_LIMIT",
    "relative_error",
    "relative_error_approximation",
    "StudyConfig",
    "ConvergenceRecord",
    "run_study",
    "count_convergent",
    "first_failure",
    "tau_sweep",
    "emit_csv",
    "CSV_COLUMNS",
]

DEFAULT_THRESHOLD = 5e-12
# cond(A) beyond 1/eps: eigenvalues are kept but no longer trusted
CONDITION_LIMIT = 1e16
CSV_COLUMNS = ("N", "index", "eigenvalue", "rel_error", "rel_error_approx", "condition_number")

OK = "ok"
ILL_CONDITIONED = "ill-conditioned"
FAILED = "failed"


def relative_error(exact: float, approx: float) -> float:
    if exact == 0:
        raise MetricError("relative error is undefined for an exact value of zero")
    return abs(exact - approx) / abs(exact)


def relative_error_approximation(prev: float, next: float) -> float:
    """Successive-approximation error ``|next - prev| / |next|``."""
    if next == 0:
        raise MetricError("relative error approximation is undefined when the newer value is zero")
    return abs(next - prev) / abs(next)


@dataclass(frozen=True)
class StudyConfig:
    """Everything needed to run one convergence study.

    ``gamma`` and ``big_b`` override the effective decay rate and coefficient
    of the computed profile when given.
    """

    potential: Potential
    n_grid: tuple[int, ...] = tuple(range(10, 51, 5))
    map: ConformalMap = field(default_factory=GeneralizedMap)
    tau: float = 1.0
    rate_mode: RateMode = RateMode.CARRIED_HALF
    threshold: float = DEFAULT_THRESHOLD
    exact_eigenvalues: tuple[float, ...] | None = None
    name: str | None = None
    gamma: float | None = None
    big_b: float | None = None
    condition: str = "reduced"
    condition_limit: float = CONDITION_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "rate_mode", RateMode(self.rate_mode))
        if any(n < 1 for n in self.n_grid):
            raise ParameterError("grid sizes must be positive")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ParameterError("N grid must be strictly ascending")
        if not self.threshold > 0:
            raise ParameterError("threshold must be positive")
        if not self.tau > 0:
            raise ParameterError("tau must be positive")
        if self.exact_eigenvalues is not None:
            object.__setattr__(self, "exact_eigenvalues", tuple(float(e) for e in self.exact_eigenvalues))

    def profile(self) -> DecayProfile:
        sp = scale(self.potential, self.tau).as_potential
        prof = decay_profile(self.map, sp, self.rate_mode)
        if self.gamma is not None or self.big_b is not None:
            prof = prof.override(gamma=self.gamma, B=self.big_b)
        return prof

    def with_(self, **changes) -> "StudyConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class ConvergenceRecord:
    """Result of one grid point.  ``eigenvalues`` are unscaled energies."""

    N: int
    eigenvalues: tuple[float, ...]
    relative_errors: tuple[float | None, ...]
    relative_error_approximations: tuple[float | None, ...]
    condition_number: float
    h: float = math.nan
    status: str = OK
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == OK


def _solve_point(cfg: StudyConfig, profile: DecayProfile, N: int):
    try:
        res = solve(assemble(cfg.potential, cfg.map, cfg.tau, N, profile=profile), condition=cfg.condition)
    except DescmError as exc:
        return N, None, math.nan, math.nan, f"{type(exc).__name__}: {exc}"
    return N, res.energies, res.condition_number, res.h, ""


def run_study(cfg: StudyConfig, workers: int = 1) -> list[ConvergenceRecord]:
    """Solve at every grid size and attach both error metrics.

    Solver failures do not abort the study: the record is marked ``failed``
    and carries no eigenvalues.  Solves whose condition number reaches
    ``cfg.condition_limit`` are marked ``ill-conditioned``.
    """
    if not cfg.n_grid:
        return []
    profile = cfg.profile()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(lambda n: _solve_point(cfg, profile, n), cfg.n_grid))
    else:
        raw = [_solve_point(cfg, profile, n) for n in cfg.n_grid]

    exact = cfg.exact_eigenvalues or ()
    records: list[ConvergenceRecord] = []
    prev = None
    for N, ev, cond, h, msg in raw:
        if ev is None:
            records.append(ConvergenceRecord(N, (), (), (), cond, h, FAILED, msg))
            prev = None
            continue
        errs = tuple(relative_error(exact[i], ev[i]) if i < len(exact) else None for i in range(len(ev)))
        approx = []
        for i, e in enumerate(ev):
            if prev is not None and i < len(prev) and e != 0:
                approx.append(relative_error_approximation(prev[i], e))
            else:
                approx.append(None)
        status = OK if cond < cfg.condition_limit else ILL_CONDITIONED
        msg = "" if status == OK else f"condition number {cond:.3e} exceeds {cfg.condition_limit:.1e}"
        records.append(
            ConvergenceRecord(N, tuple(float(x) for x in ev), errs, tuple(approx), cond, h, status, msg)
        )
        prev = ev
    return records


def count_convergent(records: Sequence[ConvergenceRecord], threshold: float = DEFAULT_THRESHOLD) -> int:
    """Number of eigenvalue indices converged at the final grid point.

    Indices with a known exact value are judged by their relative error,
    all others by the relative error approximation against the previous
    grid point.
    """
    if len(records) < 2:
        raise InsufficientDataError("need at least two records to judge convergence")
    last = records[-1]
    count = 0
    for i in range(len(last.eigenvalues)):
        err = last.relative_errors[i]
        if err is None:
            err = last.relative_error_approximations[i]
        if err is not None and err < threshold:
            count += 1
    return count


def first_failure(records: Iterable[ConvergenceRecord]) -> int | None:
    """Smallest N whose record is not ``ok`` (None if every solve succeeded)."""
    for r in records:
        if not r.ok:
            return r.N
    return None


def tau_sweep(cfg: StudyConfig, taus: Iterable[float], workers: int = 1) -> list[tuple[float, int]]:
    """Convergent-eigenvalue count of ``cfg`` for each scaling factor."""
    return [(float(t), count_convergent(run_study(cfg.with_(tau=float(t)), workers), cfg.threshold)) for t in taus]


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".15g")


def emit_csv(records: Sequence[ConvergenceRecord], destination) -> None:
    """Write one row per (N, eigenvalue index); ``destination`` is a path or text stream."""
    if not records:
        raise InsufficientDataError("no records to write")
    if isinstance(destination, (str, os.PathLike)):
        try:
            with open(destination, "w", newline="") as fh:
                _write_rows(records, fh)
        except OSError as exc:
            raise OSError(f"cannot write CSV to {os.fspath(destination)!r}: {exc.strerror}") from exc
    else:
        _write_rows(records, destination)


def _write_rows(records, fh: io.TextIOBase) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        for i, e in enumerate(r.eigenvalues):
            w.writerow(
                (
                    r.N,
                    i,
                    _fmt(e),
                    _fmt(r.relative_errors[i]),
                    _fmt(r.relative_error_approximations[i]),
                    _fmt(r.condition_number),
                )
            )
