"""Command-line front end.

Configuration is TOML.  Every key lives in one of three sections; a bare
``potential = "V1"`` at the top level is accepted as shorthand for
``[potential] name = "V1"``::

    [potential]
    name = "V5"                     # built-in V1..V6, or
    coeffs = [[-2, 2.0], [2, 1.0]]  # explicit (power, coefficient) pairs
    exact = [5.0]                   # optional known eigenvalues

    [map]
    variant = "general"             # or "simple"
    params = [1.05, 1.30, 1.20, 0.94]

    [study]
    tau = 1.0
    taus = [1.0, 1.75]
    n = "10:50:5"
    rate_mode = "carried-half"      # paper | carried | carried-half
    gamma = 2.6                     # optional explicit decay rate
    big_b = 0.0689                  # optional explicit decay coefficient
    threshold = 5e-12
    condition = "reduced"           # or "product"
    k = 5                           # eigenvalues printed by `solve`

Command-line flags override the file key of the same name.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .analysis import (
    DEFAULT_THRESHOLD,
    StudyConfig,
    count_convergent,
    emit_csv,
    first_failure,
    run_study,
)
from .errors import ConfigError, DescmError
from .maps import DEFAULT_MAP_PARAMS, GeneralizedMap, RateMode, SimpleMap
from .potential import BUILTIN_POTENTIALS, Potential
from .solver import assemble, solve

__all__ = ["parse_config", "build_study", "RunManifest", "run", "main", "parse_grid"]

SCHEMA: dict[str, tuple[str, ...]] = {
    "potential": ("name", "coeffs", "exact"),
    "map": ("variant", "params"),
    "study": ("tau", "taus", "n", "rate_mode", "gamma", "big_b", "threshold", "condition", "k"),
}

# flag dest -> dotted config key
OVERRIDES = {
    "potential": "potential.name",
    "coeffs": "potential.coeffs",
    "map": "map.variant",
    "map_params": "map.params",
    "tau": "study.tau",
    "taus": "study.taus",
    "n": "study.n",
    "rate_mode": "study.rate_mode",
    "gamma": "study.gamma",
    "big_b": "study.big_b",
    "threshold": "study.threshold",
    "condition": "study.condition",
    "k": "study.k",
}

DEFAULT_GRIDS = {"study": "10:50:5", "solve": "50", "count": "1:100", "tau-sweep": "1:100"}


def _line_of(text: str, key: str) -> str:
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*=", line):
            return f" (line {i}: {line.strip()})"
    return ""


def load_config_text(text: str) -> dict[str, dict]:
    """Parse TOML text into the normalised ``{section: {key: value}}`` layout."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    out: dict[str, dict] = {s: {} for s in SCHEMA}
    for key, value in raw.items():
        if key == "potential" and not isinstance(value, dict):
            out["potential"]["name" if isinstance(value, str) else "coeffs"] = value
            continue
        if key not in SCHEMA or not isinstance(value, dict):
            raise ConfigError(f"unknown config key {key!r}{_line_of(text, key)}")
        for sub, v in value.items():
            if sub not in SCHEMA[key]:
                raise ConfigError(f"unknown key {sub!r} in [{key}]{_line_of(text, sub)}")
            out[key][sub] = v
    return out


def parse_grid(spec) -> tuple[int, ...]:
    """``"10:50:5"`` (inclusive), ``"40"``, ``"10,20,40"`` or a list of ints."""
    if isinstance(spec, int):
        return (spec,)
    if isinstance(spec, (list, tuple)):
        return tuple(int(v) for v in spec)
    s = str(spec).strip()
    try:
        if ":" in s:
            parts = [int(p) for p in s.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0:
                raise ValueError
            return tuple(range(start, stop + 1, step))
        return tuple(int(p) for p in s.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"cannot parse N grid {spec!r}; use start:stop:step") from None


def _parse_floats(spec, what: str) -> tuple[float, ...]:
    if isinstance(spec, (list, tuple)):
        vals = spec
    else:
        vals = [p for p in str(spec).split(",") if p.strip()]
    try:
        return tuple(float(v) for v in vals)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse {what} {spec!r}") from None


def _parse_coeffs(spec) -> list[tuple[int, float]]:
    if isinstance(spec, str):
        s = spec.strip()
        if s.startswith("["):
            try:
                spec = json.loads(s)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"cannot parse coefficients {s!r}: {exc}") from None
        else:
            pairs = []
            for item in s.split(","):
                try:
                    p, c = item.split(":")
                    pairs.append((int(p), float(c)))
                except ValueError:
                    raise ConfigError(f"coefficient term {item!r} is not power:coefficient") from None
            return pairs
    try:
        return [(int(p), float(c)) for p, c in spec]
    except (TypeError, ValueError):
        raise ConfigError(f"coefficients must be [power, coefficient] pairs, got {spec!r}") from None


def build_study(cfg: dict[str, dict], default_grid: str = DEFAULT_GRIDS["study"], text: str = "") -> StudyConfig:
    """Validate a normalised config mapping and build a :class:`StudyConfig`."""
    pot, mp, st = cfg.get("potential", {}), cfg.get("map", {}), cfg.get("study", {})
    name = pot.get("name")
    exact = None
    try:
        if pot.get("coeffs") is not None:
            potential = Potential(_parse_coeffs(pot["coeffs"]))
            if name is not None:
                ref, e0 = BUILTIN_POTENTIALS.get(str(name).upper(), (None, None))
                if ref is None:
                    raise ConfigError(f"unknown built-in potential {name!r}")
                if ref != potential:
                    raise ConfigError(f"coefficients do not match built-in potential {name}")
                exact = (e0,)
        elif name is not None:
            key = str(name).upper()
            if key not in BUILTIN_POTENTIALS:
                raise ConfigError(
                    f"unknown built-in potential {name!r}; choose from {', '.join(BUILTIN_POTENTIALS)}"
                    + _line_of(text, "name")
                )
            potential, e0 = BUILTIN_POTENTIALS[key]
            exact = (e0,)
            name = key
        else:
            raise ConfigError("no potential given (set potential.name or potential.coeffs)")
    except DescmError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid potential: {exc}{_line_of(text, 'coeffs')}") from None
    if pot.get("exact") is not None:
        exact = _parse_floats(pot["exact"], "exact eigenvalues")

    variant = str(mp.get("variant", "general")).lower()
    params = _parse_floats(mp.get("params", DEFAULT_MAP_PARAMS), "map parameters")
    try:
        if variant in ("general", "generalized"):
            if len(params) != 4:
                raise ConfigError("map.params needs four values a,b,c,d")
            cmap = GeneralizedMap(*params)
        elif variant == "simple":
            cmap = SimpleMap()
        else:
            raise ConfigError(f"unknown map variant {variant!r}{_line_of(text, 'variant')}")
        return StudyConfig(
            potential=potential,
            n_grid=parse_grid(st.get("n", default_grid)),
            map=cmap,
            tau=float(st.get("tau", 1.0)),
            rate_mode=RateMode(st.get("rate_mode", RateMode.CARRIED_HALF.value)),
            threshold=float(st.get("threshold", DEFAULT_THRESHOLD)),
            exact_eigenvalues=exact,
            name=name,
            gamma=None if st.get("gamma") is None else float(st["gamma"]),
            big_b=None if st.get("big_b") is None else float(st["big_b"]),
            condition=str(st.get("condition", "reduced")),
        )
    except ConfigError:
        raise
    except (DescmError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid study settings: {exc}") from None


def parse_config(text: str) -> StudyConfig:
    """Parse TOML config text into a validated :class:`StudyConfig`."""
    return build_study(load_config_text(text), text=text)


@dataclass
class RunManifest:
    subcommand: str
    config_path: Path | None = None
    out_dir: Path = Path(".")
    overrides: dict[str, object] = field(default_factory=dict)
    workers: int = 1


def _merged(manifest: RunManifest) -> tuple[dict[str, dict], str]:
    text = ""
    if manifest.config_path is not None:
        try:
            text = Path(manifest.config_path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {manifest.config_path}: {exc.strerror}") from None
        cfg = load_config_text(text)
    else:
        cfg = {s: {} for s in SCHEMA}
    for dest, value in manifest.overrides.items():
        if value is None:
            continue
        if dest not in OVERRIDES:
            raise ConfigError(f"unknown override {dest!r}")
        section, key = OVERRIDES[dest].split(".")
        cfg[section][key] = value
        if dest == "potential" and "coeffs" in cfg["potential"] and manifest.overrides.get("coeffs") is None:
            del cfg["potential"]["coeffs"]
    return cfg, text


def _label(study: StudyConfig) -> str:
    return study.name or "custom"


def run(manifest: RunManifest, stdout=None) -> int:
    """Execute one subcommand; returns the process exit status."""
    out = sys.stdout if stdout is None else stdout
    try:
        cfg, text = _merged(manifest)
        study = build_study(cfg, DEFAULT_GRIDS[manifest.subcommand], text)
        cmd = manifest.subcommand
        if cmd == "solve":
            N = study.n_grid[-1]
            res = solve(assemble(study.potential, study.map, study.tau, N, profile=study.profile()),
                        condition=study.condition)
            k = int(cfg["study"].get("k", 5))
            print(f"# {_label(study)}  N={N}  tau={study.tau:g}  h={res.h:.15g}  "
                  f"cond={res.condition_number:.3e}", file=out)
            for i, e in enumerate(res.energies[:k]):
                print(f"{i}\t{e:.15g}", file=out)
            return 0
        if cmd == "study":
            records = run_study(study, manifest.workers)
            if not records:
                raise ConfigError("empty N grid")
            dest = _out_path(manifest, f"study_{_label(study)}_tau{study.tau:g}.csv")
            emit_csv(records, dest)
            bad = first_failure(records)
            print(f"wrote {dest} ({len(records)} grid points"
                  + ("" if bad is None else f"; first non-ok solve at N={bad}") + ")", file=out)
            return 0
        if cmd == "count":
            records = run_study(study, manifest.workers)
            print(count_convergent(records, study.threshold), file=out)
            return 0
        if cmd == "tau-sweep":
            taus = _parse_floats(cfg["study"].get("taus", (study.tau,)), "tau list")
            dest = _out_path(manifest, f"tau_sweep_{_label(study)}.csv")
            rows = []
            for tau in taus:
                records = run_study(study.with_(tau=tau), manifest.workers)
                c = count_convergent(records, study.threshold)
                rows.append((tau, c, first_failure(records)))
                print(f"tau={tau:g}\tcount={c}", file=out)
            with open(dest, "w", newline="") as fh:
                fh.write("tau,count,first_failure_N\n")
                for tau, c, bad in rows:
                    fh.write(f"{tau:.15g},{c},{'' if bad is None else bad}\n")
            print(f"wrote {dest}", file=out)
            return 0
        raise ConfigError(f"unknown subcommand {cmd!r}")
    except ConfigError as exc:
        print(f"descm: config error: {exc}", file=sys.stderr)
        return 2
    except (DescmError, OSError) as exc:
        print(f"descm: error: {exc}", file=sys.stderr)
        return 1


def _out_path(manifest: RunManifest, filename: str) -> Path:
    d = Path(manifest.out_dir)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"output directory {d} is not writable: {exc.strerror}") from None
    return d / filename


def _positive_float(s: str) -> float:
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("study settings (override the config file)")
    g.add_argument("--config", type=Path, help="TOML config file")
    g.add_argument("--potential", help="built-in potential name: V1..V6  [potential.name]")
    g.add_argument("--coeffs", help="explicit potential, '-2:2,2:1' or '[[-2,2],[2,1]]'  [potential.coeffs]")
    g.add_argument("--map", choices=("simple", "general"), help="conformal map  [map.variant]")
    g.add_argument("--map-params", dest="map_params", help="a,b,c,d of the general map  [map.params]")
    g.add_argument("--tau", type=_positive_float, help="scaling factor  [study.tau]")
    g.add_argument("--taus", help="comma-separated scaling factors for tau-sweep  [study.taus]")
    g.add_argument("--n", help="N or start:stop:step (inclusive)  [study.n]")
    g.add_argument("--rate-mode", dest="rate_mode", choices=[m.value for m in RateMode],
                   help="decay-rate estimate  [study.rate_mode]")
    g.add_argument("--gamma", type=_positive_float, help="explicit decay rate gamma  [study.gamma]")
    g.add_argument("--big-b", dest="big_b", type=_positive_float,
                   help="explicit decay coefficient B  [study.big_b]")
    g.add_argument("--threshold", type=_positive_float, help="convergence threshold  [study.threshold]")
    g.add_argument("--condition", choices=("reduced", "product"),
                   help="condition number reported  [study.condition]")
    g.add_argument("-k", type=int, help="eigenvalues printed by solve  [study.k]")
    g.add_argument("--out", type=Path, default=Path("."), help="output directory")
    g.add_argument("--workers", type=int, default=1, help="threads for independent grid points")

    parser = argparse.ArgumentParser(prog="descm", description="Double-exponential Sinc collocation eigenvalues")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("solve", parents=[common], help="print the lowest eigenvalues at one N (default 50)")
    sub.add_parser("study", parents=[common], help="convergence study over N (default 10:50:5), writes CSV")
    sub.add_parser("count", parents=[common], help="number of convergent eigenvalues (default N grid 1:100)")
    sub.add_parser("tau-sweep", parents=[common], help="convergent-eigenvalue count per tau, writes CSV")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {dest: getattr(args, dest) for dest in OVERRIDES}
    manifest = RunManifest(args.subcommand, args.config, args.out, overrides, args.workers)
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
