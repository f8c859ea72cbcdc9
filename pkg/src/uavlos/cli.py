"""Command-line front end for the sweep harness.

Subcommands cover the standard experiment families (theta sweep,
radius sweep, theta/phi heatmap, gamma/theta surface, engine
comparison) plus city export.  Options come from flags, with an
optional line-oriented ``key=value`` config file behind ``--config``;
flags win over file keys, file keys win over built-in defaults.

Exit codes: 0 success, 2 usage or configuration error, 1 runtime
failure.  Output files are written to a temp name and renamed, so a
failed run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .baselines import GridProduct, evaluate, load_model_set
from .citygeom import ENVIRONMENTS, BuiltUpParams
from .errors import IllegalSpec, InvalidParams, ParseError
from .harness import (
    DEFAULT_ALTITUDES,
    DEFAULT_RADIUS_GRID,
    DEFAULT_THETA_GRID,
    SweepAxis,
    SweepSpec,
    atomic_write_text,
    compare_engines,
    result_to_csv,
    run_sweep,
)
from .sim3d import city_to_text, generate_city

DEFAULT_PHI_GRID = tuple(float(p) for p in range(0, 95, 5))
DEFAULT_GAMMA_GRID = tuple(float(g) for g in range(5, 55, 5))
DEFAULT_COMPARE_THETAS = tuple(float(t) for t in range(10, 90, 10))


class _ConfigError(Exception):
    pass


def _parse_grid(text: str) -> tuple[float, ...]:
    """Grid syntax: "10,20,45" or "lo:hi:step" (hi inclusive)."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, step = (float(p) for p in text.split(":"))
            if step <= 0.0:
                raise ValueError("step must be positive")
            values = []
            i = 0
            while lo + i * step <= hi + 1e-9:
                values.append(round(lo + i * step, 10))
                i += 1
        else:
            values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc
    if not values:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: no values")
    return tuple(values)


def _parse_extent(text: str) -> tuple[float, float]:
    parts = text.lower().replace("m", "").split("x")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return (v, v)
        if len(parts) == 2:
            return (float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"bad extent {text!r}; use 3000 or 3000x4000")


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"bad boolean {text!r}")


# dest -> (config-string converter, argparse kwargs)
_OPTS: dict[str, tuple] = {
    "env": (str, dict(choices=sorted(ENVIRONMENTS), help="named environment")),
    "alpha": (float, dict(type=float, help="built-up area ratio (with --beta --gamma)")),
    "beta": (float, dict(type=float, help="buildings per km^2")),
    "gamma": (float, dict(type=float, help="Rayleigh height scale in m")),
    "extent": (_parse_extent, dict(type=_parse_extent, help="city extent, e.g. 3000 or 3000x4000")),
    "engine": (str, dict(help="sim3d, geom or baseline:<name>")),
    "runs": (int, dict(type=int, help="Monte-Carlo runs per grid point")),
    "seed": (int, dict(type=int, help="master seed (required)")),
    "uav_height": (float, dict(type=float, help="UAV altitude in m")),
    "uav_policy": (str, dict(choices=["random", "crossroad-center", "street-center", "building-top"])),
    "rx_height": (float, dict(type=float, help="user height in m")),
    "n_users": (int, dict(type=int, help="users on the elevation circle (sim3d)")),
    "user_zone": (str, dict(choices=["street", "crossroad", "mixed"])),
    "out": (str, dict(help="output path")),
    "models": (str, dict(help="baseline model set file")),
    "timing": (_parse_bool, dict(action="store_true", help="write measured ms_per_point")),
    "theta_grid": (_parse_grid, dict(type=_parse_grid, help="theta grid, list or lo:hi:step")),
    "phi_grid": (_parse_grid, dict(type=_parse_grid, help="phi grid")),
    "gamma_grid": (_parse_grid, dict(type=_parse_grid, help="gamma grid")),
    "radius_grid": (_parse_grid, dict(type=_parse_grid, help="ground radius grid in m")),
    "altitudes": (_parse_grid, dict(type=_parse_grid, help="UAV altitude series in m")),
    "thetas": (_parse_grid, dict(type=_parse_grid, help="comparison theta grid")),
    "runs_3d": (int, dict(type=int, help="3D engine runs per point")),
    "runs_geom": (int, dict(type=int, help="geometry engine runs per point")),
}

_PARAM_OPTS = ["env", "alpha", "beta", "gamma"]
_COMMON = _PARAM_OPTS + ["extent", "seed", "out"]

# dest list and built-in defaults per subcommand; None means "must be
# given" for seed and "engine decides" elsewhere.
_SUBCOMMANDS: dict[str, dict] = {
    "plos-vs-theta": {
        "opts": _COMMON + ["engine", "runs", "theta_grid", "uav_height", "uav_policy",
                           "rx_height", "n_users", "user_zone", "models", "timing"],
        "defaults": {"engine": "geom", "runs": 1000, "theta_grid": DEFAULT_THETA_GRID,
                     "uav_height": 100.0, "uav_policy": "random", "rx_height": 1.5,
                     "n_users": 360, "user_zone": "mixed", "out": "plos_vs_theta.csv"},
        "help": "sweep P_LoS over elevation angle",
    },
    "plos-vs-radius": {
        "opts": _COMMON + ["engine", "runs", "radius_grid", "altitudes", "uav_policy",
                           "rx_height", "n_users", "user_zone", "models", "timing"],
        "defaults": {"engine": "geom", "runs": 1000, "radius_grid": DEFAULT_RADIUS_GRID,
                     "altitudes": DEFAULT_ALTITUDES, "uav_policy": "random",
                     "rx_height": 1.5, "n_users": 360, "user_zone": "mixed",
                     "out": "plos_vs_radius.csv"},
        "help": "sweep P_LoS over ground radius, one series per altitude",
    },
    "heatmap": {
        "opts": _COMMON + ["engine", "runs", "theta_grid", "phi_grid", "uav_height",
                           "uav_policy", "rx_height", "n_users", "user_zone", "models", "timing"],
        "defaults": {"engine": "geom", "runs": 1000, "theta_grid": DEFAULT_THETA_GRID,
                     "phi_grid": DEFAULT_PHI_GRID, "uav_height": 100.0,
                     "uav_policy": "random", "rx_height": 1.5, "n_users": 360,
                     "user_zone": "street", "out": "heatmap.csv"},
        "help": "sweep P_LoS over elevation and azimuth",
    },
    "param-surface": {
        "opts": _COMMON + ["engine", "runs", "gamma_grid", "theta_grid", "uav_height",
                           "uav_policy", "rx_height", "n_users", "user_zone", "models", "timing"],
        "defaults": {"engine": "geom", "runs": 1000, "gamma_grid": DEFAULT_GAMMA_GRID,
                     "theta_grid": DEFAULT_THETA_GRID, "uav_height": 100.0,
                     "uav_policy": "random", "rx_height": 1.5, "n_users": 360,
                     "user_zone": "mixed", "out": "param_surface.csv"},
        "help": "sweep P_LoS over height scale gamma and elevation",
    },
    "export-city": {
        "opts": _COMMON,
        "defaults": {"out": "city.txt"},
        "help": "generate a city and write its height grid to a text file",
    },
    "compare": {
        "opts": _COMMON + ["thetas", "runs_3d", "runs_geom", "uav_height", "rx_height",
                           "n_users", "models"],
        "defaults": {"thetas": DEFAULT_COMPARE_THETAS, "runs_3d": 500, "runs_geom": 1000,
                     "uav_height": 100.0, "rx_height": 1.5, "n_users": 360,
                     "out": "compare.csv"},
        "help": "run both engines and loaded baselines over a theta grid",
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavlos",
        description="Monte-Carlo estimation of UAV-to-ground line-of-sight probability",
    )
    subparsers = parser.add_subparsers(dest="cmd", required=True)
    for name, info in _SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=info["help"])
        for dest in info["opts"]:
            _, kwargs = _OPTS[dest]
            flag = "--" + dest.replace("_", "-")
            sub.add_argument(flag, dest=dest, default=None, **kwargs)
        sub.add_argument("--config", help="key=value config file; flags override")
    return parser


def _read_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _ConfigError(f"cannot read config {path}: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise _ConfigError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        if key in values:
            raise _ConfigError(f"{path}:{line_no}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def _resolve_options(args: argparse.Namespace) -> dict:
    """Merge flag values, config-file keys and built-in defaults."""
    info = _SUBCOMMANDS[args.cmd]
    known = set(info["opts"])
    config: dict[str, str] = {}
    if args.config:
        for key, value in _read_config(args.config).items():
            norm = key.replace("-", "_")
            if norm not in known:
                raise _ConfigError(f"unknown config key {key!r} for {args.cmd}")
            if norm in config:
                raise _ConfigError(f"config key {key!r} already given as another spelling")
            config[norm] = value
    opts: dict = {}
    for dest in info["opts"]:
        value = getattr(args, dest, None)
        if value is None:
            if dest in config:
                conv, _ = _OPTS[dest]
                try:
                    value = conv(config[dest])
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise _ConfigError(f"config key {dest.replace('_', '-')!r}: {exc}") from exc
            else:
                value = info["defaults"].get(dest)
        opts[dest] = value
    if opts.get("timing") is None:
        opts["timing"] = False
    if opts["seed"] is None:
        raise _ConfigError("--seed is required (no silent entropy)")
    if opts["extent"] is None:
        opts["extent"] = (3000.0, 3000.0)
    return opts


def _params_from(opts: dict) -> BuiltUpParams:
    explicit = [opts.get(k) for k in ("alpha", "beta", "gamma")]
    if opts.get("env") is not None:
        if any(v is not None for v in explicit):
            raise _ConfigError("give --env or an explicit --alpha --beta --gamma, not both")
        return ENVIRONMENTS[opts["env"]]
    if all(v is None for v in explicit):
        raise _ConfigError("no environment given; use --env or --alpha --beta --gamma")
    if any(v is None for v in explicit):
        raise _ConfigError("alpha, beta and gamma must be given together")
    return BuiltUpParams(alpha=explicit[0], beta=explicit[1], gamma=explicit[2])


def _load_models(opts: dict):
    if not opts.get("models"):
        return None
    path = Path(opts["models"])
    try:
        text = path.read_text()
    except OSError as exc:
        raise _ConfigError(f"cannot read model set {path}: {exc}") from exc
    return load_model_set(text)


def _run_sweep_command(opts: dict, axes: tuple[SweepAxis, ...]) -> int:
    uav_height = opts.get("uav_height")
    spec = SweepSpec(
        engine=opts["engine"],
        params=_params_from(opts),
        extent=opts["extent"],
        axes=axes,
        h_uav=uav_height if uav_height is not None else 100.0,
        h_rx=opts["rx_height"],
        n_runs=opts["runs"],
        seed=opts["seed"],
        user_zone=opts["user_zone"],
        uav_policy=opts["uav_policy"],
        n_users=opts["n_users"],
        models=_load_models(opts),
    )
    result = run_sweep(spec)
    atomic_write_text(Path(opts["out"]), result_to_csv(result, include_timing=opts["timing"]))
    return 0


def _cmd_plos_vs_theta(opts: dict) -> int:
    return _run_sweep_command(opts, (SweepAxis("theta", tuple(opts["theta_grid"])),))


def _cmd_plos_vs_radius(opts: dict) -> int:
    axes = (
        SweepAxis("radius", tuple(opts["radius_grid"])),
        SweepAxis("h_uav", tuple(opts["altitudes"])),
    )
    return _run_sweep_command(opts, axes)


def _cmd_heatmap(opts: dict) -> int:
    axes = (
        SweepAxis("theta", tuple(opts["theta_grid"])),
        SweepAxis("phi", tuple(opts["phi_grid"])),
    )
    return _run_sweep_command(opts, axes)


def _cmd_param_surface(opts: dict) -> int:
    axes = (
        SweepAxis("gamma", tuple(opts["gamma_grid"])),
        SweepAxis("theta", tuple(opts["theta_grid"])),
    )
    return _run_sweep_command(opts, axes)


def _cmd_export_city(opts: dict) -> int:
    params = _params_from(opts)
    extent = opts["extent"]
    city = generate_city(params, extent[0], extent[1], opts["seed"])
    atomic_write_text(Path(opts["out"]), city_to_text(city))
    return 0


def _cmd_compare(opts: dict) -> int:
    params = _params_from(opts)
    loaded = _load_models(opts) or {}
    model_items = [("grid", GridProduct(params))]
    model_items += [(name, loaded[name]) for name in sorted(loaded)]
    thetas = tuple(opts["thetas"])
    rows = compare_engines(
        params,
        thetas,
        n3d=opts["runs_3d"],
        ngeom=opts["runs_geom"],
        seed=opts["seed"],
        extent=opts["extent"],
        h_uav=opts["uav_height"],
        h_rx=opts["rx_height"],
        n_users=opts["n_users"],
    )
    echo = (
        f"engine=compare alpha={params.alpha:g} beta={params.beta:g} gamma={params.gamma:g}"
        f" extent={opts['extent'][0]:g}x{opts['extent'][1]:g}"
        f" thetas={','.join(f'{t:g}' for t in thetas)}"
        f" n3d={opts['runs_3d']} ngeom={opts['runs_geom']}"
        f" h_uav={opts['uav_height']:g} h_rx={opts['rx_height']:g}"
        f" n_users={opts['n_users']} seed={opts['seed']}"
        f" models={','.join(name for name, _ in model_items)}"
    )
    header = (
        "theta,n_3d,k_3d,p_3d,ci_lo_3d,ci_hi_3d,"
        "n_geom,k_geom,p_geom,ci_lo_geom,ci_hi_geom,abs_delta"
    )
    if model_items:
        header += "," + ",".join(name for name, _ in model_items)
    lines = [f"# spec: {echo}", header]
    for row in rows:
        a, g = row.sim3d, row.geom
        cells = [
            f"{row.theta_deg:g}",
            str(a.n), str(a.k), f"{a.p_hat:.6f}", f"{a.ci_lo:.6f}", f"{a.ci_hi:.6f}",
            str(g.n), str(g.k), f"{g.p_hat:.6f}", f"{g.ci_lo:.6f}", f"{g.ci_hi:.6f}",
            f"{row.abs_delta:.6f}",
        ]
        for _, model in model_items:
            p = evaluate(model, row.theta_deg, opts["uav_height"], opts["rx_height"])
            cells.append(f"{p:.6f}")
        lines.append(",".join(cells))
    atomic_write_text(Path(opts["out"]), "\n".join(lines) + "\n")
    return 0


_RUNNERS = {
    "plos-vs-theta": _cmd_plos_vs_theta,
    "plos-vs-radius": _cmd_plos_vs_radius,
    "heatmap": _cmd_heatmap,
    "param-surface": _cmd_param_surface,
    "export-city": _cmd_export_city,
    "compare": _cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve_options(args)
        return _RUNNERS[args.cmd](opts)
    except (_ConfigError, ParseError, IllegalSpec, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
