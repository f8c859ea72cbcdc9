"""Experiment harness: sweeps, engine comparison and CSV output.

A :class:`SweepSpec` names an engine ("sim3d", "geom" or
"baseline:<name>"), an environment and one or two swept variables;
:func:`run_sweep` walks the grid deterministically from a master seed
and returns one :class:`PLosEstimate` per point.  The 3D engine runs
the fresh-city protocol per run (place UAV, ring of circle users); the
geometry engine runs one link per run, with an area-weighted
street/crossroad mix when no single zone is requested.

CSV files carry a ``# spec:`` echo line followed by one row per grid
point.  The ms_per_point column is written as zero unless timing is
requested, so identical seeds reproduce identical bytes; wall-clock
readings stay on the in-memory result.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .baselines import BaselineModel, GridProduct, evaluate
from .citygeom import Building, BuiltUpParams, LinkGeometry, Node, classify_point, derive_layout
from .errors import IllegalSpec, InvalidParams, UavLosError
from .sim3d import (
    BuildingTop,
    City,
    CrossroadCenter,
    RandomOverCity,
    StreetCenter,
    check_los_edges,
    generate_city,
    place_uav,
    place_users_circle,
)
from .simgeom import GeomScenario, simulate_link
from .stats import PLosEstimate, wilson_interval  # noqa: F401  (re-exported)

__all__ = [
    "SweepAxis",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "CompareRow",
    "run_sweep",
    "compare_engines",
    "result_to_csv",
    "write_csv",
    "wilson_interval",
    "PLosEstimate",
    "DEFAULT_THETA_GRID",
    "DEFAULT_RADIUS_GRID",
    "DEFAULT_ALTITUDES",
]

AXIS_NAMES = ("theta", "phi", "radius", "h_uav", "gamma", "alpha")
USER_ZONES = ("street", "crossroad", "mixed")
UAV_POLICIES = ("random", "crossroad-center", "street-center", "building-top")

#: Default grids used by the command-line sweeps.
DEFAULT_THETA_GRID = tuple(float(t) for t in range(5, 95, 5))
DEFAULT_RADIUS_GRID = tuple(float(r) for r in range(50, 1050, 50))
DEFAULT_ALTITUDES = (100.0, 200.0, 500.0)


@dataclass(frozen=True)
class SweepAxis:
    """One swept variable and its grid values, in sweep order."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise IllegalSpec(f"unknown axis {self.name!r}; pick from {AXIS_NAMES}")
        if len(self.values) == 0:
            raise IllegalSpec(f"axis {self.name!r} has no values")


@dataclass(frozen=True)
class SweepSpec:
    """A reproducible sweep: engine, environment, axes and fixed values.

    Exactly one of theta/radius must be available (as an axis or a
    fixed value).  n_runs counts cities per point for sim3d and links
    per point for geom.  models supplies named baselines; the name
    "grid" is always available and binds GridProduct to the
    environment parameters.
    """

    engine: str
    params: BuiltUpParams
    extent: tuple[float, float] = (3000.0, 3000.0)
    axes: tuple[SweepAxis, ...] = ()
    theta: float | None = None
    phi: float | None = None
    radius: float | None = None
    h_uav: float = 100.0
    h_rx: float = 1.5
    n_runs: int = 1000
    seed: int = 0
    user_zone: str = "mixed"
    uav_policy: str = "random"
    n_users: int = 360
    models: Mapping[str, BaselineModel] | None = field(default=None)

    def __post_init__(self):
        if self.engine not in ("sim3d", "geom"):
            prefix, _, name = self.engine.partition(":")
            if prefix != "baseline" or not name:
                raise IllegalSpec(
                    f"engine must be sim3d, geom or baseline:<name>, got {self.engine!r}"
                )
        if not 1 <= len(self.axes) <= 2:
            raise IllegalSpec(f"need one or two axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise IllegalSpec(f"duplicate axis in {names}")
        for axis in self.axes:
            self._check_axis(axis)
        for name, value in (("theta", self.theta), ("phi", self.phi), ("radius", self.radius)):
            if value is not None and name in names:
                raise IllegalSpec(f"{name} both swept and fixed")
        theta_given = "theta" in names or self.theta is not None
        radius_given = "radius" in names or self.radius is not None
        if theta_given and radius_given:
            raise IllegalSpec("give theta or radius, not both")
        if not theta_given and not radius_given:
            raise IllegalSpec("no theta or radius given")
        if self.theta is not None and not 0.0 < self.theta <= 90.0:
            raise IllegalSpec(f"fixed theta {self.theta} outside (0, 90]")
        if self.phi is not None and not 0.0 <= self.phi <= 90.0:
            raise IllegalSpec(f"fixed phi {self.phi} outside [0, 90]")
        if self.radius is not None and self.radius <= 0.0:
            raise IllegalSpec(f"fixed radius {self.radius} must be positive")
        if self.h_rx < 0.0:
            raise IllegalSpec(f"h_rx must be non-negative, got {self.h_rx}")
        if "h_uav" not in names and self.h_uav <= self.h_rx:
            raise IllegalSpec(f"h_uav {self.h_uav} must exceed h_rx {self.h_rx}")
        if self.n_runs < 1:
            raise IllegalSpec(f"n_runs must be at least 1, got {self.n_runs}")
        if self.n_users < 1:
            raise IllegalSpec(f"n_users must be at least 1, got {self.n_users}")
        if self.user_zone not in USER_ZONES:
            raise IllegalSpec(f"user_zone must be one of {USER_ZONES}, got {self.user_zone!r}")
        if self.uav_policy not in UAV_POLICIES:
            raise IllegalSpec(f"uav_policy must be one of {UAV_POLICIES}, got {self.uav_policy!r}")
        if self.engine.startswith("baseline") and "phi" in names:
            raise IllegalSpec("baseline models have no azimuth axis")

    def _check_axis(self, axis: SweepAxis) -> None:
        if axis.name == "theta":
            bad = [v for v in axis.values if not 0.0 < v <= 90.0]
        elif axis.name == "phi":
            bad = [v for v in axis.values if not 0.0 <= v <= 90.0]
        elif axis.name == "radius":
            bad = [v for v in axis.values if v <= 0.0]
        elif axis.name == "h_uav":
            bad = [v for v in axis.values if v <= self.h_rx]
        elif axis.name == "gamma":
            bad = [v for v in axis.values if v <= 0.0]
        else:  # alpha
            bad = [v for v in axis.values if not 0.0 < v < 1.0]
        if bad:
            raise IllegalSpec(f"axis {axis.name!r} has out-of-domain values {bad}")

    def echo(self) -> str:
        """Canonical one-line description recorded in CSV output."""
        parts = [
            f"engine={self.engine}",
            f"alpha={self.params.alpha:g}",
            f"beta={self.params.beta:g}",
            f"gamma={self.params.gamma:g}",
            f"extent={self.extent[0]:g}x{self.extent[1]:g}",
            "axes=" + ";".join(
                a.name + ":" + ",".join(f"{v:g}" for v in a.values) for a in self.axes
            ),
        ]
        for name, value in (("theta", self.theta), ("phi", self.phi), ("radius", self.radius)):
            if value is not None:
                parts.append(f"{name}={value:g}")
        axis_names = {a.name for a in self.axes}
        if "h_uav" not in axis_names:
            parts.append(f"h_uav={self.h_uav:g}")
        parts.append(f"h_rx={self.h_rx:g}")
        parts.append(f"n_runs={self.n_runs}")
        parts.append(f"seed={self.seed}")
        if self.engine == "geom":
            parts.append(f"user_zone={self.user_zone}")
        if self.engine == "sim3d":
            parts.append(f"uav_policy={self.uav_policy}")
            parts.append(f"n_users={self.n_users}")
        return " ".join(parts)


@dataclass(frozen=True)
class SweepRow:
    values: tuple[float, ...]
    estimate: PLosEstimate
    ms: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    axis_names: tuple[str, ...]
    rows: tuple[SweepRow, ...]


@dataclass(frozen=True)
class CompareRow:
    theta_deg: float
    sim3d: PLosEstimate
    geom: PLosEstimate
    abs_delta: float


def _street_weight(params: BuiltUpParams) -> float:
    # Free space splits into two street rectangles (s*w each) and one
    # crossroad square (s*s) per period cell.
    layout = derive_layout(params)
    return 2.0 * layout.w / (layout.s + 2.0 * layout.w)


def _child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def _estimate_geom(
    params: BuiltUpParams,
    zone: str,
    theta: float,
    phi: float | None,
    h_uav: float,
    h_rx: float,
    n_runs: int,
    seed: int,
) -> PLosEstimate:
    """Geometry-engine point estimate; zone "mixed" draws street or
    crossroad per run with free-space area weights."""
    phi_arg = (0.0, 90.0) if phi is None else phi
    scenarios = {}
    for z in ("street", "crossroad"):
        scenarios[z] = GeomScenario(
            params=params,
            user_zone=z,
            theta_deg=theta,
            phi_deg=phi_arg,
            h_uav=h_uav,
            h_rx=h_rx,
        )
    w_street = _street_weight(params)
    k = 0
    for child in np.random.SeedSequence(seed).spawn(n_runs):
        rng = np.random.default_rng(child)
        if zone == "mixed":
            z = "street" if rng.random() < w_street else "crossroad"
        else:
            z = zone
        if simulate_link(scenarios[z], rng).is_los:
            k += 1
    return PLosEstimate.from_counts(k, n_runs)


def _draw_uav(city: City, policy_name: str, h_uav: float, rng: np.random.Generator) -> Node:
    policy = {
        "random": RandomOverCity(h_uav),
        "crossroad-center": CrossroadCenter(h_uav),
        "street-center": StreetCenter(h_uav),
        "building-top": BuildingTop(h_uav),
    }[policy_name]
    for _ in range(1000):
        uav = place_uav(city, policy, rng)
        cell = classify_point(uav.x, uav.y, city.layout)
        if isinstance(cell, Building):
            nx, ny = city.heights.shape
            if cell.ix <= nx and cell.iy <= ny:
                if city.heights[cell.ix - 1, cell.iy - 1] >= uav.z:
                    continue  # inside a building volume; redraw
        return uav
    raise InvalidParams(
        f"could not place a UAV at {h_uav} m clear of rooftops after 1000 tries"
    )


def _point_users(
    city: City, uav: Node, theta: float, phi: float | None, n_users: int, h_rx: float
) -> list[Node]:
    if theta == 90.0:
        candidates = [(uav.x, uav.y)]
    elif phi is not None:
        d = (uav.z - h_rx) / math.tan(math.radians(theta))
        a = math.radians(phi)
        candidates = [(uav.x + d * math.cos(a), uav.y + d * math.sin(a))]
    else:
        return place_users_circle(city, uav, theta, n_users, h_rx)
    layout = city.layout
    users = []
    for x, y in candidates:
        if not (0.0 <= x <= layout.extent_x and 0.0 <= y <= layout.extent_y):
            continue
        if isinstance(classify_point(x, y, layout), Building):
            continue
        users.append(Node(x, y, h_rx))
    return users


def _estimate_sim3d(
    params: BuiltUpParams,
    extent: tuple[float, float],
    theta: float,
    phi: float | None,
    h_uav: float,
    h_rx: float,
    policy_name: str,
    n_users: int,
    n_runs: int,
    seed: int,
) -> PLosEstimate:
    """Fresh-city protocol: per run, generate a city, place the UAV and
    pool the LoS states of every valid user on the theta circle."""
    k = 0
    n = 0
    for child in np.random.SeedSequence(seed).spawn(n_runs):
        rng = np.random.default_rng(child)
        city = generate_city(params, extent[0], extent[1], _child_seed(rng))
        uav = _draw_uav(city, policy_name, h_uav, rng)
        for user in _point_users(city, uav, theta, phi, n_users, h_rx):
            link = LinkGeometry.from_nodes(tx=uav, rx=user)
            n += 1
            if check_los_edges(city, link).is_los:
                k += 1
    if n == 0:
        raise UavLosError(
            "no valid user positions over the whole sweep point; "
            "enlarge the extent or the user count"
        )
    return PLosEstimate.from_counts(k, n)


def _resolve_model(spec: SweepSpec, var: Mapping[str, float]) -> BaselineModel:
    name = spec.engine.partition(":")[2]
    models = spec.models or {}
    if name == "grid":
        base = spec.params
    elif name in models:
        model = models[name]
        if not isinstance(model, GridProduct):
            if "gamma" in var or "alpha" in var:
                raise IllegalSpec(
                    f"{spec.engine!r} does not depend on gamma/alpha; "
                    "sweep a GridProduct instead"
                )
            return model
        base = model.params
    else:
        raise IllegalSpec(
            f"engine {spec.engine!r} names no loaded model; available: "
            f"{sorted(models) + ['grid']}"
        )
    if "gamma" in var or "alpha" in var:
        base = BuiltUpParams(
            alpha=var.get("alpha", base.alpha),
            beta=base.beta,
            gamma=var.get("gamma", base.gamma),
        )
    return GridProduct(base)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Walk the sweep grid and estimate P_LoS at every point.

    Points are evaluated in row-major axis order, each from its own
    seed substream, so results are independent of evaluation order and
    reproducible from (spec, seed) alone.
    """
    axis_names = tuple(a.name for a in spec.axes)
    if spec.engine.startswith("baseline"):
        # Resolve once upfront so unknown names and gamma/alpha sweeps of
        # theta-only families fail before any work is done.
        model0 = _resolve_model(spec, {})
        if set(axis_names) & {"gamma", "alpha"} and not isinstance(model0, GridProduct):
            raise IllegalSpec(
                f"{spec.engine!r} does not depend on gamma/alpha; sweep a GridProduct instead"
            )

    grids = [axis.values for axis in spec.axes]
    combos: list[tuple[float, ...]] = [()]
    for values in grids:
        combos = [prior + (v,) for prior in combos for v in values]

    children = np.random.SeedSequence(spec.seed).spawn(len(combos))
    rows = []
    for combo, child in zip(combos, children):
        var = dict(zip(axis_names, combo))
        pt_seed = _child_seed(np.random.default_rng(child))
        params_pt = spec.params
        if "gamma" in var or "alpha" in var:
            params_pt = BuiltUpParams(
                alpha=var.get("alpha", spec.params.alpha),
                beta=spec.params.beta,
                gamma=var.get("gamma", spec.params.gamma),
            )
        h_uav = var.get("h_uav", spec.h_uav)
        if "theta" in var:
            theta = var["theta"]
        elif spec.theta is not None:
            theta = spec.theta
        else:
            radius = var.get("radius", spec.radius)
            theta = math.degrees(math.atan2(h_uav - spec.h_rx, radius))
        phi = var.get("phi", spec.phi)

        start = time.perf_counter()
        if spec.engine == "geom":
            est = _estimate_geom(
                params_pt, spec.user_zone, theta, phi, h_uav, spec.h_rx,
                spec.n_runs, pt_seed,
            )
        elif spec.engine == "sim3d":
            est = _estimate_sim3d(
                params_pt, spec.extent, theta, phi, h_uav, spec.h_rx,
                spec.uav_policy, spec.n_users, spec.n_runs, pt_seed,
            )
        else:
            model = _resolve_model(spec, var)
            est = PLosEstimate.exact(evaluate(model, theta, h_uav, spec.h_rx))
        ms = (time.perf_counter() - start) * 1000.0
        rows.append(SweepRow(values=combo, estimate=est, ms=ms))
    return SweepResult(spec=spec, axis_names=axis_names, rows=tuple(rows))


def compare_engines(
    params: BuiltUpParams,
    thetas: tuple[float, ...],
    n3d: int = 500,
    ngeom: int = 1000,
    seed: int = 0,
    extent: tuple[float, float] = (3000.0, 3000.0),
    h_uav: float = 100.0,
    h_rx: float = 1.5,
    n_users: int = 360,
) -> list[CompareRow]:
    """Run both engines at matched settings over a theta grid.

    The 3D side runs the fresh-city protocol with a randomly placed UAV
    at h_uav; the geometry side runs the area-weighted street/crossroad
    mix at the same fixed altitude and a uniform azimuth.
    """
    rows = []
    children = np.random.SeedSequence(seed).spawn(2 * len(thetas))
    for i, theta in enumerate(thetas):
        seed3d = _child_seed(np.random.default_rng(children[2 * i]))
        seedgm = _child_seed(np.random.default_rng(children[2 * i + 1]))
        est3d = _estimate_sim3d(
            params, extent, theta, None, h_uav, h_rx, "random", n_users, n3d, seed3d
        )
        estgm = _estimate_geom(
            params, "mixed", theta, None, h_uav, h_rx, ngeom, seedgm
        )
        rows.append(
            CompareRow(
                theta_deg=theta,
                sim3d=est3d,
                geom=estgm,
                abs_delta=abs(est3d.p_hat - estgm.p_hat),
            )
        )
    return rows


def result_to_csv(result: SweepResult, include_timing: bool = False) -> str:
    """Render a sweep result as CSV text (spec echo, header, rows)."""
    lines = [f"# spec: {result.spec.echo()}"]
    lines.append(",".join(result.axis_names) + ",n,k,p_hat,ci_lo,ci_hi,ms_per_point")
    for row in result.rows:
        est = row.estimate
        ms = row.ms if include_timing else 0.0
        lines.append(
            ",".join(f"{v:g}" for v in row.values)
            + f",{est.n},{est.k},{est.p_hat:.6f},{est.ci_lo:.6f},{est.ci_hi:.6f},{ms:.6f}"
        )
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path: str | Path, include_timing: bool = False) -> None:
    """Write CSV atomically (temp file in place, then rename)."""
    atomic_write_text(Path(path), result_to_csv(result, include_timing))


def atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)
