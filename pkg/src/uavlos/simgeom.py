"""Lightweight geometry-based LoS simulator.

Instead of materializing a whole city, each run builds only what one
link needs: a user near the origin crossroad, a UAV in the first
quadrant, the candidate obstruction points where the link's ground
projection enters building footprints, and one Rayleigh height draw
per crossed building.  By first-quadrant symmetry an azimuth in
[0, 90] degrees covers every direction.

Candidate obstruction points lie on the building faces that look
toward the user: the vertical lines x = (i-1)*(s+w) + s (west faces of
column i) and the horizontal lines y = (j-1)*(s+w) + s (south faces of
row j).  A crossing counts only when the other coordinate falls within
a building band, i.e. the segment meets the face of an actual
building.  With flat rooftops the ray is lowest over a footprint at
exactly that entry face, so one comparison per building decides it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .citygeom import (
    BuiltUpParams,
    CityLayout,
    LinkGeometry,
    Node,
    derive_layout,
    sample_height,
    uav_position_from_angles,
)
from .errors import InvalidAngle, InvalidParams, InvalidQuadrant
from .sim3d import Blocker, LoSOutcome, ray_height_at
from .stats import PLosEstimate

__all__ = [
    "GeomScenario",
    "CandidateOP",
    "sample_user",
    "candidate_ops",
    "simulate_link",
    "estimate_plos",
]

UserZone = Literal["street", "crossroad"]


def _check_range(name: str, rng_: tuple[float, float], lo: float, hi: float) -> None:
    a, b = rng_
    if not (lo <= a < b <= hi):
        raise InvalidParams(f"{name} range must satisfy {lo} <= lo < hi <= {hi}, got {rng_}")


@dataclass(frozen=True)
class GeomScenario:
    """One Monte-Carlo scenario for the geometry engine.

    phi_deg and h_uav are either fixed floats or (lo, hi) ranges drawn
    uniformly per run; the defaults sweep the azimuth over the first
    quadrant and the UAV altitude over [0, 500] m.
    """

    params: BuiltUpParams
    user_zone: UserZone
    theta_deg: float
    phi_deg: float | tuple[float, float] = (0.0, 90.0)
    h_uav: float | tuple[float, float] = (0.0, 500.0)
    h_rx: float = 1.5

    def __post_init__(self):
        if self.user_zone not in ("street", "crossroad"):
            raise InvalidParams(f"unknown user zone {self.user_zone!r}")
        if not 0.0 < self.theta_deg <= 90.0:
            raise InvalidAngle(f"theta must be in (0, 90], got {self.theta_deg}")
        if isinstance(self.phi_deg, tuple):
            _check_range("phi", self.phi_deg, 0.0, 90.0)
        elif not 0.0 <= self.phi_deg <= 90.0:
            raise InvalidAngle(f"phi must be in [0, 90], got {self.phi_deg}")
        if self.h_rx < 0.0:
            raise InvalidParams(f"h_rx must be non-negative, got {self.h_rx}")
        if isinstance(self.h_uav, tuple):
            lo, hi = self.h_uav
            if not (0.0 <= lo < hi):
                raise InvalidParams(f"bad h_uav range {self.h_uav}")
            if hi <= self.h_rx:
                raise InvalidParams(
                    f"h_uav range {self.h_uav} entirely below h_rx={self.h_rx}"
                )
        elif self.h_uav <= self.h_rx:
            raise InvalidParams(
                f"fixed h_uav={self.h_uav} must exceed h_rx={self.h_rx}"
            )

    def layout(self) -> CityLayout:
        # The geometry engine treats the grid as unbounded; the nominal
        # one-period extent only satisfies the layout contract.
        return derive_layout(self.params)


@dataclass(frozen=True)
class CandidateOP:
    """A candidate obstruction point on a building face.

    kind - "x_face" for west faces x = (i-1)*period + s, "y_face" for
    south faces y = (j-1)*period + s; face_index is i or j (1-based).
    r_op is the ground distance from the UAV projection, ready for the
    ray-height evaluation.  building_ix/iy name the crossed cell.
    """

    kind: Literal["x_face", "y_face"]
    face_index: int
    x: float
    y: float
    r_op: float
    building_ix: int
    building_iy: int


def sample_user(
    layout: CityLayout,
    zone: UserZone,
    rng: np.random.Generator,
    h_rx: float = 0.0,
) -> Node:
    """Draw a user uniformly in the named zone at the origin crossroad.

    Crossroad users fill the square [0, s]^2; street users fill the
    north-south street segment right of it (x in [0, s], y in
    [s, s + w]), which by the grid's diagonal symmetry stands for both
    street orientations when the azimuth is drawn uniformly.
    """
    s, w = layout.s, layout.w
    x = rng.uniform(0.0, s)
    if zone == "crossroad":
        y = rng.uniform(0.0, s)
    elif zone == "street":
        y = rng.uniform(s, s + w)
    else:
        raise InvalidParams(f"unknown user zone {zone!r}")
    return Node(x, y, h_rx)


def candidate_ops(user: Node, uav: Node, layout: CityLayout) -> list[CandidateOP]:
    """Candidate obstruction points between a user and a first-quadrant UAV.

    Intersections of the ground segment with the toward-user face
    lines, kept when strictly between the endpoints and on the face of
    an actual building cell, sorted by r_op ascending (nearest the UAV
    first).  At most one candidate arises per crossed building.
    """
    dx = uav.x - user.x
    dy = uav.y - user.y
    if dx < 0.0 or dy < 0.0:
        raise InvalidQuadrant(
            f"UAV offset ({dx}, {dy}) leaves the first quadrant; phi must be in [0, 90]"
        )
    r_rx = math.hypot(dx, dy)
    if r_rx == 0.0:
        return []
    p, s = layout.period, layout.s
    cands: list[CandidateOP] = []

    if dx > 0.0:
        k = math.floor((user.x - s) / p) + 1  # first face line strictly right of the user
        while True:
            c = k * p + s
            if c >= uav.x:
                break
            if c > user.x:
                t = (c - user.x) / dx
                if 0.0 < t < 1.0:
                    y_at = user.y + dy * t
                    if (y_at % p) >= s:
                        cands.append(
                            CandidateOP(
                                kind="x_face",
                                face_index=k + 1,
                                x=c,
                                y=y_at,
                                r_op=(1.0 - t) * r_rx,
                                building_ix=k + 1,
                                building_iy=int(y_at // p) + 1,
                            )
                        )
            k += 1

    if dy > 0.0:
        k = math.floor((user.y - s) / p) + 1
        while True:
            c = k * p + s
            if c >= uav.y:
                break
            if c > user.y:
                t = (c - user.y) / dy
                if 0.0 < t < 1.0:
                    x_at = user.x + dx * t
                    if (x_at % p) >= s:
                        cands.append(
                            CandidateOP(
                                kind="y_face",
                                face_index=k + 1,
                                x=x_at,
                                y=c,
                                r_op=(1.0 - t) * r_rx,
                                building_ix=int(x_at // p) + 1,
                                building_iy=k + 1,
                            )
                        )
            k += 1

    cands.sort(key=lambda cand: cand.r_op)
    return cands


def simulate_link(scenario: GeomScenario, rng: np.random.Generator) -> LoSOutcome:
    """Run one link: draw user, azimuth, altitude and building heights.

    Each distinct building along the path receives one independent
    Rayleigh(gamma) height; the link is NLoS at the first candidate
    whose drawn height reaches the ray height there (ties block).

    The UAV hovers in free air.  When its ground projection lands on a
    building whose drawn height reaches the UAV altitude, the whole
    configuration is redrawn, matching a placement that rejects
    positions inside building volumes.  The accepted height is reused
    for that building's candidate face.
    """
    layout = scenario.layout()
    p = layout.period

    for _ in range(100000):
        user = sample_user(layout, scenario.user_zone, rng, scenario.h_rx)

        if isinstance(scenario.phi_deg, tuple):
            phi = rng.uniform(*scenario.phi_deg)
        else:
            phi = scenario.phi_deg

        if isinstance(scenario.h_uav, tuple):
            # Redraw the rare altitude at or below the user; the elevation
            # construction needs the transmitter strictly above the receiver.
            h_uav = rng.uniform(*scenario.h_uav)
            tries = 0
            while h_uav <= scenario.h_rx:
                h_uav = rng.uniform(*scenario.h_uav)
                tries += 1
                if tries > 1000:
                    raise InvalidParams(
                        f"h_uav range {scenario.h_uav} never exceeds h_rx={scenario.h_rx}"
                    )
        else:
            h_uav = scenario.h_uav

        uav = uav_position_from_angles(user, scenario.theta_deg, phi, h_uav)

        uav_cell = None
        uav_roof = 0.0
        if (uav.x % p) >= layout.s and (uav.y % p) >= layout.s:
            uav_cell = (int(uav.x // p) + 1, int(uav.y // p) + 1)
            uav_roof = sample_height(scenario.params.gamma, rng)
            if uav_roof >= h_uav:
                continue
        break
    else:
        raise InvalidParams(
            f"no free-air UAV placement found at h_uav={scenario.h_uav}"
        )

    link = LinkGeometry.from_nodes(tx=uav, rx=user)
    seen: set[tuple[int, int]] = set()
    for cand in candidate_ops(user, uav, layout):
        cell = (cand.building_ix, cand.building_iy)
        if cell in seen:
            continue
        seen.add(cell)
        if cell == uav_cell:
            roof = uav_roof
        else:
            roof = sample_height(scenario.params.gamma, rng)
        if roof >= ray_height_at(link, cand.r_op):
            return LoSOutcome.nlos(Blocker(cand.building_ix, cand.building_iy, cand.r_op))
    return LoSOutcome.los()


def estimate_plos(scenario: GeomScenario, n_runs: int, seed: int) -> PLosEstimate:
    """Monte-Carlo P_LoS estimate over independent per-run substreams."""
    if n_runs < 1:
        raise InvalidParams(f"need at least one run, got {n_runs}")
    k = 0
    for child in np.random.SeedSequence(seed).spawn(n_runs):
        rng = np.random.default_rng(child)
        if simulate_link(scenario, rng).is_los:
            k += 1
    return PLosEstimate.from_counts(k, n_runs)
