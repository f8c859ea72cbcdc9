"""The geometry engine, from a single link to a full estimate.

No city is materialized here.  For one user/UAV pair the engine lists
the handful of building faces the ground track crosses, compares the
ray height at each face against a Rayleigh roof draw and calls the
link.  This script prints that candidate list for one link, then runs
the estimator over elevation angles for each user zone, including the
aligned-view cases that must come out at exactly 1.0.
"""

import numpy as np

from uavlos import (
    ENVIRONMENTS,
    GeomScenario,
    candidate_ops,
    derive_layout,
    estimate_plos,
    sample_user,
    uav_position_from_angles,
)

SEED = 3


def show_one_link() -> None:
    params = ENVIRONMENTS["urban"]
    layout = derive_layout(params)
    rng = np.random.default_rng(SEED)
    user = sample_user(layout, "street", rng, h_rx=1.5)
    uav = uav_position_from_angles(user, theta_deg=25.0, phi_deg=30.0, h_uav=100.0)

    print(f"user at ({user.x:.1f}, {user.y:.1f}), UAV at "
          f"({uav.x:.1f}, {uav.y:.1f}, {uav.z:.0f}), elevation 25 deg\n")
    print(f"{'face':>8} {'at':>18} {'r_op':>8} {'building':>10}")
    for cand in candidate_ops(user, uav, layout):
        print(f"{cand.kind:>8} ({cand.x:>7.1f}, {cand.y:>7.1f}) {cand.r_op:>8.1f} "
              f"{f'({cand.building_ix}, {cand.building_iy})':>10}")


def sweep_zones() -> None:
    params = ENVIRONMENTS["urban"]
    thetas = (10.0, 25.0, 45.0, 65.0, 85.0)
    print(f"\n{'theta':>6} {'street':>8} {'crossroad':>10}")
    for theta in thetas:
        row = []
        for zone in ("street", "crossroad"):
            sc = GeomScenario(params, zone, theta_deg=theta, h_uav=100.0)
            row.append(estimate_plos(sc, n_runs=2000, seed=SEED).p_hat)
        print(f"{theta:>6.0f} {row[0]:>8.3f} {row[1]:>10.3f}")

    aligned = GeomScenario(params, "street", theta_deg=25.0, phi_deg=90.0, h_uav=100.0)
    est = estimate_plos(aligned, n_runs=2000, seed=SEED)
    print(f"\nlooking straight down the street (phi=90): p = {est.p_hat} exactly")


if __name__ == "__main__":
    show_one_link()
    sweep_zones()
