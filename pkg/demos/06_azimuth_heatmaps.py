"""How much the azimuth matters for a street user.

For a user standing in a street, P_LoS depends on where the UAV sits
relative to the street axis: looking along the street (phi = 90) is
always clear, looking square across the buildings (phi = 0) is the
worst case.  This renders the theta x phi surface as a text heatmap,
the same data `uavlos heatmap` writes as CSV.
"""

from uavlos import ENVIRONMENTS, SweepAxis, SweepSpec, run_sweep

SHADES = " .:-=+*#%@"
THETAS = tuple(float(t) for t in range(10, 95, 10))
PHIS = tuple(float(p) for p in range(0, 95, 10))


def main() -> None:
    spec = SweepSpec(
        engine="geom",
        params=ENVIRONMENTS["dense-urban"],
        axes=(SweepAxis("theta", THETAS), SweepAxis("phi", PHIS)),
        n_runs=400,
        seed=1,
        user_zone="street",
    )
    result = run_sweep(spec)
    grid = {row.values: row.estimate.p_hat for row in result.rows}

    print("dense-urban street user, P_LoS by elevation (rows) and azimuth (cols)")
    print("darker = more blocked; phi=90 looks along the street\n")
    print("theta  " + " ".join(f"{int(p):>5}" for p in PHIS))
    for theta in THETAS:
        cells = " ".join(f"{grid[(theta, phi)]:>5.2f}" for phi in PHIS)
        print(f"{int(theta):>5}  {cells}")

    print()
    for theta in THETAS:
        band = " ".join(
            f"{SHADES[min(int((1.0 - grid[(theta, phi)]) * len(SHADES)), len(SHADES) - 1)] * 5}"
            for phi in PHIS
        )
        print(f"{int(theta):>5}  {band}")


if __name__ == "__main__":
    main()
