"""What the three ITU parameters say about a city's street grid.

The whole toolkit runs off (alpha, beta, gamma): built-up area ratio,
buildings per km^2 and the Rayleigh scale of building heights.  This
script derives the implied building width and street width for the
named environments and shows that the derivation honours the two
defining identities.
"""

import math

from uavlos import ENVIRONMENTS, BuiltUpParams, derive_layout

EXTRA = {"ghent-like": BuiltUpParams(alpha=0.435, beta=4679.0, gamma=8.8)}


def main() -> None:
    print(f"{'environment':<12} {'alpha':>6} {'beta':>6} {'gamma':>6} "
          f"{'width':>8} {'street':>8} {'period':>8} {'mean h':>8}")
    for name, params in {**ENVIRONMENTS, **EXTRA}.items():
        layout = derive_layout(params)
        mean_h = params.gamma * math.sqrt(math.pi / 2.0)
        print(f"{name:<12} {params.alpha:>6g} {params.beta:>6g} {params.gamma:>6g} "
              f"{layout.w:>8.2f} {layout.s:>8.2f} {layout.period:>8.2f} {mean_h:>8.2f}")

    print()
    print("identities (worst absolute residual over the table):")
    worst_period = worst_area = 0.0
    for params in list(ENVIRONMENTS.values()) + list(EXTRA.values()):
        layout = derive_layout(params)
        worst_period = max(worst_period, abs(layout.s + layout.w - 1000.0 / math.sqrt(params.beta)))
        worst_area = max(worst_area, abs(layout.w ** 2 * params.beta / 1e6 - params.alpha))
    print(f"  s + w  = 1000/sqrt(beta)   residual {worst_period:.2e}")
    print(f"  w^2 * beta / 10^6 = alpha  residual {worst_area:.2e}")


if __name__ == "__main__":
    main()
