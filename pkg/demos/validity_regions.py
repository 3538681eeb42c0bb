"""Where does the planar-wavefront approximation stop being enough?

Sweeps carrier frequency and link distance for a fixed pair of 0.5 m
arrays and classifies each point by the L_t * L_r < 4 * lambda * D rule.
Short THz links put everyday-sized arrays deep in the spherical regime,
which is exactly what makes LOS spatial multiplexing possible there.

Run:  python demos/validity_regions.py
"""

import numpy as np

from losmimo import (
    SPEED_OF_LIGHT_M_S,
    Validity,
    build_ula,
    classify_validity,
    link_scene,
)

APERTURE_M = 0.5
FREQS_GHZ = [30, 100, 300, 1000]
DISTANCES_M = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]


def main():
    lay = build_ula(2, APERTURE_M / 2)

    print(f"aperture {APERTURE_M} m at both ends; S = spherical required, p = planar ok")
    header = "freq \\ dist" + "".join(f"{d:>7}" for d in DISTANCES_M)
    print(header)
    print("-" * len(header))
    for f_ghz in FREQS_GHZ:
        lam = SPEED_OF_LIGHT_M_S / (f_ghz * 1e9)
        cells = []
        for dist in DISTANCES_M:
            regime = classify_validity(link_scene(lay, lay, float(dist), lam))
            cells.append("S" if regime is Validity.SPHERICAL_REQUIRED else "p")
        print(f"{f_ghz:>8} GHz" + "".join(f"{c:>7}" for c in cells))

    # the boundary distance scales linearly with frequency
    print()
    for f_ghz in FREQS_GHZ:
        lam = SPEED_OF_LIGHT_M_S / (f_ghz * 1e9)
        boundary = APERTURE_M * APERTURE_M / (4 * lam)
        print(f"{f_ghz:>5} GHz: planar model becomes adequate beyond {boundary:8.1f} m")

    print()
    print("same map via the CLI:")
    print(
        "  losmimo validity --freq-grid 30e9,100e9,300e9,1000e9 "
        "--dist-grid 1:1:1000 --tx-aperture 0.5 --rx-aperture 0.5"
    )


if __name__ == "__main__":
    main()
