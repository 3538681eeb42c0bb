"""How array shape changes what an aperture is worth.

Three 64-antenna archetypes (linear, square, circular) sweep their
aperture through the channel parameter eta = A_t * A_r / (lambda D N) at
a fixed 10 dB SNR under the Fresnel model.  The ULA touches the capacity
bound at eta = 1 (Rayleigh spacing); the URA needs a different eta
because its side, not its area, sets the per-axis spacing; the UCA never
quite gets there and leans on waterfilling to stay close.

Run:  python demos/aperture_sweep.py
"""

import math

import numpy as np

from losmimo import (
    WavefrontModel,
    build_uca,
    build_ula,
    build_ura,
    capacity_upper_bound,
    channel_matrix,
    gain_spectrum,
    link_scene,
    waterfilling,
)

N = 64
LAM = 1e-3
DIST = 10.0
SNR = 10.0  # linear (10 dB)
ETAS = [0.05 * i for i in range(1, 61)]


def spectral_efficiency(layout):
    sc = link_scene(layout, layout, DIST, LAM)
    spec = gain_spectrum(channel_matrix(sc, WavefrontModel.FRESNEL))
    _, se = waterfilling(spec, SNR)
    return se


def main():
    ub = capacity_upper_bound(N, N, SNR)
    rows = {"ula": [], "ura": [], "uca": []}
    for eta in ETAS:
        aperture = math.sqrt(eta * LAM * DIST * N)
        rows["ula"].append(spectral_efficiency(build_ula(N, aperture / N)))
        rows["ura"].append(spectral_efficiency(build_ura(8, aperture / 8)))
        rows["uca"].append(spectral_efficiency(build_uca(N, aperture)))

    print(f"N = {N}, 10 dB SNR, capacity upper bound {ub:.2f} bit/s/Hz")
    print()
    print("  eta     ULA      URA      UCA   (spectral efficiency, bit/s/Hz)")
    for i, eta in enumerate(ETAS):
        if i % 6 == 0 or eta == 1.0:
            print(
                f"{eta:5.2f} {rows['ula'][i]:8.2f} {rows['ura'][i]:8.2f}"
                f" {rows['uca'][i]:8.2f}"
            )

    print()
    for name, ses in rows.items():
        ses = np.asarray(ses)
        i = int(np.argmax(ses))
        gap = (1 - ses[i] / ub) * 100
        print(
            f"{name.upper():>4}: best {ses[i]:7.2f} at eta {ETAS[i]:4.2f}"
            f"  ({gap:+6.2f}% from the bound)"
        )

    print()
    print("sweep a single scene from the CLI instead:")
    print("  losmimo sweep scene.json --var eta --grid 0.05:0.05:3 --snr-db 10")


if __name__ == "__main__":
    main()
