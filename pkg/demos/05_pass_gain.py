# How much PASS helps U1 and how little it costs U2, for two room sizes.
#
# gap_u1 is CASS minus PASS outage of U1 (>= 0, PASS better). While the
# outage boundary a is inside the PASS support it equals
# 2 sqrt(a - d^2)/D - pi (a - d^2)/D^2, which peaks at 1/pi when
# a - d^2 = D^2/pi^2. gap_u2_asymptotic is PASS minus CASS at high SNR and
# falls as 1/rho.

# %%
import numpy as np

from pinching_outage import AccessScheme, RoomGeometry, db_to_linear, gap_u1, gap_u2_asymptotic

scheme = AccessScheme.oma()
grid = np.arange(60.0, 100.01, 0.5)
for D in (20.0, 30.0):
    geom = RoomGeometry(D, 5.0)
    gaps = np.array([gap_u1(scheme, float(db_to_linear(s)), geom) for s in grid])
    k = int(np.argmax(gaps))
    print(f"D = {D:g} m: U1 gap peaks at {gaps[k]:.4f} ({grid[k]:.1f} dB), zero from "
          f"{grid[np.nonzero(gaps)[0][-1]] + 0.5:.1f} dB on")
    for snr in (100, 110, 120):
        print(f"   U2 high-SNR penalty at {snr} dB: {gap_u2_asymptotic(scheme, float(db_to_linear(snr)), geom):.3e}")
