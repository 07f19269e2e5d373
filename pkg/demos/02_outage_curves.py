# Outage probability of both users, CASS against PASS, OMA and NOMA.
#
# U1 (line of sight) stops failing once the antenna can reach the farthest
# point of room 1; the pinching antenna gets there 2.55 dB earlier because it
# only has to cover the y offset. U2 (behind the wall, Rayleigh) pays a small
# price for the antenna following U1.

# %%
import numpy as np

from pinching_outage import AccessScheme, OutageQuery, System, db_to_linear, linear_to_db, outage_probability
from pinching_outage import zero_outage_threshold_u1

schemes = {"OMA": AccessScheme.oma(), "NOMA": AccessScheme.noma(alpha1=0.1)}
snr_db = np.arange(60, 121, 10)

# %% zero-outage SNR of U1
for name, scheme in schemes.items():
    for system in System:
        print("%s/%s U1 never in outage from %.2f dB" % (
            system.value, name, linear_to_db(zero_outage_threshold_u1(system, scheme))))

# %% curves
print("\nsnr   " + "  ".join("%-14s" % f"{s.value}/{n}/U{u}" for n in schemes for s in System for u in (1, 2)))
for s_db in snr_db:
    rho = float(db_to_linear(s_db))
    row = [outage_probability(OutageQuery(system, scheme, user, rho))
           for scheme in schemes.values() for system in System for user in (1, 2)]
    print("%3d   " % s_db + "  ".join("%-14.4e" % p for p in row))

# %% NOMA trades U1 for U2 (fairness)
rho = float(db_to_linear(80))
for user in (1, 2):
    oma = outage_probability(OutageQuery(System.PASS, schemes["OMA"], user, rho))
    noma = outage_probability(OutageQuery(System.PASS, schemes["NOMA"], user, rho))
    print(f"PASS U{user} at 80 dB: OMA {oma:.3e}  NOMA {noma:.3e}")
