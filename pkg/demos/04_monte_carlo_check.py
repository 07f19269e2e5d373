# Closed form against simulation.
#
# The simulator places both users, puts the antenna at the centre (CASS) or
# above U1 (PASS), draws unit-mean exponential fading for U2 and counts rate
# shortfalls. Estimates depend only on (seed, trials, query), so the numbers
# below are the same on every machine and for any number of workers.

# %%
from pinching_outage import AccessScheme, McConfig, OutageQuery, System, db_to_linear, outage_probability, simulate_outage

mc = McConfig(trials=200_000, seed=2025, workers=4)
for system in System:
    for user in (1, 2):
        for snr in (65, 75, 85, 100):
            q = OutageQuery(system, AccessScheme.noma(), user, float(db_to_linear(snr)))
            exact = outage_probability(q)
            est = simulate_outage(q, mc)
            z = (est.p_hat - exact) / est.stderr if est.stderr else 0.0
            print(f"{system.value}/NOMA U{user} {snr:3d} dB  analytic {exact:.5f}  "
                  f"simulated {est.p_hat:.5f} +- {est.stderr:.5f}  ({z:+.2f} sigma)")
