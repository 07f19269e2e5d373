# High-SNR behaviour of U2: OP ~ c / rho, i.e. diversity order one.
#
# The coefficient is omega * E[Z^(alpha/2)] for U2's squared-distance law,
# so the bigger spread of Z4 makes PASS's constant larger than CASS's.

# %%
from pinching_outage import (AccessScheme, OutageQuery, System, asymptotic_model, db_to_linear,
                             diversity_order_estimate, outage_asymptotic_u2, outage_probability)

for name, scheme in {"OMA": AccessScheme.oma(), "NOMA": AccessScheme.noma()}.items():
    for system in System:
        model = asymptotic_model(system, scheme)
        slope = diversity_order_estimate(system, scheme, 2, db_to_linear(110), db_to_linear(120))
        print(f"{system.value}/{name}: c = {model.coefficient_c_tilde:.4g}, diversity order {slope:.3f}")
        for snr in (90, 105, 120):
            rho = float(db_to_linear(snr))
            exact = outage_probability(OutageQuery(system, scheme, 2, rho))
            print(f"   {snr} dB  exact {exact:.4e}  c/rho {outage_asymptotic_u2(model, rho):.4e}")
