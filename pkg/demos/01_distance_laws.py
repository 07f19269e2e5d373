# Squared distances between the antenna and each user.
#
# Four random variables drive every outage result: Z1/Z2 (fixed antenna at
# the centre of room 1 to U1/U2) and Z3/Z4 (pinching antenna parked above
# U1's x coordinate to U1/U2). Here we look at their supports, a few cdf
# values and how well geometric sampling agrees with the closed forms.

# %%
import numpy as np
from scipy import stats

from pinching_outage import DistanceKind, RoomGeometry, SquaredDistanceDistribution, sample_squared_distance

geom = RoomGeometry(side_length_m=20.0, antenna_height_m=5.0)
rng = np.random.default_rng(1)

# %% supports and breakpoints (squared meters)
for kind in DistanceKind:
    law = SquaredDistanceDistribution(kind, geom)
    print(kind.value, "support", law.support(), "pieces at", law.breakpoints()[1:-1])

# %% the pinching antenna shrinks U1's distance a lot: median of Z1 vs Z3
z1 = SquaredDistanceDistribution(DistanceKind.Z1, geom)
z3 = SquaredDistanceDistribution(DistanceKind.Z3, geom)
grid = np.linspace(25, 225, 2001)
print("median Z1 ~", grid[np.searchsorted(z1.cdf(grid), 0.5)], "m^2")
print("median Z3 ~", grid[np.searchsorted(z3.cdf(grid), 0.5)], "m^2")

# %% but it moves away from U2: Z4 is wider than Z2
for kind in (DistanceKind.Z2, DistanceKind.Z4):
    law = SquaredDistanceDistribution(kind, geom)
    z = sample_squared_distance(kind, geom, rng, 200_000)
    print(kind.value, "sample mean %.1f" % z.mean(), "KS vs closed form %.4f" % stats.kstest(z, law.cdf).statistic)

# %% survival function near the top of Z4's support keeps full relative precision
z4 = SquaredDistanceDistribution(DistanceKind.Z4, geom)
top = z4.support()[1]
for gap in (10.0, 1.0, 0.1):
    print("P(Z4 > top - %g) = %.3e" % (gap, z4.sf(top - gap)))
