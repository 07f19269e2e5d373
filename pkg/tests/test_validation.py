import numpy as np
import pytest

from pinching_outage.geometry import DistanceKind, RoomGeometry, SquaredDistanceDistribution
from pinching_outage.link import AccessScheme, ChannelParams
from pinching_outage.outage import System, db_to_linear
from pinching_outage.validation import (
    GEOMETRIES,
    conformance_checks,
    distribution_checks,
    ks_threshold,
    run_validation,
    segment_conformance,
)


class CorruptedZ1(SquaredDistanceDistribution):
    """Z1 with its outer cdf branch scaled down by 3 percent."""

    def cdf(self, z):
        F = super().cdf(z)
        if self.kind is not DistanceKind.Z1:
            return F
        D2 = self.geometry.side_length_m ** 2
        outer = np.asarray(z) > self.geometry.antenna_height_m ** 2 + D2 / 4
        lo, hi = self.support()
        return np.where(outer & (np.asarray(z) < hi), 0.97 * F, F)


def test_ks_threshold():
    assert ks_threshold(1_000_000) == 0.002
    assert ks_threshold(100_000) == pytest.approx(2 / np.sqrt(1e5))


def test_distribution_suite_passes():
    checks = distribution_checks(100_000, seed=0)
    assert len(checks) == 3 * 4 * 5
    assert [c.name for c in checks if not c.passed] == []


def test_negative_control_names_z1_cdf_check():
    checks = distribution_checks(100_000, seed=0, factory=CorruptedZ1, geometries=GEOMETRIES[:1])
    failed = [c.name for c in checks if not c.passed]
    assert failed
    assert all(name.startswith("Z1 ") for name in failed)
    assert "Z1 cdf ks (D=20, d=5)" in failed


def test_run_validation_rejects_unknown_inputs():
    with pytest.raises(ValueError):
        run_validation("medium")
    with pytest.raises(ValueError):
        run_validation("quick", suites=["everything"])


def test_conformance_suite_passes():
    checks = conformance_checks()
    assert len(checks) == 2 * 4 * (3 + 5)
    assert all(c.passed for c in checks)


@pytest.mark.parametrize("system", list(System))
@pytest.mark.parametrize("geom", GEOMETRIES)
def test_explicit_terms_match_generic_integral_other_rooms(system, geom):
    for explicit, generic in segment_conformance(system, AccessScheme.noma(), float(db_to_linear(95)),
                                                 geom, ChannelParams()):
        assert explicit == pytest.approx(generic, abs=1e-12)


def test_check_summary_is_json_ready():
    c = conformance_checks(snr_db=(80,))[0]
    d = c.as_dict()
    assert set(d) == {"name", "statistic", "threshold", "passed"}
