"""Constellation construction, detection, and relaxed-region geometry."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirmod.errors import InvalidOrderError, SingularPhaseError
from dirmod.modulation import (
    Constellation,
    build_constellation,
    detect,
    relaxed_region,
    tan_of_phase,
)


class TestBuildConstellation:
    def test_orders_and_unit_modulus(self):
        for order in (2, 3, 4, 8, 16, 32):
            con = build_constellation(order)
            assert len(con.points) == order
            np.testing.assert_allclose(np.abs(con.points), 1.0, atol=1e-15)

    def test_points_distinct_and_sorted_by_angle(self):
        con = build_constellation(8)
        angles = np.angle(con.points)
        assert np.all(np.diff(angles) > 0)

    def test_8psk_offset_auto_adjusted_off_the_axis(self):
        # with zero offset the k=2 point of 8-PSK sits at pi/2 where the
        # phase-line constraint tangent blows up
        con = build_constellation(8, requested_offset=0.0)
        assert con.offset_adjusted
        assert con.phase_offset == pytest.approx(np.pi / 8)
        assert np.min(np.abs(np.abs(np.angle(con.points)) - np.pi / 2)) > 1e-3

    def test_explicit_safe_offset_kept(self):
        con = build_constellation(4, requested_offset=np.pi / 4)
        assert not con.offset_adjusted
        assert con.phase_offset == pytest.approx(np.pi / 4)

    def test_bad_order_rejected(self):
        with pytest.raises(InvalidOrderError):
            build_constellation(1)
        with pytest.raises(InvalidOrderError):
            build_constellation(0)

    def test_frozen(self):
        con = build_constellation(8)
        with pytest.raises(AttributeError):
            con.order = 16


class TestDetect:
    def test_exact_points_detected(self):
        con = build_constellation(8)
        got = detect(con.points, con)
        np.testing.assert_array_equal(got, np.arange(8))

    def test_noisy_scalar(self):
        con = build_constellation(4)
        target = con.points[2]
        assert detect(target * 1.3 + 0.01j, con) == 2

    def test_tie_breaks_to_lower_index(self):
        con = build_constellation(4, requested_offset=np.pi / 4)
        # the origin is equidistant from everything
        assert detect(np.array([0.0 + 0.0j]), con)[0] == 0

    @given(st.integers(0, 7), st.floats(0.1, 5.0))
    def test_scaling_invariance(self, index, scale):
        con = build_constellation(8)
        y = con.points[index] * scale
        assert detect(np.array([y]), con)[0] == index


class TestTanOfPhase:
    @given(st.floats(-3.0, 3.0))
    def test_phase_line_identity(self, phi):
        # Re(s) tan(arg s) - Im(s) == 0 for unit s off the singular set
        if abs(abs(phi) - np.pi / 2) < 1e-3:
            return
        s = np.exp(1j * phi)
        assert abs(s.real * tan_of_phase(s) - s.imag) < 1e-12

    def test_vector_input(self):
        s = np.exp(1j * np.array([0.1, -0.7, 2.0]))
        np.testing.assert_allclose(tan_of_phase(s), np.tan([0.1, -0.7, 2.0]))

    def test_singularity_raises(self):
        with pytest.raises(SingularPhaseError):
            tan_of_phase(1j)


class TestRelaxedRegion:
    def test_m2_wedge_slopes_singular(self):
        con = build_constellation(2)
        with pytest.raises(SingularPhaseError):
            relaxed_region(con.points[0], 2, gamma=4.0)

    def test_reference_symbol_scaled_is_on_the_corner(self):
        gamma = 10 ** 1.556
        # M = 4 is skipped: its auto offset pi/4 puts both wedge edges on
        # the imaginary axis, which relaxed_region rejects as singular
        for order, offset in ((4, np.pi / 8), (8, 0.0), (16, 0.0)):
            con = build_constellation(order, requested_offset=offset)
            region = relaxed_region(np.exp(1j * con.phase_offset), order,
                                    gamma)
            v = np.sqrt(gamma) * np.exp(1j * con.phase_offset)
            # the wedge vertex itself: slack 0 up to rounding
            assert region.slacks(np.array([v])).min() > -1e-12
            # double the amplitude is strictly inside (wedge opens outward)
            assert region.contains(2.0 * v)

    def test_m4_auto_offset_edges_are_singular(self):
        con = build_constellation(4)
        with pytest.raises(SingularPhaseError):
            relaxed_region(con.points[0], 4, 4.0)

    def test_below_threshold_is_outside(self):
        con = build_constellation(8)
        gamma = 10.0
        region = relaxed_region(np.exp(1j * con.phase_offset), 8, gamma)
        v = 0.25 * np.sqrt(gamma) * np.exp(1j * con.phase_offset)
        assert not region.contains(v)

    def test_outside_wedge_angle_is_outside(self):
        con = build_constellation(8)
        gamma = 4.0
        region = relaxed_region(np.exp(1j * con.phase_offset), 8, gamma)
        # rotate past the pi/8 half-angle
        v = np.sqrt(gamma) * np.exp(1j * (con.phase_offset + 2.2 * np.pi / 8))
        assert not region.contains(v)

    @given(st.floats(-0.99, 0.99), st.floats(0.0, 10.0))
    def test_wedge_interior_parametrization(self, frac, dist):
        """The wedge is the vertex-anchored cone: every point
        sqrt(gamma)*s0 + t*exp(i(phi0 + frac*pi/M)) with |frac| < 1 and
        t >= 0 satisfies both edge constraints."""
        order = 8
        gamma = 9.0
        con = build_constellation(order)
        s0 = np.exp(1j * con.phase_offset)
        region = relaxed_region(s0, order, gamma)
        direction = np.exp(1j * (con.phase_offset + frac * np.pi / order))
        v = np.sqrt(gamma) * s0 + dist * direction
        assert region.slacks(np.array([v])).min() > -1e-10
