"""Symbol-level precoder design: the three modes and their guarantees."""

import numpy as np
import pytest

from dirmod.channel import rayleigh
from dirmod.errors import DirmodError, InfeasibleDesignError
from dirmod.modulation import build_constellation
from dirmod.precoder import (
    DesignMode,
    build_power_min_fixed,
    check_feasibility,
    design,
    dump_reduced_csv,
    load_reduced_csv,
    solve_problem,
    verify,
    verify_problem,
)

GAMMA = 10 ** 1.556  # 15.56 dB
CON8 = build_constellation(8)


def draw(rng, n_users, n_t):
    h = rayleigh(n_users, n_t, seed=rng)
    s = CON8.points[rng.integers(0, 8, n_users)]
    return h, s


class TestPowerFixed:
    def test_constraints_hold(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            n_t = int(rng.integers(3, 10))
            n_u = int(rng.integers(1, n_t + 1))
            h, s = draw(rng, n_u, n_t)
            sol = design(h, s, GAMMA)
            rep = sol.report
            assert rep.feasible
            assert rep.max_phase_error < 1e-6
            assert rep.min_slack > -1e-6 * np.sqrt(GAMMA)

    def test_received_symbols_scale(self):
        rng = np.random.default_rng(1)
        h, s = draw(rng, 4, 8)
        sol = design(h, s, GAMMA)
        y = h @ sol.w
        # each user's noiseless sample lies on its own symbol ray at or
        # above the amplitude threshold
        np.testing.assert_allclose(np.angle(y / s), 0.0, atol=1e-9)
        assert np.all(np.abs(y) ** 2 >= GAMMA * (1 - 1e-9))

    def test_objective_is_transmit_power(self):
        rng = np.random.default_rng(2)
        h, s = draw(rng, 3, 6)
        sol = design(h, s, GAMMA)
        assert sol.objective == pytest.approx(np.linalg.norm(sol.w) ** 2)

    def test_gamma_scaling_scales_power_linearly(self):
        rng = np.random.default_rng(3)
        h, s = draw(rng, 3, 6)
        p1 = design(h, s, 10.0).objective
        p2 = design(h, s, 40.0).objective
        assert p2 == pytest.approx(4.0 * p1, rel=1e-8)

    def test_single_user_matched_filter_power(self):
        """With one user the optimum is the matched filter: the design
        power must equal gamma / ||h||^2."""
        rng = np.random.default_rng(4)
        h = rayleigh(1, 6, seed=rng)
        s = CON8.points[[2]]
        sol = design(h, s, GAMMA)
        expected = GAMMA / np.linalg.norm(h) ** 2
        assert sol.objective == pytest.approx(expected, rel=1e-10)


class TestPowerRelaxed:
    def test_never_worse_than_fixed(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n_t = int(rng.integers(3, 9))
            n_u = int(rng.integers(1, n_t + 1))
            h, s = draw(rng, n_u, n_t)
            p_fixed = design(h, s, GAMMA).objective
            p_rel = design(h, s, GAMMA, mode=DesignMode.POWER_RELAXED,
                           constellation=CON8).objective
            assert p_rel <= p_fixed * (1 + 1e-9)

    def test_received_points_detect_correctly(self):
        from dirmod.modulation import detect
        rng = np.random.default_rng(6)
        for _ in range(20):
            h, s = draw(rng, 4, 8)
            idx = np.array([int(np.argmin(np.abs(CON8.points - z)))
                            for z in s])
            sol = design(h, s, GAMMA, mode=DesignMode.POWER_RELAXED,
                         constellation=CON8)
            got = detect(h @ sol.w, CON8)
            np.testing.assert_array_equal(got, idx)

    def test_wedge_slacks_reported(self):
        rng = np.random.default_rng(7)
        h, s = draw(rng, 3, 6)
        sol = design(h, s, GAMMA, mode=DesignMode.POWER_RELAXED,
                     constellation=CON8)
        assert sol.report.feasible
        assert sol.report.min_slack > -1e-6 * np.sqrt(GAMMA)

    def test_requires_constellation(self):
        rng = np.random.default_rng(8)
        h, s = draw(rng, 3, 6)
        with pytest.raises(DirmodError):
            design(h, s, GAMMA, mode=DesignMode.POWER_RELAXED)


class TestSignalLevel:
    def test_received_energy_at_most_fixed(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            n_t = int(rng.integers(3, 9))
            n_u = int(rng.integers(1, n_t + 1))
            h, s = draw(rng, n_u, n_t)
            w_fixed = design(h, s, GAMMA).w
            sol = design(h, s, GAMMA, mode=DesignMode.SIGNAL_LEVEL)
            lhs = np.linalg.norm(h @ sol.w) ** 2
            rhs = np.linalg.norm(h @ w_fixed) ** 2
            assert lhs <= rhs * (1 + 1e-9)

    def test_all_bind_when_tall(self):
        """With n_t >= n_users the received level floor is achievable:
        every antenna sits exactly at the threshold."""
        rng = np.random.default_rng(10)
        for _ in range(10):
            h, s = draw(rng, 4, 9)
            sol = design(h, s, GAMMA, mode=DesignMode.SIGNAL_LEVEL)
            np.testing.assert_allclose(np.abs(h @ sol.w) ** 2, GAMMA,
                                       rtol=1e-8)

    def test_objective_is_received_energy(self):
        rng = np.random.default_rng(11)
        h, s = draw(rng, 3, 6)
        sol = design(h, s, GAMMA, mode=DesignMode.SIGNAL_LEVEL)
        assert sol.objective == pytest.approx(
            np.linalg.norm(h @ sol.w) ** 2)

    def test_phases_still_locked(self):
        rng = np.random.default_rng(12)
        h, s = draw(rng, 5, 7)
        sol = design(h, s, GAMMA, mode=DesignMode.SIGNAL_LEVEL)
        rep = verify(sol.w, h, s, GAMMA, DesignMode.SIGNAL_LEVEL)
        assert rep.feasible and rep.max_phase_error < 1e-6


class TestFeasibilityBoundary:
    def test_zero_free_dimensions_rejected(self):
        # rank 2 N_t kills every degree of freedom
        h = rayleigh(4, 2, seed=1)
        s = CON8.points[:4]
        with pytest.raises(InfeasibleDesignError):
            design(h, s, 10.0)

    def test_check_feasibility_threshold(self):
        assert check_feasibility(4, 7)        # 2*4 - 7 = 1
        assert not check_feasibility(4, 8)    # 2*4 - 8 = 0
        assert check_feasibility(16, 31)

    def test_one_free_dimension_no_crash(self):
        """2 N_t - rank = 1: design either succeeds with valid output or
        reports infeasibility cleanly, never crashes.  With a single free
        direction the constraint cone almost never contains it, so
        rejections dominate."""
        rng = np.random.default_rng(13)
        for _ in range(40):
            h, s = draw(rng, 7, 4)  # 2*4 - 7 = 1 free dimension
            try:
                sol = design(h, s, 10.0)
                assert sol.report.feasible
            except InfeasibleDesignError as exc:
                assert str(exc)  # carries a reason

    def test_max_users_at_boundary_mostly_feasible(self):
        rng = np.random.default_rng(14)
        ok = 0
        for _ in range(20):
            h, s = draw(rng, 5, 8)  # plenty of slack: 2*8 - 5 = 11
            sol = design(h, s, 10.0)
            ok += bool(sol.report.feasible)
        assert ok == 20


class TestSolverChoices:
    def test_iterative_close_to_nnls(self):
        rng = np.random.default_rng(15)
        h, s = draw(rng, 4, 8)
        p_nnls = design(h, s, GAMMA, solver="nnls").objective
        p_iter = design(h, s, GAMMA, solver="iterative").objective
        assert p_iter == pytest.approx(p_nnls, rel=1e-3)

    def test_oracle_matches_nnls_small(self):
        rng = np.random.default_rng(16)
        for _ in range(10):
            h, s = draw(rng, 2, 3)  # 2*3 - 2 = 4 free dims: oracle-sized
            p_nnls = design(h, s, GAMMA, solver="nnls").objective
            p_oracle = design(h, s, GAMMA, solver="oracle").objective
            assert p_nnls == pytest.approx(p_oracle, rel=1e-6, abs=1e-9)

    def test_unknown_solver_rejected(self):
        rng = np.random.default_rng(17)
        h, s = draw(rng, 3, 6)
        with pytest.raises(DirmodError):
            design(h, s, GAMMA, solver="simplex")


class TestValidationAndIo:
    def test_dimension_mismatch(self):
        h = rayleigh(3, 6, seed=0)
        with pytest.raises(ValueError):
            design(h, CON8.points[:2], 10.0)

    def test_nonpositive_gamma(self):
        h = rayleigh(3, 6, seed=0)
        with pytest.raises(ValueError):
            design(h, CON8.points[:3], 0.0)

    def test_verify_flags_phase_corruption(self):
        rng = np.random.default_rng(18)
        h, s = draw(rng, 3, 6)
        sol = design(h, s, GAMMA)
        rep = verify(sol.w * np.exp(0.25j), h, s, GAMMA,
                     DesignMode.POWER_FIXED)
        assert not rep.feasible
        assert rep.max_phase_error == pytest.approx(0.25, abs=1e-9)

    def test_verify_flags_amplitude_shortfall(self):
        rng = np.random.default_rng(19)
        h, s = draw(rng, 3, 6)
        sol = design(h, s, GAMMA)
        rep = verify(0.5 * sol.w, h, s, GAMMA, DesignMode.POWER_FIXED)
        assert not rep.feasible

    def test_reduced_problem_csv_roundtrip(self, tmp_path):
        rng = np.random.default_rng(20)
        h, s = draw(rng, 3, 6)
        prob = build_power_min_fixed(h, s, GAMMA)
        path = tmp_path / "reduced.csv"
        dump_reduced_csv(prob, path)
        g_mat, target, weight, mode, gamma = load_reduced_csv(path)
        np.testing.assert_allclose(g_mat, prob.g_mat, atol=1e-12)
        np.testing.assert_allclose(target, prob.target, atol=1e-12)
        assert mode == DesignMode.POWER_FIXED
        assert gamma == pytest.approx(GAMMA)
        assert weight is None

    def test_solve_problem_verify_problem_consistency(self):
        rng = np.random.default_rng(21)
        h, s = draw(rng, 4, 7)
        prob = build_power_min_fixed(h, s, GAMMA)
        lam, iterations = solve_problem(prob)
        assert iterations >= 0
        from dirmod.precoder import assemble
        w = assemble(lam, prob.e_basis, 7)
        rep = verify_problem(prob, w)
        assert rep.feasible
