import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dit.params import ParameterError, paper_defaults
from dit.spectrum import reflection, sweep
from dit.stark import (
    StarkDrive,
    cavity_amplitude_ratio,
    kerr_sweep,
    shifted_reflection,
    stark_operator,
    stark_shift_limit,
)

from conftest import log_uniform

G = 0.3
# reflection phase at zero probe detuning with one photon at Delta = -6g;
# frozen from direct evaluation after the oracle cross-check
PHI_KERR_M6G = 2.5585261173402016


def pi_half_crossings(grid):
    """Detunings where |phase| crosses pi/2, linearly interpolated."""
    a = np.abs(grid.phase) - np.pi / 2
    idx = np.where(np.sign(a[:-1]) != np.sign(a[1:]))[0]
    x = grid.detunings
    return np.array([x[i] - a[i] * (x[i + 1] - x[i]) / (a[i + 1] - a[i]) for i in idx])


class TestDrive:
    def test_modes_are_exclusive(self):
        with pytest.raises(ParameterError):
            StarkDrive(Delta=-1.0, n_photons=1.0, mode="flux", input_flux=1.0)
        with pytest.raises(ParameterError):
            StarkDrive(Delta=-1.0, mode="photons", input_flux=1.0)
        with pytest.raises(ParameterError):
            StarkDrive.photons(-1.0, -1.0)

    def test_flux_substitution(self):
        p = paper_defaults()
        assert StarkDrive.flux(-1.8, 6.0).photon_number(p) == pytest.approx(1.0)

    def test_round_trip(self):
        for d in (StarkDrive.off(), StarkDrive.photons(-1.8, 2.0), StarkDrive.flux(0.5, 3.0)):
            assert StarkDrive.from_dict(d.to_dict()) == d


class TestCavityRatio:
    def test_resonant_is_exact(self):
        p = paper_defaults()
        res = cavity_amplitude_ratio(p, p.omega0 - p.nu)
        # -sqrt(g)/g and -1/sqrt(g) differ only by rounding
        assert res.ratio == pytest.approx(-1 / math.sqrt(p.gamma), rel=1e-15)
        assert res.ratio.imag == 0.0
        assert res.rel_error < 1e-15

    def test_detuned_by_gamma(self):
        p = paper_defaults()
        res = cavity_amplitude_ratio(p, p.omega0 - p.nu - p.gamma)
        sg = math.sqrt(p.gamma)
        assert res.ratio == pytest.approx(-sg * (1 - 1j) / (2 * p.gamma), rel=1e-14)
        assert abs(res.ratio) == pytest.approx(1 / math.sqrt(2 * p.gamma), rel=1e-14)

    def test_large_gamma_limit(self):
        res = cavity_amplitude_ratio(paper_defaults(gamma=1e8), -1.0)
        assert res.rel_error < 1e-7


class TestStarkOperator:
    def test_far_detuned_shift(self):
        v = stark_operator(paper_defaults(), StarkDrive.photons(-6 * G, 1.0))
        assert v.shift == pytest.approx(-0.1, rel=1e-7)
        assert v.shift > -0.1
        assert v.two_photon_loss == pytest.approx(0.09 * 1e-3 / (1.8 ** 2 + 0.25e-6), rel=1e-14)

    def test_no_photons(self):
        assert stark_operator(paper_defaults(), StarkDrive.photons(-1.8, 0.0)).S == 0

    def test_no_field(self):
        assert stark_operator(paper_defaults(), StarkDrive.off()).S == 0

    def test_resonant_is_pure_loss(self):
        v = stark_operator(paper_defaults(), StarkDrive.photons(0.0, 1.0))
        assert v.shift == 0.0
        assert v.two_photon_loss == pytest.approx(2 * 0.09 / (1e-3 / 2), rel=1e-14)

    def test_singular(self):
        with pytest.raises(ParameterError):
            stark_operator(paper_defaults(tau3=0.0), StarkDrive.photons(0.0, 1.0))

    def test_matches_operator_form(self):
        # S = 2 i g2^2 n / (i Delta + tau3/2), evaluated as written
        p = paper_defaults(g2=0.17, tau3=0.02)
        for Delta in (-3.0, -0.01, 0.004, 2.0):
            want = 2j * p.g2 ** 2 * 1.5 / (1j * Delta + p.tau3 / 2)
            assert stark_operator(p, StarkDrive.photons(Delta, 1.5)).S == pytest.approx(want, rel=1e-13)

    @given(st.floats(0, 100), st.floats(-50, 50).filter(lambda x: abs(x) > 1e-6))
    def test_linear_in_photon_number(self, n, Delta):
        p = paper_defaults()
        one = stark_operator(p, StarkDrive.photons(Delta, 1.0)).S
        assert stark_operator(p, StarkDrive.photons(Delta, n)).S == pytest.approx(n * one, rel=1e-14, abs=1e-300)

    @given(
        st.floats(1e-6, 1e3) | st.floats(-1e3, -1e-6),
        log_uniform(1e-6, 1e2),
        log_uniform(1e-3, 10.0),
    )
    def test_far_detuned_bound(self, Delta, tau3, g2):
        p = paper_defaults(tau3=tau3, g2=g2)
        v = stark_operator(p, StarkDrive.photons(Delta, 1.0))
        lim = 2 * g2 ** 2 / Delta
        assert abs(v.shift - lim) / abs(lim) <= tau3 ** 2 / (4 * Delta ** 2) * (1 + 1e-12) + 1e-15
        assert np.sign(v.shift) == np.sign(Delta)
        assert v.two_photon_loss >= 0

    def test_minimum_detuning_shift(self):
        p = paper_defaults()
        half = (p.gamma + p.kappa) / 2
        v = stark_operator(p, StarkDrive.photons(-half, 1.0))
        # 2 g^2 / |Delta| at |Delta| = (gamma + kappa)/2 is 4 g^2 / (gamma + kappa)
        target = 4 * p.g2 ** 2 / (p.kappa + p.gamma)
        exact = target / (1 + p.tau3 ** 2 / (p.gamma + p.kappa) ** 2)
        assert abs(v.shift) == pytest.approx(exact, rel=1e-14)
        assert abs(abs(v.shift) - target) / target <= p.tau3 ** 2 / (p.gamma + p.kappa) ** 2
        # still at least the DIT crossover width, so the phase flips
        assert abs(v.shift) >= 2 * p.g2 ** 2 / (p.kappa + p.gamma)


class TestShiftedReflection:
    def test_infinite_Delta_is_unshifted(self):
        p = paper_defaults()
        for dw in np.linspace(-1, 1, 11):
            assert shifted_reflection(p, StarkDrive.off(), dw).r == reflection(p, dw).r

    def test_kerr_phase_flip(self):
        p = paper_defaults()
        on = shifted_reflection(p, StarkDrive.photons(-6 * G, 1.0), 0.0).phi
        off = shifted_reflection(p, StarkDrive.off(), 0.0).phi
        assert off == 0.0
        assert on == pytest.approx(PHI_KERR_M6G, abs=1e-12)
        assert abs(on - off) >= 0.75 * math.pi

    def test_physical_loss_sign_conjugates(self):
        p = paper_defaults()
        drive = StarkDrive.photons(-0.05, 1.0)
        s = stark_operator(p, drive).S
        lit = shifted_reflection(p, drive, 0.02).r
        phys = shifted_reflection(p, drive, 0.02, loss_sign="physical").r
        assert lit != phys
        d = p.g1 ** 2 / (1j * (0.02 + s.conjugate()) + p.tau2 / 2)
        assert phys == pytest.approx((0.02j + d - 2.95) / (0.02j + d + 3.05), rel=1e-13)
        with pytest.raises(ParameterError):
            shifted_reflection(p, drive, 0.0, loss_sign="sideways")


class TestKerrSweep:
    grid = np.linspace(-1, 1, 2001)

    def test_single_unshifted_drive_equals_sweep(self):
        p = paper_defaults()
        (k,) = kerr_sweep(p, [StarkDrive.off()], self.grid)
        assert np.array_equal(k.r, sweep(p, self.grid).r)

    def test_empty_inputs_rejected(self):
        with pytest.raises(ParameterError):
            kerr_sweep(paper_defaults(), [], self.grid)
        with pytest.raises(ParameterError):
            kerr_sweep(paper_defaults(), [StarkDrive.off()], [])

    @pytest.mark.parametrize("k", [-20, -10, -6])
    def test_translation(self, k):
        p = paper_defaults()
        base, moved = kerr_sweep(p, [StarkDrive.off(), StarkDrive.photons(k * G, 1.0)], self.grid)
        c0, c1 = pi_half_crossings(base), pi_half_crossings(moved)
        assert len(c0) == len(c1) == 2
        expected = abs(stark_shift_limit(p, moved.drive))
        np.testing.assert_allclose(np.abs(c1 - c0), expected, rtol=0.10)

    def test_two_photons_move_twice_as_far(self):
        p = paper_defaults()
        base, one, two = kerr_sweep(
            p, [StarkDrive.off(), StarkDrive.photons(-6 * G, 1.0), StarkDrive.photons(-6 * G, 2.0)], self.grid
        )
        c0 = pi_half_crossings(base)
        ratio = (pi_half_crossings(two) - c0).mean() / (pi_half_crossings(one) - c0).mean()
        assert ratio == pytest.approx(2.0, rel=0.05)

    def test_reflectivity_dip_moves_by_minus_shift(self):
        p = paper_defaults(g1=0.03)
        base, moved = kerr_sweep(p, [StarkDrive.off(), StarkDrive.photons(-6 * G, 1.0)], self.grid)
        step = self.grid[1] - self.grid[0]
        x0 = self.grid[np.argmin(base.reflectivity)]
        x1 = self.grid[np.argmin(moved.reflectivity)]
        assert abs((x1 - x0) - (-moved.stark.shift)) <= step
