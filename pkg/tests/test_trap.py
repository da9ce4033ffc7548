import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitetrap import (
    DomainError,
    ShallowTrapWarning,
    TrapParams,
    TruncationError,
    UsageError,
    build_ladder,
    build_position,
    deformation_f2,
    energy_deformed,
    energy_mpt,
    transition_frequency,
    truncation_level,
)
from finitetrap.trap import HBAR, bare_lowering

HARMONIC = 1e9


def test_derived_quantities(trap):
    assert trap.beta * trap.N == pytest.approx(math.sqrt(trap.N**2 + 1), rel=1e-15)
    assert trap.gamma == 1 / trap.N
    assert trap.n_max < trap.s
    assert deformation_f2(trap.n_max, trap) > 0


@pytest.mark.parametrize(
    "N, s, n_max",
    # s and floor(s) from an mpmath evaluation at 40 digits
    [(7, 3.03553390593274, 3), (30, 14.5083310198036, 14), (75, 37.0033331851984, 37), (15, 7.01664818918645, 7)],
)
def test_truncation_level(N, s, n_max):
    trap = TrapParams(N)
    assert trap.s == pytest.approx(s, rel=1e-13)
    assert trap.n_max == n_max == truncation_level(trap)


@pytest.mark.parametrize("k", [1, 3, 10])
def test_integral_s_is_excluded(k):
    # s = k exactly when N^2 = (2k+1)^2 - 1
    N = math.sqrt((2 * k + 1) ** 2 - 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShallowTrapWarning)
        trap = TrapParams(N)
    assert trap.n_max == k - 1


def test_shallow_trap_warns():
    with pytest.warns(ShallowTrapWarning):
        assert TrapParams(1.0).n_max == 0


def test_bad_depth():
    with pytest.raises(UsageError):
        TrapParams(0.0)
    with pytest.raises(UsageError):
        TrapParams(float("inf"))


class TestDeformation:
    def test_ground_level(self, trap):
        assert deformation_f2(0, trap) == trap.beta

    @pytest.mark.parametrize("n", [0, 1, 5, 20])
    def test_harmonic_limit(self, n):
        assert deformation_f2(n, TrapParams(HARMONIC)) == pytest.approx(1.0, abs=2 * (n + 1) / HARMONIC)

    def test_frozen_value(self):
        # sqrt(1 + 1/900) - 5/30 at 20 digits
        assert deformation_f2(5, TrapParams(30)) == pytest.approx(0.83388873465357562545, rel=1e-15)

    def test_range(self):
        trap = TrapParams(30)
        deformation_f2(trap.n_max + 2, trap)
        with pytest.raises(TruncationError):
            deformation_f2(trap.n_max + 3, trap)
        with pytest.raises(DomainError):
            deformation_f2(-1, trap)

    def test_negative_value_is_domain_error(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShallowTrapWarning)
            trap = TrapParams(0.5)
        with pytest.raises(DomainError):
            deformation_f2(2, trap)


class TestSpectrum:
    def test_identity(self, trap):
        for n in range(trap.n_max + 1):
            assert abs(energy_deformed(n, trap) - energy_mpt(n, trap)) <= 1e-12

    def test_ground_energy(self):
        trap = TrapParams(30)
        assert energy_deformed(0, trap) == pytest.approx(0.5 * (trap.beta - 1 / 30), rel=1e-15)
        assert energy_mpt(0, trap) == pytest.approx(0.5 * (trap.beta - 1 / 30), rel=1e-15)

    @pytest.mark.parametrize("n", [0, 1, 7, 40])
    def test_harmonic_limit(self, n):
        # the correction is (n^2 + n + 1/2)/N
        assert energy_deformed(n, TrapParams(HARMONIC)) == pytest.approx(n + 0.5, abs=2 * (n + 1) ** 2 / HARMONIC)

    def test_anharmonic_and_increasing(self, trap):
        E = np.array([energy_mpt(n, trap) for n in range(trap.n_max + 1)])
        gaps = np.diff(E)
        assert np.all(gaps > 0)
        assert np.all(np.diff(gaps) < 0)

    def test_top_level_is_highest_at_n7(self):
        trap = TrapParams(7)
        E = [energy_mpt(n, trap) for n in range(4)]
        assert int(np.argmax(E)) == 3

    def test_beyond_truncation(self):
        trap = TrapParams(7)
        with pytest.raises(TruncationError):
            energy_mpt(4, trap)
        with pytest.raises(TruncationError):
            energy_deformed(4, trap)

    def test_transition_frequency_is_level_gap(self, trap):
        for n in range(trap.n_max):
            gap = energy_deformed(n + 1, trap) - energy_deformed(n, trap)
            assert abs(transition_frequency(n, trap) - gap) <= 1e-12

    def test_transition_frequency_limits(self):
        trap = TrapParams(30)
        assert transition_frequency(0, trap) == pytest.approx(trap.beta - 2 / 30, rel=1e-15)
        for n in (0, 3, 12):
            assert transition_frequency(n, TrapParams(HARMONIC)) == pytest.approx(1.0, abs=1e-7)

    def test_harmonic_reduction_rate(self):
        # deviation from n + 1/2 shrinks like 1/N
        dev = [abs(energy_mpt(5, TrapParams(N)) - 5.5) for N in (1e4, 1e8)]
        assert dev[0] / dev[1] == pytest.approx(1e4, rel=1e-3)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=3.0, max_value=300.0))
def test_spectrum_identity_property(N):
    trap = TrapParams(N)
    E = [energy_mpt(n, trap) for n in range(trap.n_max + 1)]
    assert all(abs(energy_deformed(n, trap) - e) <= 1e-12 * max(1.0, abs(e)) for n, e in enumerate(E))
    assert all(b > a for a, b in zip(E, E[1:]))


class TestLadder:
    def test_first_element(self):
        trap = TrapParams(30)
        A, Ad = build_ladder(trap, trap.n_max + 1)
        assert A.entries[0, 1] == pytest.approx(math.sqrt(trap.beta - 1 / 30), rel=1e-15)
        assert np.array_equal(Ad.entries, A.entries.conj().T)

    def test_only_superdiagonal(self, trap):
        A, _ = build_ladder(trap, trap.n_max + 1)
        off = A.entries - np.diag(np.diag(A.entries, 1), 1)
        assert not off.any()

    def test_commutator(self, trap):
        dim = trap.n_max + 1
        A, Ad = build_ladder(trap, dim)
        C = A.entries @ Ad.entries - Ad.entries @ A.entries
        n = np.arange(dim - 1)
        assert np.max(np.abs(np.diag(C)[:-1] - (trap.beta - (2 * n + 1) / trap.N))) <= 1e-12
        assert np.max(np.abs(C - np.diag(np.diag(C)))) <= 1e-14

    def test_harmonic_limit(self):
        A, _ = build_ladder(TrapParams(HARMONIC), 30)
        assert np.max(np.abs(A.entries - bare_lowering(30))) <= 1e-7

    def test_dim_checked(self):
        trap = TrapParams(7)
        with pytest.raises(TruncationError):
            build_ladder(trap, 5)


class TestPosition:
    def test_hermitian_and_element(self):
        trap = TrapParams(30)
        x = build_position(trap, 0.22, 15)
        assert np.max(np.abs(x.entries - x.entries.conj().T)) <= 1e-12
        assert x.entries[0, 1] == pytest.approx(0.22 * math.sqrt(deformation_f2(1, trap)), rel=1e-15)

    def test_harmonic_limit(self):
        a = bare_lowering(25)
        x = build_position(TrapParams(HARMONIC), 0.22, 25)
        assert np.max(np.abs(x.entries - 0.22 * (a + a.T))) <= 1e-7


class TestPhysical:
    # 40Ca+ in a 1 MHz trap with a 20 nm range
    MASS = 40 * 1.66053906660e-27
    OMEGA = 2 * math.pi * 1e6
    WIDTH = 20e-9

    def test_conversion(self):
        trap = TrapParams.from_physical(self.MASS, self.OMEGA, self.WIDTH)
        D = trap.physical.depth
        assert trap.N == pytest.approx(4 * D / (HBAR * self.OMEGA), rel=1e-12)
        assert trap.N == pytest.approx(2 * self.MASS * self.OMEGA * self.WIDTH**2 / HBAR, rel=1e-15)

    def test_consistent_depth_accepted(self):
        D = 0.5 * self.MASS * self.OMEGA**2 * self.WIDTH**2
        TrapParams.from_physical(self.MASS, self.OMEGA, self.WIDTH, depth=D)
        with pytest.raises(UsageError):
            TrapParams.from_physical(self.MASS, self.OMEGA, self.WIDTH, depth=D * (1 + 1e-9))
