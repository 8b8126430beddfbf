import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jetmech import (
    LagrangianModel,
    MomentumState,
    NonFinite,
    SingularHessian,
    VelocityState,
    integrate_hamilton,
    integrate_lagrangian,
    legendre,
)
from jetmech.dynamics import time_grid

VARMASS = LagrangianModel.from_string("0.5*(1 + 0.5*q0^2)*v0^2 - 0.5*q0^2 + sin(t)*q0*v0", 1)


def test_harmonic_period(harmonic):
    tr = integrate_lagrangian(harmonic, VelocityState([1.0], [0.0], 0.0), 2 * math.pi, 1e-3)
    assert tr.times[-1] == 2 * math.pi
    assert abs(tr.q[-1, 0] - 1.0) <= 1e-9
    assert abs(tr.v[-1, 0]) <= 1e-9


def test_harmonic_tracks_cosine(harmonic):
    tr = integrate_lagrangian(harmonic, VelocityState([1.0], [0.0], 0.0), 3.0, 1e-2)
    assert np.max(np.abs(tr.q[:, 0] - np.cos(tr.times))) < 1e-8
    assert np.max(np.abs(tr.v[:, 0] + np.sin(tr.times))) < 1e-8


def test_free_particle_line(free):
    tr = integrate_lagrangian(free, VelocityState([0.0], [2.0], 0.0), 1.0, 1e-3)
    assert abs(tr.q[-1, 0] - 2.0) <= 1e-12
    assert len(tr) == 1001


def test_singular_at_start():
    with pytest.raises(SingularHessian) as info:
        integrate_lagrangian(LagrangianModel.from_string("v0", 1), VelocityState([0.0], [1.0], 0.0), 1.0)
    assert info.value.t == 0.0


def test_singular_mid_trajectory_reports_time():
    # W = 1 - t vanishes at t = 1
    Lm = LagrangianModel.from_string("0.5*(1 - t)*v0^2", 1)
    with pytest.raises(SingularHessian) as info:
        integrate_lagrangian(Lm, VelocityState([0.0], [1.0], 0.0), 2.0, 0.25)
    assert info.value.t == pytest.approx(1.0)


def test_blow_up_detected():
    Lm = LagrangianModel.from_string("0.5*v0^2 + 0.25*q0^4", 1)
    with pytest.raises(NonFinite):
        integrate_lagrangian(Lm, VelocityState([10.0], [10.0], 0.0), 5.0, 1e-2)


def test_hamiltonian_period(harmonic):
    tr = integrate_hamilton(harmonic, MomentumState([1.0], [0.0], 0.0), 2 * math.pi, 1e-3)
    assert abs(tr.q[-1, 0] - 1.0) <= 1e-9
    assert abs(tr.p[-1, 0]) <= 1e-9


def test_free_particle_momentum_constant(free):
    tr = integrate_hamilton(free, MomentumState([0.0], [2.0], 0.0), 3.0, 1e-2)
    assert np.max(np.abs(tr.p - 2.0)) <= 1e-12


def test_trajectories_agree_under_legendre_map():
    s0 = VelocityState([0.5], [-0.3], 0.0)
    lag = integrate_lagrangian(VARMASS, s0, 2.0, 1e-2)
    ham = integrate_hamilton(VARMASS, legendre(VARMASS, s0), 2.0, 1e-2)
    p = np.array([legendre(VARMASS, s).p for s in lag.states()])
    assert np.max(np.abs(lag.q - ham.q)) < 1e-7
    assert np.max(np.abs(p - ham.p)) < 1e-7


def test_rk4_order(harmonic):
    def err(h):
        tr = integrate_lagrangian(harmonic, VelocityState([1.0], [0.0], 0.0), 2.0, h)
        return max(abs(tr.q[-1, 0] - math.cos(2.0)), abs(tr.v[-1, 0] + math.sin(2.0)))

    assert 12 <= err(0.1) / err(0.05) <= 20


def test_trajectory_accessors(harmonic):
    tr = integrate_lagrangian(harmonic, VelocityState([1.0], [0.0], 0.0), 0.01, 1e-3)
    assert tr.kind == "lagrangian" and tr.n == 1
    states = list(tr.states())
    assert len(states) == len(tr) == 11
    assert states[0] == VelocityState([1.0], [0.0], 0.0)
    with pytest.raises(AttributeError):
        tr.p


@given(st.floats(-100, 100), st.floats(1e-3, 50), st.floats(1e-4, 1.0))
def test_time_grid(t0, span, h):
    t_end = t0 + span
    times, step = time_grid(t0, t_end, h)
    assert times[0] == t0 and times[-1] == t_end
    # the step count tolerates a 1e-9 relative slack so exact divisions are not split
    assert step <= h * (1 + 1e-9) + 1e-15 * max(abs(t0), abs(t_end))
    assert np.all(np.diff(times) > 0)
    assert np.max(np.abs(np.diff(times) - step)) <= 1e-12 * max(1.0, abs(t0), abs(t_end))


def test_time_grid_rejects_bad_input():
    with pytest.raises(ValueError):
        time_grid(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        time_grid(1.0, 1.0, 0.1)
