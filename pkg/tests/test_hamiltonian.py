import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetmech import (
    ConnectionModel,
    LagrangianModel,
    MomentumState,
    NonConvergence,
    SingularHessian,
    VelocityState,
    energy,
    sode_field,
    theta_L,
)
from jetmech.hamiltonian import (
    canonical_1form,
    connection_function,
    hamilton_cartan_1form,
    hamilton_cartan_2form_matrix,
    hamilton_field,
    hamiltonian_conn,
    hamiltonian_differential,
    hamiltonian_std,
    legendre,
    legendre_inverse,
    legendre_tangent,
    liouville_1form,
    liouville_2form_matrix,
    pullback_1form,
    pushforward,
)
from oracles import five_point_gradient

coord = st.floats(-2, 2)

MAGNETIC = LagrangianModel.from_string(
    "0.5*(v0^2 + v1^2) + 0.5*v0*v1 + q0*v1 - q1*v0 - 0.5*(q0^2 + q1^2) - q0*q1*cos(t)", 2
)
QUARTIC = LagrangianModel.from_string("0.25*v0^4 + 0.5*v0^2 - cos(q0)*(1 + 0.1*t)", 1)
CONNS2 = [
    ConnectionModel.standard(2),
    ConnectionModel.constant([3.0, -1.0]),
    ConnectionModel.from_strings(["sin(t)*q0", "q0*q1^2 - t"]),
]


def test_legendre_examples(free):
    assert legendre(free, VelocityState([5.0], [3.0], 2.0)) == MomentumState([5.0], [3.0], 2.0)
    Lm = LagrangianModel.from_string("0.5*v0^2 + q0*v0", 1)
    m = legendre(Lm, VelocityState([2.0], [1.0], 0.5))
    assert m == MomentumState([2.0], [3.0], 0.5)


def test_inverse_linear_problem(free):
    s = legendre_inverse(free, MomentumState([0.0], [3.0], 0.0), guess=[0.0])
    assert s.v.tolist() == [3.0]


def test_inverse_quartic():
    Lm = LagrangianModel.from_string("0.5*v0^4", 1)
    s = legendre_inverse(Lm, MomentumState([0.0], [2.0], 0.0), guess=[1.5])
    assert s.v[0] == pytest.approx(1.0, abs=1e-12)
    assert legendre(Lm, s).p[0] == pytest.approx(2.0, abs=1e-12)


def test_inverse_singular():
    with pytest.raises(SingularHessian):
        legendre_inverse(LagrangianModel.from_string("v0", 1), MomentumState([0.0], [2.0], 0.0))


def test_inverse_gives_up():
    Lm = LagrangianModel.from_string("0.5*v0^4", 1)
    with pytest.raises(NonConvergence) as info:
        legendre_inverse(Lm, MomentumState([0.0], [2.0], 0.0), guess=[40.0], max_iter=3)
    assert info.value.iterations == 3
    assert info.value.residual > 1


@settings(max_examples=50, deadline=None)
@given(coord, coord, coord, coord, coord)
def test_round_trip_quadratic(q0, q1, v0, v1, t):
    s = VelocityState([q0, q1], [v0, v1], t)
    back = legendre_inverse(MAGNETIC, legendre(MAGNETIC, s))
    assert np.max(np.abs(back.v - s.v)) <= 1e-12


def test_hamiltonian_examples(free, harmonic):
    assert hamiltonian_std(free, MomentumState([0.0], [2.0], 0.0)) == 2.0
    assert hamiltonian_std(harmonic, MomentumState([1.0], [0.0], 0.0)) == 0.5
    m = MomentumState([0.0], [2.0], 0.0)
    assert hamiltonian_conn(free, ConnectionModel.standard(1), m) == 2.0
    assert hamiltonian_conn(free, ConnectionModel.constant([1.0]), m) == 0.0


@settings(max_examples=50, deadline=None)
@given(coord, coord, coord, coord, coord, st.sampled_from(range(3)))
def test_hamiltonians_match_energies(q0, q1, v0, v1, t, ci):
    c = CONNS2[ci]
    s = VelocityState([q0, q1], [v0, v1], t)
    m = legendre(MAGNETIC, s)
    assert abs(hamiltonian_std(MAGNETIC, m) - energy(MAGNETIC, ConnectionModel.standard(2), s)) <= 1e-10
    assert abs(hamiltonian_conn(MAGNETIC, c, m) - energy(MAGNETIC, c, s)) <= 1e-10


def test_liouville_examples():
    m = MomentumState([1.0], [2.0], 0.0)
    th0 = liouville_1form(ConnectionModel.standard(1), m)
    assert th0 == canonical_1form(m)
    assert (th0.ct, th0.cq.tolist(), th0.cp.tolist()) == (0.0, [2.0], [0.0])
    th = liouville_1form(ConnectionModel.constant([3.0]), m)
    assert (th.ct, th.cq.tolist()) == (-6.0, [2.0])


@settings(max_examples=50, deadline=None)
@given(coord, coord, coord, coord, coord, st.sampled_from(range(3)))
def test_liouville_differs_by_connection_function(q0, q1, p0, p1, t, ci):
    c = CONNS2[ci]
    m = MomentumState([q0, q1], [p0, p1], t)
    th, th0 = liouville_1form(c, m), canonical_1form(m)
    assert th.ct == th0.ct - connection_function(c, m)
    assert th.cq.tolist() == th0.cq.tolist() and th.cp.tolist() == th0.cp.tolist()


def test_hamilton_cartan_examples(free):
    m = MomentumState([0.0], [2.0], 0.0)
    std = hamilton_cartan_1form(free, ConnectionModel.standard(1), m)
    assert (std.ct, std.cq.tolist(), std.cp.tolist()) == (-2.0, [2.0], [0.0])
    assert liouville_1form(ConnectionModel.constant([7.0]), m).ct == -14.0
    assert hamiltonian_conn(free, ConnectionModel.constant([7.0]), m) == -12.0
    assert hamilton_cartan_1form(free, ConnectionModel.constant([7.0]), m) == std


def test_hamilton_field_examples(harmonic, free):
    f, a, b = hamilton_field(harmonic, MomentumState([1.0], [2.0], 0.0))
    assert (f, a.tolist(), b.tolist()) == (1.0, [2.0], [-1.0])
    f, a, b = hamilton_field(free, MomentumState([4.0], [-3.0], 1.0))
    assert (f, a.tolist(), b.tolist()) == (1.0, [-3.0], [0.0])


def test_hamiltonian_differential_matches_finite_differences():
    rng = np.random.default_rng(11)
    for Lm in (MAGNETIC, QUARTIC):
        n = Lm.n
        for _ in range(3):
            x = np.concatenate(([rng.uniform(0, 2)], rng.uniform(-1, 1, 2 * n)))

            def h(y):
                return hamiltonian_std(Lm, MomentumState(y[1 : n + 1], y[n + 1 :], y[0]))

            g = five_point_gradient(h, x, 1e-3)
            ht, hq, hp = hamiltonian_differential(Lm, MomentumState(x[1 : n + 1], x[n + 1 :], x[0]))
            np.testing.assert_allclose(np.concatenate(([ht], hq, hp)), g, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(coord, coord, coord, coord, coord)
def test_two_forms(q0, q1, p0, p1, t):
    m = MomentumState([q0, q1], [p0, p1], t)
    f, a, b = hamilton_field(MAGNETIC, m)
    X = np.concatenate(([f], a, b))
    mats = [hamilton_cartan_2form_matrix(MAGNETIC, c, m) for c in CONNS2]
    for M in mats:
        assert np.max(np.abs(X @ M)) <= 1e-10
        assert np.max(np.abs(M - mats[0])) <= 1e-12
    for c in CONNS2:
        W = liouville_2form_matrix(c, m)
        assert (W == -W.T).all()


def test_liouville_2form_is_minus_exterior_derivative():
    # d(theta)(X, Y) = X(theta(Y)) - Y(theta(X)) for constant coordinate fields
    c = CONNS2[2]
    x0 = np.array([0.4, 0.3, -0.7, 1.1, 0.9])  # (t, q0, q1, p0, p1)

    def theta(x):
        return liouville_1form(c, MomentumState(x[1:3], x[3:], x[0])).as_array()

    J = np.array([five_point_gradient(lambda x, i=i: theta(x)[i], x0, 1e-3) for i in range(5)])
    d_theta = J.T - J  # d_theta[a, b] = d_a theta_b - d_b theta_a
    W = liouville_2form_matrix(c, MomentumState(x0[1:3], x0[3:], x0[0]))
    np.testing.assert_allclose(W, -d_theta, atol=1e-9)


def test_legendre_tangent_matches_finite_differences():
    s = VelocityState([0.2, -0.4], [0.9, 0.1], 1.3)
    x0 = np.concatenate(([s.t], s.q, s.v))

    def F(x):
        m = legendre(MAGNETIC, VelocityState(x[1:3], x[3:], x[0]))
        return np.concatenate(([m.t], m.q, m.p))

    J = np.array([five_point_gradient(lambda x, i=i: F(x)[i], x0, 1e-3) for i in range(5)])
    np.testing.assert_allclose(legendre_tangent(MAGNETIC, s), J, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(coord, coord, coord, coord, coord, st.sampled_from(range(3)))
def test_pullback_of_liouville_form(q0, q1, v0, v1, t, ci):
    c = CONNS2[ci]
    s = VelocityState([q0, q1], [v0, v1], t)
    pulled = pullback_1form(MAGNETIC, s, liouville_1form(c, legendre(MAGNETIC, s)))
    expected = theta_L(MAGNETIC, s).as_array()
    expected[0] += energy(MAGNETIC, c, s)
    assert np.max(np.abs(pulled.as_array() - expected)) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(coord, coord, coord, coord, coord)
def test_pushforward_of_dynamics(q0, q1, v0, v1, t):
    s = VelocityState([q0, q1], [v0, v1], t)
    pushed = pushforward(MAGNETIC, s, sode_field(MAGNETIC, s))
    f, a, b = hamilton_field(MAGNETIC, legendre(MAGNETIC, s))
    assert np.max(np.abs(pushed - np.concatenate(([f], a, b)))) <= 1e-8
