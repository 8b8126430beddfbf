import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetmech import BasePoint, ConnectionModel, TangentQR, UnknownVariable, VelocityState
from jetmech.bundle import connection_form, gamma_at, horizontal_lift, jet_prolongation, split
from oracles import five_point_gradient

finite = st.floats(-10, 10)


def test_standard_connection_is_zero():
    gam, dgdt, dgdq = gamma_at(ConnectionModel.standard(2), BasePoint([1.0, -3.0], 4.0))
    assert not gam.any() and not dgdt.any() and not dgdq.any()
    assert ConnectionModel.standard(2).is_standard


def test_linear_connection_jacobians():
    gam, dgdt, dgdq = gamma_at(ConnectionModel.from_strings(["q0"]), BasePoint([1.0], 0.0))
    assert gam.tolist() == [1.0] and dgdt.tolist() == [0.0] and dgdq.tolist() == [[1.0]]


def test_trig_connection_jacobians():
    gam, dgdt, dgdq = gamma_at(ConnectionModel.from_strings(["sin(t)"]), BasePoint([5.0], 0.0))
    assert gam.tolist() == [0.0] and dgdt.tolist() == [1.0] and dgdq.tolist() == [[0.0]]


def test_jacobians_match_finite_differences():
    c = ConnectionModel.from_strings(["q0*q1*sin(t)", "exp(-t)*q0^2 + q1"])
    x = np.array([0.4, -1.3, 0.9])  # (q0, q1, t)

    def comp(mu):
        return lambda y: c.values(y[:2], y[2])[mu]

    gam, dgdt, dgdq = c.jacobians(x[:2], x[2])
    for mu in range(2):
        g = five_point_gradient(comp(mu), x, 1e-3)
        np.testing.assert_allclose(dgdq[mu], g[:2], atol=1e-10)
        assert dgdt[mu] == pytest.approx(g[2], abs=1e-10)


def test_connection_rejects_velocities():
    with pytest.raises(UnknownVariable):
        ConnectionModel.from_strings(["v0"])


def test_standard_split():
    c = ConnectionModel.standard(1)
    vert, hor = split(c, BasePoint([0.0], 0.0), TangentQR(1.0, [4.0]))
    assert (vert.f, vert.a.tolist()) == (0.0, [4.0])
    assert (hor.f, hor.a.tolist()) == (1.0, [0.0])


def test_constant_split():
    vert, hor = split(ConnectionModel.constant([2.0]), BasePoint([0.0], 0.0), TangentQR(1.0, [5.0]))
    assert (hor.f, hor.a.tolist()) == (1.0, [2.0])
    assert (vert.f, vert.a.tolist()) == (0.0, [3.0])


def test_vertical_vectors_have_no_horizontal_part():
    c = ConnectionModel.from_strings(["q0*t + 3"])
    X = TangentQR(0.0, [2.5])
    vert, hor = split(c, BasePoint([1.0], 2.0), X)
    assert hor.is_zero()
    assert vert == X


@settings(max_examples=100, deadline=None)
@given(finite, finite, finite, finite, finite)
def test_split_reconstitutes_and_is_idempotent(q, t, f, a0, a1):
    c = ConnectionModel.from_strings(["sin(t)*q0 + q1", "q0^2 - t"])
    x = BasePoint([q, a0 / 3], t)
    X = TangentQR(f, [a0, a1])
    vert, hor = split(c, x, X)
    total = vert + hor
    assert total.f == X.f
    np.testing.assert_allclose(total.a, X.a, rtol=1e-15, atol=1e-12)
    # a horizontal vector splits into itself
    v2, h2 = split(c, x, hor)
    assert v2.is_zero()
    assert h2 == hor
    assert connection_form(c, x, hor) == hor


def test_horizontal_lift():
    assert horizontal_lift(ConnectionModel.standard(1), BasePoint([2.0], 1.0)) == TangentQR(1.0, [0.0])
    c = ConnectionModel.from_strings(["q0"])
    x = BasePoint([3.0], 7.0)
    lift = horizontal_lift(c, x)
    assert lift == TangentQR(1.0, [3.0])
    assert split(c, x, lift)[0].is_zero()


@pytest.mark.parametrize(
    "src, expected",
    [("0", (1.0, [0.0], [0.0])), ("q0", (1.0, [1.0], [2.0])), ("sin(t)", (1.0, [0.0], [1.0]))],
)
def test_jet_prolongation_examples(src, expected):
    f, a, b = jet_prolongation(ConnectionModel.from_strings([src]), VelocityState([1.0], [2.0], 0.0))
    assert (f, a.tolist(), b.tolist()) == expected


def test_jet_prolongation_is_derivative_along_the_lift():
    c = ConnectionModel.from_strings(["q0*q1*cos(t)", "q1^3 + t*q0"])
    s = VelocityState([0.3, -0.8], [1.1, 0.4], 0.6)
    _, _, b = jet_prolongation(c, s)
    # d/de gamma(q + e v, t + e) at e = 0
    along = [five_point_gradient(lambda e, mu=mu: c.values(s.q + e[0] * s.v, s.t + e[0])[mu], [0.0], 1e-3)[0]
             for mu in range(2)]
    np.testing.assert_allclose(b, along, atol=1e-10)
