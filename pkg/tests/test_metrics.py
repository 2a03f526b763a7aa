import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conley.dynamics import ForcingSpec, f_dot_h, h_eval, metric_d, metric_d_unif, \
    seminorm_delta, sinusoid, t_n
from conley.errors import PreconditionError


def test_h_vanishes_for_nonpositive_times():
    t = np.linspace(-50, 0, 1001)
    assert np.all(h_eval(t) == 0.0)
    assert h_eval(0.0) == 0.0


def test_h_formula_at_sample_points():
    for t in (0.5, 1.0, 10.0, 1e3):
        assert h_eval(t) == pytest.approx((t + 1) * math.sin(math.log(t + 1)), rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_h_recovers_identity_near_t_n(n):
    s = np.linspace(-10, 10, 20001)
    assert np.max(np.abs(h_eval(t_n(n) + s) - s)) <= 1e-3


def test_t_n_are_zeros_of_h():
    for n in (1, 2, 3):
        assert abs(h_eval(t_n(n))) < 1e-6 * t_n(n)


def test_metric_of_identical_forcings_is_zero():
    g = sinusoid(0.3, 2.0)
    assert metric_d(g, g) == 0.0
    assert metric_d_unif(g, g) == 0.0


def test_constant_offset_gives_one_half():
    d = metric_d(lambda t: np.zeros_like(t), lambda t: np.ones_like(t))
    assert abs(d - 0.5) <= 2.0 ** -40


def test_seminorm_grows_with_window():
    g = lambda t: np.asarray(t, dtype=float)
    z = lambda t: np.zeros_like(t)
    assert seminorm_delta(1, g, z) == pytest.approx(1.0)
    assert seminorm_delta(3, g, z) == pytest.approx(3.0)
    with pytest.raises(PreconditionError):
        seminorm_delta(0, g, z)


def test_u_dependent_seminorm():
    g = lambda t, u: t * 0 + u
    z = lambda t, u: t * 0.0
    assert seminorm_delta(2, g, z, u_dependent=True) == pytest.approx(2.0)


def test_uniform_distance_of_sinusoids():
    assert metric_d_unif(sinusoid(0.0), sinusoid(0.05)) == pytest.approx(0.05, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(*[st.tuples(st.floats(-2, 2), st.floats(0, 3), st.floats(-3, 3))] * 3)
def test_triangle_inequality(a, b, c):
    fs = [lambda t, p=p: p[0] * np.sin(p[1] * t + p[2]) for p in (a, b, c)]
    dab, dbc, dac = metric_d(fs[0], fs[1]), metric_d(fs[1], fs[2]), metric_d(fs[0], fs[2])
    assert dac <= dab + dbc + 1e-12


def test_forcing_spec_validation():
    with pytest.raises(PreconditionError):
        ForcingSpec("square")
    with pytest.raises(PreconditionError):
        ForcingSpec("sinusoid", amplitude=-1.0)
    with pytest.raises(PreconditionError):
        ForcingSpec("h_embedded")
    with pytest.raises(PreconditionError):
        f_dot_h(f_dot_h(sinusoid(1.0)))


def test_embedded_forcing_composes_with_h():
    g = f_dot_h(sinusoid(0.5))
    t = np.array([-1.0, 0.5, 3.0])
    assert np.allclose(g(t), 0.5 * np.sin(h_eval(t)))
    assert not g.autonomous
    assert f_dot_h(sinusoid(0.0)).autonomous


def test_shift_and_hull():
    g = sinusoid(1.0)
    assert g.shifted(1.0)(0.0) == pytest.approx(math.sin(1.0))
    assert len(g.hull_samples([-1.0, 0.0, 2.0])) == 2
    assert g.to_dict() == {"kind": "sinusoid", "amplitude": 1.0, "frequency": 1.0}
