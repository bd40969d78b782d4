import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wedgelab import PreconditionError
from wedgelab.lie_core import (
    AlgebraElement,
    Subspace,
    cone_contains,
    cone_contains_interior,
    cone_dual,
    cone_interior_margin,
    cone_is_generating,
    cone_is_pointed,
    cone_make,
    cone_membership,
    invariance_defect,
    orbit_cone,
    sl2,
)


@pytest.fixture(scope="module")
def ncc_cone():
    """Closed cone in span{e, f} generated by e and f."""
    g = sl2()
    amb = Subspace(g, [g["e"].coeffs, g["f"].coeffs])
    return cone_make(amb, [g["e"], g["f"]])


def test_generators_are_members(ncc_cone):
    for x in ncc_cone.generator_elements():
        assert cone_contains(ncc_cone, x)


def test_interior_and_exterior_points(ncc_cone):
    g = sl2()
    assert cone_contains_interior(ncc_cone, g["e"] + g["f"])
    assert not cone_contains_interior(ncc_cone, g["e"])
    assert not cone_contains(ncc_cone, -g["e"])
    assert not cone_contains(ncc_cone, g["h"])
    assert cone_interior_margin(ncc_cone, g["h"]) == -np.inf


def test_pointed_and_generating(ncc_cone):
    g = sl2()
    assert cone_is_pointed(ncc_cone)
    assert cone_is_generating(ncc_cone)
    line = cone_make(ncc_cone.ambient, [g["e"], -g["e"], g["f"]])
    assert not cone_is_pointed(line)


def test_generator_outside_ambient_is_rejected(ncc_cone):
    with pytest.raises(PreconditionError):
        cone_make(ncc_cone.ambient, [sl2()["h"]])


def test_double_dual_recovers_cone(ncc_cone):
    back = cone_dual(cone_dual(ncc_cone))
    for x in ncc_cone.generator_elements():
        assert cone_contains(back, x)
    for x in back.generator_elements():
        assert cone_contains(ncc_cone, x)


def test_three_dimensional_cone_dual():
    g = sl2()
    gens = [g["h"] + g["e"] + g["f"], -g["h"] + g["e"] + g["f"], g["e"] + 2 * g["f"],
            2 * g["e"] + g["f"]]
    c = cone_make(Subspace.whole(g), gens)
    d = cone_dual(c)
    for y in d.generators:
        for x in c.generators:
            assert c.to_frame(y) @ c.to_frame(x) >= -1e-9
    back = cone_dual(d)
    for x in gens:
        assert cone_contains(back, x)


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_farkas_certificate_separates(v):
    g = sl2()
    c = cone_make(Subspace.whole(g), [g["e"], g["f"], g["e"] + g["f"] + g["h"] * 0.5])
    x = AlgebraElement(g, np.array(v))
    m = cone_membership(c, x)
    if m.inside:
        assert m.certificate is None
        return
    r = m.certificate
    assert r @ c.to_frame(x) > 0
    assert np.all(c.frame_generators.T @ r <= 1e-8 * max(1.0, np.linalg.norm(r)))


@given(st.floats(0.01, 5), st.floats(0.01, 5))
def test_positive_combinations_are_members(a, b):
    g = sl2()
    c = cone_make(Subspace.whole(g), [g["e"], g["f"], g["h"] + g["e"]])
    assert cone_contains(c, g["e"] * a + (g["h"] + g["e"]) * b)


def test_orbit_cone_of_hyperbolic_seed_is_invariant():
    g = sl2()
    h_fix = Subspace(g, [g["h"].coeffs])
    c = orbit_cone(h_fix, g["e"] + g["f"], 64, 0)
    # the boost orbit of e + f fills the open cone spanned by e and f
    assert cone_membership(c, g["e"]).residual < 1e-5
    assert cone_membership(c, g["f"]).residual < 1e-5
    assert cone_contains_interior(c, g["e"] + g["f"])
    assert invariance_defect(c, h_fix, 4, 1, radius=0.1) < 1e-2


def test_orbit_cone_rejects_non_subalgebra():
    g = sl2()
    with pytest.raises(PreconditionError):
        orbit_cone(Subspace(g, [g["e"].coeffs, g["f"].coeffs]), g["h"], 4, 0)
