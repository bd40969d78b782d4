import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wedgelab import DomainError, PreconditionError, UnsupportedError
from wedgelab.lie_core import (
    AlgebraElement,
    Involution,
    LieAlgebra,
    Subspace,
    ad_matrix,
    adjoint_exp,
    bracket,
    builtin_algebra,
    cartan_involution_transpose,
    compose,
    eigenspace_split,
    euler_element,
    grading,
    grading_projections,
    is_elliptic,
    is_euler,
    is_hyperbolic,
    killing_form,
    matrix_spectrum,
    so_1d,
    so_2d,
    so_pq,
    sl2,
    spectrum,
    su11,
    tau_h,
)
from wedgelab.lie_core.algebra import same_algebra

coeffs3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3).map(np.array)


def test_sl2_brackets():
    g = sl2()
    h, e, f = g["h"], g["e"], g["f"]
    assert bracket(h, e).allclose(e)
    assert bracket(h, f).allclose(-f)
    assert bracket(e, f).allclose(h * 2)


def test_structure_constants_match_matrix_commutators():
    g = so_pq(2, 3)
    for i, a in enumerate(g.basis):
        for j, b in enumerate(g.basis):
            expected = a @ b - b @ a
            got = np.einsum("k,kab->ab", g.structure_constants[i, j], g.basis)
            assert np.allclose(got, expected, atol=1e-12)


@pytest.mark.parametrize("name", ["sl2", "su(1,1)", "so(1,2)", "so(1,3)", "so(2,3)", "so(2,4)"])
def test_builtin_algebras_pass_structural_checks(name):
    g = builtin_algebra(name)
    assert all(v < 1e-10 for v in g.check().values())


def test_dependent_basis_is_rejected():
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(PreconditionError, match="independent|rank"):
        LieAlgebra("bad", np.array([e, 2 * e]))


def test_non_closed_basis_is_rejected():
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    f = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(PreconditionError, match="clos"):
        LieAlgebra("span(e,f)", np.array([e, f]))


def test_json_roundtrip_preserves_algebra():
    g = so_1d(3)
    back = LieAlgebra.from_json(g.to_json())
    assert same_algebra(g, back)
    assert np.allclose(back.structure_constants, g.structure_constants)
    data = json.loads(g.to_json())
    data["basis"] = [np.asarray(m).ravel().tolist() for m in data["basis"]]
    assert same_algebra(LieAlgebra.from_dict(data), g)


def test_element_lookup_errors():
    g = sl2()
    with pytest.raises((KeyError, DomainError)):
        g["x"]
    with pytest.raises(DomainError):
        sl2()["h"] + su11()["u0"]


def test_h_is_euler_and_e_is_not():
    g = sl2()
    assert is_euler(g["h"])
    assert not is_euler(g["e"])
    assert not is_euler(g["h"] * 2)
    assert not is_euler(g.zero())


@pytest.mark.parametrize("make, expected", [
    (lambda g: g["e"] - g["f"], [-2j, 0, 2j]),
    (lambda g: g["e"] + g["f"], [-2, 0, 2]),
    (lambda g: g["h"], [-1, 0, 1]),
])
def test_sl2_spectra(make, expected):
    key = lambda z: (round(z.real, 6), round(z.imag, 6))
    ev = sorted(spectrum(make(sl2())).eigenvalues, key=key)
    assert np.allclose(ev, sorted(np.array(expected, dtype=complex), key=key), atol=1e-10)


def test_elliptic_hyperbolic_dichotomy():
    g = sl2()
    e, f = g["e"], g["f"]
    assert is_elliptic(e - f) and not is_hyperbolic(e - f)
    assert is_hyperbolic(e + f) and not is_elliptic(e + f)
    assert not spectrum(e).semisimple
    assert not is_elliptic(e) and not is_hyperbolic(e)


def test_matrix_spectrum_detects_jordan_block():
    assert not matrix_spectrum(np.array([[1.0, 1.0], [0.0, 1.0]])).semisimple
    assert matrix_spectrum(np.diag([1.0, 1.0, 2.0])).semisimple


@pytest.mark.parametrize("d", [2, 3, 4])
def test_lorentz_boost_grading(d):
    plus, zero, minus = grading(euler_element(so_1d(d)))
    assert (plus.dim, minus.dim) == (d - 1, d - 1)
    assert plus.dim + zero.dim + minus.dim == so_1d(d).dim


@pytest.mark.parametrize("d, dims", [(3, (3, 4, 3)), (4, (4, 7, 4))])
def test_conformal_euler_grading(d, dims):
    g = so_2d(d)
    h = euler_element(g)
    assert is_euler(h)
    assert tuple(s.dim for s in grading(h)) == dims


@pytest.mark.parametrize("name", ["sl2", "so(1,3)", "so(2,3)"])
def test_grading_is_graded_under_brackets(name):
    g = builtin_algebra(name)
    parts = dict(zip((1, 0, -1), grading(euler_element(g))))
    for i in parts:
        for j in parts:
            for a in parts[i].basis_elements():
                for b in parts[j].basis_elements():
                    c = bracket(a, b)
                    if i + j in parts:
                        assert parts[i + j].residual(c.coeffs) < 1e-9
                    else:
                        assert c.norm() < 1e-9


def test_grading_projections_resolve_identity():
    p = grading_projections(euler_element(so_2d(3)))
    assert np.allclose(p[1] + p[0] + p[-1], np.eye(10), atol=1e-10)
    assert np.allclose(p[1] @ p[-1], 0, atol=1e-10)


def test_grading_requires_euler():
    with pytest.raises(PreconditionError):
        grading(sl2()["e"])


def test_cartan_involution_on_sl2():
    g = sl2()
    theta = cartan_involution_transpose(g)
    assert theta(g["h"]).allclose(-g["h"])
    assert theta(g["e"]).allclose(-g["f"])
    assert theta.square_residual() < 1e-12
    assert theta.homomorphism_residual() < 1e-12


def test_cartan_involution_on_realified_su11():
    theta = cartan_involution_transpose(su11())
    assert theta.square_residual() < 1e-12
    assert theta.killing_defect() < 1e-10


def test_cartan_involution_unsupported_without_transpose_closure():
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    h = np.diag([0.5, -0.5])
    with pytest.raises(UnsupportedError):
        cartan_involution_transpose(LieAlgebra("borel", np.array([h, e])))


def test_tau_h_and_composition_on_sl2():
    g = sl2()
    h, e, f = g["h"], g["e"], g["f"]
    t = tau_h(h)
    assert t(h).allclose(h)
    assert t(e).allclose(-e)
    theta = cartan_involution_transpose(g)
    fixed, anti = eigenspace_split(compose(theta, t))
    assert fixed.dim == 1 and fixed.contains(e + f)
    assert anti.dim == 2 and anti.contains(h) and anti.contains(e - f)


def test_non_commuting_involutions_are_refused():
    g = sl2()
    theta = cartan_involution_transpose(g)
    k = adjoint_exp(g["h"] * 0.7)
    other = Involution(g, k @ theta.matrix @ np.linalg.inv(k), label="custom")
    with pytest.raises(DomainError):
        compose(theta, other)


def test_invalid_involution_matrix():
    g = sl2()
    with pytest.raises((PreconditionError, DomainError)):
        Involution(g, np.diag([1.0, 2.0, 0.5]))


def test_subspace_operations():
    g = sl2()
    s = Subspace(g, [g["e"].coeffs, g["f"].coeffs])
    assert s.dim == 2
    assert s.contains(g["e"] - g["f"] * 3)
    assert not s.contains(g["h"])
    assert not s.is_subalgebra()
    assert Subspace(g, [g["h"].coeffs, g["e"].coeffs]).is_subalgebra()
    assert Subspace.whole(g).contains_subspace(s)


@given(coeffs3, coeffs3)
def test_bracket_antisymmetry(a, b):
    g = sl2()
    x, y = AlgebraElement(g, a), AlgebraElement(g, b)
    assert (bracket(x, y) + bracket(y, x)).norm() <= 1e-10 * (1 + x.norm() * y.norm())


@given(coeffs3, coeffs3, coeffs3)
def test_jacobi_identity(a, b, c):
    g = sl2()
    x, y, z = (AlgebraElement(g, v) for v in (a, b, c))
    s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert s.norm() <= 1e-9 * (1 + x.norm() * y.norm() * z.norm())


@given(coeffs3, coeffs3, coeffs3)
def test_killing_form_is_ad_invariant(a, b, c):
    g = sl2()
    x, y, z = (AlgebraElement(g, v) for v in (a, b, c))
    lhs = killing_form(bracket(x, y), z)
    rhs = killing_form(x, bracket(y, z))
    assert abs(lhs - rhs) <= 1e-9 * (1 + x.norm() * y.norm() * z.norm())


@given(coeffs3, coeffs3)
def test_tau_h_is_automorphism(a, b):
    g = sl2()
    t = tau_h(g["h"])
    x, y = AlgebraElement(g, a), AlgebraElement(g, b)
    assert (t(bracket(x, y)) - bracket(t(x), t(y))).norm() <= 1e-9 * (1 + x.norm() * y.norm())


@given(coeffs3)
def test_adjoint_exp_is_automorphism(a):
    g = sl2()
    y = AlgebraElement(g, a / 3)
    m = adjoint_exp(y)
    e, f = g["e"], g["f"]
    lhs = m @ bracket(e, f).coeffs
    rhs = bracket(AlgebraElement(g, m @ e.coeffs), AlgebraElement(g, m @ f.coeffs)).coeffs
    assert np.allclose(lhs, rhs, atol=1e-8 * max(1.0, np.abs(m).max() ** 2))


def test_killing_form_sl2_values():
    g = sl2()
    assert np.isclose(killing_form(g["h"], g["h"]), 2.0)
    assert np.isclose(killing_form(g["e"], g["f"]), 4.0)
    assert np.allclose(ad_matrix(g["h"]), np.diag([0.0, 1.0, -1.0]))
