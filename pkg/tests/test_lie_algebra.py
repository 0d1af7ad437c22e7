import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from conftest import brute_killing
from lorentzkit.errors import (
    AlgebraMismatch,
    JacobiViolation,
    NotAbelian,
    NotLorentz,
    NotSemisimple,
    NotSkew,
    NotSplitDiagonalizable,
    ShapeError,
    UnknownBuiltin,
)
from lorentzkit.lie_algebra import (
    LieAlgebra,
    MatrixRep,
    builtin,
    builtin_names,
    direct_sum,
    has_sl2r_factor,
    ideal_residuals,
    invariant_antisym_bilinear_maps,
    invariant_isotropic_line,
    invariant_linear_maps,
    is_ad_nilpotent,
    is_semisimple,
    killing_form,
    new_lie_algebra,
    root_decomposition_residuals,
    root_space_decomposition,
    simple_ideals,
)
from lorentzkit.pseudo_linalg import BilinearForm, Subspace, signature


def solvable2():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0], c[1, 0, 0] = 1.0, -1.0
    return new_lie_algebra(c)


def abelian(n):
    return new_lie_algebra(np.zeros((n, n, n)))


def sl2_matrices():
    h = np.diag([1.0, -1.0])
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    return h, e, e.T.copy()


def test_dimensions():
    assert builtin("so(1,2)").algebra.dim == 3
    assert builtin("so(1,3)").algebra.dim == 6
    assert builtin("sl(3,R)").algebra.dim == 8
    assert solvable2().dim == 2


def test_builtin_catalog():
    names = builtin_names()
    assert "so(1,2)" in names and "sl(6,R)" in names
    with pytest.raises(UnknownBuiltin):
        builtin("so(1,9)")
    with pytest.raises(UnknownBuiltin):
        builtin("e8")


def test_jacobi_violation_reports_triple():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[1, 2, 1], c[2, 1, 1] = 1.0, -1.0
    with pytest.raises(JacobiViolation) as exc:
        new_lie_algebra(c)
    assert exc.value.residual > 1e-9
    assert len(exc.value.triple) == 3


def test_shape_error():
    with pytest.raises(ShapeError):
        new_lie_algebra(np.zeros((2, 3, 2)))


def test_antisymmetrized():
    a = builtin("so(1,3)").algebra
    assert np.array_equal(a.c, -a.c.transpose(1, 0, 2))


def test_sl2_brackets_match_matrix_commutators():
    b = builtin("sl(2,R)")
    h, e, f = sl2_matrices()
    mats = b.standard.matrices
    assert np.allclose(mats[0], h)
    H, E, F = np.eye(3)
    X = np.array([0.3, -1.2, 0.5])
    assert np.allclose(b.algebra.bracket(X, X), 0)
    assert np.allclose(b.algebra.bracket(H, E), 2 * E)
    assert np.allclose(b.algebra.bracket(E, F), H)


def test_killing_against_brute_force():
    for name in ("so(1,2)", "so(3)", "so(1,3)", "sl(3,R)", "so(2,3)"):
        a = builtin(name).algebra
        assert np.allclose(killing_form(a).matrix, brute_killing(a.c))


def test_killing_signatures():
    assert signature(killing_form(abelian(2))) == (0, 0, 2)
    assert signature(killing_form(builtin("so(3)").algebra)) == (0, 3, 0)
    assert signature(killing_form(builtin("so(1,2)").algebra)) == (2, 1, 0)


def test_semisimple():
    assert is_semisimple(builtin("so(1,3)").algebra)
    assert not is_semisimple(abelian(2))
    assert not is_semisimple(solvable2())
    assert signature(killing_form(solvable2()))[:2] == (1, 0)


def test_simple_ideals():
    assert len(simple_ideals(builtin("so(1,3)").algebra)) == 1
    s = direct_sum(builtin("so(1,2)").algebra, builtin("so(3)").algebra)
    ideals = simple_ideals(s)
    assert sorted(i.dim for i in ideals) == [3, 3]
    a = builtin("so(2,2)").algebra
    ideals = simple_ideals(a)
    assert [i.dim for i in ideals] == [3, 3]
    for i in ideals:
        k = killing_form(a).matrix
        assert signature(BilinearForm(i.basis @ k @ i.basis.T)) == (2, 1, 0)
    res = ideal_residuals(a, ideals)
    assert res["ideal_residual"] < 1e-10 and res["killing_orthogonality"] < 1e-10
    assert res["total_dim"] == 6
    with pytest.raises(NotSemisimple):
        simple_ideals(solvable2())


@pytest.mark.parametrize("name,expected", [("so(1,2)", True), ("so(2,2)", True), ("so(1,3)", False),
                                           ("so(1,4)", False), ("so(2,3)", False), ("sl(2,R)", True),
                                           ("so(3)", False), ("sl(3,R)", False)])
def test_sl2r_factor(name, expected):
    assert has_sl2r_factor(builtin(name).algebra) is expected


def test_sl2r_requires_semisimple():
    with pytest.raises(NotSemisimple):
        has_sl2r_factor(abelian(3))


def test_ad_nilpotent():
    a = builtin("sl(2,R)").algebra
    assert is_ad_nilpotent(a, np.zeros(3))
    assert is_ad_nilpotent(a, [0, 1, 0])
    assert np.allclose(np.linalg.matrix_power(a.ad([0, 1, 0]), 3), 0)
    assert not is_ad_nilpotent(a, [1, 0, 0])


def test_root_decomposition_sl2():
    b = builtin("sl(2,R)")
    rd = root_space_decomposition(b.algebra, b.cartan)
    assert sorted(float(r[0]) for r in rd.roots) == [-2.0, 2.0]
    assert [s.dim for s in rd.spaces] == [1, 1]
    assert rd.zero_space.dim == 1


def test_root_decomposition_so13():
    b = builtin("so(1,3)")
    rd = root_space_decomposition(b.algebra, b.cartan)
    assert sorted(abs(float(r[0])) for r in rd.roots) == [1.0, 1.0]
    assert [s.dim for s in rd.spaces] == [2, 2]
    assert rd.zero_space.dim == 2


def test_root_decomposition_abelian():
    a = abelian(3)
    rd = root_space_decomposition(a, Subspace.full(3))
    assert rd.roots == [] and rd.zero_space.dim == 3


def test_root_decomposition_errors():
    a = builtin("so(1,2)").algebra
    with pytest.raises(NotAbelian):
        root_space_decomposition(a, Subspace([[1, 0, 0], [0, 1, 0]]))
    # rotation has imaginary spectrum
    with pytest.raises(NotSplitDiagonalizable):
        root_space_decomposition(a, Subspace([a.basis_vector("J12")]))
    # nilpotent element is defective
    nil = builtin("sl(2,R)")
    with pytest.raises(NotSplitDiagonalizable):
        root_space_decomposition(nil.algebra, Subspace([[0, 1, 0]]))


@pytest.mark.parametrize("name", ["so(1,3)", "sl(3,R)", "so(2,3)", "so(2,2)", "so(1,4)", "sl(4,R)"])
def test_root_decomposition_invariants(name):
    b = builtin(name)
    rd = root_space_decomposition(b.algebra, b.cartan)
    res = root_decomposition_residuals(rd)
    assert res["eigen_residual"] <= 1e-8
    assert res["grading_residual"] <= 1e-8
    assert res["killing_orthogonality_residual"] <= 1e-8
    assert res["root_vectors_nilpotent"] and res["roots_paired"]
    assert res["dim_total"] == b.algebra.dim


def test_from_matrices_roundtrip():
    b = builtin("so(1,3)")
    a = LieAlgebra.from_matrices(b.standard.matrices)
    assert np.allclose(a.c, b.algebra.c)


def test_rep_bracket_check():
    a = builtin("so(1,2)").algebra
    with pytest.raises(ShapeError):
        MatrixRep(a, np.random.default_rng(0).standard_normal((3, 3, 3)))


def _nilpotent_so12():
    b = builtin("so(1,2)")
    a = b.algebra
    X = a.basis_vector("K01") + a.basis_vector("J12")
    return b, X


def test_invariant_isotropic_line():
    b, X = _nilpotent_so12()
    sub = LieAlgebra(np.zeros((1, 1, 1)))
    m = b.standard(X)
    line = invariant_isotropic_line(b.form, MatrixRep(sub, [m]))
    assert line is not None
    assert abs(b.form(line, line)) < 1e-10
    assert np.allclose(m @ line, 0)
    assert invariant_isotropic_line(b.form, b.standard) is None
    rot = b.standard(b.algebra.basis_vector("J12"))
    assert invariant_isotropic_line(b.form, MatrixRep(sub, [rot])) is None


def test_invariant_isotropic_line_errors():
    b = builtin("so(1,2)")
    s22 = builtin("so(2,2)")
    with pytest.raises(NotLorentz):
        invariant_isotropic_line(s22.form, s22.standard)
    sub = LieAlgebra(np.zeros((1, 1, 1)))
    with pytest.raises(NotSkew):
        invariant_isotropic_line(b.form, MatrixRep(sub, [np.diag([1.0, 0, 0])]))


def test_invariant_linear_maps():
    b = builtin("so(1,2)")
    std = b.standard
    assert len(invariant_linear_maps(std, MatrixRep.trivial(b.algebra))) == 0
    maps = invariant_linear_maps(std, std)
    assert len(maps) == 1
    m = maps[0] / maps[0][0, 0]
    assert np.allclose(m, np.eye(3), atol=1e-8)
    assert len(invariant_linear_maps(std, std.direct_sum(std))) == 2
    with pytest.raises(AlgebraMismatch):
        invariant_linear_maps(std, builtin("so(3)").standard)


def test_invariant_maps_finite_equivariance(rng):
    b = builtin("so(1,2)")
    std = b.standard
    two = std.direct_sum(std)
    for f in invariant_linear_maps(std, two):
        for i in range(3):
            t = rng.uniform(-1, 1)
            lhs = expm(t * two.matrices[i]) @ f
            rhs = f @ expm(t * std.matrices[i])
            assert np.max(np.abs(lhs - rhs)) < 1e-6


def test_invariant_antisym_maps():
    assert len(invariant_antisym_bilinear_maps(builtin("so(1,3)").standard, 1)) == 0
    so2 = builtin("so(2)")
    maps = invariant_antisym_bilinear_maps(so2.standard, 1)
    assert len(maps) == 1
    w = maps[0][0]
    assert abs(w[0, 1]) > 0.1 and np.allclose(w, -w.T)
    triv = MatrixRep.trivial(LieAlgebra(np.zeros((1, 1, 1))), 2)
    assert len(invariant_antisym_bilinear_maps(triv, 1)) == 1


@given(st.sampled_from(["so(1,2)", "so(1,3)", "sl(3,R)", "so(2,2)"]), st.integers(0, 2**16))
def test_ad_is_derivation(name, seed):
    a = builtin(name).algebra
    rng = np.random.default_rng(seed)
    X, Y, Z = rng.standard_normal((3, a.dim))
    lhs = a.bracket(X, a.bracket(Y, Z))
    rhs = a.bracket(a.bracket(X, Y), Z) + a.bracket(Y, a.bracket(X, Z))
    assert np.allclose(lhs, rhs, atol=1e-10)


@given(st.sampled_from(["so(1,2)", "so(1,3)", "sl(2,R)", "so(2,3)"]), st.integers(0, 2**16))
def test_standard_rep_is_homomorphism(name, seed):
    b = builtin(name)
    rng = np.random.default_rng(seed)
    X, Y = rng.standard_normal((2, b.algebra.dim))
    r = b.standard
    assert np.allclose(r(X) @ r(Y) - r(Y) @ r(X), r(b.algebra.bracket(X, Y)), atol=1e-10)


@given(st.sampled_from(["so(1,3)", "sl(3,R)"]), st.integers(0, 2**16))
def test_killing_is_ad_invariant(name, seed):
    a = builtin(name).algebra
    k = killing_form(a)
    rng = np.random.default_rng(seed)
    X, Y, Z = rng.standard_normal((3, a.dim))
    assert abs(k(a.bracket(X, Y), Z) + k(Y, a.bracket(X, Z))) < 1e-9 * max(1.0, abs(k(Y, Z)))
