import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentzkit.errors import NotGenerating, RankTooLarge, UnknownWeight
from lorentzkit.lie_algebra import builtin, killing_form, root_space_decomposition
from lorentzkit.pseudo_linalg import Subspace
from lorentzkit.weight_analysis import (
    arrangement_chambers,
    chamber_representatives,
    support_scan,
    support_witness,
    negative_weight_fact,
    negative_weight_subspace,
    project_onto_weight_space,
    sym2_weight_decomposition,
    weight_residuals,
)


def rootdec(name):
    b = builtin(name)
    return root_space_decomposition(b.algebra, b.cartan)


def test_sym2_sl2():
    wd = sym2_weight_decomposition(rootdec("sl(2,R)"))
    assert [float(w[0]) for w in wd.weights] == [-4.0, -2.0, 0.0, 2.0, 4.0]
    assert wd.dims() == [1, 1, 2, 1, 1]


def test_sym2_so13():
    wd = sym2_weight_decomposition(rootdec("so(1,3)"))
    assert [float(w[0]) for w in wd.weights] == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert wd.dims() == [3, 4, 7, 4, 3]
    assert sum(wd.dims()) == 21


def test_sym2_abelian():
    from lorentzkit.lie_algebra import new_lie_algebra
    a = new_lie_algebra(np.zeros((3, 3, 3)))
    wd = sym2_weight_decomposition(root_space_decomposition(a, Subspace.full(3)))
    assert wd.dims() == [6]


@pytest.mark.parametrize("name", ["sl(2,R)", "so(1,3)", "so(2,3)", "sl(3,R)", "so(2,2)"])
def test_weight_residuals(name):
    wd = sym2_weight_decomposition(rootdec(name))
    res = weight_residuals(wd)
    assert res["dim_total"] == res["dim_expected"]
    assert res["orthogonality_residual"] <= 1e-9
    assert res["covariance_residual"] <= 1e-7


def test_projection_examples():
    rd = rootdec("sl(2,R)")
    wd = sym2_weight_decomposition(rd)
    k = killing_form(rd.algebra).matrix
    assert np.allclose(project_onto_weight_space(wd, k, [0.0]), k)
    for lam in ([2.0], [-2.0], [4.0], [-4.0]):
        assert np.allclose(project_onto_weight_space(wd, k, lam), 0)
    q = np.zeros((3, 3))
    q[1, 1] = 1.0  # (E, E)
    assert np.allclose(project_onto_weight_space(wd, q, [4.0]), q)
    p = project_onto_weight_space(wd, q, [4.0])
    assert np.allclose(project_onto_weight_space(wd, p, [4.0]), p)
    with pytest.raises(UnknownWeight):
        project_onto_weight_space(wd, q, [3.0])


@given(st.integers(0, 2**16))
def test_projections_sum_to_identity(seed):
    wd = sym2_weight_decomposition(rootdec("so(1,3)"))
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((6, 6))
    q = q + q.T
    total = sum(project_onto_weight_space(wd, q, w) for w in wd.weights)
    assert np.allclose(total, q, atol=1e-10)


def test_chamber_counts():
    assert len(chamber_representatives(rootdec("so(1,3)"))) == 2
    assert len(chamber_representatives(rootdec("sl(3,R)"))) == 6
    assert len(chamber_representatives(rootdec("so(2,3)"))) == 8
    assert len(chamber_representatives(rootdec("sl(4,R)"))) == 24


def test_rank1_representatives():
    reps = sorted(float(c.representative[0]) for c in chamber_representatives(rootdec("so(1,3)")))
    assert reps == [-1.0, 1.0]


def test_rank_too_large():
    with pytest.raises(RankTooLarge):
        chamber_representatives(rootdec("sl(5,R)"))


@pytest.mark.parametrize("name", ["sl(3,R)", "so(2,3)", "so(2,2)", "sl(4,R)"])
def test_chamber_patterns_distinct_and_symmetric(name):
    chs = chamber_representatives(rootdec(name))
    pats = {c.sign_pattern for c in chs}
    assert len(pats) == len(chs)
    assert all(tuple(-s for s in p) in pats for p in pats)
    assert all(0 not in p for p in pats)


def test_arrangement_rank2_hexagon():
    chs = arrangement_chambers(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    assert len(chs) == 6


def test_negative_weight_subspace_examples():
    rd = rootdec("so(1,3)")
    a = rd.algebra
    assert negative_weight_subspace(rd, [1.0]).dim == 2
    assert negative_weight_subspace(rd, [0.0]).dim == 0
    sl = rootdec("sl(2,R)")
    n = negative_weight_subspace(sl, [1.0])
    assert n.dim == 1 and n.contains([0, 0, 1])
    assert a.dim == 6


def test_negative_subspace_is_isotropic_for_killing():
    rd = rootdec("so(2,3)")
    k = killing_form(rd.algebra).matrix
    for ch in chamber_representatives(rd):
        b = negative_weight_subspace(rd, ch.representative).basis
        assert np.max(np.abs(b @ k @ b.T)) < 1e-9


@pytest.mark.parametrize("name,holds", [("so(1,3)", True), ("so(2,3)", True), ("so(1,4)", True),
                                        ("sl(3,R)", True), ("sl(2,R)", False), ("so(2,2)", False)])
def test_negative_weight_fact(name, holds):
    from lorentzkit.lie_algebra import has_sl2r_factor
    rd = rootdec(name)
    fact = negative_weight_fact(rd, has_sl2r_factor(rd.algebra))
    assert fact["fact_holds"] is holds
    assert fact["consistent"]


def test_fact_so22_only_fails_on_walls():
    fact = negative_weight_fact(rootdec("so(2,2)"), True)
    assert fact["min_chamber_dim"] == 2
    assert fact["min_dim"] == 1
    assert all(c["face"] in {w["face"] for w in fact["walls"]} for c in fact["counterexamples"])


def test_support_examples():
    w = [[1.0], [-1.0]]
    t0, side, vec = support_witness(w, Subspace([[1, 0]]))
    assert float(t0[0]) == -1.0 and side == "x"
    assert np.allclose(vec, [1, 0])
    assert support_witness(w, Subspace([[1, 1]])) is None
    full = Subspace.full(2)
    assert all(v is not None for _, _, v in support_scan(w, full))


def test_support_not_generating():
    with pytest.raises(NotGenerating):
        support_witness([[1.0, 0.0], [2.0, 0.0]], Subspace.full(2))
    with pytest.raises(NotGenerating):
        support_witness([[1.0], [-1.0]], Subspace.full(3))


@given(st.integers(0, 2**16), st.integers(1, 3))
def test_support_witness_support(seed, k):
    rng = np.random.default_rng(seed)
    weights = rng.integers(-2, 3, size=(4, 2)).astype(float)
    if np.linalg.matrix_rank(weights) < 2:
        return
    V = Subspace(rng.standard_normal((k, 4)))
    for t0, side, w in support_scan(weights, V):
        if w is None:
            continue
        vals = weights @ t0
        idx = np.flatnonzero(vals > 1e-9) if side == "x" else np.flatnonzero(vals < -1e-9)
        assert np.all(w[idx] == 0.0)
        assert V.contains(w, tol=1e-8)
