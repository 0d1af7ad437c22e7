"""Linear isometric actions of matrix Lie algebras on model spaces.

The Killing field of ``X`` at ``x`` is ``rho(X) x`` and the Gauss map sends
``x`` to the form ``(X, Y) -> <rho(X) x, rho(Y) x>`` on the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import NotIsometry, NotLorentzOrbit, NotSemisimple, NotSkew, ShapeError, UnknownBuiltin
from .geometry import (
    ModelSpace,
    anti_de_sitter,
    de_sitter,
    hyperbolic_sheet,
    minkowski,
    sample_rng,
    space_from_descriptor,
)
from .lie_algebra import (
    LieAlgebra,
    MatrixRep,
    RootDecomposition,
    builtin,
    has_sl2r_factor,
    invariant_linear_maps,
    is_ad_nilpotent,
    is_semisimple,
    real_eigenspaces,
    subalgebra,
)
from .pseudo_linalg import (
    EPS_RANK,
    BilinearForm,
    Subspace,
    max_isotropic_dim,
    null_space,
    row_space,
    signature,
)
from .weight_analysis import Chamber, chamber_representatives, negative_weight_subspace

SKEW_TOL = 1e-9
WITNESS_TOL = 1e-9
ISOTROPY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class IsometricAction:
    algebra: LieAlgebra
    rep: MatrixRep
    space: ModelSpace
    name: str = ""

    def __post_init__(self):
        if self.rep.dim != self.space.ambient_dim:
            raise ShapeError(
                f"representation acts on R^{self.rep.dim}, space lives in R^{self.space.ambient_dim}"
            )
        r = skew_residual(self.rep, self.space.ambient_form)
        if r > SKEW_TOL:
            raise NotSkew(f"generators are not skew for the ambient form (residual {r:.3e})")

    @property
    def form(self) -> np.ndarray:
        return self.space.ambient_form.matrix

    def fields_at(self, x) -> np.ndarray:
        """Row i is the Killing field of basis element i at x."""
        return np.einsum("iab,b->ia", self.rep.matrices, np.asarray(x, dtype=float))

    def group_element(self, X) -> np.ndarray:
        return expm(self.rep(X))

    def descriptor(self) -> dict:
        return {"algebra": self.algebra.name, "rep": "standard", "space": self.space.descriptor()}


def skew_residual(rep: MatrixRep, form: BilinearForm) -> float:
    g = form.matrix
    return max((float(np.max(np.abs(m.T @ g + g @ m))) for m in rep.matrices), default=0.0)


@dataclass
class GaussSample:
    x: np.ndarray
    phi: BilinearForm


# ------------------------------------------------------------- builtins

def standard_action(algebra_name: str, space: ModelSpace) -> IsometricAction:
    b = builtin(algebra_name)
    if b.form is None:
        raise UnknownBuiltin(f"{algebra_name} has no invariant ambient form")
    return IsometricAction(b.algebra, b.standard, space, name=f"{algebra_name} on {space!r}")


def shipped_actions() -> dict[str, IsometricAction]:
    """The builtin actions exercised by the test and acceptance suites."""
    return {
        "so(1,2) on minkowski(2)": standard_action("so(1,2)", minkowski(2)),
        "so(1,3) on minkowski(3)": standard_action("so(1,3)", minkowski(3)),
        "so(1,3) on de_sitter(3)": standard_action("so(1,3)", de_sitter(3)),
        "so(1,3) on hyperbolic(3)": standard_action("so(1,3)", hyperbolic_sheet(3)),
        "so(2,2) on anti_de_sitter(3)": standard_action("so(2,2)", anti_de_sitter(3)),
    }


def block_action() -> IsometricAction:
    """so(1,1) + so(2) acting blockwise on Minkowski(3): boost in (0,1), rotation in (2,3)."""
    boost = np.zeros((4, 4))
    boost[0, 1] = boost[1, 0] = 1.0
    rot = np.zeros((4, 4))
    rot[2, 3], rot[3, 2] = -1.0, 1.0
    alg = LieAlgebra.from_matrices([boost, rot], labels=["K01", "J23"], name="so(1,1)+so(2)")
    return IsometricAction(alg, MatrixRep(alg, [boost, rot]), minkowski(3), name="so(1,1)+so(2) on minkowski(3)")


def split_isotropy_action() -> IsometricAction:
    """so(1,2) + so(2) on Minkowski(4) = R^{1,2} + R^2, the second factor rotating the last plane."""
    b = builtin("so(1,2)")
    mats = []
    for m in b.standard.matrices:
        big = np.zeros((5, 5))
        big[:3, :3] = m
        mats.append(big)
    rot = np.zeros((5, 5))
    rot[3, 4], rot[4, 3] = -1.0, 1.0
    mats.append(rot)
    alg = LieAlgebra.from_matrices(mats, labels=list(b.algebra.labels) + ["J34"], name="so(1,2)+so(2)")
    return IsometricAction(alg, MatrixRep(alg, mats), minkowski(4), name="so(1,2)+so(2) on minkowski(4)")


def action_from_descriptor(d: dict) -> IsometricAction:
    space = space_from_descriptor(d["space"])
    alg = d.get("algebra")
    rep = d.get("rep", "standard")
    if isinstance(alg, str) and rep == "standard":
        return standard_action(alg, space)
    if isinstance(alg, str):
        algebra = builtin(alg).algebra
    else:
        algebra = LieAlgebra(alg["structure_constants"], labels=alg.get("labels"))
    if isinstance(rep, dict):
        rep = rep.get("matrices")
    if rep == "standard":
        raise ShapeError("a custom algebra needs explicit representation matrices")
    return IsometricAction(algebra, MatrixRep(algebra, rep), space)


# ----------------------------------------------------------- evaluation

def killing_field(a: IsometricAction, X, x) -> np.ndarray:
    x = a.space.check_point(x)
    return a.space.check_tangent(x, a.rep(X) @ x)


def gauss_map(a: IsometricAction, x) -> GaussSample:
    x = a.space.check_point(x)
    k = a.fields_at(x)
    scale = max(1.0, float(x @ x))
    return GaussSample(x, BilinearForm(k @ a.form @ k.T, eps_rank=EPS_RANK * scale))


def stabilizer_algebra(a: IsometricAction, x) -> Subspace:
    """Kernel of X -> rho(X) x."""
    x = a.space.check_point(x)
    k = a.fields_at(x)
    if not np.any(k):
        return Subspace.full(a.algebra.dim)
    return Subspace(null_space(k.T, EPS_RANK), ambient_dim=a.algebra.dim)


def orbit_tangent(a: IsometricAction, x) -> Subspace:
    x = a.space.check_point(x)
    return Subspace(row_space(a.fields_at(x), EPS_RANK), ambient_dim=a.space.ambient_dim)


def orbit_causal_type(a: IsometricAction, x) -> str:
    """'lorentz', 'spacelike', 'lightlike' or 'point' from the Gauss form."""
    g = gauss_map(a, x)
    stab = stabilizer_algebra(a, x).dim
    pos, neg, null = g.phi.signature
    if pos + neg == 0:
        return "point"
    if null > stab:
        return "lightlike"
    if neg == 1:
        return "lorentz"
    if neg == 0:
        return "spacelike"
    return "indefinite"


def orbit_causal_type_ambient(a: IsometricAction, x) -> str:
    """Same classification from the ambient form restricted to the orbit tangent."""
    t = orbit_tangent(a, x)
    if t.dim == 0:
        return "point"
    pos, neg, null = signature(BilinearForm(t.basis @ a.form @ t.basis.T))
    if null:
        return "lightlike"
    if neg == 1:
        return "lorentz"
    if neg == 0:
        return "spacelike"
    return "indefinite"


def rank_identity_residual(a: IsometricAction, x) -> int:
    """rank(Gauss form) + dim stabilizer - dim algebra (zero off degenerate orbits)."""
    g = gauss_map(a, x)
    pos, neg, _ = g.phi.signature
    return pos + neg + stabilizer_algebra(a, x).dim - a.algebra.dim


def adjoint_of_group_element(a: IsometricAction, g: np.ndarray) -> np.ndarray:
    """Matrix of Ad_g in the algebra basis, from the matrix representation."""
    mats = a.rep.matrices
    flat = mats.reshape(len(mats), -1).T
    conj = np.stack([(g @ m @ np.linalg.inv(g)).ravel() for m in mats], axis=1)
    coef, *_ = np.linalg.lstsq(flat, conj, rcond=None)
    return coef


def equivariance_residual(a: IsometricAction, g, x) -> float:
    """max |(g . Phi_x) - Phi_{g x}| with (g.q)(X, Y) = q(Ad_{g^-1} X, Ad_{g^-1} Y)."""
    g = np.asarray(g, dtype=float)
    eta = a.form
    if np.max(np.abs(g.T @ eta @ g - eta)) > 1e-8:
        raise NotIsometry("group element does not preserve the ambient form")
    x = a.space.check_point(x)
    phi_x = gauss_map(a, x).phi.matrix
    gx = g @ x
    phi_gx = gauss_map(a, gx).phi.matrix
    ad_inv = adjoint_of_group_element(a, np.linalg.inv(g))
    moved = ad_inv.T @ phi_x @ ad_inv
    return float(np.max(np.abs(moved - phi_gx)))


# ---------------------------------------------------------- candidates

def candidate_points(space: ModelSpace, n_random: int = 64, seed: int = 0,
                     scales=(1.0, 2.0, 0.5)) -> list[np.ndarray]:
    """Deterministic lattice of causal representatives followed by seeded samples.

    Minkowski lattices list lightlike, then spacelike, then timelike points.
    """
    n = space.ambient_dim
    diag = np.diag(space.ambient_form.matrix)
    pts: list[np.ndarray] = []
    if not space.is_quadric:
        neg = [i for i in range(n) if diag[i] < 0]
        pos = [i for i in range(n) if diag[i] > 0]
        light, spacel, timel = [], [], []
        for s in scales:
            for i in neg:
                for j in pos:
                    for sign in (1.0, -1.0):
                        v = np.zeros(n)
                        v[i], v[j] = s, sign * s
                        light.append(v)
            for j in pos:
                v = np.zeros(n)
                v[j] = s
                spacel.append(v)
            for i in neg:
                v = np.zeros(n)
                v[i] = s
                timel.append(v)
        pts = light + spacel + timel
    else:
        lev = space.level
        ok = [i for i in range(n) if diag[i] * lev > 0]
        other = [j for j in range(n) if j not in ok]
        for i in ok:
            base = np.zeros(n)
            base[i] = np.sqrt(lev / diag[i])
            pts.append(base)
            for j in other:
                for s in scales:
                    # diag[i] a^2 + diag[j] b^2 = lev with b = s
                    a2 = (lev - diag[j] * s * s) / diag[i]
                    if a2 > 0:
                        v = np.zeros(n)
                        v[i], v[j] = np.sqrt(a2), s
                        pts.append(v)
        pts = [p for p in pts if space.contains(p)] + [-p for p in pts if space.contains(-p)]
    for i in range(n_random):
        pts.append(space.sample_point(sample_rng(seed, 100_000 + i)))
    return pts


# ------------------------------------------------------- witness search

@dataclass
class Witness:
    x: np.ndarray
    X: np.ndarray
    certificate: dict = field(default_factory=dict)


def witness_residuals(a: IsometricAction, x, X) -> dict:
    """Checks a witness without trusting the search: rho(X) x = 0 and ad_X nilpotent."""
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    ad = a.algebra.ad(X)
    power = np.linalg.matrix_power(ad, a.algebra.dim)
    return {
        "fixes_point": float(np.linalg.norm(a.rep(X) @ x)),
        "ad_power_max": float(np.max(np.abs(power))),
        "norm": float(np.linalg.norm(X)),
        "nilpotent": bool(is_ad_nilpotent(a.algebra, X)),
    }


def nonproper_witness_search(a: IsometricAction, rootdec: RootDecomposition,
                             candidates=None, n_random: int = 64, seed: int = 0) -> Witness | None:
    """Search for a point whose stabilizer algebra contains a nonzero nilpotent.

    For each candidate x and each chamber t of the root arrangement, the sum
    N_t of root spaces negative on t is tested for isotropy under the Gauss
    form at x; when isotropic, N_t is intersected with the stabilizer
    algebra. The first hit in candidate-then-chamber order is returned.
    """
    if not is_semisimple(a.algebra):
        raise NotSemisimple(f"{a.algebra!r} is not semisimple")
    sl2 = has_sl2r_factor(a.algebra)
    if candidates is None:
        candidates = candidate_points(a.space, n_random, seed)
    chambers: list[tuple[Chamber, Subspace]] = [
        (ch, negative_weight_subspace(rootdec, ch.representative))
        for ch in chamber_representatives(rootdec)
    ]
    for idx, x in enumerate(candidates):
        x = a.space.check_point(x)
        k = a.fields_at(x)
        phi = k @ a.form @ k.T
        scale = max(1.0, float(x @ x))
        for ch, nt in chambers:
            if nt.dim == 0:
                continue
            b = nt.basis
            restricted = b @ phi @ b.T
            iso = float(np.max(np.abs(restricted)))
            if iso > ISOTROPY_TOL * scale:
                continue
            images = b @ k  # row i is rho(b_i) x
            ker = null_space(images.T, EPS_RANK)
            if ker.shape[0] == 0:
                continue
            X = ker[0] @ b
            X /= np.linalg.norm(X)
            j = np.flatnonzero(np.abs(X) > 1e-12)
            X = X * np.sign(X[j[0]])
            X[np.abs(X) < 1e-15] = 0.0
            check = witness_residuals(a, x, X)
            if check["fixes_point"] > WITNESS_TOL or not check["nilpotent"]:
                continue
            image_rank = int(np.linalg.matrix_rank(images, tol=EPS_RANK * scale))
            cert = {
                "candidate_index": idx,
                "chamber": ch.pattern_string(),
                "t": [float(v) for v in ch.representative],
                "t_algebra": [float(v) for v in ch.representative @ rootdec.cartan.basis],
                "dim_N_t": nt.dim,
                "fact_dim_at_least_2": nt.dim >= 2,
                "isotropy_residual": iso,
                "max_isotropic_dim": max_isotropic_dim(BilinearForm(restricted)),
                "image_dim": image_rank,
                "stabilizer_dim_in_N_t": int(ker.shape[0]),
                "has_sl2r_factor": sl2,
                "hypothesis_ok": not sl2,
                "interpretation": "Gauss form vanishes on N_t; witness taken from N_t intersected with the stabilizer algebra",
                "candidates_scanned": idx + 1,
            }
            return Witness(x, X, cert)
    return None


# ------------------------------------------------- isotropy irreducibility

def induced_isotropy_rep(a: IsometricAction, x) -> tuple[MatrixRep, Subspace, Subspace]:
    """Stabilizer algebra acting on the orbit tangent at x."""
    stab = stabilizer_algebra(a, x)
    tan = orbit_tangent(a, x)
    t = tan.basis
    mats = []
    for s in stab.basis:
        m = a.rep(s)
        img = m @ t.T
        resid = img - t.T @ (t @ img)
        if np.max(np.abs(resid), initial=0.0) > 1e-8:
            raise ShapeError("stabilizer does not preserve the orbit tangent")
        mats.append(t @ m @ t.T)
    sub = subalgebra(a.algebra, stab) if stab.dim else LieAlgebra(np.zeros((0, 0, 0)))
    d = tan.dim
    return MatrixRep(sub, np.array(mats).reshape(stab.dim, d, d), validate=False), stab, tan


def _is_invariant(w: np.ndarray, mats) -> bool:
    for m in mats:
        img = m @ w.T
        if np.max(np.abs(img - w.T @ (w @ img)), initial=0.0) > 1e-8:
            return False
    return True


def _candidate_subspaces(mats, d: int, rng) -> list[np.ndarray]:
    ops = list(mats)
    if ops:
        ops.append(sum(rng.standard_normal() * m for m in mats))
    out = []
    for m in ops:
        for _, e in real_eigenspaces(m):
            out.append(e)
        w = np.linalg.eigvals(m)
        for mu in w:
            if mu.imag > 1e-7:
                op = m @ m - 2 * mu.real * m + abs(mu) ** 2 * np.eye(d)
                out.append(null_space(op, 1e-7))
        out.append(null_space(m, 1e-9))
        out.append(row_space(m.T, 1e-9))
    return [s for s in out if 0 < s.shape[0] < d]


def isotropy_irreducibility(a: IsometricAction, x, seed: int = 0) -> bool:
    """Whether the isotropy algebra acts irreducibly on the Lorentz orbit tangent."""
    if orbit_causal_type(a, x) != "lorentz":
        raise NotLorentzOrbit("isotropy irreducibility is only defined on Lorentz orbits")
    rep, _, tan = induced_isotropy_rep(a, x)
    d = tan.dim
    mats = [m for m in rep.matrices if np.any(np.abs(m) > 1e-12)]
    if d >= 2 and not mats:
        return False
    rng = np.random.default_rng(seed)
    for w in _candidate_subspaces(mats, d, rng):
        if _is_invariant(w, mats):
            return False
    commutant = len(invariant_linear_maps(rep, rep)) if rep.algebra.dim else d * d
    return commutant in (1, 2, 4)
