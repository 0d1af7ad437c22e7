"""Real Lie algebras from structure constants.

Convention: ``[e_i, e_j] = sum_k c[i, j, k] e_k`` and ``ad_X`` acts on column
vectors, so column ``j`` of ``ad(X)`` is ``[X, e_j]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    AlgebraMismatch,
    DimensionMismatch,
    JacobiViolation,
    NotAbelian,
    NotLorentz,
    NotSemisimple,
    NotSkew,
    NotSplitDiagonalizable,
    ShapeError,
    UnknownBuiltin,
)
from .pseudo_linalg import (
    EPS_RANK,
    BilinearForm,
    Subspace,
    intersect,
    isotropic_vector,
    null_space,
    row_space,
    signature,
)

JACOBI_TOL = 1e-9
REP_TOL = 1e-8
EPS_NILP = 1e-8
ROOT_CLUSTER_TOL = 1e-6


class LieAlgebra:
    """Finite-dimensional real Lie algebra given by structure constants."""

    def __init__(self, c, labels: Sequence[str] | None = None, name: str | None = None,
                 validate: bool = True):
        c = np.array(c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ShapeError(f"structure constants must be d x d x d, got {c.shape}")
        self.c = 0.5 * (c - c.transpose(1, 0, 2))
        self.c.setflags(write=False)
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(len(c))]
        if len(self.labels) != self.dim:
            raise ShapeError("one label per basis element is required")
        self.name = name
        if validate:
            residual, triple = kernels.jacobi_residual(self.c)
            if residual > JACOBI_TOL:
                raise JacobiViolation(residual, triple)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def __repr__(self):
        return f"LieAlgebra({self.name or 'custom'}, dim={self.dim})"

    def _vec(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape != (self.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got {X.shape}")
        return X

    def bracket(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", self._vec(X), self._vec(Y), self.c)

    def ad(self, X) -> np.ndarray:
        return np.einsum("i,ijk->kj", self._vec(X), self.c)

    def ad_basis(self) -> np.ndarray:
        """Stack of ``ad(e_i)``, shape (dim, dim, dim)."""
        return self.c.transpose(0, 2, 1).copy()

    def basis_vector(self, label: str) -> np.ndarray:
        v = np.zeros(self.dim)
        v[self.labels.index(label)] = 1.0
        return v

    @classmethod
    def from_matrices(cls, matrices, labels=None, name=None) -> "LieAlgebra":
        """Structure constants of the span of linearly independent matrices."""
        mats = np.asarray(matrices, dtype=float)
        d = len(mats)
        flat = mats.reshape(d, -1).T
        c = np.zeros((d, d, d))
        for i in range(d):
            for j in range(i + 1, d):
                comm = mats[i] @ mats[j] - mats[j] @ mats[i]
                coef, *_ = np.linalg.lstsq(flat, comm.ravel(), rcond=None)
                if np.max(np.abs(flat @ coef - comm.ravel()), initial=0.0) > 1e-9:
                    raise ShapeError("matrices do not span a Lie algebra (not closed under bracket)")
                coef[np.abs(coef) < 1e-14] = 0.0
                c[i, j] = coef
                c[j, i] = -coef
        return cls(c, labels=labels, name=name)


class MatrixRep:
    """Representation of a LieAlgebra by one m x m matrix per basis element."""

    def __init__(self, algebra: LieAlgebra, matrices, validate: bool = True):
        mats = np.array(matrices, dtype=float)
        if mats.ndim == 1 and mats.size == 0:
            mats = mats.reshape(0, 0, 0)
        if mats.ndim != 3 or mats.shape[0] != algebra.dim or mats.shape[1] != mats.shape[2]:
            raise ShapeError(
                f"need {algebra.dim} square matrices, got array of shape {mats.shape}"
            )
        self.algebra = algebra
        self.matrices = mats
        self.matrices.setflags(write=False)
        if validate:
            r = self.homomorphism_residual()
            if r > REP_TOL:
                raise ShapeError(f"matrices violate the bracket relations (residual {r:.3e})")

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, X) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.algebra._vec(X), self.matrices)

    def homomorphism_residual(self) -> float:
        m = self.matrices
        worst = 0.0
        for i in range(len(m)):
            for j in range(i + 1, len(m)):
                lhs = np.einsum("k,kab->ab", self.algebra.c[i, j], m)
                rhs = m[i] @ m[j] - m[j] @ m[i]
                worst = max(worst, float(np.max(np.abs(lhs - rhs), initial=0.0)))
        return worst

    @classmethod
    def trivial(cls, algebra: LieAlgebra, dim: int = 1) -> "MatrixRep":
        return cls(algebra, np.zeros((algebra.dim, dim, dim)))

    @classmethod
    def adjoint(cls, algebra: LieAlgebra) -> "MatrixRep":
        return cls(algebra, algebra.ad_basis())

    def direct_sum(self, other: "MatrixRep") -> "MatrixRep":
        _same_algebra(self, other)
        n, m = self.dim, other.dim
        out = np.zeros((self.algebra.dim, n + m, n + m))
        out[:, :n, :n] = self.matrices
        out[:, n:, n:] = other.matrices
        return MatrixRep(self.algebra, out)


def _same_algebra(r1: MatrixRep, r2: MatrixRep):
    a, b = r1.algebra, r2.algebra
    if a is b:
        return
    if a.dim != b.dim or not np.allclose(a.c, b.c, atol=1e-12):
        raise AlgebraMismatch("representations are of different Lie algebras")


def new_lie_algebra(c, labels=None, name=None) -> LieAlgebra:
    return LieAlgebra(c, labels=labels, name=name)


def bracket(a: LieAlgebra, X, Y) -> np.ndarray:
    return a.bracket(X, Y)


def direct_sum(*algebras: LieAlgebra) -> LieAlgebra:
    d = sum(a.dim for a in algebras)
    c = np.zeros((d, d, d))
    labels = []
    off = 0
    for k, a in enumerate(algebras):
        s = slice(off, off + a.dim)
        c[s, s, s] = a.c
        labels += [f"{lab}_{k}" for lab in a.labels]
        off += a.dim
    name = "+".join(a.name or "custom" for a in algebras)
    return LieAlgebra(c, labels=labels, name=name)


def subalgebra(a: LieAlgebra, s: Subspace, name: str | None = None) -> LieAlgebra:
    """Structure constants of a bracket-closed subspace in its own basis."""
    b = s.basis
    k = b.shape[0]
    c = np.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            c[i, j] = s.coordinates(a.bracket(b[i], b[j]))
    return LieAlgebra(c, name=name, validate=False)


# ---------------------------------------------------------------- invariants

def killing_form(a: LieAlgebra) -> BilinearForm:
    return BilinearForm(np.einsum("ilk,jkl->ij", a.c, a.c))


def is_semisimple(a: LieAlgebra, eps_rank: float = EPS_RANK) -> bool:
    return signature(killing_form(a), eps_rank)[2] == 0


def is_ad_nilpotent(a: LieAlgebra, X, eps_nilp: float = EPS_NILP) -> bool:
    ad = a.ad(X)
    scale = np.linalg.norm(ad)
    if scale == 0.0:
        return True
    power = np.linalg.matrix_power(ad / scale, a.dim)
    return float(np.max(np.abs(power))) <= eps_nilp


def _require_semisimple(a: LieAlgebra):
    if not is_semisimple(a):
        raise NotSemisimple(f"{a!r} has a degenerate Killing form")


def _real_invariant_subspaces(z: np.ndarray, tol: float = 1e-6) -> list[np.ndarray]:
    """Real primary subspaces of a semisimple operator, one per eigenvalue or conjugate pair."""
    n = z.shape[0]
    w = np.linalg.eigvals(z)
    scale = max(1.0, float(np.max(np.abs(w))))
    groups: list[complex] = []
    for mu in sorted(w, key=lambda v: (round(v.real, 6), round(abs(v.imag), 6))):
        key = complex(mu.real, abs(mu.imag))
        if not any(abs(key - g) <= tol * scale for g in groups):
            groups.append(key)
    out = []
    for mu in groups:
        if abs(mu.imag) <= tol * scale:
            op = z - mu.real * np.eye(n)
        else:
            op = z @ z - 2 * mu.real * z + (abs(mu) ** 2) * np.eye(n)
        out.append(null_space(op, 1e-7))
    return out


def _centroid(a: LieAlgebra) -> list[np.ndarray]:
    ad = MatrixRep(a, a.ad_basis(), validate=False)
    return invariant_linear_maps(ad, ad)


def simple_ideals(a: LieAlgebra, seed: int = 0) -> list[Subspace]:
    """Decompose a semisimple algebra into simple ideals.

    The centroid (maps commuting with every ad) acts on each simple ideal by a
    scalar from R or C; eigenspaces of a generic centroid element separate them.
    """
    _require_semisimple(a)
    rng = np.random.default_rng(seed)
    pending = [np.eye(a.dim)]
    done: list[np.ndarray] = []
    for _ in range(8 * a.dim + 8):
        if not pending:
            break
        basis = pending.pop()
        sub = subalgebra(a, Subspace(basis))
        cent = _centroid(sub)
        if len(cent) <= 1:
            done.append(basis)
            continue
        z = sum(rng.standard_normal() * m for m in cent)
        parts = _real_invariant_subspaces(z)
        if len(parts) == 1:
            if len(cent) == 2:
                # centroid is C: a complex simple algebra viewed as real
                done.append(basis)
            else:
                pending.append(basis)  # unlucky draw, retry with a fresh element
            continue
        for p in parts:
            pending.append(row_space(p @ basis))
    else:
        raise NotSemisimple("ideal splitting did not converge")
    done.sort(key=lambda b: (b.shape[0], tuple(np.round(np.abs(b).sum(axis=0), 6))))
    return [Subspace(b) for b in done]


def ideal_residuals(a: LieAlgebra, ideals: list[Subspace]) -> dict:
    """Bracket closure, ideal property and Killing orthogonality of a splitting."""
    kf = killing_form(a).matrix
    closure = 0.0
    for s in ideals:
        for x in s.basis:
            for e in np.eye(a.dim):
                v = a.bracket(e, x)
                q = s.orthonormal()
                closure = max(closure, float(np.linalg.norm(v - q.T @ (q @ v))))
    ortho = 0.0
    for i, s in enumerate(ideals):
        for t in ideals[i + 1:]:
            ortho = max(ortho, float(np.max(np.abs(s.basis @ kf @ t.basis.T))))
    total = sum(s.dim for s in ideals)
    return {"ideal_residual": closure, "killing_orthogonality": ortho, "total_dim": total}


def has_sl2r_factor(a: LieAlgebra) -> bool:
    """True iff some simple ideal is 3-dimensional with split Killing form."""
    kf = killing_form(a)
    for s in simple_ideals(a):
        if s.dim == 3:
            sig = signature(BilinearForm(s.orthonormal() @ kf.matrix @ s.orthonormal().T))
            if sig == (2, 1, 0):
                return True
    return False


# ------------------------------------------------------- eigen-space helpers

def real_eigenspaces(m: np.ndarray, tol: float = 1e-6) -> list[tuple[float, np.ndarray]]:
    """Real eigenvalues of ``m`` with orthonormal bases of their eigenspaces."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if n == 0:
        return []
    w = np.linalg.eigvals(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    reals = sorted(float(v.real) for v in w if abs(v.imag) <= tol * scale)
    clusters: list[list[float]] = []
    for v in reals:
        if clusters and abs(v - clusters[-1][-1]) <= tol * scale:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    out = []
    for cl in clusters:
        mu = float(np.mean(cl))
        if abs(mu) <= tol * scale:
            mu = 0.0
        basis = null_space(m - mu * np.eye(n), 1e-7)
        if basis.shape[0]:
            out.append((mu, basis))
    return out


# -------------------------------------------------------- root decomposition

@dataclass
class RootDecomposition:
    algebra: LieAlgebra
    cartan: Subspace
    roots: list[np.ndarray]
    spaces: list[Subspace]
    zero_space: Subspace
    labels: list[str] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.cartan.dim

    def root_index(self, root, tol: float = ROOT_CLUSTER_TOL) -> int:
        root = np.asarray(root, dtype=float)
        for i, r in enumerate(self.roots):
            if np.max(np.abs(r - root), initial=0.0) < tol:
                return i
        return -1

    def space_for(self, weight, tol: float = ROOT_CLUSTER_TOL) -> Subspace | None:
        """The graded piece for ``weight``: zero space, a root space, or None."""
        weight = np.asarray(weight, dtype=float)
        if np.max(np.abs(weight), initial=0.0) < tol:
            return self.zero_space
        i = self.root_index(weight, tol)
        return self.spaces[i] if i >= 0 else None

    def graded_basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Basis rows adapted to the grading and the root value of each row.

        Order: negative roots ..., zero space, positive roots ... following
        ``self.roots`` with the zero space inserted at its sorted position.
        """
        blocks = [(np.zeros(self.rank), self.zero_space)] + list(zip(self.roots, self.spaces))
        blocks.sort(key=lambda rb: tuple(np.round(rb[0], 9)))
        rows, weights = [], []
        for r, s in blocks:
            for b in s.basis:
                rows.append(b)
                weights.append(r)
        return np.array(rows).reshape(-1, self.algebra.dim), np.array(weights).reshape(-1, self.rank)

    def dims(self) -> dict:
        out = {"0": self.zero_space.dim}
        for r, s in zip(self.roots, self.spaces):
            out[format_covector(r)] = s.dim
        return out


def format_covector(v) -> str:
    vals = []
    for x in np.asarray(v, dtype=float):
        x = 0.0 if abs(x) < 5e-10 else x
        vals.append(f"{x:.6g}")
    return "(" + ",".join(vals) + ")"


def _snap(v: np.ndarray) -> np.ndarray:
    out = np.round(v, 10)
    out[out == 0] = 0.0
    return out


def _canonical_root_key(r: np.ndarray):
    return tuple(np.round(r, 9))


def root_space_decomposition(a: LieAlgebra, cartan: Subspace,
                             cluster_tol: float = ROOT_CLUSTER_TOL) -> RootDecomposition:
    """Simultaneous eigenspace decomposition of ad over a split Cartan subspace."""
    if cartan.ambient_dim != a.dim:
        raise DimensionMismatch("cartan subspace is not inside the algebra")
    hs = cartan.basis
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            if np.max(np.abs(a.bracket(hs[i], hs[j]))) > 1e-10:
                raise NotAbelian(f"cartan basis elements {i}, {j} do not commute")
    ads = [a.ad(h) for h in hs]
    for i, m in enumerate(ads):
        w = np.linalg.eigvals(m)
        scale = max(1.0, float(np.linalg.norm(m)))
        if np.any(np.abs(w.imag) > 1e-7 * scale):
            raise NotSplitDiagonalizable(f"ad of cartan element {i} has non-real spectrum")
        if sum(b.shape[0] for _, b in real_eigenspaces(m)) != a.dim:
            raise NotSplitDiagonalizable(f"ad of cartan element {i} is not diagonalizable")

    pieces: list[tuple[list[float], np.ndarray]] = [([], np.eye(a.dim))]
    for m in ads:
        refined = []
        for vals, basis in pieces:
            restricted = basis @ m @ basis.T
            spaces = real_eigenspaces(restricted)
            if sum(b.shape[0] for _, b in spaces) != basis.shape[0]:
                raise NotSplitDiagonalizable("cartan elements are not simultaneously diagonalizable")
            for mu, coords in spaces:
                refined.append((vals + [mu], row_space(coords @ basis)))
        pieces = refined

    zero_rows, groups = [], []
    for vals, basis in pieces:
        v = np.array(vals, dtype=float)
        if np.max(np.abs(v), initial=0.0) < cluster_tol:
            zero_rows.append(basis)
            continue
        for g in groups:
            if np.max(np.abs(g[0] - v)) < cluster_tol:
                g[1].append(basis)
                break
        else:
            groups.append([v, [basis]])
    groups.sort(key=lambda g: _canonical_root_key(g[0]))
    roots = [_snap(g[0]) for g in groups]
    spaces = [Subspace(row_space(np.vstack(g[1]))) for g in groups]
    zero = Subspace(row_space(np.vstack(zero_rows)), ambient_dim=a.dim) if zero_rows else Subspace.zero(a.dim)
    return RootDecomposition(a, cartan, roots, spaces, zero)


def root_decomposition_residuals(rd: RootDecomposition) -> dict:
    """Eigen, grading, Killing-orthogonality and nilpotency residuals."""
    a = rd.algebra
    kf = killing_form(a).matrix
    eig = 0.0
    for r, s in zip(rd.roots, rd.spaces):
        for h, val in zip(rd.cartan.basis, r):
            for x in s.basis:
                eig = max(eig, float(np.linalg.norm(a.bracket(h, x) - val * x) / np.linalg.norm(x)))
    blocks = [(np.zeros(rd.rank), rd.zero_space)] + list(zip(rd.roots, rd.spaces))
    grading = 0.0
    ortho = 0.0
    for ra, sa in blocks:
        for rb, sb in blocks:
            target = rd.space_for(ra + rb)
            for x in sa.basis:
                for y in sb.basis:
                    v = a.bracket(x, y)
                    if target is None:
                        res = float(np.linalg.norm(v))
                    else:
                        q = target.orthonormal()
                        res = float(np.linalg.norm(v - q.T @ (q @ v)))
                    grading = max(grading, res)
            if np.max(np.abs(ra + rb), initial=0.0) >= ROOT_CLUSTER_TOL:
                if sa.dim and sb.dim:
                    ortho = max(ortho, float(np.max(np.abs(sa.basis @ kf @ sb.basis.T))))
    nilpotent = all(is_ad_nilpotent(a, x) for s in rd.spaces for x in s.basis)
    total = rd.zero_space.dim + sum(s.dim for s in rd.spaces)
    paired = all(rd.root_index(-r) >= 0 for r in rd.roots)
    return {
        "eigen_residual": eig,
        "grading_residual": grading,
        "killing_orthogonality_residual": ortho,
        "root_vectors_nilpotent": nilpotent,
        "dim_total": total,
        "roots_paired": paired,
    }


# ------------------------------------------------------ invariant subspaces

def _check_lorentz_skew(form: BilinearForm, rep: MatrixRep):
    pos, neg, null = form.signature
    if null != 0 or min(pos, neg) != 1:
        raise NotLorentz(f"form signature {form.signature} is not Lorentzian")
    if rep.dim != form.dim:
        raise DimensionMismatch("representation and form act on different spaces")
    g = form.matrix
    for i, m in enumerate(rep.matrices):
        if np.max(np.abs(m.T @ g + g @ m), initial=0.0) > 1e-8:
            raise NotSkew(f"generator {i} is not skew for the form")


def common_eigenspaces(matrices, n: int) -> list[np.ndarray]:
    """Subspaces on which every matrix acts as a real scalar.

    Each generator's real eigenspaces are intersected with the current
    candidates, generator by generator.
    """
    cands = [np.eye(n)]
    for m in matrices:
        nxt = []
        spaces = real_eigenspaces(m)
        for c in cands:
            for _, e in spaces:
                inter = intersect(c, e)
                if inter.shape[0]:
                    nxt.append(inter)
        cands = nxt
        if not cands:
            break
    return cands


def invariant_isotropic_line(form: BilinearForm, rep: MatrixRep):
    """A lightlike vector spanning a line preserved by every generator, or None."""
    _check_lorentz_skew(form, rep)
    for cand in common_eigenspaces(rep.matrices, form.dim):
        v = isotropic_vector(form, Subspace(cand))
        if v is None:
            continue
        ok = True
        for m in rep.matrices:
            mv = m @ v
            if np.linalg.norm(mv - (v @ mv) * v) > 1e-7 * np.linalg.norm(v):
                ok = False
                break
        if ok:
            return v * np.sign(v[np.flatnonzero(np.abs(v) > 1e-12)[0]])
    return None


def invariant_linear_maps(repE: MatrixRep, repF: MatrixRep, eps: float = 1e-8) -> list[np.ndarray]:
    """Basis of f: E -> F with rho_F(e_i) f = f rho_E(e_i) for every generator.

    Each result is a (dim F) x (dim E) matrix.
    """
    _same_algebra(repE, repF)
    n, m = repE.dim, repF.dim
    if n == 0 or m == 0:
        return []
    eye_n, eye_m = np.eye(n), np.eye(m)
    # row-major vec: vec(A f) = (A kron I) vec f, vec(f B) = (I kron B^T) vec f
    blocks = [np.kron(rf, eye_n) - np.kron(eye_m, re.T)
              for re, rf in zip(repE.matrices, repF.matrices)]
    if not blocks:
        return [b.reshape(m, n) for b in np.eye(m * n)]
    sol = null_space(np.vstack(blocks), eps)
    return [_tidy(v.reshape(m, n)) for v in sol]


def _tidy(x: np.ndarray) -> np.ndarray:
    k = np.flatnonzero(np.abs(x.ravel()) > 1e-9)
    if k.size:
        x = x / x.ravel()[k[0]]
    x[np.abs(x) < 1e-13] = 0.0
    return x


def invariant_antisym_bilinear_maps(repE: MatrixRep, dimF: int = 1,
                                    eps: float = 1e-8) -> list[np.ndarray]:
    """Basis of antisymmetric T: E x E -> F (F trivial) with T(Xu, v) + T(u, Xv) = 0.

    Results have shape (dimF, dim E, dim E).
    """
    n = repE.dim
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not pairs or dimF == 0:
        return []
    basis = []
    for i, j in pairs:
        a = np.zeros((n, n))
        a[i, j], a[j, i] = 1.0, -1.0
        basis.append(a)
    # invariance of a form A under X: X^T A + A X = 0
    rows = []
    for x in repE.matrices:
        rows.append(np.stack([(x.T @ a + a @ x).ravel() for a in basis], axis=1))
    if rows:
        sol = null_space(np.vstack(rows), eps)
    else:
        sol = np.eye(len(pairs))
    single = [_tidy(np.einsum("k,kab->ab", s, np.array(basis))) for s in sol]
    out = []
    for f in range(dimF):
        for a in single:
            t = np.zeros((dimF, n, n))
            t[f] = a
            out.append(t)
    return out


# --------------------------------------------------------------- builtins

@dataclass
class BuiltinAlgebra:
    algebra: LieAlgebra
    standard: MatrixRep
    form: BilinearForm | None
    cartan: Subspace


def so_pq(p: int, q: int) -> BuiltinAlgebra:
    """so(p, q) acting on R^{p+q} with form diag(-1 x p, +1 x q)."""
    n = p + q
    eta = np.array([-1.0] * p + [1.0] * q)
    mats, labels, pairs = [], [], []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b] = eta[b]
            m[b, a] = -eta[a]
            mats.append(m)
            labels.append(("K" if eta[a] != eta[b] else "J") + f"{a}{b}")
            pairs.append((a, b))
    name = f"so({n})" if p == 0 else f"so({p},{q})"
    alg = LieAlgebra.from_matrices(mats, labels=labels, name=name)
    rank = min(p, q)
    cartan_rows = []
    for k in range(rank):
        v = np.zeros(len(mats))
        v[pairs.index((k, p + k))] = 1.0
        cartan_rows.append(v)
    cartan = Subspace(np.array(cartan_rows).reshape(-1, len(mats)), ambient_dim=len(mats))
    return BuiltinAlgebra(alg, MatrixRep(alg, mats), BilinearForm(np.diag(eta)), cartan)


def sl_n(n: int) -> BuiltinAlgebra:
    """sl(n, R): basis H_1..H_{n-1}, then E_ij (i<j), then E_ji (i<j)."""
    mats, labels = [], []
    for i in range(n - 1):
        m = np.zeros((n, n))
        m[i, i], m[i + 1, i + 1] = 1.0, -1.0
        mats.append(m)
        labels.append(f"H{i + 1}" if n > 2 else "H")
    ups, downs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            up = np.zeros((n, n))
            up[i, j] = 1.0
            dn = np.zeros((n, n))
            dn[j, i] = 1.0
            ups.append((up, f"E{i}{j}" if n > 2 else "E"))
            downs.append((dn, f"F{i}{j}" if n > 2 else "F"))
    for m, lab in ups + downs:
        mats.append(m)
        labels.append(lab)
    alg = LieAlgebra.from_matrices(mats, labels=labels, name=f"sl({n},R)")
    cartan = Subspace(np.eye(len(mats))[: n - 1])
    return BuiltinAlgebra(alg, MatrixRep(alg, mats), None, cartan)


_NAME_RE = re.compile(r"^\s*(so|sl)\s*\(\s*(\d+)\s*(?:,\s*(\d+|R|ℝ)\s*)?\)\s*$")


def builtin(name: str) -> BuiltinAlgebra:
    """Builtin algebra by name: so(1,n), so(2,n), so(n), sl(n,R) with 2 <= n <= 6."""
    m = _NAME_RE.match(name)
    if not m:
        raise UnknownBuiltin(f"unknown builtin algebra {name!r}")
    kind, first, second = m.group(1), int(m.group(2)), m.group(3)
    if kind == "sl":
        if second not in ("R", "ℝ") or not 2 <= first <= 6:
            raise UnknownBuiltin(f"unknown builtin algebra {name!r}")
        return sl_n(first)
    if second is None:
        if not 2 <= first <= 6:
            raise UnknownBuiltin(f"so(n) needs 2 <= n <= 6, got {name!r}")
        return so_pq(0, first)
    q = int(second)
    if first not in (1, 2) or not 2 <= q <= 6:
        raise UnknownBuiltin(f"unknown builtin algebra {name!r}")
    return so_pq(first, q)


BUILTIN_ALGEBRA_PATTERNS = ["so(1,n)", "so(2,n)", "so(n)", "sl(n,R)"]


def builtin_names() -> list[str]:
    names = [f"so(1,{n})" for n in range(2, 7)]
    names += [f"so(2,{n})" for n in range(2, 7)]
    names += [f"so({n})" for n in range(2, 7)]
    names += [f"sl({n},R)" for n in range(2, 7)]
    return names
