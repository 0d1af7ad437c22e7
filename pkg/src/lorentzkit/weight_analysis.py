"""Weights of a split Cartan acting on symmetric bilinear forms of the algebra.

A form ``q`` has weight ``lam`` when ``q(e^{ad H} X, e^{ad H} Y) = e^{lam(H)} q(X, Y)``
for every Cartan element ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NotGenerating, RankTooLarge, UnknownWeight
from .lie_algebra import ROOT_CLUSTER_TOL, RootDecomposition, format_covector
from .pseudo_linalg import Subspace, matrix_rank, null_space

EPS_SIGN = 1e-9
MAX_RANK = 3


@dataclass
class WeightDecomposition:
    rootdec: RootDecomposition
    weights: list[np.ndarray]
    blocks: list[list[np.ndarray]]
    change: np.ndarray  # columns are the graded basis vectors
    basis_weights: np.ndarray

    def index(self, lam, tol: float = ROOT_CLUSTER_TOL) -> int:
        lam = np.asarray(lam, dtype=float).reshape(-1)
        for i, w in enumerate(self.weights):
            if np.max(np.abs(w - lam), initial=0.0) < tol:
                return i
        raise UnknownWeight(f"{format_covector(lam)} is not a weight")

    def dims(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def to_graded(self, q) -> np.ndarray:
        return self.change.T @ np.asarray(q, dtype=float) @ self.change

    def from_graded(self, s) -> np.ndarray:
        inv = np.linalg.inv(self.change)
        return inv.T @ s @ inv


def _cluster_weights(values: np.ndarray, tol: float = ROOT_CLUSTER_TOL) -> list[np.ndarray]:
    reps: list[np.ndarray] = []
    for v in values:
        if not any(np.max(np.abs(v - r), initial=0.0) < tol for r in reps):
            reps.append(np.round(v, 10) + 0.0)
    reps.sort(key=lambda r: tuple(np.round(r, 9)))
    return reps


def sym2_weight_decomposition(rd: RootDecomposition) -> WeightDecomposition:
    rows, row_w = rd.graded_basis()
    change = rows.T
    n = rows.shape[0]
    pair_w = {(a, b): row_w[a] + row_w[b] for a in range(n) for b in range(a, n)}
    weights = _cluster_weights(np.array(list(pair_w.values())).reshape(-1, rd.rank))
    blocks: list[list[np.ndarray]] = [[] for _ in weights]
    inv = np.linalg.inv(change)
    for (a, b), w in pair_w.items():
        s = np.zeros((n, n))
        s[a, b] = s[b, a] = 1.0
        k = next(i for i, r in enumerate(weights) if np.max(np.abs(r - w), initial=0.0) < ROOT_CLUSTER_TOL)
        blocks[k].append(inv.T @ s @ inv)
    return WeightDecomposition(rd, weights, blocks, change, row_w)


def project_onto_weight_space(wd: WeightDecomposition, q, lam) -> np.ndarray:
    """Component of the symmetric form ``q`` in the weight space of ``lam``."""
    k = wd.index(lam)
    s = wd.to_graded(q)
    w = wd.basis_weights
    n = len(w)
    mask = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            mask[a, b] = np.max(np.abs(w[a] + w[b] - wd.weights[k]), initial=0.0) < ROOT_CLUSTER_TOL
    return wd.from_graded(np.where(mask, s, 0.0))


def weight_residuals(wd: WeightDecomposition, samples: int = 8, seed: int = 0) -> dict:
    """Dimension count, orthogonality and conjugation-covariance residuals."""
    rd = wd.rootdec
    a = rd.algebra
    d = a.dim
    total = sum(wd.dims())
    rows, row_w = rd.graded_basis()
    ortho = 0.0
    for lam, block in zip(wd.weights, wd.blocks):
        for q in block:
            for i in range(d):
                for j in range(d):
                    if np.max(np.abs(row_w[i] + row_w[j] - lam), initial=0.0) >= ROOT_CLUSTER_TOL:
                        ortho = max(ortho, abs(float(rows[i] @ q @ rows[j])))
    rng = np.random.default_rng(seed)
    cov = 0.0
    for _ in range(samples):
        coeff = rng.uniform(-1.0, 1.0, rd.rank)
        if np.linalg.norm(coeff) > 1:
            coeff /= np.linalg.norm(coeff)
        h = coeff @ rd.cartan.basis if rd.rank else np.zeros(d)
        g = expm(a.ad(h))
        for lam, block in zip(wd.weights, wd.blocks):
            factor = np.exp(float(lam @ coeff)) if rd.rank else 1.0
            for q in block:
                pulled = g.T @ q @ g
                scale = max(1.0, float(np.max(np.abs(factor * q))))
                cov = max(cov, float(np.max(np.abs(pulled - factor * q))) / scale)
    return {
        "dim_total": total,
        "dim_expected": d * (d + 1) // 2,
        "orthogonality_residual": ortho,
        "covariance_residual": cov,
    }


# ------------------------------------------------------------------ chambers

@dataclass
class Chamber:
    representative: np.ndarray
    sign_pattern: tuple[int, ...]

    def pattern_string(self) -> str:
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in self.sign_pattern)


def _directions(rank: int) -> np.ndarray:
    if rank == 1:
        return np.array([[1.0], [-1.0]])
    if rank == 2:
        ang = (np.arange(7200) + 0.5) * (2 * np.pi / 7200)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    # golden-spiral half sphere plus antipodes keeps the set symmetric
    m = 20000
    k = np.arange(m) + 0.5
    z = k / m
    phi = k * np.pi * (3.0 - np.sqrt(5.0))
    r = np.sqrt(1.0 - z * z)
    half = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    return np.vstack([half, -half])


def arrangement_chambers(covectors, eps: float = EPS_SIGN) -> list[Chamber]:
    """One representative per open chamber of the central arrangement {c = 0}."""
    cov = np.atleast_2d(np.asarray(covectors, dtype=float))
    rank = cov.shape[1]
    if rank > MAX_RANK:
        raise RankTooLarge(f"exhaustive chamber enumeration needs rank <= {MAX_RANK}, got {rank}")
    if rank == 0:
        return []
    live = cov[np.linalg.norm(cov, axis=1) > eps]
    dirs = _directions(rank)
    vals = dirs @ live.T
    ok = np.all(np.abs(vals) > eps, axis=1)
    groups: dict[tuple, list[np.ndarray]] = {}
    for d, v, good in zip(dirs, vals, ok):
        if good:
            groups.setdefault(tuple(int(s) for s in np.sign(v)), []).append(d)
    out = []
    for _, members in groups.items():
        t = np.mean(members, axis=0)
        t /= np.linalg.norm(t)
        pattern = tuple(int(s) for s in np.sign(np.where(np.abs(cov @ t) > eps, cov @ t, 0.0)))
        out.append(Chamber(np.round(t, 12) + 0.0, pattern))
    out.sort(key=lambda c: c.sign_pattern)
    return out


def arrangement_faces(covectors, eps: float = EPS_SIGN) -> list[Chamber]:
    """Representatives of every nonzero face (open chambers and walls).

    Walls are found by recursing into each hyperplane and enumerating the
    chambers of the restricted arrangement there.
    """
    cov = np.atleast_2d(np.asarray(covectors, dtype=float))
    rank = cov.shape[1]
    if rank > MAX_RANK:
        raise RankTooLarge(f"exhaustive face enumeration needs rank <= {MAX_RANK}, got {rank}")
    seen: dict[tuple, Chamber] = {}

    def visit(w: np.ndarray):
        if w.shape[0] == 0:
            return
        restricted = cov @ w.T
        for ch in arrangement_chambers(restricted, eps):
            t = ch.representative @ w
            t /= np.linalg.norm(t)
            vals = cov @ t
            pattern = tuple(int(x) for x in np.sign(np.where(np.abs(vals) > eps, vals, 0.0)))
            seen.setdefault(pattern, Chamber(np.round(t, 12) + 0.0, pattern))
        for c in restricted:
            if np.linalg.norm(c) > eps:
                visit(_wall(w, c))

    visit(np.eye(rank))
    return sorted(seen.values(), key=lambda c: (sum(x == 0 for x in c.sign_pattern), c.sign_pattern))


def _wall(w: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Orthonormal rows of {t in rowspace(w) : c . coords(t) = 0}."""
    k = null_space(c[None, :], 1e-10)
    return k @ w


def chamber_representatives(rd: RootDecomposition) -> list[Chamber]:
    """Chambers of the root hyperplane arrangement, in Cartan coordinates."""
    if rd.rank > MAX_RANK:
        raise RankTooLarge(f"exhaustive chamber enumeration needs rank <= {MAX_RANK}, got {rd.rank}")
    if not rd.roots:
        return []
    return arrangement_chambers(np.array(rd.roots))


def negative_weight_subspace(rd: RootDecomposition, t, eps: float = EPS_SIGN) -> Subspace:
    """Sum of the root spaces with alpha(t) < 0 (t in Cartan coordinates)."""
    t = np.asarray(t, dtype=float).reshape(-1)
    nrm = np.linalg.norm(t)
    rows = []
    if nrm > 0:
        for r, s in zip(rd.roots, rd.spaces):
            if float(r @ (t / nrm)) < -eps:
                rows.append(s.basis)
    if not rows:
        return Subspace.zero(rd.algebra.dim)
    return Subspace.span(np.vstack(rows))


def negative_weight_fact(rd: RootDecomposition, has_sl2r: bool) -> dict:
    """Whether the negative root sum has dimension >= 2 for every t != 0.

    Open chambers and walls are both scanned, since an sl(2, R) factor can
    hide on a wall of a higher-rank arrangement. The expectation is that the
    bound holds exactly when there is no sl(2, R) factor.
    """
    if rd.rank > MAX_RANK:
        raise RankTooLarge(f"exhaustive enumeration needs rank <= {MAX_RANK}, got {rd.rank}")
    chambers, faces = [], []
    if rd.roots:
        open_patterns = {c.sign_pattern for c in chamber_representatives(rd)}
        for f in arrangement_faces(np.array(rd.roots)):
            dim = negative_weight_subspace(rd, f.representative).dim
            row = {"face": f.pattern_string(),
                   "t": [float(x) for x in f.representative],
                   "dim": dim}
            (chambers if f.sign_pattern in open_patterns else faces).append(row)
    rows = chambers + faces
    min_chamber = min((r["dim"] for r in chambers), default=0)
    min_dim = min((r["dim"] for r in rows), default=0)
    fact_holds = bool(rows) and min_dim >= 2
    return {
        "chambers": chambers,
        "walls": faces,
        "min_chamber_dim": min_chamber,
        "min_dim": min_dim,
        "fact_holds": fact_holds,
        "consistent": fact_holds == (not has_sl2r),
        "counterexamples": [r for r in rows if r["dim"] < 2],
    }


# ---------------------------------------------- abelian support criterion

def support_witness(weights, V: Subspace):
    """Support skeleton of the abelian non-properness criterion.

    ``weights`` are n covectors on R^d, one per coordinate of R^n. For each
    chamber t0 of the arrangement {lambda_i = 0}, intersect V with
    {x : x_i = 0 whenever lambda_i(t0) > 0} (side "x", the limit of the
    sequence) and with {y : y_i = 0 whenever lambda_i(t0) < 0} (side "y", the
    limit of the translated sequence). Returns ``(t0, side, w)`` for the first
    nonzero intersection or None.
    """
    lam = np.atleast_2d(np.asarray(weights, dtype=float))
    n, d = lam.shape
    if V.ambient_dim != n:
        raise NotGenerating(f"V lives in R^{V.ambient_dim} but there are {n} weights")
    for t0, side, w in support_scan(lam, V):
        if w is not None:
            return t0, side, w
    return None


def support_scan(weights, V: Subspace) -> list[tuple[np.ndarray, str, np.ndarray | None]]:
    """Every (chamber, side) intersection in search order; None where it is zero."""
    lam = np.atleast_2d(np.asarray(weights, dtype=float))
    n, d = lam.shape
    if V.ambient_dim != n:
        raise NotGenerating(f"V lives in R^{V.ambient_dim} but there are {n} weights")
    if matrix_rank(lam) < d:
        raise NotGenerating("weights do not span the dual of the acting torus")
    out = []
    for ch in arrangement_chambers(lam):
        vals = lam @ ch.representative
        for side, idx in (("x", np.flatnonzero(vals > EPS_SIGN)),
                          ("y", np.flatnonzero(vals < -EPS_SIGN))):
            out.append((ch.representative, side, _coordinate_intersection(V, idx)))
    return out


def _coordinate_intersection(V: Subspace, zero_idx: np.ndarray):
    if V.dim == 0:
        return None
    b = V.basis
    if zero_idx.size == 0:
        w = b[0].copy()
    else:
        k = null_space(b[:, zero_idx].T, 1e-10)
        if k.shape[0] == 0:
            return None
        w = k[0] @ b
    w[zero_idx] = 0.0
    w /= np.linalg.norm(w)
    j = np.flatnonzero(np.abs(w) > 1e-12)
    return w * np.sign(w[j[0]])
