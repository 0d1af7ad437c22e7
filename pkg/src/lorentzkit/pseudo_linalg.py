"""Linear algebra for indefinite symmetric bilinear forms.

Forms are small dense numpy matrices; signatures are read off a symmetric
eigen-decomposition with an absolute null threshold.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ZeroVector

EPS_RANK = 1e-9
EPS_CAUSAL = 1e-9


class BilinearForm:
    """Symmetric bilinear form on R^dim, with its signature cached.

    ``signature`` is ``(n_pos, n_neg, n_null)``.
    """

    __slots__ = ("matrix", "eps_rank", "_signature")

    def __init__(self, matrix, eps_rank: float = EPS_RANK):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"form matrix must be square, got shape {m.shape}")
        self.matrix = 0.5 * (m + m.T)
        self.matrix.setflags(write=False)
        self.eps_rank = eps_rank
        self._signature = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def signature(self) -> tuple[int, int, int]:
        if self._signature is None:
            self._signature = signature(self, self.eps_rank)
        return self._signature

    def __call__(self, u, v=None) -> float:
        u = np.asarray(u, dtype=float)
        v = u if v is None else np.asarray(v, dtype=float)
        return float(u @ self.matrix @ v)

    def scaled(self, c: float) -> "BilinearForm":
        return BilinearForm(c * self.matrix, self.eps_rank)

    def __repr__(self):
        return f"BilinearForm(dim={self.dim}, signature={self.signature})"

    @classmethod
    def diag(cls, entries: Sequence[float]) -> "BilinearForm":
        return cls(np.diag(np.asarray(entries, dtype=float)))

    @classmethod
    def minkowski(cls, n: int) -> "BilinearForm":
        """diag(-1, 1, ..., 1) on R^{1+n}."""
        return cls.diag([-1.0] + [1.0] * n)


class Subspace:
    """Linear subspace of R^ambient_dim given by independent basis rows."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, basis, ambient_dim: int | None = None, eps_rank: float = EPS_RANK):
        b = np.array(basis, dtype=float)
        if b.size == 0:
            if ambient_dim is None:
                raise DimensionMismatch("empty subspace needs an explicit ambient_dim")
            b = np.zeros((0, ambient_dim))
        if b.ndim == 1:
            b = b[None, :]
        if ambient_dim is not None and b.shape[1] != ambient_dim:
            raise DimensionMismatch(
                f"basis vectors have length {b.shape[1]}, expected {ambient_dim}"
            )
        if b.shape[0] and matrix_rank(b, eps_rank) != b.shape[0]:
            raise DimensionMismatch("subspace basis vectors are linearly dependent")
        self.ambient_dim = b.shape[1]
        self.basis = b
        self.basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((0, n)), ambient_dim=n)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, eps: float = EPS_RANK) -> "Subspace":
        """Orthonormal basis of the span of possibly dependent vectors."""
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        if ambient_dim is None:
            ambient_dim = v.shape[1]
        if v.size == 0:
            return cls.zero(ambient_dim)
        return cls(row_space(v, eps), ambient_dim=ambient_dim)

    def orthonormal(self) -> np.ndarray:
        """Euclidean-orthonormal rows spanning the same space."""
        if self.dim == 0:
            return self.basis.copy()
        return row_space(self.basis)

    def contains(self, v, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float)
        q = self.orthonormal()
        resid = v - (q.T @ (q @ v)) if self.dim else v
        return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(v)))

    def coordinates(self, v) -> np.ndarray:
        """Least-squares coordinates of v (or rows of v) in this basis."""
        v = np.asarray(v, dtype=float)
        sol, *_ = np.linalg.lstsq(self.basis.T, v.T, rcond=None)
        return sol.T


def _as_form(form) -> BilinearForm:
    return form if isinstance(form, BilinearForm) else BilinearForm(form)


def matrix_rank(a, eps: float = EPS_RANK) -> int:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > eps * max(1.0, s[0])))


def row_space(a, eps: float = EPS_RANK) -> np.ndarray:
    """Orthonormal rows spanning the row space of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return np.zeros((0, a.shape[1]))
    _, s, vt = np.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > eps * max(1.0, s[0] if s.size else 0.0)))
    return vt[:r]


def null_space(a, eps: float = EPS_RANK, relative: bool = True) -> np.ndarray:
    """Orthonormal rows spanning {x : a x = 0}.

    The singular-value cut is ``eps * max(1, s_max)`` when ``relative`` is set,
    otherwise the absolute ``eps``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    cut = eps * max(1.0, s[0]) if (relative and s.size) else eps
    r = int(np.sum(s > cut))
    return vt[r:]


def intersect(a: np.ndarray, b: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Orthonormal rows spanning rowspace(a) ∩ rowspace(b)."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    n = a.shape[1] if a.size else b.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, n))
    k = null_space(np.hstack([a.T, -b.T]), eps)
    if k.shape[0] == 0:
        return np.zeros((0, n))
    vecs = k[:, : a.shape[0]] @ a
    return row_space(vecs, eps)


def signature(form, eps_rank: float = EPS_RANK) -> tuple[int, int, int]:
    """Counts of eigenvalues above ``eps_rank``, below ``-eps_rank`` and between."""
    m = _as_form(form).matrix
    if m.size == 0:
        return (0, 0, 0)
    w = np.linalg.eigvalsh(m)
    pos = int(np.sum(w > eps_rank))
    neg = int(np.sum(w < -eps_rank))
    return (pos, neg, len(w) - pos - neg)


def causal_type(form, v, eps_causal: float = EPS_CAUSAL) -> str:
    """'timelike', 'spacelike' or 'lightlike' for a nonzero vector."""
    form = _as_form(form)
    v = np.asarray(v, dtype=float)
    if v.shape != (form.dim,):
        raise DimensionMismatch(f"vector of length {v.size} for form of dim {form.dim}")
    if not np.any(v):
        raise ZeroVector("causal type of the zero vector is undefined")
    qv = form(v)
    if qv < -eps_causal:
        return "timelike"
    if qv > eps_causal:
        return "spacelike"
    return "lightlike"


def _check_dims(form: BilinearForm, s: Subspace):
    if s.ambient_dim != form.dim:
        raise DimensionMismatch(
            f"subspace lives in R^{s.ambient_dim} but form has dim {form.dim}"
        )


def orthogonal_complement(form, s: Subspace, eps: float = EPS_RANK) -> Subspace:
    form = _as_form(form)
    _check_dims(form, s)
    if s.dim == 0:
        return Subspace.full(form.dim)
    return Subspace(null_space(s.basis @ form.matrix, eps), ambient_dim=form.dim)


def restrict_form(form, s: Subspace) -> BilinearForm:
    """Gram matrix of ``form`` on the basis of ``s``."""
    form = _as_form(form)
    _check_dims(form, s)
    return BilinearForm(s.basis @ form.matrix @ s.basis.T, form.eps_rank)


def max_isotropic_dim(form, s: Subspace | None = None) -> int:
    """Largest dimension of a totally isotropic subspace of ``s``."""
    form = _as_form(form)
    if s is None:
        s = Subspace.full(form.dim)
    pos, neg, null = restrict_form(form, s).signature
    return min(pos, neg) + null


def isotropic_vector(form, s: Subspace, eps: float = EPS_RANK):
    """A nonzero isotropic vector of ``s`` or None if the restriction is definite."""
    form = _as_form(form)
    if s.dim == 0:
        return None
    g = restrict_form(form, s).matrix
    w, v = np.linalg.eigh(g)
    scale = max(1.0, float(np.max(np.abs(w))))
    null = np.flatnonzero(np.abs(w) <= eps * scale)
    if null.size:
        c = v[:, null[0]]
    else:
        ip, ineg = int(np.argmax(w)), int(np.argmin(w))
        if w[ip] <= 0 or w[ineg] >= 0:
            return None
        c = v[:, ip] / np.sqrt(w[ip]) + v[:, ineg] / np.sqrt(-w[ineg])
    x = c @ s.basis
    return x / np.linalg.norm(x)
