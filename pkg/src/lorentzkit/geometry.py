"""Model Lorentz spaces as quadrics in flat pseudo-Euclidean space.

Sign conventions: a quadric ``{q(x) = level}`` of a flat ambient form has
constant sectional curvature ``1 / level``, so de Sitter (level ``r^2``) is
positively curved and anti-de Sitter (level ``-r^2``) negatively curved.
Sectional curvature uses ``K(u, v) = <R(u, v) v, u> / (q(u,u) q(v,v) - q(u,v)^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import least_squares

from . import kernels
from .errors import BadCodimension, DegeneratePlane, NotTangent, PointOffSpace, ShapeError
from .pseudo_linalg import BilinearForm, Subspace, null_space, row_space

ON_SPACE_TOL = 1e-9
TANGENT_TOL = 1e-9
EPS_PLANE = 1e-8
FD_STEP = 1e-5
FD_OUTER_STEP = 1e-4
# sampled planes must be this far from degenerate (unit u, v) to be kept
PLANE_DRAW_MIN = 1e-2


@dataclass(frozen=True, eq=False)
class ModelSpace:
    kind: str
    n: int
    ambient_form: BilinearForm
    level: float = 0.0
    radius: float = 1.0
    sheet: int = 0  # +1 / -1 restricts quadrics to sign(x_0); 0 means both

    @property
    def is_quadric(self) -> bool:
        return self.kind != "minkowski"

    @property
    def ambient_dim(self) -> int:
        return self.ambient_form.dim

    @property
    def dim(self) -> int:
        return self.ambient_dim - 1 if self.is_quadric else self.ambient_dim

    @property
    def curvature(self) -> float:
        return 1.0 / self.level if self.is_quadric else 0.0

    def q(self, u, v=None) -> float:
        return self.ambient_form(u, v)

    def descriptor(self) -> dict:
        if self.kind == "quadric":
            d = {"type": "quadric", "form": self.ambient_form.matrix.tolist(), "level": self.level}
            if self.sheet:
                d["sheet"] = "upper" if self.sheet > 0 else "lower"
            return d
        d = {"type": self.kind, "n": self.n}
        if self.is_quadric:
            d["radius"] = self.radius
        return d

    def __repr__(self):
        if self.kind == "minkowski":
            return f"Minkowski({self.n})"
        if self.kind == "de_sitter":
            return f"DeSitter({self.n},{self.radius:g})"
        if self.kind == "anti_de_sitter":
            return f"AntiDeSitter({self.n},{self.radius:g})"
        return f"Quadric(sig={self.ambient_form.signature}, level={self.level:g})"

    # ------------------------------------------------------------ points

    def contains(self, x, tol: float = ON_SPACE_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            return False
        if not self.is_quadric:
            return True
        if self.sheet and np.sign(x[0]) != self.sheet:
            return False
        return abs(self.q(x) - self.level) <= tol * max(1.0, float(x @ x))

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise PointOffSpace(f"point has {x.size} coordinates, expected {self.ambient_dim}")
        if not self.contains(x):
            raise PointOffSpace(f"{x} is not on {self!r} (q(x) = {self.q(x):.6g})")
        return x

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        if not self.is_quadric:
            return rng.standard_normal(self.ambient_dim)
        for _ in range(1000):
            x = rng.standard_normal(self.ambient_dim) * max(1.0, self.radius)
            qx = self.q(x)
            if qx * self.level > 1e-3 * abs(self.level):
                x *= np.sqrt(self.level / qx)
                if self.sheet and np.sign(x[0]) != self.sheet:
                    x = -x
                if self.contains(x):
                    return x
        raise PointOffSpace(f"could not sample a point on {self!r}")

    # ----------------------------------------------------------- tangent

    def normal(self, x) -> np.ndarray:
        """Ambient vector q-orthogonal to the tangent space (``x`` for quadrics)."""
        return np.asarray(x, dtype=float)

    def project_tangent(self, x, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if not self.is_quadric:
            return v
        return v - (self.q(x, v) / self.level) * np.asarray(x, dtype=float)

    def check_tangent(self, x, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.ambient_dim,):
            raise NotTangent(f"vector has {v.size} coordinates, expected {self.ambient_dim}")
        if self.is_quadric:
            scale = max(1.0, float(np.linalg.norm(x) * np.linalg.norm(v)))
            if abs(self.q(x, v)) > TANGENT_TOL * scale:
                raise NotTangent(f"q(x, v) = {self.q(x, v):.3e} is not zero")
        return v


def minkowski(n: int) -> ModelSpace:
    """R^{1,n}: ambient form diag(-1, 1, ..., 1) on R^{n+1}."""
    return ModelSpace("minkowski", n, BilinearForm.minkowski(n))


def de_sitter(n: int, radius: float = 1.0) -> ModelSpace:
    """{q = r^2} in R^{1,n}: an n-dimensional Lorentz space of curvature 1/r^2."""
    return ModelSpace("de_sitter", n, BilinearForm.minkowski(n), radius ** 2, radius)


def anti_de_sitter(n: int, radius: float = 1.0) -> ModelSpace:
    """{q = -r^2} in R^{2,n-1}: an n-dimensional Lorentz space of curvature -1/r^2."""
    form = BilinearForm.diag([-1.0, -1.0] + [1.0] * (n - 1))
    return ModelSpace("anti_de_sitter", n, form, -radius ** 2, radius)


def quadric(form, level: float, sheet: int = 0) -> ModelSpace:
    form = form if isinstance(form, BilinearForm) else BilinearForm(form)
    if level == 0:
        raise ShapeError("quadric level must be nonzero")
    return ModelSpace("quadric", form.dim - 1, form, float(level), float(np.sqrt(abs(level))), sheet)


def hyperbolic_sheet(n: int) -> ModelSpace:
    """Upper sheet {q = -1, x_0 > 0} of R^{1,n}: Riemannian, curvature -1."""
    return quadric(BilinearForm.minkowski(n), -1.0, sheet=1)


def space_from_descriptor(d: dict) -> ModelSpace:
    kind = d.get("type")
    if kind == "minkowski":
        return minkowski(int(d["n"]))
    if kind == "de_sitter":
        return de_sitter(int(d["n"]), float(d.get("radius", 1.0)))
    if kind == "anti_de_sitter":
        return anti_de_sitter(int(d["n"]), float(d.get("radius", 1.0)))
    if kind == "hyperbolic":
        return hyperbolic_sheet(int(d["n"]))
    if kind == "quadric":
        if "form" in d:
            form = BilinearForm(d["form"])
        else:
            form = BilinearForm.minkowski(int(d["n"]))
        sheet = {"upper": 1, "lower": -1}.get(d.get("sheet"), 0)
        if "level" in d:
            level = float(d["level"])
        else:
            level = float(d.get("radius", 1.0)) ** 2
        return quadric(form, level, sheet)
    raise ShapeError(f"unknown model space type {kind!r}")


# ---------------------------------------------------------------- metric

def tangent_basis(space: ModelSpace, x) -> np.ndarray:
    """Rows spanning the tangent space at x (Euclidean-orthonormal)."""
    x = space.check_point(x)
    if not space.is_quadric:
        return np.eye(space.ambient_dim)
    return null_space((space.ambient_form.matrix @ x)[None, :], 1e-12)


def metric_at(space: ModelSpace, x) -> BilinearForm:
    e = tangent_basis(space, x)
    return BilinearForm(e @ space.ambient_form.matrix @ e.T)


# -------------------------------------------------------------- geodesics

def geodesic(space: ModelSpace, x, v, t: float) -> np.ndarray:
    """Closed-form geodesic through x with initial velocity v, at time t.

    On a quadric the ambient equation is ``x'' = -(q(v,v)/level) x``.
    """
    x = space.check_point(x)
    v = space.check_tangent(x, v)
    if not space.is_quadric:
        return x + t * v
    k = space.q(v) / space.level
    if abs(k) < 1e-14:
        return x + t * v
    if k > 0:
        w = np.sqrt(k)
        return np.cos(w * t) * x + (np.sin(w * t) / w) * v
    w = np.sqrt(-k)
    return np.cosh(w * t) * x + (np.sinh(w * t) / w) * v


def geodesic_velocity(space: ModelSpace, x, v, t: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if not space.is_quadric:
        return v.copy()
    k = space.q(v) / space.level
    if abs(k) < 1e-14:
        return v.copy()
    if k > 0:
        w = np.sqrt(k)
        return -w * np.sin(w * t) * x + np.cos(w * t) * v
    w = np.sqrt(-k)
    return w * np.sinh(w * t) * x + np.cosh(w * t) * v


def integrate_geodesic(space: ModelSpace, x, v, t: float, rtol: float = 1e-11,
                       atol: float = 1e-12) -> np.ndarray:
    """Numerical geodesic in ambient coordinates (adaptive Runge-Kutta)."""
    x = space.check_point(x)
    v = space.check_tangent(x, v)
    n = space.ambient_dim
    g = space.ambient_form.matrix

    def rhs(_, state):
        p, dp = state[:n], state[n:]
        if not space.is_quadric:
            return np.concatenate([dp, np.zeros(n)])
        return np.concatenate([dp, -(dp @ g @ dp) / space.level * p])

    if t == 0:
        return x.copy()
    sol = solve_ivp(rhs, (0.0, t), np.concatenate([x, v]), method="RK45",
                    rtol=rtol, atol=atol)
    return sol.y[:n, -1]


def christoffel(metric_fn: Callable[[np.ndarray], np.ndarray], y, h: float = FD_STEP) -> np.ndarray:
    """Gamma[a, b, c] from central differences of a coordinate metric."""
    y = np.asarray(y, dtype=float)
    m = len(y)
    g = metric_fn(y)
    dg = np.empty((m, m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        dg[k] = (metric_fn(y + e) - metric_fn(y - e)) / (2 * h)
    # first kind: [b c, d] = 1/2 (d_b g_dc + d_c g_db - d_d g_bc)
    first = 0.5 * (dg.transpose(0, 2, 1) + dg.transpose(2, 0, 1) - dg.transpose(1, 2, 0))
    # first[b, c, d] layout: axes (b, c, d)
    return np.einsum("ad,bcd->abc", np.linalg.inv(g), first)


def riemann(metric_fn, y, h: float = FD_STEP, outer: float = FD_OUTER_STEP) -> np.ndarray:
    """R[a, b, c, d] with R(d_c, d_d) d_b = R[a, b, c, d] d_a."""
    y = np.asarray(y, dtype=float)
    m = len(y)
    gam = christoffel(metric_fn, y, h)
    dgam = np.empty((m, m, m, m))  # dgam[k, a, b, c] = d_k Gamma^a_bc
    for k in range(m):
        e = np.zeros(m)
        e[k] = outer
        dgam[k] = (christoffel(metric_fn, y + e, h) - christoffel(metric_fn, y - e, h)) / (2 * outer)
    r = (np.einsum("cadb->abcd", dgam) - np.einsum("dacb->abcd", dgam)
         + np.einsum("ace,edb->abcd", gam, gam) - np.einsum("ade,ecb->abcd", gam, gam))
    return r


def integrate_chart_geodesic(metric_fn, y0, v0, t: float, rtol: float = 1e-10,
                             atol: float = 1e-12) -> np.ndarray:
    """Geodesic of a coordinate metric, Christoffels by finite differences."""
    y0 = np.asarray(y0, dtype=float)
    m = len(y0)

    def rhs(_, state):
        y, dy = state[:m], state[m:]
        gam = christoffel(metric_fn, y)
        return np.concatenate([dy, -np.einsum("abc,b,c->a", gam, dy, dy)])

    sol = solve_ivp(rhs, (0.0, t), np.concatenate([y0, v0]), method="RK45", rtol=rtol, atol=atol)
    return sol.y[:m, -1]


# -------------------------------------------------------------- curvature

def _graph_chart(space: ModelSpace, x):
    """Chart y -> sqrt(1 - q(E^T y)/level) x + E^T y around x, with its exact metric."""
    e = tangent_basis(space, x)
    gmat = space.ambient_form.matrix
    if not space.is_quadric:
        return e, (lambda y: e @ gmat @ e.T)
    lev = space.level

    def metric(y):
        w = e.T @ y
        s = np.sqrt(1.0 - (w @ gmat @ w) / lev)
        ds = -(e @ gmat @ w) / (lev * s)
        jac = np.outer(x, ds) + e.T  # columns are d phi / d y_i
        return jac.T @ gmat @ jac

    return e, metric


def _plane_denominator(space: ModelSpace, u, v, eps_plane: float) -> float:
    d = space.q(u) * space.q(v) - space.q(u, v) ** 2
    if abs(d) <= eps_plane:
        raise DegeneratePlane(f"plane is degenerate (Gram determinant {d:.3e})")
    return d


def sectional_curvature(space: ModelSpace, x, u, v, method: str = "gauss",
                        eps_plane: float = EPS_PLANE) -> float:
    """Sectional curvature of span{u, v} at x.

    ``method="gauss"`` uses the Gauss equation of the quadric,
    ``method="fd"`` finite-difference Christoffel symbols in a graph chart.
    """
    x = space.check_point(x)
    u = space.check_tangent(x, u)
    v = space.check_tangent(x, v)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    den = _plane_denominator(space, u, v, eps_plane)
    if method == "gauss":
        kappa = space.curvature
        ruvv = kappa * (space.q(v, v) * u - space.q(u, v) * v)
        return float(space.q(ruvv, u) / den)
    if method == "fd":
        e, metric = _graph_chart(space, x)
        cu, cv = e @ u, e @ v
        r = riemann(metric, np.zeros(e.shape[0]))
        g0 = metric(np.zeros(e.shape[0]))
        lowered = np.einsum("ae,ebcd->abcd", g0, r)
        num = np.einsum("abcd,a,b,c,d->", lowered, cu, cv, cu, cv)
        return float(num / den)
    raise ValueError(f"unknown curvature method {method!r}")


def _sample_plane(space: ModelSpace, rng, eps_plane: float, retries: int = 100):
    for _ in range(retries):
        x = space.sample_point(rng)
        e = tangent_basis(space, x)
        u = rng.standard_normal(e.shape[0]) @ e
        v = rng.standard_normal(e.shape[0]) @ e
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        d = space.q(u) * space.q(v) - space.q(u, v) ** 2
        if abs(d) > max(eps_plane, PLANE_DRAW_MIN):
            return x, u, v
    raise DegeneratePlane("could not draw a nondegenerate plane in 100 tries")


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Per-sample generator derived from (master seed, sample index)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def constant_curvature_estimate(space: ModelSpace, samples: int = 200, seed: int = 0,
                                method: str = "gauss") -> tuple[float, float]:
    """Mean sectional curvature over random planes and the worst deviation from it."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ks = []
    for i in range(samples):
        x, u, v = _sample_plane(space, sample_rng(seed, i), EPS_PLANE)
        ks.append(sectional_curvature(space, x, u, v, method=method))
    ks = np.array(ks)
    mean = float(np.mean(ks))
    return mean, float(np.max(np.abs(ks - mean)))


def curvature_path_agreement(space: ModelSpace, samples: int = 100, seed: int = 0) -> float:
    """Worst disagreement between the Gauss-equation and finite-difference curvatures."""
    worst = 0.0
    for i in range(samples):
        x, u, v = _sample_plane(space, sample_rng(seed, i), EPS_PLANE)
        kg = sectional_curvature(space, x, u, v, "gauss")
        kf = sectional_curvature(space, x, u, v, "fd")
        worst = max(worst, abs(kg - kf))
    return worst


def geodesic_invariants(space: ModelSpace, samples: int = 20, seed: int = 0,
                        t_max: float = 10.0, steps: int = 50) -> dict:
    """Worst drift of the quadric value and of the speed along closed-form geodesics."""
    level_drift = speed_drift = 0.0
    for i in range(samples):
        rng = sample_rng(seed, i)
        x = space.sample_point(rng)
        e = tangent_basis(space, x)
        v = rng.standard_normal(e.shape[0]) @ e
        v /= np.linalg.norm(v)
        c = space.q(v)
        for t in np.linspace(0.0, t_max, steps):
            p = geodesic(space, x, v, t)
            dp = geodesic_velocity(space, x, v, t)
            scale = max(1.0, float(p @ p))
            if space.is_quadric:
                level_drift = max(level_drift, abs(space.q(p) - space.level) / scale)
            speed_drift = max(speed_drift, abs(space.q(dp) - c) / max(1.0, float(dp @ dp)))
    return {"level_drift": level_drift, "speed_drift": speed_drift}


# ----------------------------------------------------- totally geodesic test

def _surface_distance(points, surface, param_dim, box, coarse_n, fine_n):
    """Distance from each point to surface(box), by two grid levels and a polish."""
    axes = [np.linspace(-box, box, coarse_n)] * param_dim
    params = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, param_dim)
    images = np.array([surface(p) for p in params])
    idx, _ = kernels.nearest_points(points, images)
    step = 2 * box / (coarse_n - 1)
    out = []
    for pt, i in zip(points, idx):
        s0 = params[i]
        loc = [np.linspace(-step, step, fine_n)] * param_dim
        fine = s0 + np.stack(np.meshgrid(*loc, indexing="ij"), axis=-1).reshape(-1, param_dim)
        fimg = np.array([surface(p) for p in fine])
        j, _ = kernels.nearest_points(pt[None, :], fimg)
        start = fine[j[0]]
        res = least_squares(lambda s: surface(s) - pt, start, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        out.append(float(np.linalg.norm(surface(res.x) - pt)))
    return np.array(out)


def hypersurface_deviation(space: ModelSpace, surface: Callable[[np.ndarray], np.ndarray],
                           param_dim: int, n_rays: int = 8, t_max: float = 1.0,
                           seed: int = 0, base_radius: float = 0.3,
                           coarse_n: int | None = None, fine_n: int = 11) -> float:
    """Max ambient distance between tangent geodesics and a parametrized hypersurface.

    Rays start at surface points near the origin of the parameter box with
    initial velocity tangent to the surface; a totally geodesic hypersurface
    contains them.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 7919]))
    h = 1e-6
    points = []
    for k in range(n_rays):
        s0 = np.zeros(param_dim) if k == 0 else rng.uniform(-base_radius, base_radius, param_dim)
        y = surface(s0)
        jac = np.stack([(surface(s0 + h * e) - surface(s0 - h * e)) / (2 * h)
                        for e in np.eye(param_dim)], axis=1)
        w = jac @ rng.standard_normal(param_dim)
        w = space.project_tangent(y, w)
        w /= np.linalg.norm(w)
        if space.is_quadric:
            y = y * np.sqrt(space.level / space.q(y))
            w = space.project_tangent(y, w)
        for t in np.linspace(t_max / 4, t_max, 4):
            points.append(geodesic(space, y, w, t))
    points = np.array(points)
    if coarse_n is None:
        coarse_n = {1: 401, 2: 61}.get(param_dim, 21)
    box = base_radius + 1.5 * t_max * max(1.0, float(np.max(np.abs(points))))
    return float(np.max(_surface_distance(points, surface, param_dim, box, coarse_n, fine_n)))


def exp_hypersurface(space: ModelSpace, x, hyperplane: Subspace):
    """Parametrization s -> exp_x(sum s_i b_i) of the image of a tangent hyperplane."""
    b = row_space(hyperplane.basis)

    def surface(s):
        v = np.asarray(s, dtype=float) @ b
        if not np.any(v):
            return np.array(x, dtype=float)
        return geodesic(space, x, space.project_tangent(x, v), 1.0)

    return surface, b.shape[0]


def is_totally_geodesic(space: ModelSpace, x, hyperplane: Subspace, n_rays: int = 8,
                        t_max: float = 1.0, tol: float = 1e-6, seed: int = 0) -> bool:
    """Whether exp_x(hyperplane) contains the geodesics tangent to it."""
    return totally_geodesic_deviation(space, x, hyperplane, n_rays, t_max, seed) <= \
        tol * max(1.0, float(np.linalg.norm(x)))


def totally_geodesic_deviation(space: ModelSpace, x, hyperplane: Subspace, n_rays: int = 8,
                               t_max: float = 1.0, seed: int = 0) -> float:
    x = space.check_point(x)
    if hyperplane.ambient_dim != space.ambient_dim or hyperplane.dim != space.dim - 1:
        raise BadCodimension(
            f"need a {space.dim - 1}-dimensional tangent subspace, got dim {hyperplane.dim}"
        )
    for b in hyperplane.basis:
        space.check_tangent(x, b)
    surface, k = exp_hypersurface(space, x, hyperplane)
    return hypersurface_deviation(space, surface, k, n_rays, t_max, seed)
