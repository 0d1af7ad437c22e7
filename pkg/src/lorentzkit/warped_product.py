"""Warped products L x_w N with metric h + w(l) m.

The warp multiplies the fiber metric directly (not its square), so the
Minkowski region {q > 0} is the warped product of a half line and unit de
Sitter space with warp ``r^2``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import FlatFiber, NonConstantFiber, NonPositiveRadius, ParseError, PointOffSpace, ShapeError
from .geometry import (
    ModelSpace,
    constant_curvature_estimate,
    de_sitter,
    metric_at,
    quadric,
    sample_rng,
    space_from_descriptor,
    tangent_basis,
)
from .pseudo_linalg import BilinearForm

FD_STEP = 1e-5


# --------------------------------------------------------- warp functions

class Warp:
    """Polynomial warp function of one base coordinate with exact derivatives."""

    def __init__(self, poly: Polynomial, text: str = "", var: str = "r"):
        self.poly = poly
        self.text = text or str(poly)
        self.var = var
        self._d1 = poly.deriv(1)
        self._d2 = poly.deriv(2)

    def __call__(self, l) -> float:
        return float(self.poly(_coord(l)))

    def d1(self, l) -> float:
        return float(self._d1(_coord(l)))

    def d2(self, l) -> float:
        return float(self._d2(_coord(l)))

    def __repr__(self):
        return f"Warp({self.text!r})"

    @classmethod
    def constant(cls, c: float) -> "Warp":
        return cls(Polynomial([float(c)]), text=repr(float(c)))


def _coord(l) -> float:
    a = np.atleast_1d(np.asarray(l, dtype=float))
    return float(a[0])


_ALLOWED_VARS = ("r", "l", "t", "x", "s")


def parse_warp(text: str) -> Warp:
    """Parse a one-variable polynomial such as ``"r^2"`` or ``"2*r^3 - r + 1"``."""
    try:
        tree = ast.parse(str(text).replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse warp expression {text!r}", 1, exc.offset) from None
    names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}
    if len(names) > 1 or (names and next(iter(names)) not in _ALLOWED_VARS):
        raise ParseError(f"warp must be a polynomial in one of {_ALLOWED_VARS}, got {text!r}")
    var = next(iter(names)) if names else "r"
    return Warp(_poly(tree.body, text), text=str(text), var=var)


def _poly(node, text) -> Polynomial:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return Polynomial([float(node.value)])
    if isinstance(node, ast.Name):
        return Polynomial([0.0, 1.0])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        p = _poly(node.operand, text)
        return -p if isinstance(node.op, ast.USub) else p
    if isinstance(node, ast.BinOp):
        left = _poly(node.left, text)
        if isinstance(node.op, ast.Pow):
            exp = _poly(node.right, text)
            if exp.degree() != 0 or exp.coef[0] != int(exp.coef[0]) or exp.coef[0] < 0:
                raise ParseError(f"exponents must be nonnegative integers in {text!r}")
            return left ** int(exp.coef[0])
        right = _poly(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div) and right.degree() == 0 and right.coef[0] != 0:
            return left / float(right.coef[0])
    raise ParseError(f"unsupported construct in warp expression {text!r}")


# ------------------------------------------------------------ the product

@dataclass(frozen=True, eq=False)
class WarpedProduct:
    base: str  # "euclidean" or "half_line"
    k: int
    fiber: ModelSpace
    warp: Warp

    @property
    def dim(self) -> int:
        return self.k + self.fiber.dim

    def base_metric(self, l) -> np.ndarray:
        return np.eye(self.k)

    def check_base(self, l) -> np.ndarray:
        l = np.atleast_1d(np.asarray(l, dtype=float))
        if l.shape != (self.k,):
            raise PointOffSpace(f"base point needs {self.k} coordinates, got {l.shape}")
        if self.base == "half_line" and l[0] <= 0:
            raise PointOffSpace(f"half-line coordinate must be positive, got {l[0]}")
        w = self.warp(l)
        if w <= 0:
            raise PointOffSpace(f"warp {self.warp.text!r} is not positive at {l} (w = {w})")
        return l

    def descriptor(self) -> dict:
        return {"base": {"type": self.base, "k": self.k},
                "fiber": self.fiber.descriptor(), "warp": self.warp.text}


def warped_product(base: str, fiber: ModelSpace, warp, k: int = 1) -> WarpedProduct:
    if base not in ("euclidean", "half_line"):
        raise ShapeError(f"unknown base {base!r}")
    if base == "half_line":
        k = 1
    w = warp if isinstance(warp, Warp) else (
        Warp.constant(warp) if isinstance(warp, (int, float)) else parse_warp(warp))
    return WarpedProduct(base, k, fiber, w)


def warped_from_descriptor(d: dict) -> WarpedProduct:
    base = d.get("base", {"type": "half_line"})
    return warped_product(base.get("type", "half_line"), space_from_descriptor(d["fiber"]),
                          d.get("warp", "1"), int(base.get("k", 1)))


def wp_metric_at(wp: WarpedProduct, l, n) -> BilinearForm:
    """Block metric h + w(l) m_n in (base coordinates, fiber tangent basis)."""
    l = wp.check_base(l)
    m = metric_at(wp.fiber, n).matrix
    k, f = wp.k, m.shape[0]
    g = np.zeros((k + f, k + f))
    g[:k, :k] = wp.base_metric(l)
    g[k:, k:] = wp.warp(l) * m
    return BilinearForm(g)


# ------------------------------------------------------ Minkowski polar map

def minkowski_polar_map(n: int, r: float, u) -> np.ndarray:
    """(r, u) -> r u from (0, inf) x DeSitter(n, 1) into R^{1,n}."""
    if r <= 0:
        raise NonPositiveRadius(f"radius must be positive, got {r}")
    u = de_sitter(n, 1.0).check_point(u)
    return r * u


def minkowski_polar_inverse(x) -> tuple[float, np.ndarray]:
    x = np.asarray(x, dtype=float)
    q = float(-x[0] ** 2 + x[1:] @ x[1:])
    if q <= 0:
        raise PointOffSpace(f"polar coordinates need q(x) > 0, got {q}")
    r = np.sqrt(q)
    return r, x / r


def _polar_jacobian(n: int, r: float, u: np.ndarray, h: float = FD_STEP):
    """Central-difference Jacobian of (r, y) -> r phi(y) at y = 0.

    ``phi`` is the graph chart of unit de Sitter space around u, whose tangent
    basis is the one used by ``metric_at``.
    """
    ds = de_sitter(n, 1.0)
    e = tangent_basis(ds, u)
    eta = ds.ambient_form.matrix

    def chart(y):
        w = e.T @ y
        return np.sqrt(1.0 - w @ eta @ w) * u + w

    def polar(p):
        return p[0] * chart(p[1:])

    p0 = np.concatenate([[r], np.zeros(n)])
    cols = []
    for i in range(n + 1):
        step = np.zeros(n + 1)
        step[i] = h
        cols.append((polar(p0 + step) - polar(p0 - step)) / (2 * h))
    return np.stack(cols, axis=1), eta


def polar_pullback_metric(n: int, r: float, u) -> np.ndarray:
    """Minkowski metric pulled back to polar coordinates at (r, u)."""
    u = de_sitter(n, 1.0).check_point(u)
    jac, eta = _polar_jacobian(n, r, u)
    return jac.T @ eta @ jac


def verify_polar_pullback(n: int, samples: int = 100, seed: int = 0, warp="r^2",
                          radii=None) -> float:
    """Max entrywise gap between the pulled-back Minkowski metric and dr^2 + w(r) m."""
    w = warp if isinstance(warp, Warp) else parse_warp(warp)
    ds = de_sitter(n, 1.0)
    wp = warped_product("half_line", ds, w)
    worst = 0.0
    for i in range(samples):
        rng = sample_rng(seed, i)
        r = float(radii[i % len(radii)]) if radii is not None else float(rng.uniform(0.5, 3.0))
        u = ds.sample_point(rng)
        pulled = polar_pullback_metric(n, r, u)
        target = wp_metric_at(wp, [r], u).matrix
        worst = max(worst, float(np.max(np.abs(pulled - target))))
    return worst


# ------------------------------------------------------------- curvature

def scaled_space(space: ModelSpace, c: float) -> ModelSpace:
    """The same quadric carrying the metric multiplied by c > 0."""
    if c <= 0:
        raise ValueError("metric scale must be positive")
    return quadric(space.ambient_form.scaled(c), c * space.level, space.sheet)


def leaf_curvature_ratio(wp: WarpedProduct, l1, l2, samples: int = 50, seed: int = 0,
                         const_tol: float = 1e-6) -> tuple[float, float, float]:
    """Curvatures of the leaves {l1} x N and {l2} x N and the inverse-ratio residual."""
    fiber = wp.fiber
    if not fiber.is_quadric:
        raise FlatFiber("fiber is flat; the inverse-ratio law says nothing")
    k_n, dev = constant_curvature_estimate(fiber, samples, seed)
    if dev > const_tol * max(1.0, abs(k_n)):
        raise NonConstantFiber(f"fiber curvature varies by {dev:.3e}")
    if abs(k_n) < const_tol:
        raise FlatFiber("fiber curvature vanishes")
    out = []
    for l in (l1, l2):
        l = wp.check_base(l)
        k, dev = constant_curvature_estimate(scaled_space(fiber, wp.warp(l)), samples, seed)
        if dev > const_tol * max(1.0, abs(k)):
            raise NonConstantFiber(f"leaf curvature varies by {dev:.3e}")
        out.append(k)
    w1, w2 = wp.warp(l1), wp.warp(l2)
    err = abs(out[0] * w1 - out[1] * w2) / abs(k_n)
    return out[0], out[1], err


# ---------------------------------------------------------- block checks

def _key(p) -> tuple:
    return tuple(np.round(np.atleast_1d(np.asarray(p, dtype=float)), 10).tolist())


def verify_block_structure(g_samples, split, tol: float = 1e-9) -> dict:
    """Check sampled metrics for the warped block shape.

    ``g_samples`` holds ``((l, n), metric)`` pairs with metrics written in
    (base, fiber) coordinates; ``split`` is ``(dim L, dim N)``. Conditions:
    zero off-diagonal blocks; base block independent of n; at a fixed n the
    fiber blocks at different l are positive multiples of one another; and
    the multiple for a pair (l, l') is the same for every n.
    """
    k, f = int(split[0]), int(split[1])
    rows = []
    for (l, n), g in g_samples:
        m = g.matrix if isinstance(g, BilinearForm) else np.asarray(g, dtype=float)
        if m.shape != (k + f, k + f):
            raise ShapeError(f"metric of shape {m.shape} does not match split {split}")
        rows.append((_key(l), _key(n), m))

    def cond():
        return {"pass": True, "worst": 0.0, "offender": None}

    off, indep, prop, consist = cond(), cond(), cond(), cond()

    def bump(c, val, offender):
        if val > c["worst"]:
            c["worst"] = float(val)
            c["offender"] = offender

    for l, n, m in rows:
        bump(off, float(np.max(np.abs(m[:k, k:]), initial=0.0)), {"l": list(l), "n": list(n)})

    by_l: dict = {}
    for l, n, m in rows:
        by_l.setdefault(l, []).append((n, m))
    for l, items in by_l.items():
        ref = items[0][1][:k, :k]
        for n, m in items[1:]:
            bump(indep, float(np.max(np.abs(m[:k, :k] - ref))), {"l": list(l), "n": list(n)})

    by_n: dict = {}
    for l, n, m in rows:
        by_n.setdefault(n, []).append((l, m))
    factors: dict = {}
    for n, items in by_n.items():
        la, ma = items[0]
        na = ma[k:, k:]
        for lb, mb in items[1:]:
            nb = mb[k:, k:]
            denom = float(np.sum(na * na))
            fac = float(np.sum(na * nb) / denom) if denom > 0 else float("nan")
            resid = float(np.max(np.abs(nb - fac * na))) if denom > 0 else float("inf")
            if not fac > 0:
                resid = float("inf")
            bump(prop, resid, {"l": list(la), "l2": list(lb), "n": list(n), "factor": fac})
            factors.setdefault((la, lb), []).append(fac)
    for pair, facs in factors.items():
        spread = max(facs) - min(facs)
        bump(consist, spread / max(1.0, abs(facs[0])), {"l": list(pair[0]), "l2": list(pair[1])})

    report = {"off_block_zero": off, "h_independent_of_n": indep,
              "fiber_blocks_proportional": prop, "warp_factor_independent_of_n": consist}
    for c in report.values():
        c["pass"] = bool(c["worst"] <= tol)
    report["factors"] = [{"l": list(a), "l2": list(b), "factor": float(np.mean(v))}
                         for (a, b), v in factors.items()]
    report["pass"] = all(report[name]["pass"] for name in
                         ("off_block_zero", "h_independent_of_n",
                          "fiber_blocks_proportional", "warp_factor_independent_of_n"))
    return report


def warped_metric_samples(wp: WarpedProduct, ls, ns) -> list:
    return [((np.atleast_1d(l), n), wp_metric_at(wp, l, n)) for l in ls for n in ns]


def polar_metric_samples(n: int, rs, us) -> list:
    return [((np.array([r]), np.asarray(u)), polar_pullback_metric(n, r, u)) for r in rs for u in us]
