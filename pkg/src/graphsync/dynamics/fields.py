"""Difference-coupled vector fields f_i(x) = g(x_i) + sum_{j in N(i)} h(x_j - x_i)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..graph import Graph

CLASS_ORDER = ("DG", "DG0", "DGodd", "DGl")   # loosest to tightest


class FieldSpecError(ValueError):
    pass


def _horner(coefs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Per-coordinate polynomial; coefs (k, D) or (B, k, D), x (..., k) or (B, ..., k)."""
    if coefs.ndim == 3:
        # batch axis leads; align (B, k, D) against x of shape (B, m, k)
        coefs = coefs.reshape(coefs.shape[0], *([1] * (x.ndim - 2)), *coefs.shape[1:])
    out = np.broadcast_to(coefs[..., -1], np.broadcast_shapes(coefs.shape[:-1], x.shape)).copy()
    for d in range(coefs.shape[-1] - 2, -1, -1):
        out = out * x + coefs[..., d]
    return out


@dataclass(frozen=True, eq=False)
class VectorFieldSpec:
    """A (g, h) pair from a named family.

    Families: ``vanderpol`` (alpha, beta, gamma, delta, eps; k=2),
    ``cubic_scalar`` (s; g = s x + x^3, h = identity; k=1) and
    ``custom_poly`` (per-coordinate coefficient arrays ``g`` and ``h`` in
    ascending degree, shape (k, D), optionally batched as (B, k, D)).
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in ("vanderpol", "cubic_scalar", "custom_poly"):
            raise FieldSpecError(f"unknown field family {self.family!r}")
        if self.family == "vanderpol":
            bad = set(self.params) - {"alpha", "beta", "gamma", "delta", "eps"}
            if bad:
                raise FieldSpecError(f"unknown van der Pol parameters {sorted(bad)}")
        elif self.family == "cubic_scalar":
            if set(self.params) - {"s"}:
                raise FieldSpecError("cubic_scalar takes only s")
        else:
            for key in ("g", "h"):
                c = np.asarray(self.params.get(key, [[0.0]]), dtype=float)
                if c.ndim == 1:
                    c = c[None, :]
                if c.ndim not in (2, 3):
                    raise FieldSpecError(f"{key} coefficients must be (k, D) or (B, k, D)")
                object.__setattr__(self, f"_{key}", c)
            if self._g.shape[-2] != self._h.shape[-2]:
                raise FieldSpecError("g and h need the same number of coordinates")

    # -- parameters ------------------------------------------------------

    def p(self, name: str) -> float:
        return float(self.params.get(name, 0.0))

    @property
    def k(self) -> int:
        if self.family == "vanderpol":
            return 2
        if self.family == "cubic_scalar":
            return 1
        return self._g.shape[-2]

    @property
    def batched(self) -> bool:
        return self.family == "custom_poly" and self._g.ndim == 3

    # -- evaluation ------------------------------------------------------

    def g(self, x: np.ndarray) -> np.ndarray:
        if self.family == "vanderpol":
            u, v = x[..., 0], x[..., 1]
            dv = self.p("alpha") * (1 - u * u) * v - u + self.p("beta") * u * u
            return np.stack([v, dv], axis=-1)
        if self.family == "cubic_scalar":
            return self.p("s") * x + x ** 3
        return _horner(self._g, x)

    def h(self, y: np.ndarray) -> np.ndarray:
        if self.family == "vanderpol":
            u = y[..., 0]
            dv = self.p("gamma") + self.p("delta") * u + self.p("eps") * u ** 3
            return np.stack([np.zeros_like(u), dv], axis=-1)
        if self.family == "cubic_scalar":
            return np.array(y, dtype=float, copy=True)
        return _horner(self._h, y)

    # -- class -----------------------------------------------------------

    def field_class(self) -> str:
        return classify_field(self)


def _poly_class(gc: np.ndarray, hc: np.ndarray) -> str:
    def nz(c, degs):
        return any(np.any(c[..., d] != 0) for d in degs if d < c.shape[-1])

    D = max(gc.shape[-1], hc.shape[-1])
    even = range(0, D, 2)
    h_zero = not nz(hc, [0])
    if not h_zero:
        return "DG"
    if nz(gc, even) or nz(hc, even):
        return "DG0"
    if nz(hc, range(2, D)):
        return "DGodd"
    return "DGl"


def classify_field(f: VectorFieldSpec) -> str:
    """Tightest class in DGl <= DGodd <= DG0 <= DG."""
    if f.family == "vanderpol":
        if f.p("gamma") != 0:
            return "DG"
        if f.p("beta") != 0:
            return "DG0"
        if f.p("eps") != 0:
            return "DGodd"
        return "DGl"
    if f.family == "cubic_scalar":
        return "DGl"
    return _poly_class(f._g, f._h)


def class_contains(outer: str, inner: str) -> bool:
    """Whether class ``inner`` is a subset of class ``outer``."""
    return CLASS_ORDER.index(inner) >= CLASS_ORDER.index(outer)


# --------------------------------------------------------------------------
# Constructors


def vanderpol(alpha=0.0, beta=0.0, gamma=0.0, delta=0.0, eps=0.0) -> VectorFieldSpec:
    return VectorFieldSpec("vanderpol", dict(alpha=alpha, beta=beta, gamma=gamma, delta=delta, eps=eps))


def cubic_scalar(s: float = 0.0) -> VectorFieldSpec:
    return VectorFieldSpec("cubic_scalar", {"s": s})


def custom_poly(g, h) -> VectorFieldSpec:
    return VectorFieldSpec("custom_poly", {"g": g, "h": h})


def heat(s: float) -> VectorFieldSpec:
    """g(x) = -s x, h(y) = y, so that x' = -s x - L x."""
    return custom_poly([[0.0, -s]], [[0.0, 1.0]])


def constant(v) -> VectorFieldSpec:
    """f_i(x) = v for every cell (g constant, h = 0)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    return custom_poly(v[:, None], np.zeros((len(v), 1)))


def parse_field(text: str) -> VectorFieldSpec:
    """Parse ``vdp:alpha=2,delta=1``, ``cubic:s=0.5``, ``heat:s=1``, ``const:v=1``,
    or ``poly:g=[0,-1,0,1],h=[0,1]`` (scalar cells)."""
    name, _, rest = text.strip().partition(":")
    kv = {}
    for tok in _split_params(rest):
        key, eq, val = tok.partition("=")
        if not eq:
            raise FieldSpecError(f"expected key=value, got {tok!r}")
        kv[key.strip()] = val.strip()

    def num(v):
        try:
            x = float(v)
        except ValueError:
            raise FieldSpecError(f"not a number: {v!r}") from None
        if not math.isfinite(x):
            raise FieldSpecError(f"non-finite parameter {v!r}")
        return x

    if name in ("vdp", "vanderpol"):
        alias = {"epsilon": "eps"}
        return VectorFieldSpec("vanderpol", {alias.get(k, k): num(v) for k, v in kv.items()})
    if name in ("cubic", "cubic_scalar"):
        return VectorFieldSpec("cubic_scalar", {k: num(v) for k, v in kv.items()})
    if name == "heat":
        return heat(num(kv.get("s", "0")))
    if name in ("const", "constant"):
        return constant(num(kv.get("v", "1")))
    if name in ("poly", "custom", "custom_poly"):
        def arr(v):
            v = v.strip()
            if not (v.startswith("[") and v.endswith("]")):
                raise FieldSpecError(f"coefficient list must be bracketed: {v!r}")
            return [[num(t) for t in v[1:-1].split(",") if t.strip()]]
        return custom_poly(arr(kv.get("g", "[0]")), arr(kv.get("h", "[0]")))
    raise FieldSpecError(f"unknown field {name!r}")


def _split_params(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return [t for t in out if t.strip()]


# --------------------------------------------------------------------------
# Full network evaluation


class NetworkField:
    """Vectorized f for one graph; states have shape (..., n, k)."""

    def __init__(self, G: Graph, f: VectorFieldSpec):
        self.G, self.f = G, f
        maxd = max(G.degrees) if G.n > 1 else 0
        nbr = np.zeros((G.n, max(maxd, 1)), dtype=np.int64)
        mask = np.zeros((G.n, max(maxd, 1)), dtype=bool)
        for i, ns in enumerate(G.neighbors):
            for d, j in enumerate(ns):
                nbr[i, d] = j
                mask[i, d] = True
        self._nbr = nbr
        self._mask = mask
        self._maxd = maxd

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = self.f.g(x)
        for d in range(self._maxd):
            cols = self._nbr[:, d]
            contrib = self.f.h(x[..., cols, :] - x)
            m = self._mask[:, d]
            if m.all():
                out = out + contrib
            else:
                out = out + np.where(m[:, None], contrib, 0.0)
        return out


def eval_full(G: Graph, f: VectorFieldSpec, x) -> np.ndarray:
    """Evaluate f at x; x is flat of length k*n or shaped (n, k)."""
    x = np.asarray(x, dtype=float)
    flat = x.ndim == 1
    if flat:
        if x.size != G.n * f.k:
            raise ValueError(f"state has {x.size} entries, expected {G.n * f.k}")
        x = x.reshape(G.n, f.k)
    elif x.shape[-2:] != (G.n, f.k):
        raise ValueError(f"state shape {x.shape} does not end in {(G.n, f.k)}")
    y = NetworkField(G, f)(x)
    return y.reshape(-1) if flat else y
