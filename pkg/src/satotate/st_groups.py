"""Candidate Sato-Tate groups: conjugacy parametrizations, Haar densities,
characters, trace moments and the (ST3) rationality test.

A conjugacy class of a g=1 group is recorded by one eigenangle theta
(eigenvalues e^{+-i theta}); for g=2 groups by a pair (theta1, theta2).
Samples are numpy arrays of shape (n,) or (n, 2) accordingly. Elements of a
finite group are recorded by their index in the multiplication table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import comb

QUAD_NODES = 200
# finer grid only for the g=2 trace pushforward (CDF and binned density)
PUSHFORWARD_NODES = 600
MAX_MOMENT = 24

TWO_PI = 2 * math.pi


class UnsupportedMoment(ValueError):
    pass


# --- one-dimensional angle laws ------------------------------------------


@dataclass(frozen=True)
class AxisLaw:
    name: str
    lo: float
    hi: float
    density: Callable[[np.ndarray], np.ndarray]
    inverse_cdf: Callable[[np.ndarray], np.ndarray]


def _sin2_cdf(t):
    return (t - np.sin(t) * np.cos(t)) / math.pi


def _sin2_inverse_cdf(u):
    lo = np.zeros_like(u)
    hi = np.full_like(u, math.pi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = _sin2_cdf(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


CIRCLE = AxisLaw(
    "circle", 0.0, TWO_PI, lambda t: np.full_like(t, 1 / TWO_PI, dtype=float), lambda u: TWO_PI * u
)
SIN2 = AxisLaw(
    "sin2", 0.0, math.pi, lambda t: (2 / math.pi) * np.sin(t) ** 2, _sin2_inverse_cdf
)


def usp4_density(t1, t2):
    c1, c2 = np.cos(t1), np.cos(t2)
    return (8 / math.pi**2) * (c1 - c2) ** 2 * np.sin(t1) ** 2 * np.sin(t2) ** 2


@dataclass(frozen=True)
class Component:
    """A connected component with its conditional Haar law on angles.

    Exactly one of ``axes`` (independent angle laws), ``joint`` (the USp(4)
    Weyl density) or ``fixed`` (every element has the same angles, or is a
    single finite-group element) describes the law.
    """

    label: str
    mass: float
    axes: tuple[AxisLaw, ...] = ()
    joint: str | None = None
    fixed: tuple[float, ...] | None = None

    @property
    def dim(self) -> int:
        if self.fixed is not None:
            return len(self.fixed)
        if self.joint == "usp4":
            return 2
        return len(self.axes)

    def density(self, params: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(params)
        if self.joint == "usp4":
            return usp4_density(params[:, 0], params[:, 1])
        out = np.ones(params.shape[0])
        for i, ax in enumerate(self.axes):
            out = out * ax.density(params[:, i])
        return out

    def _domain(self) -> list[tuple[float, float]]:
        if self.joint == "usp4":
            return [(0.0, math.pi), (0.0, math.pi)]
        return [(ax.lo, ax.hi) for ax in self.axes]

    def quadrature(self, n: int = QUAD_NODES) -> tuple[np.ndarray, np.ndarray]:
        """Nodes (k, dim) and weights (k,) of the conditional law (weights sum to ~1)."""
        if self.fixed is not None:
            return np.array([self.fixed], dtype=float), np.ones(1)
        x, w = _gauss_legendre(n)
        pts, wts = [], []
        for lo, hi in self._domain():
            pts.append(lo + (hi - lo) * (x + 1) / 2)
            wts.append(w * (hi - lo) / 2)
        grids = np.meshgrid(*pts, indexing="ij")
        wgrid = np.ones_like(grids[0])
        for axis, ww in enumerate(wts):
            shape = [1] * len(wts)
            shape[axis] = -1
            wgrid = wgrid * ww.reshape(shape)
        nodes = np.stack([g.ravel() for g in grids], axis=1)
        weights = wgrid.ravel() * self.density(nodes)
        return nodes, weights

    def sample(self, count: int, rng: np.random.Generator, envelope: float | None = None) -> np.ndarray:
        if self.fixed is not None:
            return np.tile(np.array(self.fixed, dtype=float), (count, 1))
        if self.joint == "usp4":
            return _rejection_usp4(count, rng, envelope)
        cols = [ax.inverse_cdf(rng.random(count)) for ax in self.axes]
        return np.stack(cols, axis=1)


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=None)
def usp4_envelope() -> float:
    """Grid maximum of the USp(4) Weyl density, padded by 2% for grid error."""
    t = np.linspace(0, math.pi, 801)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    return 1.02 * float(usp4_density(t1, t2).max())


def _rejection_usp4(count, rng, envelope=None):
    envelope = envelope or usp4_envelope()
    out = np.empty((0, 2))
    while out.shape[0] < count:
        batch = max(1024, 12 * (count - out.shape[0]))
        cand = rng.random((batch, 2)) * math.pi
        keep = rng.random(batch) * envelope < usp4_density(cand[:, 0], cand[:, 1])
        out = np.concatenate([out, cand[keep]])
    return out[:count]


# --- groups ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupSpec:
    name: str
    genus: int  # 1: 2x2 matrices, 2: 4x4 matrices, 0: finite group (no trace)
    components: tuple[Component, ...]
    finite_group: object | None = field(default=None, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.genus == 0

    @property
    def param_dim(self) -> int:
        return self.components[0].dim

    def trace(self, params) -> np.ndarray:
        if self.is_finite:
            raise ValueError("finite groups carry no trace without a representation")
        params = np.asarray(params, dtype=float)
        if self.genus == 1:
            tr = 2 * np.cos(params.reshape(-1))
        else:
            params = params.reshape(-1, 2)
            tr = 2 * np.cos(params[:, 0]) + 2 * np.cos(params[:, 1])
        # 2cos(pi/2) is 1.2e-16 in floating point; atoms at 0 must stay at 0
        return np.where(np.abs(tr) < 1e-12, 0.0, tr)

    @cached_property
    def _quadrature(self):
        return [c.quadrature() for c in self.components]

    def expect(self, func: Callable[[np.ndarray], np.ndarray], component: int | None = None):
        """Haar expectation of func(params); conditional on one component if given."""
        if component is not None:
            nodes, w = self._quadrature[component]
            return np.sum(w * func(self._squeeze(nodes)))
        total = 0.0
        for comp, (nodes, w) in zip(self.components, self._quadrature):
            total = total + comp.mass * np.sum(w * func(self._squeeze(nodes)))
        return total

    def _squeeze(self, nodes):
        return nodes[:, 0] if nodes.shape[1] == 1 else nodes

    def __repr__(self):
        return f"GroupSpec({self.name})"


def _g1(name, *components):
    return GroupSpec(name, 1, tuple(components))


def _g2(name, *components):
    return GroupSpec(name, 2, tuple(components))


U1 = _g1("U1", Component("U(1)", 1.0, axes=(CIRCLE,)))
NU1 = _g1(
    "NU1",
    Component("U(1)", 0.5, axes=(CIRCLE,)),
    Component("J U(1)", 0.5, fixed=(math.pi / 2,)),
)
SU2 = _g1("SU2", Component("SU(2)", 1.0, axes=(SIN2,)))
U1xU1 = _g2("U1xU1", Component("U(1)xU(1)", 1.0, axes=(CIRCLE, CIRCLE)))
U1xSU2 = _g2("U1xSU2", Component("U(1)xSU(2)", 1.0, axes=(CIRCLE, SIN2)))
SU2xSU2 = _g2("SU2xSU2", Component("SU(2)xSU(2)", 1.0, axes=(SIN2, SIN2)))
USp4 = _g2("USp4", Component("USp(4)", 1.0, joint="usp4"))

CATALOG: dict[str, GroupSpec] = {
    g.name: g for g in (U1, NU1, SU2, U1xU1, U1xSU2, SU2xSU2, USp4)
}
G1_GROUPS = ("U1", "NU1", "SU2")
G2_GROUPS = ("U1xU1", "U1xSU2", "SU2xSU2", "USp4")


def get_group(name: str) -> GroupSpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown group {name!r}; choose from {sorted(CATALOG)}") from None


def finite_group_spec(G, name: str = "Gal") -> GroupSpec:
    """Discrete Haar measure on a finite group (one component per element)."""
    comps = tuple(Component(str(i), 1.0 / G.order, fixed=(float(i),)) for i in range(G.order))
    return GroupSpec(name, 0, comps, finite_group=G)


# --- characters -----------------------------------------------------------


def sym_char(m: int, z):
    """Character of Sym^m of the standard representation at trace z = 2cos(theta): U_m(z/2)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    z = np.asarray(z, dtype=float)
    prev, cur = np.zeros_like(z), np.ones_like(z)
    for _ in range(m):
        prev, cur = cur, z * cur - prev
    return cur if cur.ndim else float(cur)


def complete_symmetric_conjugate_pairs(theta, d_max: int) -> np.ndarray:
    """J_d = H_d(e^{i t1}, e^{-i t1}, e^{i t2}, e^{-i t2}) for d = 0..d_max.

    The generating function is 1 / (1 - s1 T + s2 T^2 - s1 T^3 + T^4) with
    s1 = 2(cos t1 + cos t2) and s2 = 2 + 4 cos t1 cos t2, giving a real recurrence.
    Returns shape (d_max + 1, ...) over the batch shape of theta.
    """
    theta = np.asarray(theta, dtype=float)
    c1, c2 = np.cos(theta[..., 0]), np.cos(theta[..., 1])
    s1 = 2 * (c1 + c2)
    s2 = 2 + 4 * c1 * c2
    J = np.zeros((d_max + 1,) + c1.shape)
    for d in range(d_max + 1):
        val = np.ones_like(c1) if d == 0 else np.zeros_like(c1)
        if d >= 1:
            val = val + s1 * J[d - 1]
        if d >= 2:
            val = val - s2 * J[d - 2]
        if d >= 3:
            val = val + s1 * J[d - 3]
        if d >= 4:
            val = val - J[d - 4]
        J[d] = val
    return J


def usp4_char(a: int, b: int, theta):
    """Trace of Gamma_{a,b} at eigenangles theta = (theta1, theta2)."""
    if not a >= b >= 0:
        raise ValueError("need a >= b >= 0")
    J = complete_symmetric_conjugate_pairs(theta, a + 1)

    def j(d):
        return J[d] if d >= 0 else np.zeros_like(J[0])

    if b == 0:
        out = j(a)
    else:
        out = j(a) * (j(b) + j(b - 2)) - (j(a + 1) + j(a - 1)) * j(b - 1)
    return out if np.ndim(out) else float(out)


def weyl_dimension(a: int, b: int) -> int:
    num = (a - b + 1) * (b + 1) * (a + 2) * (a + b + 3)
    assert num % 6 == 0
    return num // 6


@dataclass(frozen=True)
class IrrepSpec:
    """phi(a), sym(m), gamma(a, b), artin(class function), trivial, or a direct sum."""

    kind: str
    params: tuple = ()
    values: tuple = ()  # artin: character value per group element
    parts: tuple["IrrepSpec", ...] = ()

    @staticmethod
    def phi(a: int) -> "IrrepSpec":
        if a == 0:
            raise ValueError("phi_a needs a nonzero a (use IrrepSpec.trivial())")
        return IrrepSpec("phi", (int(a),))

    @staticmethod
    def sym(m: int) -> "IrrepSpec":
        if m < 0:
            raise ValueError("m must be nonnegative")
        return IrrepSpec("sym", (int(m),))

    @staticmethod
    def gamma(a: int, b: int) -> "IrrepSpec":
        if not a >= b >= 0:
            raise ValueError("need a >= b >= 0")
        return IrrepSpec("gamma", (int(a), int(b)))

    @staticmethod
    def artin(values: Sequence[complex]) -> "IrrepSpec":
        return IrrepSpec("artin", values=tuple(complex(v) for v in values))

    @staticmethod
    def trivial() -> "IrrepSpec":
        return IrrepSpec("trivial")

    @staticmethod
    def direct_sum(*parts: "IrrepSpec") -> "IrrepSpec":
        return IrrepSpec("sum", parts=tuple(parts))

    @staticmethod
    def parse(text: str) -> "IrrepSpec":
        """'trivial', 'phi:a', 'sym:m', 'gamma:a,b' or '+'-joined sums."""
        text = text.strip().replace(" ", "")
        if "+" in text:
            return IrrepSpec.direct_sum(*(IrrepSpec.parse(t) for t in text.split("+")))
        if text == "trivial":
            return IrrepSpec.trivial()
        kind, _, arg = text.partition(":")
        nums = [int(x) for x in arg.split(",")] if arg else []
        if kind == "phi" and len(nums) == 1:
            return IrrepSpec.phi(nums[0])
        if kind == "sym" and len(nums) == 1:
            return IrrepSpec.sym(nums[0])
        if kind == "gamma" and len(nums) == 2:
            return IrrepSpec.gamma(*nums)
        raise ValueError(f"cannot parse representation {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "sum":
            return "+".join(p.label for p in self.parts)
        if self.kind == "artin":
            return "artin"
        if not self.params:
            return self.kind
        return f"{self.kind}:{','.join(map(str, self.params))}"

    @property
    def dim(self) -> int:
        if self.kind in ("phi", "trivial"):
            return 1
        if self.kind == "sym":
            return self.params[0] + 1
        if self.kind == "gamma":
            return weyl_dimension(*self.params)
        if self.kind == "artin":
            return round(self.values[0].real)
        return sum(p.dim for p in self.parts)

    @property
    def param_dim(self) -> int | None:
        """Number of angle coordinates the representation is evaluated on (None: any)."""
        if self.kind in ("phi", "sym"):
            return 1
        if self.kind == "gamma":
            return 2
        if self.kind == "sum":
            dims = {p.param_dim for p in self.parts} - {None}
            if len(dims) > 1:
                raise ValueError("direct sum mixes parametrizations")
            return dims.pop() if dims else None
        return None

    def __call__(self, samples) -> np.ndarray:
        samples = np.asarray(samples, dtype=float)
        if self.kind == "trivial":
            n = samples.shape[0] if samples.ndim else 1
            return np.ones(n)
        if self.kind == "phi":
            return np.exp(1j * self.params[0] * samples)
        if self.kind == "sym":
            return sym_char(self.params[0], 2 * np.cos(samples))
        if self.kind == "gamma":
            return usp4_char(*self.params, samples.reshape(-1, 2))
        if self.kind == "artin":
            return np.asarray(self.values)[samples.astype(int).reshape(-1)]
        return sum(p(samples) for p in self.parts)

    def eigenangles(self, samples) -> np.ndarray | None:
        """Eigenvalue angles of rho(x), shape (n, dim), when known in closed form."""
        samples = np.asarray(samples, dtype=float)
        if self.kind == "trivial":
            n = samples.shape[0] if samples.ndim else 1
            return np.zeros((n, 1))
        if self.kind == "phi":
            return (self.params[0] * samples).reshape(-1, 1)
        if self.kind == "sym":
            m = self.params[0]
            k = m - 2 * np.arange(m + 1)
            return samples.reshape(-1, 1) * k[None, :]
        if self.kind == "gamma" and self.params == (1, 0):
            s = samples.reshape(-1, 2)
            return np.stack([s[:, 0], -s[:, 0], s[:, 1], -s[:, 1]], axis=1)
        if self.kind == "gamma" and self.params == (0, 0):
            return np.zeros((samples.reshape(-1, 2).shape[0], 1))
        if self.kind == "sum":
            blocks = [p.eigenangles(samples) for p in self.parts]
            if any(b is None for b in blocks):
                return None
            return np.concatenate(blocks, axis=1)
        return None

    def power_char(self, samples, m: int) -> np.ndarray:
        """chi(x^m): for angle parametrizations, x^m has angles m * theta."""
        if self.kind == "artin":
            raise ValueError("powers of finite-group elements need the group table")
        return self(m * np.asarray(samples, dtype=float))


# --- densities and moments ------------------------------------------------


@dataclass
class TraceLaw:
    """Law of the trace: absolutely continuous part plus atoms."""

    group: str
    lo: float
    hi: float
    pdf: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    atoms: tuple[tuple[float, float], ...] = ()

    def cdf_left(self, z):
        z = np.asarray(z, dtype=float)
        out = np.asarray(self.cdf(z), dtype=float)
        for loc, mass in self.atoms:
            out = out - mass * (z == loc)
        return out


def _phi_of(z):
    return np.arccos(np.clip(np.asarray(z, dtype=float) / 2, -1, 1))


def _st_pdf(z):
    z = np.asarray(z, dtype=float)
    inside = np.abs(z) < 2
    return np.where(inside, np.sqrt(np.clip(4 - z * z, 0, None)) / TWO_PI, 0.0)


def _st_cdf(z):
    phi = _phi_of(z)
    return 1 - (phi - np.sin(2 * phi) / 2) / math.pi


def _cm_pdf(z):
    z = np.asarray(z, dtype=float)
    inside = np.abs(z) < 2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(inside, 1 / (math.pi * np.sqrt(np.where(inside, 4 - z * z, 1.0))), 0.0)


def _cm_cdf(z):
    return 1 - _phi_of(z) / math.pi


@lru_cache(maxsize=None)
def _pushforward(name: str):
    group = get_group(name)
    zs, ws = [], []
    for comp in group.components:
        nodes, w = comp.quadrature(PUSHFORWARD_NODES)
        zs.append(group.trace(nodes))
        ws.append(comp.mass * w)
    z = np.concatenate(zs)
    w = np.concatenate(ws)
    order = np.argsort(z, kind="stable")
    return z[order], np.cumsum(w[order])


def trace_density(group: GroupSpec) -> TraceLaw:
    """Law of the trace under Haar measure."""
    if group.is_finite:
        raise ValueError("finite groups have no trace law")
    if group.name == "SU2":
        return TraceLaw("SU2", -2, 2, _st_pdf, _st_cdf)
    if group.name == "U1":
        return TraceLaw("U1", -2, 2, _cm_pdf, _cm_cdf)
    if group.name == "NU1":
        return TraceLaw(
            "NU1",
            -2,
            2,
            lambda z: 0.5 * _cm_pdf(z),
            lambda z: 0.5 * _cm_cdf(z) + 0.5 * (np.asarray(z, dtype=float) >= 0),
            atoms=((0.0, 0.5),),
        )
    zs, cw = _pushforward(group.name)

    def cdf(z):
        idx = np.searchsorted(zs, np.asarray(z, dtype=float), side="right")
        return np.where(idx > 0, cw[np.maximum(idx - 1, 0)], 0.0)

    edges = np.linspace(-4, 4, 401)
    mass = np.diff(cdf(edges))
    centers = 0.5 * (edges[:-1] + edges[1:])
    dens = mass / np.diff(edges)

    def pdf(z):
        z = np.asarray(z, dtype=float)
        return np.where(np.abs(z) <= 4, np.interp(z, centers, dens), 0.0)

    return TraceLaw(group.name, -4, 4, pdf, cdf)


@dataclass(frozen=True)
class MomentSpec:
    group: str
    k: int
    value: float
    method: str


@lru_cache(maxsize=None)
def _closed_form_moments(name: str, k_max: int = MAX_MOMENT) -> tuple[float, ...] | None:
    def u1(k):
        return float(comb(k, k // 2, exact=True)) if k % 2 == 0 else 0.0

    def su2(k):
        return float(comb(k, k // 2, exact=True) // (k // 2 + 1)) if k % 2 == 0 else 0.0

    def nu1(k):
        return 1.0 if k == 0 else u1(k) / 2

    def conv(f, g):
        return lambda k: sum(comb(k, j, exact=True) * f(j) * g(k - j) for j in range(k + 1))

    table = {
        "U1": u1,
        "SU2": su2,
        "NU1": nu1,
        "U1xU1": conv(u1, u1),
        "U1xSU2": conv(u1, su2),
        "SU2xSU2": conv(su2, su2),
    }
    if name not in table:
        return None
    return tuple(float(table[name](k)) for k in range(k_max + 1))


def trace_moment(group: GroupSpec, k: int, method: str | None = None) -> MomentSpec:
    """E[tr^k] under Haar measure, closed form when known, else quadrature."""
    if not 0 <= k <= MAX_MOMENT:
        raise UnsupportedMoment(f"moment order {k} outside [0, {MAX_MOMENT}]")
    closed = _closed_form_moments(group.name)
    if method in (None, "closed-form") and closed is not None:
        return MomentSpec(group.name, k, closed[k], "closed-form")
    if method == "closed-form":
        raise UnsupportedMoment(f"no closed form for {group.name}")
    value = float(np.real(group.expect(lambda x: group.trace(x) ** k)))
    return MomentSpec(group.name, k, value, "quadrature")


def a2_moment(group: GroupSpec, k: int) -> float:
    """E[a2^k] for a g=2 group, a2 = 2 + 4 cos(t1) cos(t2) (the normalized e2)."""
    if group.genus != 2:
        raise ValueError("a2 is defined for g=2 groups")

    def a2(x):
        x = np.asarray(x).reshape(-1, 2)
        return (2 + 4 * np.cos(x[:, 0]) * np.cos(x[:, 1])) ** k

    return float(group.expect(a2))


def char_inner_product(group: GroupSpec, r1: IrrepSpec, r2: IrrepSpec) -> complex:
    return complex(group.expect(lambda x: r1(x) * np.conj(r2(x))))


def st3_check(group: GroupSpec, selector="abs_trace_sq", component: int = 0, tol: float = 1e-6):
    """Conditional Haar expectation over one component and whether it is an integer.

    selector: "abs_trace_sq", ("power", k) for E[tr^k], an IrrepSpec, or a callable on params.
    """
    if not 0 <= component < len(group.components):
        raise IndexError(f"{group.name} has no component {component}")
    if selector == "abs_trace_sq":
        func = lambda x: np.abs(group.trace(x)) ** 2  # noqa: E731
    elif isinstance(selector, tuple) and selector[0] == "power":
        k = selector[1]
        func = lambda x: group.trace(x) ** k  # noqa: E731
    else:
        func = selector
    value = complex(group.expect(func, component=component))
    if abs(value.imag) > tol:
        return value, False
    v = value.real
    return v, abs(v - round(v)) <= tol


def st3_audit(groups: Sequence[GroupSpec] | None = None, k_max: int = 4, tol: float = 1e-6) -> list[dict]:
    rows = []
    for g in groups or CATALOG.values():
        for ci, comp in enumerate(g.components):
            selectors = ["abs_trace_sq"] + [("power", k) for k in range(1, k_max + 1)]
            for sel in selectors:
                value, ok = st3_check(g, sel, ci, tol)
                label = sel if isinstance(sel, str) else f"trace^{sel[1]}"
                rows.append(
                    {"group": g.name, "component": comp.label, "character": label,
                     "value": float(np.real(value)), "integer": bool(ok)}
                )
    return rows


def haar_sample(group: GroupSpec, count: int, seed: int) -> np.ndarray:
    """Independent Haar-distributed conjugacy parameters; deterministic in seed."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    masses = np.array([c.mass for c in group.components])
    which = rng.choice(len(masses), size=count, p=masses / masses.sum())
    out = np.empty((count, group.param_dim))
    for ci, comp in enumerate(group.components):
        idx = np.flatnonzero(which == ci)
        if idx.size:
            out[idx] = comp.sample(idx.size, rng)
    return out[:, 0] if group.param_dim == 1 else out
