"""Cebotarev density scans and the finite-group combinatorics of CM-types:
reflex stabilizer, incidence matrix D, and the rank of a CM-type."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from ._exact import integer_rank
from .finite_field import IntPoly, RamifiedPrime, ddf_pattern, primes_up_to

MAX_CHECKED_ORDER = 64


class InvalidGroup(ValueError):
    pass


class InvalidCMType(ValueError):
    pass


# --- finite groups --------------------------------------------------------


class FiniteGroup:
    """A finite group given by its multiplication table on indices 0..order-1."""

    def __init__(self, table, identity: int | None = None, name: str = "", check: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroup("multiplication table must be a non-empty square array")
        self.order = int(t.shape[0])
        self.table = t
        self.name = name or f"table{self.order}"
        if identity is None:
            cands = [e for e in range(self.order) if np.array_equal(t[e], np.arange(self.order))]
            if not cands:
                raise InvalidGroup("no identity element")
            identity = cands[0]
        self.identity = int(identity)
        if check and self.order <= MAX_CHECKED_ORDER:
            self._validate()
        self._inv = [int(np.flatnonzero(t[g] == self.identity)[0]) for g in range(self.order)]

    def _validate(self):
        t, n, e = self.table, self.order, self.identity
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("table entries out of range")
        if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
            raise InvalidGroup(f"{e} is not a two-sided identity")
        for g in range(n):
            if len(set(t[g])) != n or len(set(t[:, g])) != n:
                raise InvalidGroup("table is not a Latin square (inverses fail)")
        # (ab)c == a(bc) for all triples
        left = t[t, :]  # left[a, b, c] = (ab)c
        right = t[:, t]  # right[a, b, c] = a(bc)
        if not np.array_equal(left, right):
            raise InvalidGroup("multiplication is not associative")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self._inv[a]

    def power(self, a: int, k: int) -> int:
        r = self.identity
        for _ in range(k % self.element_order(a)):
            r = self.mul(r, a)
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_central(self, a: int) -> bool:
        return bool(np.array_equal(self.table[a, :], self.table[:, a]))

    def central_involutions(self) -> list[int]:
        return [g for g in range(self.order) if g != self.identity and self.mul(g, g) == self.identity
                and self.is_central(g)]

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        return self.identity in s and all(self.mul(a, b) in s for a in s for b in s)

    def closure(self, gens) -> frozenset[int]:
        s = {self.identity, *gens}
        frontier = list(s)
        while frontier:
            new = []
            for a in frontier:
                for b in list(s):
                    for x in (self.mul(a, b), self.mul(b, a)):
                        if x not in s:
                            s.add(x)
                            new.append(x)
            frontier = new
        return frozenset(s)

    def subgroups(self) -> list[frozenset[int]]:
        """All subgroups, by joining cyclic subgroups until nothing new appears."""
        found = {self.closure([g]) for g in range(self.order)}
        frontier = set(found)
        while frontier:
            new = set()
            for a in frontier:
                for b in found:
                    j = self.closure(a | b)
                    if j not in found:
                        new.add(j)
            found |= new
            frontier = new
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    def right_coset(self, H, g: int) -> frozenset[int]:
        return frozenset(self.mul(h, g) for h in H)

    def right_cosets(self, H) -> list[frozenset[int]]:
        seen, out = set(), []
        for g in range(self.order):
            if g not in seen:
                c = self.right_coset(H, g)
                seen |= c
                out.append(c)
        return out

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def cyclic(n: int) -> FiniteGroup:
    """C_n with element k standing for g^k."""
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, 0, f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element i + n*j stands for r^i s^j."""
    size = 2 * n
    t = np.empty((size, size), dtype=np.int64)
    for x in range(size):
        i, a = x % n, x // n
        for y in range(size):
            k, b = y % n, y // n
            t[x, y] = (i + (k if a == 0 else -k)) % n + n * ((a + b) % 2)
    return FiniteGroup(t, 0, f"D{n}")


def quaternion() -> FiniteGroup:
    """Q8 with elements 1, i, j, k, -1, -i, -j, -k at indices 0..7."""
    unit = {"1": 0, "i": 1, "j": 2, "k": 3}
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    names = list(unit)
    t = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        sx, ux = (1 if x < 4 else -1), names[x % 4]
        for y in range(8):
            sy, uy = (1 if y < 4 else -1), names[y % 4]
            s, u = prod[(ux, uy)]
            sign = s * sx * sy
            t[x, y] = unit[u] + (0 if sign == 1 else 4)
    return FiniteGroup(t, 0, "Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Element g * |H| + h stands for (g, h)."""
    n, m = G.order, H.order
    t = np.empty((n * m, n * m), dtype=np.int64)
    for x in range(n * m):
        for y in range(n * m):
            t[x, y] = G.table[x // m, y // m] * m + H.table[x % m, y % m]
    return FiniteGroup(t, G.identity * m + H.identity, f"{G.name}x{H.name}")


def read_group_table(path) -> FiniteGroup:
    """First line: order n; then n lines of n space-separated 0-based indices."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise InvalidGroup("first line must hold the group order")
    n = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InvalidGroup(f"expected {n} rows of {n} entries")
    return FiniteGroup([[int(x) for x in r] for r in rows], name=Path(path).stem)


def write_group_table(G: FiniteGroup, path) -> None:
    body = "\n".join(" ".join(str(int(x)) for x in row) for row in G.table)
    Path(path).write_text(f"{G.order}\n{body}\n")


def parse_group(text: str) -> FiniteGroup:
    """cyclic:n, dihedral:n, quaternion, table:PATH, or product:A*B of those."""
    text = text.strip()
    if text.startswith("product:"):
        parts = text[len("product:"):].split("*")
        G = parse_group(parts[0])
        for p in parts[1:]:
            G = direct_product(G, parse_group(p))
        return G
    kind, _, arg = text.partition(":")
    if kind == "cyclic":
        return cyclic(int(arg))
    if kind == "dihedral":
        return dihedral(int(arg))
    if kind == "quaternion":
        return quaternion()
    if kind == "table":
        return read_group_table(arg)
    raise InvalidGroup(f"cannot parse group {text!r}")


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of each isomorphism class of order <= max_order (max 8)."""
    if max_order > 8:
        raise ValueError("only orders up to 8 are tabulated")
    C = cyclic
    groups = [
        C(1), C(2), C(3), C(4), direct_product(C(2), C(2)), C(5), C(6), dihedral(3), C(7),
        C(8), direct_product(C(4), C(2)), direct_product(direct_product(C(2), C(2)), C(2)),
        dihedral(4), quaternion(),
    ]
    return [g for g in groups if g.order <= max_order]


# --- CM-types -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CMTypeSpec:
    G: FiniteGroup
    H: tuple[int, ...]
    c: int
    S: tuple[frozenset[int], ...]

    @staticmethod
    def build(G: FiniteGroup, H: Sequence[int], c: int, S_reps: Sequence[int]) -> "CMTypeSpec":
        H = tuple(sorted(set(int(h) for h in H)))
        if not G.is_subgroup(H):
            raise InvalidCMType(f"{H} is not a subgroup")
        S = tuple(sorted({G.right_coset(H, r) for r in S_reps}, key=min))
        spec = CMTypeSpec(G, H, int(c), S)
        spec.validate()
        return spec

    def validate(self):
        G, c = self.G, self.c
        if not 0 <= c < G.order or c == G.identity or G.mul(c, c) != G.identity:
            raise InvalidCMType(f"{c} is not an element of order 2")
        if not G.is_central(c):
            raise InvalidCMType("only central c is supported")
        cosets = set(G.right_cosets(self.H))
        S = set(self.S)
        Sc = {frozenset(G.mul(x, c) for x in coset) for coset in S}
        if not S <= cosets or S & Sc or S | Sc != cosets:
            raise InvalidCMType("H\\G is not the disjoint union of S and Sc")

    @property
    def g(self) -> int:
        return len(self.S)


@dataclass(frozen=True)
class CMRankResult:
    reflex_stabilizer: tuple[int, ...]
    R: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    nu: int
    cm_rank: int
    conjugated: bool = False  # D was built for Sc because S missed the identity coset

    @property
    def torus_dim(self) -> int:
        return self.nu


def _reflex(spec: CMTypeSpec):
    G = spec.G
    S_tilde = frozenset().union(*spec.S)
    R_tilde = frozenset(G.inv(g) for g in S_tilde)
    H_prime = tuple(g for g in range(G.order) if frozenset(G.mul(g, r) for r in R_tilde) == R_tilde)
    R = sorted({G.right_coset(H_prime, r) for r in R_tilde}, key=min)
    return R_tilde, H_prime, R


def _incidence(G, rows, cols, R_tilde, pick=min) -> list[list[int]]:
    return [
        [1 if G.mul(pick(sig), G.inv(pick(tau))) in R_tilde else 0 for tau in cols]
        for sig in rows
    ]


def conjugate_type(spec: CMTypeSpec) -> CMTypeSpec:
    G, c = spec.G, spec.c
    Sc = tuple(sorted((frozenset(G.mul(x, c) for x in s) for s in spec.S), key=min))
    return CMTypeSpec(G, spec.H, c, Sc)


def cm_rank(spec: CMTypeSpec) -> CMRankResult:
    """Reflex data, the matrix D = (i(sigma, tau)) over R x S, nu = rank D, rank nu + 1.

    rank(D) + 1 equals the rank of the full incidence matrix only when the
    identity coset H lies in S (C2 with S = {g} gives D = [0] but rank 2).
    Otherwise D is built for the conjugate type Sc, which contains H and has
    the same rank since right translation by c permutes both bases.
    """
    spec.validate()
    G = spec.G
    conjugated = not any(G.identity in s for s in spec.S)
    if conjugated:
        spec = conjugate_type(spec)
    R_tilde, H_prime, R = _reflex(spec)
    D = _incidence(G, R, spec.S, R_tilde)
    # i(sigma, tau) must not depend on the prolongations chosen
    for i, sig in enumerate(R):
        for j, tau in enumerate(spec.S):
            vals = {G.mul(s, G.inv(t)) in R_tilde for s in sig for t in tau}
            if vals != {bool(D[i][j])}:
                raise AssertionError("incidence depends on the choice of prolongations")
    nu = integer_rank(D)
    return CMRankResult(
        tuple(H_prime), tuple(tuple(sorted(r)) for r in R), tuple(map(tuple, D)), nu, nu + 1,
        conjugated,
    )


def cm_rank_oracle(spec: CMTypeSpec) -> int:
    """Rank of the full matrix over (R u Rc) x (S u Sc), i.e. [[D, U-D], [U-D, D]]."""
    spec.validate()
    G, c = spec.G, spec.c
    R_tilde, H_prime, R = _reflex(spec)
    Rc = [frozenset(G.mul(x, c) for x in r) for r in R]
    Sc = [frozenset(G.mul(x, c) for x in s) for s in spec.S]
    Dbar = _incidence(G, list(R) + Rc, list(spec.S) + Sc, R_tilde)
    return integer_rank(Dbar)


def full_incidence_matrix(spec: CMTypeSpec) -> list[list[int]]:
    G, c = spec.G, spec.c
    R_tilde, _, R = _reflex(spec)
    Rc = [frozenset(G.mul(x, c) for x in r) for r in R]
    Sc = [frozenset(G.mul(x, c) for x in s) for s in spec.S]
    return _incidence(G, list(R) + Rc, list(spec.S) + Sc, R_tilde)


def st_torus_dim(spec: CMTypeSpec) -> int:
    return cm_rank(spec).nu


def enumerate_cm_types(G: FiniteGroup) -> Iterator[CMTypeSpec]:
    """Every (H, c, S): H of even index, c a central involution outside H, S a CM-type."""
    for H in G.subgroups():
        if (G.order // len(H)) % 2:
            continue
        for c in G.central_involutions():
            if c in H:
                continue
            cosets = G.right_cosets(H)
            pairs, seen = [], set()
            for X in cosets:
                if X in seen:
                    continue
                Xc = frozenset(G.mul(x, c) for x in X)
                seen |= {X, Xc}
                pairs.append((X, Xc))
            for choice in itertools.product((0, 1), repeat=len(pairs)):
                S = tuple(sorted((pair[k] for pair, k in zip(pairs, choice)), key=min))
                spec = CMTypeSpec(G, tuple(sorted(H)), c, S)
                spec.validate()
                yield spec


# --- Cebotarev densities --------------------------------------------------


@dataclass
class DensityReport:
    descriptor: str
    bound: int
    labels: list[str]
    counts: list[int]
    empirical: list[float]
    theoretical: list[float | None]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def max_deviation(self) -> float | None:
        devs = [abs(e - t) for e, t in zip(self.empirical, self.theoretical) if t is not None]
        return max(devs) if devs else None

    def as_dict(self):
        return {
            "descriptor": self.descriptor,
            "bound": self.bound,
            "total": self.total,
            "classes": [
                {"label": l, "count": c, "empirical": e, "theoretical": t}
                for l, c, e, t in zip(self.labels, self.counts, self.empirical, self.theoretical)
            ],
        }


def euler_phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def cyclotomic_densities(n: int, bound: int) -> DensityReport:
    """Primes p <= bound, p not dividing n, by residue class mod n."""
    if n < 3 or bound < n:
        raise ValueError("need n >= 3 and bound >= n")
    primes = primes_up_to(bound)
    primes = primes[np.gcd(primes, n) == 1]
    classes = [a for a in range(1, n) if gcd(a, n) == 1]
    counts = np.bincount(primes % n, minlength=n)
    cs = [int(counts[a]) for a in classes]
    total = sum(cs)
    phi = len(classes)
    return DensityReport(
        f"Q(zeta_{n})", bound, [str(a) for a in classes], cs,
        [c / total for c in cs], [1 / phi] * phi,
    )


def pattern_label(pattern: Sequence[int]) -> str:
    return ",".join(map(str, pattern))


def pattern_densities(
    f: IntPoly, bound: int, expected: Mapping[tuple[int, ...], Fraction | float] | None = None
) -> DensityReport:
    """Frequencies of factorization patterns of f mod p over unramified p <= bound."""
    if bound < 3:
        raise ValueError("bound must be at least 3")
    counts: dict[tuple[int, ...], int] = {}
    for p in primes_up_to(bound):
        try:
            pat = ddf_pattern(f, int(p))
        except RamifiedPrime:
            continue
        counts[pat] = counts.get(pat, 0) + 1
    keys = set(counts) | set(expected or {})
    order = sorted(keys, key=lambda k: (len(k), k), reverse=True)
    total = sum(counts.values())
    emp = [counts.get(k, 0) / total if total else 0.0 for k in order]
    theo = [float(expected[k]) if expected and k in expected else None for k in order]
    return DensityReport(str(f), bound, [pattern_label(k) for k in order],
                         [counts.get(k, 0) for k in order], emp, theo)


def parse_expected(text: str) -> dict[tuple[int, ...], Fraction]:
    """'1,1,1:1/6;1,2:1/2;3:1/3' -> {(1,1,1): 1/6, ...}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        pat, _, val = item.partition(":")
        key = tuple(sorted(int(x) for x in pat.split(",")))
        out[key] = Fraction(val)
    return out
