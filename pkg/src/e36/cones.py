"""Rational polyhedral cones given by integer generators."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, List, Optional, Sequence, Tuple

from .exactcore import lattice, lp
from .secondary import PointConfiguration

Ray = Tuple[int, ...]


class Cone:
    """Nonnegative span of primitive integer generators (sorted, deduplicated)."""

    __slots__ = ("ambient_rank", "generators", "__dict__")

    def __init__(self, generators: Iterable[Sequence], ambient_rank: Optional[int] = None):
        gens = sorted({lattice.primitive(g) for g in generators if any(g)})
        if ambient_rank is None:
            if not gens:
                raise ValueError("ambient rank needed for the zero cone")
            ambient_rank = len(gens[0])
        self.ambient_rank = ambient_rank
        self.generators: Tuple[Ray, ...] = tuple(gens)

    def __repr__(self):
        return f"Cone({list(self.generators)})"

    def __eq__(self, other):
        return isinstance(other, Cone) and self.rays == other.rays and self.lineality == other.lineality

    def __hash__(self):
        return hash((self.rays, self.lineality))

    @cached_property
    def dim(self) -> int:
        return lattice.rank(self.generators) if self.generators else 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @cached_property
    def lineality(self) -> Tuple[Ray, ...]:
        """Basis of the largest linear subspace (Hermite-reduced)."""
        # v is in the lineality space iff -v is in the cone; the generators
        # lying in it are those g for which -g is a nonnegative combination
        lin = [g for g in self.generators if lp.in_cone([-x for x in g], self.generators) is not None]
        if not lin:
            return ()
        return tuple(lattice.saturation_basis(lin))

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @cached_property
    def rays(self) -> Tuple[Ray, ...]:
        """Extreme rays of a pointed cone (the irredundant generators)."""
        if not self.is_pointed:
            raise ValueError("extreme rays of a non-pointed cone")
        out = []
        for g in self.generators:
            others = [h for h in self.generators if h != g]
            if lp.in_cone(g, others) is None:
                out.append(g)
        return tuple(out)

    def contains(self, v: Sequence) -> bool:
        return lp.in_cone(list(v), list(self.generators)) is not None

    def in_interior(self, v: Sequence) -> bool:
        """Relative interior membership via the facet inequalities."""
        if not self.contains(v):
            return False
        dual = dual_cone(self)
        for f in dual.generators:
            if all(lattice.dot(f, g) == 0 for g in self.generators):
                continue
            if lattice.dot(f, v) == 0:
                return False
        return True

    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    def is_smooth(self) -> bool:
        if not self.is_simplicial():
            return False
        return all(d == 1 for d in lattice.smith_invariants(list(self.rays)))

    def faces_generated(self, subset: Iterable[Ray]) -> "Cone":
        return Cone(list(subset), self.ambient_rank)

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "rays": [list(r) for r in self.generators]}


def dual_cone(C: Cone) -> Cone:
    """Primitive generators of ``{m : <m, v> >= 0 for v in C}``.

    The dual is the product of the orthogonal complement of span(C) with a
    pointed cone inside span(C); the latter's extreme rays are found by
    intersecting tight constraint sets of size ``dim - 1``.
    """
    n = C.ambient_rank
    G = [list(g) for g in C.generators]
    if not G:
        return Cone([tuple(int(i == j) * s for j in range(n)) for i in range(n) for s in (1, -1)], n)
    B = lattice.saturation_basis(G)       # basis of span(C)
    r = len(B)
    perp = lattice.kernel_lattice(G)
    M = lattice.matmul(G, lattice.transpose(B))  # constraints on y, with m = B^T y
    rays = set()
    for S in combinations(range(len(M)), r - 1):
        sub = [M[i] for i in S]
        if r > 1 and lattice.rank(sub) != r - 1:
            continue
        ker = lattice.nullspace_q(sub, r) if sub else [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
        if len(ker) != 1:
            continue
        y = ker[0]
        vals = [lattice.dot(row, y) for row in M]
        for s in (1, -1):
            if all(s * v >= 0 for v in vals) and any(vals):
                m = lattice.matvec(lattice.transpose(B), [s * t for t in y])
                rays.add(lattice.primitive(m))
    gens = list(rays)
    for p in perp:
        gens.append(tuple(p))
        gens.append(tuple(-x for x in p))
    return Cone(gens, n)


def is_gorenstein(C: Cone) -> Optional[Tuple[int, ...]]:
    """Integral ``m`` with ``<m, r> = 1`` on every extreme ray, if one exists.

    The answer is canonical: for a full-dimensional cone it is unique, and
    otherwise the solution is reduced modulo the orthogonal complement.
    """
    rays = list(C.rays)
    sol = lattice.solve_z(rays, [1] * len(rays))
    if sol is None:
        return None
    if not C.is_full_dimensional:
        perp = lattice.kernel_lattice(rays)
        # reduce against the Hermite basis of the complement
        for p in perp:
            piv = next(i for i, x in enumerate(p) if x)
            q, _ = divmod(sol[piv], p[piv])
            sol = [a - q * b for a, b in zip(sol, p)]
    return tuple(sol)


def lattice_isomorphic(C1: Cone, C2: Cone) -> Optional[List[List[int]]]:
    """Unimodular ``g`` with ``g C1 = C2`` (extreme rays to extreme rays).

    Both cones must be pointed and full-dimensional in the same ambient
    lattice.
    """
    if C1.ambient_rank != C2.ambient_rank or not (C1.is_full_dimensional and C2.is_full_dimensional):
        return None
    R1, R2 = list(C1.rays), list(C2.rays)
    if len(R1) != len(R2):
        return None
    n = C1.ambient_rank
    base = _independent_subset(R1, n)
    Binv = lattice.inverse_q(lattice.transpose([R1[i] for i in base]))
    target = set(R2)
    for img in permutations(range(len(R2)), n):
        Bp = lattice.transpose([R2[i] for i in img])
        g = lattice.matmul(Bp, Binv)
        if any(x.denominator != 1 for row in g for x in row):
            continue
        g = [[int(x) for x in row] for row in g]
        if abs(lattice.det(g)) != 1:
            continue
        if {tuple(lattice.matvec(g, r)) for r in R1} == target:
            return g
    return None


def _independent_subset(vectors, n):
    chosen: List[int] = []
    for i, v in enumerate(vectors):
        if lattice.rank([vectors[j] for j in chosen] + [v]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == n:
            break
    return chosen


@dataclass(frozen=True)
class Subdivision:
    base: Cone
    rays_used: Tuple[Ray, ...]
    maximal_cones: Tuple[Tuple[int, ...], ...]   # indices into rays_used

    def cones(self) -> List[Cone]:
        return [Cone([self.rays_used[i] for i in c], self.base.ambient_rank) for c in self.maximal_cones]

    def to_json(self) -> dict:
        return {"ambient_rank": self.base.ambient_rank,
                "rays": [list(r) for r in self.rays_used],
                "cones": [list(c) for c in self.maximal_cones]}

    def is_smooth(self) -> bool:
        return all(c.is_smooth() for c in self.cones())

    def locate(self, v: Sequence) -> List[int]:
        return [i for i, c in enumerate(self.cones()) if c.contains(v)]


CONVENTIONS = ("all", "fine", "regular", "regular-fine")


def _transverse_configuration(C: Cone, rays: Sequence[Ray]) -> PointConfiguration:
    dual = dual_cone(C)
    h = [sum(col) for col in zip(*dual.rays)]   # strictly positive on C minus 0
    return PointConfiguration(rays, h)


def _ray_set(C: Cone, rays) -> Tuple[Ray, ...]:
    rays = tuple(sorted({lattice.primitive(r) for r in rays}))
    for r in rays:
        if not C.contains(r):
            raise ValueError(f"ray {r} lies outside the cone")
    missing = [r for r in C.rays if r not in rays]
    if missing:
        raise ValueError(f"extreme rays {missing} are not among the given rays")
    return rays


def triangulations_of_cone(C: Cone, rays: Sequence[Sequence[int]], regular: bool = True):
    """Census of the simplicial subdivisions of ``C`` with rays among ``rays``.

    Returns ``(rays, all, regular)`` where ``all`` is the flip-connected
    component containing the regular subdivisions; ``regular`` is None
    unless requested.
    """
    rays = _ray_set(C, rays)
    pc = _transverse_configuration(C, rays)
    every = pc.enumerate_all()
    reg = pc.enumerate_regular().triangulations if regular else None
    return rays, every, reg


def triangulate_cone_with_rays(C: Cone, rays: Sequence[Sequence[int]], convention: str = "fine") -> List[Subdivision]:
    """Simplicial subdivisions of ``C`` using the given rays.

    ``convention`` selects which ones are counted: ``fine`` requires every
    ray to be used, ``regular`` restricts to regular (coherent) ones,
    ``regular-fine`` does both and ``all`` does neither.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    need_regular = convention.startswith("regular")
    rays, every, regular = triangulations_of_cone(C, rays, need_regular)
    pool = regular if need_regular else every
    if convention.endswith("fine"):
        pool = [T for T in pool if len(T.used_points()) == len(rays)]
    return [Subdivision(C, rays, T.key()) for T in sorted(pool)]


def subdivision_counts(C: Cone, rays) -> dict:
    rays, every, regular = triangulations_of_cone(C, rays)
    n = len(rays)

    def fine(ts):
        return [T for T in ts if len(T.used_points()) == n]

    return {"all": len(every), "fine": len(fine(every)),
            "regular": len(regular), "regular-fine": len(fine(regular))}


def decompositions_without_extra_rays(C: Cone) -> List[Subdivision]:
    """Subdivisions into smooth cones whose rays are extreme rays of ``C``."""
    rays = list(C.rays)
    pc = _transverse_configuration(C, rays)
    ts = pc.enumerate_all()
    out = []
    for T in ts:
        S = Subdivision(C, tuple(rays), T.key())
        if S.is_smooth():
            out.append(S)
    return out


def random_interior_points(C: Cone, count: int, rng: random.Random) -> List[Tuple[int, ...]]:
    """Positive integer combinations of all generators (interior points)."""
    out = []
    for _ in range(count):
        coeffs = [rng.randint(1, 50) for _ in C.generators]
        out.append(tuple(sum(c * g[i] for c, g in zip(coeffs, C.generators)) for i in range(C.ambient_rank)))
    return out


def audit_subdivision(S: Subdivision, samples: int, rng: random.Random) -> dict:
    """Point location: every sample lies in some cell, and in more than one
    only when it sits on a common face."""
    missing, overlaps = [], []
    cells = S.cones()
    for v in random_interior_points(S.base, samples, rng):
        hits = [i for i, c in enumerate(cells) if c.contains(v)]
        if not hits:
            missing.append(v)
        elif len(hits) > 1 and any(cells[i].in_interior(v) for i in hits):
            overlaps.append(v)
    return {"samples": samples, "uncovered": missing, "overlapping": overlaps,
            "ok": not missing and not overlaps}


def shared_face(c1: Cone, c2: Cone) -> Cone:
    common = set(c1.rays) & set(c2.rays)
    return Cone(sorted(common), c1.ambient_rank)
