"""Triangulations of acyclic vector configurations and the secondary polytope.

A configuration is a list of integer vectors together with a linear form
``m`` that is positive on every vector.  When ``m`` is 1 on every vector this is
an ordinary point configuration on the hyperplane ``m = 1``; in general it
is the configuration of ray generators of a pointed cone, and triangulations
are simplicial subdivisions of that cone using the given rays.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exactcore import lattice, lp

Cell = FrozenSet[int]


@dataclass(frozen=True)
class Circuit:
    positive: FrozenSet[int]
    negative: FrozenSet[int]

    @property
    def support(self) -> FrozenSet[int]:
        return self.positive | self.negative

    def reversed(self) -> "Circuit":
        return Circuit(self.negative, self.positive)


@dataclass(frozen=True)
class Triangulation:
    """Set of maximal cells, each a frozenset of point indices."""

    cells: FrozenSet[Cell]

    @classmethod
    def of(cls, cells: Iterable[Iterable[int]]) -> "Triangulation":
        return cls(frozenset(frozenset(c) for c in cells))

    def key(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(c)) for c in self.cells))

    def __lt__(self, other: "Triangulation"):
        return self.key() < other.key()

    def used_points(self) -> FrozenSet[int]:
        return frozenset().union(*self.cells)

    def to_json(self) -> dict:
        return {"simplices": [list(c) for c in self.key()]}

    @classmethod
    def from_json(cls, d: dict) -> "Triangulation":
        return cls.of(d["simplices"])


class PointConfiguration:
    """Ordered integer vectors, acyclic with respect to ``degree_form``."""

    def __init__(self, points: Sequence[Sequence[int]], degree_form: Optional[Sequence] = None):
        self.points: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in p) for p in points)
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")
        if not self.points:
            raise ValueError("empty configuration")
        self.dim = len(self.points[0])
        if degree_form is None:
            degree_form = self._find_degree_form()
        self.degree_form = tuple(Fraction(x) for x in degree_form)
        self.heights = tuple(lattice.dot(self.degree_form, p) for p in self.points)
        if any(h <= 0 for h in self.heights):
            raise ValueError("configuration is not acyclic for the given degree form")
        self.rank = lattice.rank(self.points)

    def _find_degree_form(self):
        sol = lp.feasible_point(self.points, [1] * len(self.points))
        if sol is None:
            raise ValueError("configuration is not acyclic")
        return sol

    def __len__(self):
        return len(self.points)

    @property
    def is_homogeneous(self) -> bool:
        return all(h == 1 for h in self.heights)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in self.points],
                "degree_form": [str(x) for x in self.degree_form]}

    @classmethod
    def from_json(cls, d: dict) -> "PointConfiguration":
        return cls(d["points"], [Fraction(x) for x in d.get("degree_form")] if d.get("degree_form") else None)

    # geometry helpers -------------------------------------------------

    def vectors(self, idx: Iterable[int]) -> List[Tuple[int, ...]]:
        return [self.points[i] for i in idx]

    def is_independent(self, idx: Iterable[int]) -> bool:
        idx = list(idx)
        return lattice.rank(self.vectors(idx)) == len(idx)

    @cached_property
    def span_basis(self) -> List[Tuple[int, ...]]:
        return lattice.saturation_basis(self.points)

    def normalized_volume(self, cell: Iterable[int]) -> int:
        """|det| of the cell in a lattice basis of the span (the cone's lattice).

        For a homogeneous configuration this is the normalized volume of the
        simplex; a unimodular simplex has volume 1.
        """
        coords = [lattice.lattice_coordinates(self.span_basis, self.points[i]) for i in sorted(cell)]
        return abs(int(lattice.det(coords)))

    def transverse_volume(self, cell: Iterable[int]) -> Fraction:
        """Volume of the cell cut by the hyperplane ``m = 1`` (up to a global constant)."""
        cell = sorted(cell)
        v = Fraction(self.normalized_volume(cell))
        for i in cell:
            v /= self.heights[i]
        return v

    def coefficients(self, cell: Sequence[int], j: int) -> List[Fraction]:
        """Coordinates of point ``j`` in the basis given by the cell."""
        sol = lattice.solve_q(lattice.transpose(self.vectors(cell)), list(self.points[j]))
        if sol is None:
            raise ValueError("point outside the span of the cell")
        return sol

    @cached_property
    def circuits(self) -> Tuple[Circuit, ...]:
        """All oriented circuits (both orientations listed)."""
        out = []
        n = len(self.points)
        for size in range(2, self.rank + 2):
            for S in combinations(range(n), size):
                vecs = self.vectors(S)
                if lattice.rank(vecs) != size - 1:
                    continue
                ker = lattice.nullspace_q(lattice.transpose(vecs))
                lam = ker[0]
                if any(x == 0 for x in lam):
                    continue
                pos = frozenset(S[i] for i in range(size) if lam[i] > 0)
                neg = frozenset(S[i] for i in range(size) if lam[i] < 0)
                c = Circuit(pos, neg)
                out.append(c)
                out.append(c.reversed())
        out.sort(key=lambda c: (sorted(c.positive), sorted(c.negative)))
        return tuple(out)

    # triangulations ---------------------------------------------------

    def placing_triangulation(self, order: Optional[Sequence[int]] = None) -> Triangulation:
        order = list(range(len(self.points))) if order is None else list(order)
        if sorted(order) != list(range(len(self.points))):
            raise ValueError("order must be a permutation of the point indices")
        if self.rank != self.dim:
            return self._placing_in_span(order)
        start: List[int] = []
        for i in order:
            if self.is_independent(start + [i]):
                start.append(i)
            if len(start) == self.rank:
                break
        if len(start) < self.rank:
            raise ValueError("degenerate configuration")
        cells = {frozenset(start)}
        for p in order:
            if p in start:
                continue
            new = set()
            for F, q in _boundary_facets(cells):
                n = _facet_normal(self, F, q)
                if lattice.dot(n, self.points[p]) < 0:
                    new.add(F | {p})
            cells |= new
        return Triangulation(frozenset(cells))

    def _placing_in_span(self, order):
        coords = [tuple(int(x) for x in lattice.lattice_coordinates(self.span_basis, p))
                  for p in self.points]
        return PointConfiguration(coords).placing_triangulation(order)

    def lift_inequalities(self, T: Triangulation) -> List[List[Fraction]]:
        """Rows ``g`` with ``g . w >= 1`` meaning point j lies strictly above cell's plane."""
        rows = []
        n = len(self.points)
        for cell in sorted(T.cells, key=sorted):
            c = sorted(cell)
            for j in range(n):
                if j in cell:
                    continue
                lam = self.coefficients(c, j)
                row = [Fraction(0)] * n
                row[j] = Fraction(1)
                for i, l in zip(c, lam):
                    row[i] -= l
                rows.append(row)
        return rows

    def local_inequalities(self, T: Triangulation) -> List[List[Fraction]]:
        """Folding rows across interior walls, plus unused points above their cell.

        Strict local convexity across every wall already forces the
        piecewise linear lift to be convex, so this smaller system is
        equivalent to :meth:`lift_inequalities`.
        """
        n = len(self.points)
        rows = []
        walls: Dict[Cell, List[Cell]] = {}
        for cell in T.cells:
            for q in cell:
                walls.setdefault(cell - {q}, []).append(cell)
        for F in sorted(walls, key=sorted):
            pair = walls[F]
            if len(pair) != 2:
                continue
            sigma, tau = sorted(pair, key=sorted)
            (j,) = tau - F
            rows.append(self._fold_row(sorted(sigma), j, n))
        used = T.used_points()
        for j in range(n):
            if j in used:
                continue
            host = next(c for c in sorted(T.cells, key=sorted)
                        if all(x >= 0 for x in self.coefficients(sorted(c), j)))
            rows.append(self._fold_row(sorted(host), j, n))
        return rows

    def _fold_row(self, cell, j, n):
        row = [Fraction(0)] * n
        row[j] = Fraction(1)
        for i, l in zip(cell, self.coefficients(cell, j)):
            row[i] -= l
        return row

    def is_regular(self, T: Triangulation) -> Optional[List[Fraction]]:
        """A height vector inducing exactly ``T``, or None.

        The returned lift is always re-checked against the full set of
        strict inequalities in exact arithmetic.
        """
        rows = self.local_inequalities(T)
        if not rows:
            return [Fraction(0)] * len(self.points)
        w = lp.strict_feasible(rows)
        if w is not None and not self.verify_lift(T, w):
            raise AssertionError("regularity witness failed exact verification")
        return w

    def verify_lift(self, T: Triangulation, w: Sequence) -> bool:
        return all(lattice.dot(r, w) > 0 for r in self.lift_inequalities(T))

    def is_triangulation(self, T: Triangulation) -> bool:
        """Full-rank cells, no improperly intersecting pair, correct total volume."""
        cells = list(T.cells)
        if not cells or any(len(c) != self.rank or not self.is_independent(sorted(c)) for c in cells):
            return False
        for Z in self.circuits:
            for s in cells:
                if Z.positive <= s:
                    for t in cells:
                        if Z.negative <= t:
                            return False
        return sum(self.transverse_volume(c) for c in cells) == self.total_volume

    @cached_property
    def total_volume(self) -> Fraction:
        T = self.placing_triangulation()
        return sum(self.transverse_volume(c) for c in T.cells)

    def flip_neighbors(self, T: Triangulation) -> List[Triangulation]:
        out = set()
        cells = T.cells
        for Z in self.circuits:
            flipped = self._flip(cells, Z)
            if flipped is not None:
                out.add(flipped)
        return sorted(out)

    def _flip(self, cells: FrozenSet[Cell], Z: Circuit) -> Optional[Triangulation]:
        supp = Z.support
        plus = [supp - {j} for j in Z.positive]
        link = None
        for rho in plus:
            lk = frozenset(c - rho for c in cells if rho <= c)
            if not lk:
                return None
            if link is None:
                link = lk
            elif lk != link:
                return None
        removed = {rho | tau for rho in plus for tau in link}
        if not removed <= cells:
            return None
        added = {supp - {j} | tau for j in Z.negative for tau in link}
        return Triangulation(frozenset((cells - removed) | added))

    def gkz_vector(self, T: Triangulation) -> Tuple[int, ...]:
        psi = [0] * len(self.points)
        for c in T.cells:
            v = self.normalized_volume(c)
            for i in c:
                psi[i] += v
        return tuple(psi)

    def enumerate_regular(self, threads: int = 1) -> "Census":
        """Breadth-first search of the flip graph through regular triangulations."""
        start = self.placing_triangulation()
        w0 = self.is_regular(start)
        if w0 is None:
            raise AssertionError("placing triangulation failed its regularity test")
        regular: Dict[Triangulation, List[Fraction]] = {start: w0}
        nonregular: set = set()
        edges: Dict[Triangulation, List[Triangulation]] = {}
        frontier = [start]
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            while frontier:
                nbr_lists = list(_map(pool, self.flip_neighbors, frontier))
                fresh = []
                for T, nbrs in zip(frontier, nbr_lists):
                    edges[T] = nbrs
                    for N in nbrs:
                        if N not in regular and N not in nonregular and N not in fresh:
                            fresh.append(N)
                fresh.sort()
                lifts = list(_map(pool, self.is_regular, fresh))
                frontier = []
                for N, w in zip(fresh, lifts):
                    if w is None:
                        nonregular.add(N)
                    else:
                        regular[N] = w
                        frontier.append(N)
        finally:
            if pool:
                pool.shutdown()
        return Census(self, regular, frozenset(nonregular), edges)

    def enumerate_all(self, threads: int = 1) -> List[Triangulation]:
        """Connected component of the full flip graph containing the regular ones."""
        start = self.placing_triangulation()
        seen = {start}
        queue = deque([start])
        while queue:
            T = queue.popleft()
            for N in self.flip_neighbors(T):
                if N not in seen:
                    seen.add(N)
                    queue.append(N)
        return sorted(seen)

    def brute_force_triangulations(self) -> List[Triangulation]:
        """Every triangulation by exact-cover search; only for small fixtures."""
        full = [frozenset(c) for c in combinations(range(len(self.points)), self.rank)
                if self.is_independent(c)]
        clash = {}
        for a in full:
            clash[a] = set()
        for Z in self.circuits:
            pos_cells = [a for a in full if Z.positive <= a]
            neg_cells = [a for a in full if Z.negative <= a]
            for a in pos_cells:
                for b in neg_cells:
                    clash[a].add(b)
                    clash[b].add(a)
        vol = {a: self.transverse_volume(a) for a in full}
        total = self.total_volume
        out = []

        def grow(chosen, candidates, acc):
            if acc == total:
                out.append(Triangulation(frozenset(chosen)))
                return
            for k, a in enumerate(candidates):
                if acc + vol[a] > total:
                    continue
                rest = [b for b in candidates[k + 1:] if b not in clash[a]]
                grow(chosen + [a], rest, acc + vol[a])

        grow([], sorted(full, key=sorted), Fraction(0))
        return sorted(out)


def _map(pool, f, items):
    if pool is None:
        return map(f, items)
    return pool.map(f, items)


def _boundary_facets(cells):
    count: Dict[Cell, List[int]] = {}
    for c in cells:
        for q in c:
            F = c - {q}
            count.setdefault(F, []).append(q)
    return [(F, qs[0]) for F, qs in sorted(count.items(), key=lambda kv: sorted(kv[0])) if len(qs) == 1]


def _facet_normal(pc: PointConfiguration, F: Cell, q: int) -> List[Fraction]:
    ker = lattice.nullspace_q(pc.vectors(sorted(F)), pc.dim)
    n = ker[0]
    if lattice.dot(n, pc.points[q]) < 0:
        n = [-x for x in n]
    return n


@dataclass
class Census:
    """Result of the regular-triangulation search."""

    config: PointConfiguration
    regular: Dict[Triangulation, List[Fraction]]
    nonregular: FrozenSet[Triangulation]
    edges: Dict[Triangulation, List[Triangulation]] = field(default_factory=dict)

    @property
    def triangulations(self) -> List[Triangulation]:
        return sorted(self.regular)

    def flip_graph_connected(self) -> bool:
        ts = self.triangulations
        if not ts:
            return True
        seen = {ts[0]}
        stack = [ts[0]]
        while stack:
            T = stack.pop()
            for N in self.edges.get(T, []):
                if N in self.regular and N not in seen:
                    seen.add(N)
                    stack.append(N)
        return len(seen) == len(ts)

    def flip_graph_symmetric(self) -> bool:
        for T, nbrs in self.edges.items():
            for N in nbrs:
                if N in self.edges and T not in self.edges[N]:
                    return False
        return True


@dataclass
class SecondaryPolytope:
    config: PointConfiguration
    census: Census
    vertices: List[Tuple[int, ...]]          # GKZ vectors, canonical order
    triangulation_of: Dict[Tuple[int, ...], Triangulation]
    vertex_cones: Dict[Tuple[int, ...], "object"]   # cones.Cone in reduced coordinates

    def singular_vertices(self) -> List[Tuple[int, ...]]:
        return [v for v in self.vertices if not self.vertex_cones[v].is_smooth()]


def secondary_polytope(pc: PointConfiguration, threads: int = 1, reduce=None) -> SecondaryPolytope:
    """Vertices and tangent cones of the secondary polytope.

    ``reduce`` maps a difference of GKZ vectors to lattice coordinates of
    the cone (default: coordinates in a basis of the difference lattice).
    """
    from .cones import Cone, dual_cone

    census = pc.enumerate_regular(threads=threads)
    gkz = {}
    for T in census.triangulations:
        gkz[pc.gkz_vector(T)] = T
    if len(gkz) != len(census.regular):
        raise AssertionError("two regular triangulations share a GKZ vector")
    verts = sorted(gkz)
    for psi in verts:
        if not _gkz_extreme(pc, census.regular[gkz[psi]], psi, verts):
            raise AssertionError(f"GKZ vector {psi} is not confirmed extreme")
    if reduce is None:
        diffs = [tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:]]
        basis = lattice.saturation_basis(diffs) if diffs else []

        def reduce(d):
            return tuple(int(x) for x in lattice.lattice_coordinates(basis, d))
    cones = {}
    for psi in verts:
        T = gkz[psi]
        # edges of the secondary polytope at psi come from regular flips;
        # the cone they span is then checked to contain every other vertex
        nbrs = [pc.gkz_vector(N) for N in census.edges[T] if N in census.regular]
        C = Cone([reduce(_sub(o, psi)) for o in nbrs])
        facets = dual_cone(C).generators
        for o in verts:
            if o != psi:
                d = reduce(_sub(o, psi))
                if any(lattice.dot(f, d) < 0 for f in facets):
                    raise AssertionError(f"vertex {o} escapes the edge cone at {psi}")
        cones[psi] = C
    return SecondaryPolytope(pc, census, verts, gkz, cones)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _gkz_extreme(pc, w, psi, verts) -> bool:
    """The lift ``w`` minimises <w, .> over the GKZ vectors uniquely at ``psi``."""
    base = lattice.dot(w, psi)
    return all(lattice.dot(w, o) > base for o in verts if o != psi)


def conv_vertex_analysis(points: Sequence[Sequence[int]]):
    """Extreme points of the hull and the tangent cone at each."""
    from .cones import Cone

    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    if len(pts) < 2:
        raise ValueError("need at least two points")
    extreme = [p for p in pts if lp.in_convex_hull(p, [o for o in pts if o != p]) is None]
    report = {}
    for p in extreme:
        report[p] = Cone([tuple(a - b for a, b in zip(o, p)) for o in pts if o != p])
    return extreme, report
