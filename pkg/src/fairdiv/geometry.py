"""Exact geometry of divisions: simplices, products, triangulations.

A division of one cake into n pieces is a point of the standard simplex
with n coordinates; a division of k cakes (or k work days) is a point of
the k-fold product of that simplex. All coordinates are Fractions so that
support / empty-piece tests are exact: a float would misclassify boundary
vertices and corrupt the labeling rules downstream.

Triangulations are concrete and deterministic:

* grid_triangulation(n, m): order-based (Freudenthal-type) triangulation of
  the mesh-m lattice on the simplex, m^(n-1) unimodular cells;
* product_triangulation(n, k, m): staircase (shuffle) triangulation of each
  product of factor cells, induced by the global vertex order per factor so
  that restrictions to shared faces agree;
* barycentric_complete(t): first barycentric subdivision with the vertex
  owner set to the dimension of the subdivided face, which makes every cell
  carry all dim+1 owners exactly once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product as iproduct

from .linalg import det_rational, solve_unique

ZERO = Fraction(0)
ONE = Fraction(1)


class ParameterError(ValueError):
    """Raised on invalid construction parameters (n, k, m out of range)."""


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the standard simplex: nonnegative coords summing to 1."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.coords):
            raise ValueError("negative simplex coordinate")
        if sum(self.coords) != 1:
            raise ValueError("simplex coordinates must sum to 1")

    @property
    def n(self) -> int:
        return len(self.coords)


def simplex_point(values) -> SimplexPoint:
    return SimplexPoint(tuple(Fraction(v) for v in values))


def support(x: SimplexPoint) -> frozenset[int]:
    """Indices of strictly positive coordinates (0-based)."""
    return frozenset(i for i, c in enumerate(x.coords) if c != 0)


def empty_set(x: SimplexPoint) -> frozenset[int]:
    """Indices of zero coordinates; the complement of the support."""
    return frozenset(i for i, c in enumerate(x.coords) if c == 0)


@dataclass(frozen=True)
class PolytopePoint:
    """A point of the k-fold product of simplices (k=1 covers one cake)."""

    factors: tuple[SimplexPoint, ...]

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return self.factors[0].n

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(c for f in self.factors for c in f.coords)


def polytope_point(factor_values) -> PolytopePoint:
    return PolytopePoint(tuple(simplex_point(v) for v in factor_values))


@dataclass(frozen=True)
class Face:
    """A face of the product polytope, one vertex-index subset per factor."""

    factor_supports: tuple[frozenset[int], ...]

    def contains(self, p: PolytopePoint) -> bool:
        return all(
            support(f) <= s for f, s in zip(p.factors, self.factor_supports)
        )


def minimal_face(p: PolytopePoint) -> Face:
    return Face(tuple(support(f) for f in p.factors))


@dataclass(frozen=True)
class Ambient:
    n: int
    k: int

    @property
    def kind(self) -> str:
        return "simplex" if self.k == 1 else "product"

    @property
    def dim(self) -> int:
        return self.k * (self.n - 1)


@dataclass(frozen=True)
class Triangulation:
    """A triangulation of the ambient polytope, cells as sorted index tuples.

    Vertices are deduplicated globally; owner ids (when present) are 0-based
    and every cell of a complete triangulation sees each of 0..dim exactly
    once.
    """

    ambient: Ambient
    mesh: int
    vertices: tuple[PolytopePoint, ...]
    cells: tuple[tuple[int, ...], ...]
    owners: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return self.ambient.dim

    def cell_points(self, ci: int) -> tuple[PolytopePoint, ...]:
        return tuple(self.vertices[v] for v in self.cells[ci])


@dataclass(frozen=True)
class CompletenessReport:
    ok: bool
    first_bad_cell: int | None = None
    detail: str = ""


def _weakly_increasing_in_range(y, m):
    prev = 0
    for v in y:
        if v < prev:
            return False
        prev = v
    return prev <= m


def _grid_cells_y(d: int, m: int):
    """Freudenthal cells of the region 0 <= y_1 <= ... <= y_d <= m.

    Yields each cell as a tuple of integer y-points. Exactly m^d cells.
    """
    if d == 0:
        yield ((),)
        return
    for c in iproduct(range(m), repeat=d):
        for perm in permutations(range(d)):
            cur = list(c)
            vs = [tuple(cur)]
            ok = _weakly_increasing_in_range(cur, m)
            for j in reversed(range(d)):
                cur[perm[j]] += 1
                v = tuple(cur)
                if not _weakly_increasing_in_range(v, m):
                    ok = False
                    break
                vs.append(v)
            if ok:
                yield tuple(vs)


def _y_to_lattice(y, n, m):
    """Partial-sum chart back to lattice widths (integers summing to m)."""
    x = []
    prev = 0
    for v in y:
        x.append(v - prev)
        prev = v
    x.append(m - prev)
    return tuple(x)


def _lattice_points(n: int, m: int):
    """All nonnegative integer n-tuples summing to m, lexicographic."""
    if n == 1:
        return [(m,)]
    out = []
    for first in range(m + 1):
        for rest in _lattice_points(n - 1, m - first):
            out.append((first,) + rest)
    return out


def grid_triangulation(n: int, m: int) -> Triangulation:
    """Mesh-m lattice triangulation of the simplex on n pieces."""
    if n < 1 or m < 1:
        raise ParameterError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    d = n - 1
    lattice = _lattice_points(n, m)
    index = {x: i for i, x in enumerate(lattice)}
    vertices = tuple(
        PolytopePoint((SimplexPoint(tuple(Fraction(c, m) for c in x)),))
        for x in lattice
    )
    cells = []
    for ycell in _grid_cells_y(d, m):
        cells.append(tuple(sorted(index[_y_to_lattice(y, n, m)] for y in ycell)))
    cells.sort()
    return Triangulation(Ambient(n, 1), m, vertices, tuple(cells))


def _multiset_permutations(counts):
    """All distinct orderings of a multiset given per-symbol counts (lex)."""
    total = sum(counts)
    if total == 0:
        yield ()
        return
    for s, c in enumerate(counts):
        if c:
            counts[s] -= 1
            for rest in _multiset_permutations(counts):
                yield (s,) + rest
            counts[s] += 1


def product_lattice_vertices(n: int, k: int, m: int) -> tuple[PolytopePoint, ...]:
    """All products of factor lattice points, in mixed-radix (lex) order."""
    base = [
        SimplexPoint(tuple(Fraction(c, m) for c in x))
        for x in _lattice_points(n, m)
    ]
    return tuple(
        PolytopePoint(combo) for combo in iproduct(base, repeat=k)
    )


def product_triangulation(n: int, k: int, m: int) -> Triangulation:
    """Staircase triangulation of the k-fold product of mesh-m simplices."""
    if n < 1 or k < 1 or m < 1:
        raise ParameterError(f"need n,k,m >= 1, got n={n}, k={k}, m={m}")
    base = grid_triangulation(n, m)
    nv = len(base.vertices)
    d = n - 1

    if k == 1:
        return base

    vertices = tuple(
        PolytopePoint(tuple(base.vertices[i].factors[0] for i in combo))
        for combo in iproduct(range(nv), repeat=k)
    )

    radix = [nv ** (k - 1 - f) for f in range(k)]
    paths = []
    for steps in _multiset_permutations([d] * k):
        pos = [0] * k
        path = [tuple(pos)]
        for s in steps:
            pos[s] += 1
            path.append(tuple(pos))
        paths.append(path)

    cells = []
    for combo in iproduct(base.cells, repeat=k):
        # Factor-cell vertices in global base order: face compatibility of
        # the staircase triangulation needs one shared order per factor.
        fv = [sorted(cell) for cell in combo]
        grid2global = {}
        for pos in iproduct(range(d + 1), repeat=k):
            grid2global[pos] = sum(
                fv[f][pos[f]] * radix[f] for f in range(k)
            )
        for path in paths:
            cells.append(tuple(sorted(grid2global[pos] for pos in path)))
    cells.sort()
    return Triangulation(Ambient(n, k), m, vertices, tuple(cells))


def _mean_point(points) -> PolytopePoint:
    k = points[0].k
    n = points[0].n
    size = len(points)
    factors = []
    for f in range(k):
        coords = tuple(
            sum(p.factors[f].coords[i] for p in points) / size for i in range(n)
        )
        factors.append(SimplexPoint(coords))
    return PolytopePoint(tuple(factors))


def barycentric_complete(t: Triangulation) -> Triangulation:
    """First barycentric subdivision with owners by subdivided-face dimension.

    The owner of the barycenter of an i-dimensional face is i, so every
    subdivided cell (a chain of faces of one cell of t) carries the owners
    0..dim exactly once.
    """
    if t.owners is not None:
        raise ValueError("triangulation already carries owners")
    face_index: dict[tuple[int, ...], int] = {}
    new_vertices: list[PolytopePoint] = []
    new_owners: list[int] = []

    def face_id(subset: tuple[int, ...]) -> int:
        fid = face_index.get(subset)
        if fid is None:
            fid = len(new_vertices)
            face_index[subset] = fid
            new_vertices.append(_mean_point([t.vertices[v] for v in subset]))
            new_owners.append(len(subset) - 1)
        return fid

    new_cells = []
    for cell in t.cells:
        for size in range(1, len(cell) + 1):
            for subset in combinations(cell, size):
                face_id(subset)
        for perm in permutations(cell):
            chain = tuple(
                sorted(face_id(tuple(sorted(perm[: i + 1]))) for i in range(len(cell)))
            )
            new_cells.append(chain)
    return Triangulation(
        t.ambient,
        t.mesh,
        tuple(new_vertices),
        tuple(new_cells),
        tuple(new_owners),
    )


def validate_complete(t: Triangulation) -> CompletenessReport:
    """Check that every cell sees each owner 0..dim exactly once."""
    if t.owners is None:
        return CompletenessReport(False, None, "no owners assigned")
    want = list(range(t.dim + 1))
    for ci, cell in enumerate(t.cells):
        got = sorted(t.owners[v] for v in cell)
        if got != want:
            return CompletenessReport(
                False, ci, f"cell {ci} owners {got}, expected {want}"
            )
    return CompletenessReport(True)


def to_chart(p: PolytopePoint) -> tuple[Fraction, ...]:
    """Per-factor partial sums with the last dropped: a linear chart of
    the product polytope onto dim(P) coordinates."""
    out = []
    for f in p.factors:
        acc = ZERO
        for c in f.coords[:-1]:
            acc += c
            out.append(acc)
    return tuple(out)


def cell_volume(t: Triangulation, ci: int) -> Fraction:
    """Exact dim-volume of a cell, measured in the partial-sum chart."""
    pts = [to_chart(p) for p in t.cell_points(ci)]
    d = t.dim
    if d == 0:
        return Fraction(1)
    mat = [[pts[i + 1][j] - pts[0][j] for j in range(d)] for i in range(d)]
    return abs(det_rational(mat)) / math.factorial(d)


def polytope_volume(ambient: Ambient) -> Fraction:
    """Chart volume of the whole product polytope."""
    return Fraction(1, math.factorial(ambient.n - 1)) ** ambient.k


def barycentric_coordinates(t: Triangulation, ci: int, p: PolytopePoint):
    """Exact barycentric coordinates of p in cell ci, or None if the solve
    is inconsistent (p outside the cell's affine hull)."""
    pts = t.cell_points(ci)
    rows = []
    flats = [q.flat() for q in pts]
    target = p.flat()
    dim = len(target)
    for j in range(dim):
        rows.append([flats[i][j] for i in range(len(pts))])
    rows.append([Fraction(1)] * len(pts))
    rhs = list(target) + [Fraction(1)]
    return solve_unique(rows, rhs)


def locate(t: Triangulation, p: PolytopePoint) -> list[int]:
    """All cells containing p (by exact nonnegative barycentric solve)."""
    hits = []
    for ci in range(len(t.cells)):
        lam = barycentric_coordinates(t, ci, p)
        if lam is not None and all(v >= 0 for v in lam):
            hits.append(ci)
    return hits


def _dist_sq(a: PolytopePoint, b: PolytopePoint) -> Fraction:
    return sum((x - y) ** 2 for x, y in zip(a.flat(), b.flat()))


def max_cell_diameter_sq(t: Triangulation) -> Fraction:
    """Largest squared vertex-pair distance within any single cell."""
    best = ZERO
    for cell in t.cells:
        pts = [t.vertices[v] for v in cell]
        for a, b in combinations(pts, 2):
            d = _dist_sq(a, b)
            if d > best:
                best = d
    return best


def cell_barycenter(t: Triangulation, ci: int) -> PolytopePoint:
    return _mean_point(list(t.cell_points(ci)))


@lru_cache(maxsize=32)
def complete_triangulation(n: int, k: int, m: int) -> Triangulation:
    """Cached complete (barycentrically owned) triangulation of the ambient."""
    base = grid_triangulation(n, m) if k == 1 else product_triangulation(n, k, m)
    return barycentric_complete(base)


@lru_cache(maxsize=32)
def cell_barycenter_floats(n: int, k: int, m: int) -> tuple[tuple[float, ...], ...]:
    """Float cell barycenters of the cached complete triangulation, used only
    to order the scan (anchored search); all decisions stay exact."""
    t = complete_triangulation(n, k, m)
    vfloats = [tuple(float(c) for c in v.flat()) for v in t.vertices]
    out = []
    for cell in t.cells:
        size = len(cell)
        acc = [0.0] * len(vfloats[0])
        for v in cell:
            vf = vfloats[v]
            for i in range(len(acc)):
                acc[i] += vf[i]
        out.append(tuple(a / size for a in acc))
    return tuple(out)
