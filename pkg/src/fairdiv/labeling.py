"""Labelings of triangulation vertices from oracle answers.

A labeling attaches each vertex's owner's preferred selection to the
vertex. Labels are computed lazily and memoized (write-once per vertex,
thread safe): interactive sessions must never query a human about a vertex
the search does not visit. Three flavors exist:

* subset: L(v) is a set of at most k supported pieces (one cake);
* supportwise tuple: one supported piece per cake;
* factorwise-dual tuple: one shift per day, lying in the empty set of the
  day whenever that set is nonempty.

The dual flavor admits an equivalent normalized labeling (cyclic-shift
rule on the support) that is Sperner, which is what the balanced-cell
search for shift covers runs on.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .geometry import PolytopePoint, Triangulation, empty_set, support
from .oracles import MODE_SUBSET, MODE_TUPLE_EMPTY, MODE_TUPLE_SUPPORT

FLAVOR_SUBSET = "subset"
FLAVOR_SUPPORTWISE = "supportwise"
FLAVOR_DUAL = "factorwise-dual"

_FLAVOR_MODE = {
    FLAVOR_SUBSET: MODE_SUBSET,
    FLAVOR_SUPPORTWISE: MODE_TUPLE_SUPPORT,
    FLAVOR_DUAL: MODE_TUPLE_EMPTY,
}


class OracleViolationError(RuntimeError):
    """An oracle answer broke the labeling condition for its flavor."""

    def __init__(self, player: str, vertex: int, message: str):
        super().__init__(f"player {player!r} at vertex {vertex}: {message}")
        self.player = player
        self.vertex = vertex


def check_flavor(flavor: str, division: PolytopePoint, label, k: int) -> str | None:
    """Return the violated-condition name, or None when the label is valid."""
    if flavor == FLAVOR_SUBSET:
        if len(label) > k:
            return f"|L(v)|={len(label)} exceeds k={k}"
        if not frozenset(label) <= support(division.factors[0]):
            return "label not inside the division's support"
        return None
    if len(label) != division.k:
        return f"label arity {len(label)} != k={division.k}"
    for i, (choice, factor) in enumerate(zip(label, division.factors)):
        if flavor == FLAVOR_SUPPORTWISE:
            if choice not in support(factor):
                return f"component {i} not in the factor support"
        else:
            empt = empty_set(factor)
            if empt and choice not in empt:
                return f"component {i} not in the nonempty empty-set"
    return None


class Labeling:
    """Lazy, memoized vertex labeling over a complete triangulation."""

    def __init__(self, t: Triangulation, flavor: str, oracle, player_map, k: int):
        if t.owners is None:
            raise ValueError("labeling requires an owned (complete) triangulation")
        self.t = t
        self.flavor = flavor
        self.oracle = oracle
        self.player_map = tuple(player_map)
        self.k = k
        self._memo: dict[int, object] = {}
        self._lock = threading.Lock()

    def player_of_vertex(self, vi: int) -> str:
        return self.player_map[self.t.owners[vi]]

    def label(self, vi: int):
        hit = self._memo.get(vi)
        if hit is not None:
            return hit
        # Lock spans the oracle call: duplicate concurrent requests for one
        # vertex must collapse to a single query.
        with self._lock:
            hit = self._memo.get(vi)
            if hit is not None:
                return hit
            player = self.player_of_vertex(vi)
            division = self.t.vertices[vi]
            sel = self.oracle.select(
                player, _FLAVOR_MODE[self.flavor], division, self.k
            )
            bad = check_flavor(self.flavor, division, sel, self.k)
            if bad is not None:
                raise OracleViolationError(player, vi, bad)
            self._memo[vi] = sel
            return sel

    def known(self) -> dict[int, object]:
        return dict(self._memo)


def build_subset_labeling(t, oracle, player_map, k) -> Labeling:
    return Labeling(t, FLAVOR_SUBSET, oracle, player_map, k)


def build_tuple_labeling(t, oracle, player_map, flavor) -> Labeling:
    if flavor not in (FLAVOR_SUPPORTWISE, FLAVOR_DUAL):
        raise ValueError(f"tuple labelings are {FLAVOR_SUPPORTWISE} or {FLAVOR_DUAL}")
    return Labeling(t, flavor, oracle, player_map, t.ambient.k)


def shift_rule_component(supp: frozenset[int], n: int) -> int:
    """Smallest element of (supp+1) \\ supp with indices cyclic mod n.

    Defined whenever supp != [n]; the result always lies outside supp.
    """
    shifted = {(j + 1) % n for j in supp}
    candidates = sorted(shifted - supp)
    return candidates[0]


class EquivalentSpernerLabeling:
    """Equivalent normalization of a factorwise-dual labeling.

    Components of factors with a nonempty empty-set are recomputed by the
    cyclic-shift rule (deterministic, smallest candidate); components of
    full-support factors pass through unchanged, so the result is
    equivalent to the input and needs the underlying oracle only at
    full-support factors.
    """

    def __init__(self, base, t: Triangulation):
        self.base = base
        self.t = t

    def label(self, vi: int) -> tuple[int, ...]:
        division = self.t.vertices[vi]
        n = division.n
        supports = [support(f) for f in division.factors]
        underlying = None
        if any(len(s) == n for s in supports):
            underlying = _label_of(self.base, vi)
        out = []
        for i, s in enumerate(supports):
            if len(s) == n:
                out.append(underlying[i])
            else:
                out.append(shift_rule_component(s, n))
        return tuple(out)


def _label_of(labeling, vi: int):
    if hasattr(labeling, "label"):
        return labeling.label(vi)
    return labeling[vi]


def to_equivalent_sperner(labeling, t: Triangulation) -> EquivalentSpernerLabeling:
    return EquivalentSpernerLabeling(labeling, t)


@dataclass(frozen=True)
class LabelingReport:
    ok: bool
    offenders: tuple[int, ...] = ()
    detail: str = ""


def polytope_corner_vertices(t: Triangulation) -> dict[tuple[int, ...], int]:
    """Vertex index of each polytope corner, keyed by the corner's singleton
    support pattern (one piece index per factor)."""
    corners = {}
    for vi, v in enumerate(t.vertices):
        supports = [support(f) for f in v.factors]
        if all(len(s) == 1 for s in supports):
            key = tuple(min(s) for s in supports)
            corners[key] = vi
    return corners


def validate_sperner(
    labeling, t: Triangulation, vertex_subset=None
) -> LabelingReport:
    """Check the two product-Sperner conditions.

    (a) the polytope's corner vertices carry pairwise distinct labels;
    (b) every vertex's label equals the label of the corner spanned by the
        label shifted down by one (cyclically), and that corner lies on the
        vertex's minimal face.
    """
    corners = polytope_corner_vertices(t)
    n = t.ambient.n
    seen = {}
    offenders = []
    detail = []
    for key, vi in sorted(corners.items()):
        lab = tuple(_label_of(labeling, vi))
        if lab in seen:
            offenders.append(vi)
            detail.append(f"corner {vi} repeats label {lab} of corner {seen[lab]}")
        else:
            seen[lab] = vi
    vertices = vertex_subset if vertex_subset is not None else range(len(t.vertices))
    for vi in vertices:
        lab = tuple(_label_of(labeling, vi))
        v = t.vertices[vi]
        witness = tuple((c - 1) % n for c in lab)
        ok = all(
            w in support(f) for w, f in zip(witness, v.factors)
        )
        corner_vi = corners.get(witness)
        if ok and corner_vi is not None:
            ok = tuple(_label_of(labeling, corner_vi)) == lab
        else:
            ok = False
        if not ok:
            offenders.append(vi)
            detail.append(
                f"vertex {vi}: label {lab} has no matching corner on its minimal face"
            )
    offenders = tuple(dict.fromkeys(offenders))
    return LabelingReport(not offenders, offenders, "; ".join(detail[:5]))
