"""Hereditary and saturated vertex sets, admissible inclusions, quotient graphs.

A vertex set H is hereditary when no edge leaves it and saturated when no
regular vertex outside H sends all of its edges into H.  An inclusion of a
graph D into a graph E is admissible when the complement of the image is
hereditary and saturated, the edges of D account for every E-edge ranging in
the image (with equal multiplicities), and no vertex emits infinitely many
edges into the complement while emitting finitely many (but not zero) into
the image.  Admissibility makes C*(D) the quotient of C*(E) presented by
the quotient graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .core import (
    ExtNat,
    Graph,
    VertexClass,
    classify_vertex,
    mult_matrix,
)


class SubsetCheck(NamedTuple):
    ok: bool
    witness: object | None = None


def _check_members(g: Graph, members: Iterable[str]) -> frozenset[str]:
    members = frozenset(members)
    for v in members:
        g.require_vertex(v)
    return members


def is_hereditary(g: Graph, members: Iterable[str]) -> SubsetCheck:
    """No bundle from a member to a non-member; witness is an escaping bundle."""
    members = _check_members(g, members)
    for b in g.bundles:
        if b.src in members and b.dst not in members:
            return SubsetCheck(False, b)
    return SubsetCheck(True)


def hereditary_closure(g: Graph, members: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary superset: forward reachability."""
    closure = set(_check_members(g, members))
    frontier = list(closure)
    while frontier:
        v = frontier.pop()
        for b in g.out_bundles(v):
            if b.dst not in closure:
                closure.add(b.dst)
                frontier.append(b.dst)
    return frozenset(closure)


def is_saturated(g: Graph, members: Iterable[str]) -> SubsetCheck:
    """No regular vertex outside sends every edge inside; witness is such a vertex."""
    members = _check_members(g, members)
    for v in g.vertices:
        if v in members or classify_vertex(g, v) is not VertexClass.REGULAR:
            continue
        if all(b.dst in members for b in g.out_bundles(v)):
            return SubsetCheck(False, v)
    return SubsetCheck(True)


def emission_condition(g: Graph, members: Iterable[str]) -> SubsetCheck:
    """No vertex emits infinitely many edges into the set while emitting
    finitely many (but not zero) outside it; witness is the offending vertex."""
    members = _check_members(g, members)
    for v in g.vertices:
        inside = ExtNat(0)
        outside = ExtNat(0)
        for b in g.out_bundles(v):
            if b.dst in members:
                inside = inside + b.mult
            else:
                outside = outside + b.mult
        if not inside.is_finite and outside.is_finite and outside > 0:
            return SubsetCheck(False, v)
    return SubsetCheck(True)


# -- inclusions -----------------------------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    """An injective graph morphism: vertex pairs plus a bundle correspondence."""

    vertex_pairs: tuple[tuple[str, str], ...]
    bundle_pairs: tuple[tuple[str, str], ...]

    @property
    def vertex_map(self) -> dict[str, str]:
        return dict(self.vertex_pairs)

    @property
    def bundle_map(self) -> dict[str, str]:
        return dict(self.bundle_pairs)


def infer_inclusion(
    sub: Graph,
    ambient: Graph,
    vertex_map: Mapping[str, str],
    bundle_map: Mapping[str, str] | None = None,
) -> Inclusion:
    """Complete a vertex injection to a full inclusion.

    Each sub bundle must correspond to an ambient bundle with mapped
    endpoints and at least its multiplicity.  Unspecified correspondences are
    matched by identical label, or by the unique structural candidate.
    """
    if set(vertex_map) != set(sub.vertices):
        missing = set(sub.vertices) - set(vertex_map)
        extra = set(vertex_map) - set(sub.vertices)
        raise ValueError(f"vertex map must cover exactly the sub vertices (missing {sorted(missing)}, extra {sorted(extra)})")
    for v, w in vertex_map.items():
        ambient.require_vertex(w)
    if len(set(vertex_map.values())) != len(vertex_map):
        raise ValueError("vertex map is not injective")

    explicit = dict(bundle_map or {})
    pairs: list[tuple[str, str]] = []
    used: set[str] = set()
    for sb in sub.bundles:
        src, dst = vertex_map[sb.src], vertex_map[sb.dst]
        candidates = [ab for ab in ambient.bundles if ab.src == src and ab.dst == dst and sb.mult <= ab.mult]
        if sb.label in explicit:
            chosen = [ab for ab in candidates if ab.label == explicit[sb.label]]
            if not chosen:
                raise ValueError(f"bundle map sends {sb.label!r} to {explicit[sb.label]!r}, which is not a compatible ambient bundle")
        else:
            chosen = [ab for ab in candidates if ab.label == sb.label]
            if not chosen:
                chosen = candidates
        chosen = [ab for ab in chosen if ab.label not in used]
        if not chosen:
            raise ValueError(f"sub bundle {sb.label!r} ({sb.src} -> {sb.dst}) has no compatible ambient bundle: not a subgraph inclusion")
        if len(chosen) > 1:
            raise ValueError(f"sub bundle {sb.label!r} matches several ambient bundles {[ab.label for ab in chosen]}; pass an explicit bundle map")
        pairs.append((sb.label, chosen[0].label))
        used.add(chosen[0].label)
    return Inclusion(tuple(sorted(vertex_map.items())), tuple(pairs))


@dataclass(frozen=True)
class AdmissibilityReport:
    a1_hereditary: bool
    a1_saturated: bool
    a2_edge_condition: bool
    a3_emission_condition: bool
    witnesses: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return self.a1_hereditary and self.a1_saturated and self.a2_edge_condition and self.a3_emission_condition


class AdmissibilityError(ValueError):
    def __init__(self, report: AdmissibilityReport):
        super().__init__(f"inclusion is not admissible: {'; '.join(report.witnesses)}")
        self.report = report


def check_admissible(
    sub: Graph,
    ambient: Graph,
    vertex_map: Mapping[str, str],
    bundle_map: Mapping[str, str] | None = None,
) -> AdmissibilityReport:
    """Check the three admissibility conditions for sub -> ambient.

    Structural failures of the map itself (non-injective, unknown vertices,
    sub edges without ambient counterparts) raise; condition failures are
    reported with witnesses.
    """
    inc = infer_inclusion(sub, ambient, vertex_map, bundle_map)
    vmap = inc.vertex_map
    image = set(vmap.values())
    complement = [v for v in ambient.vertices if v not in image]
    witnesses: list[str] = []

    hered = is_hereditary(ambient, complement)
    if not hered.ok:
        b = hered.witness
        witnesses.append(f"A1: complement not hereditary, bundle {b.label} escapes {b.src} -> {b.dst}")
    sat = is_saturated(ambient, complement)
    if not sat.ok:
        witnesses.append(f"A1: complement not saturated at regular vertex {sat.witness}")

    a2 = True
    hit = {ab_label: sb_label for sb_label, ab_label in inc.bundle_pairs}
    for ab in ambient.bundles:
        if ab.dst not in image:
            continue
        if ab.label not in hit:
            a2 = False
            witnesses.append(f"A2: ambient bundle {ab.label} ({ab.src} -> {ab.dst}) ranges in the image but has no preimage")
            continue
        sb = sub.bundle(hit[ab.label])
        if sb.mult != ab.mult:
            a2 = False
            witnesses.append(f"A2: bundle {ab.label} multiplicity {ab.mult} differs from preimage {sb.label} multiplicity {sb.mult}")

    emit = emission_condition(ambient, complement)
    if not emit.ok:
        witnesses.append(f"A3: vertex {emit.witness} emits infinitely many edges into the complement and finitely many (nonzero) into the image")

    return AdmissibilityReport(hered.ok, sat.ok, a2, emit.ok, tuple(witnesses))


# -- quotient graphs --------------------------------------------------------------


class QuotientError(ValueError):
    def __init__(self, condition: str, witness: object):
        super().__init__(f"quotient precondition failed ({condition}), witness {witness}")
        self.condition = condition
        self.witness = witness


def quotient_graph(g: Graph, members: Iterable[str]) -> Graph:
    """The graph presenting C*(g) modulo the ideal of a hereditary saturated set.

    Keeps the vertices outside the set and exactly the bundles ranging
    outside it; requires hereditary, saturated and the emission condition.
    """
    members = _check_members(g, members)
    hered = is_hereditary(g, members)
    if not hered.ok:
        raise QuotientError("hereditary", f"bundle {hered.witness.label}")
    sat = is_saturated(g, members)
    if not sat.ok:
        raise QuotientError("saturated", f"vertex {sat.witness}")
    emit = emission_condition(g, members)
    if not emit.ok:
        raise QuotientError("emission", f"vertex {emit.witness}")
    name = g.name if not members else f"{g.name}_mod_" + "_".join(sorted(members))
    vertices = tuple(v for v in g.vertices if v not in members)
    bundles = tuple(b for b in g.bundles if b.dst not in members)
    return Graph(name, vertices, bundles)


def check_quotient_iso(
    sub: Graph,
    ambient: Graph,
    vertex_map: Mapping[str, str],
    bundle_map: Mapping[str, str] | None = None,
) -> bool:
    """Whether sub presents the quotient of ambient by the image complement.

    Requires admissibility (raises AdmissibilityError otherwise); compares
    multiplicity matrices under the vertex identification.
    """
    report = check_admissible(sub, ambient, vertex_map, bundle_map)
    if not report.admissible:
        raise AdmissibilityError(report)
    vmap = dict(vertex_map)
    image = set(vmap.values())
    quotient = quotient_graph(ambient, [v for v in ambient.vertices if v not in image])
    if len(sub.vertices) != len(quotient.vertices):
        return False
    qm = mult_matrix(quotient)
    sm = {(vmap[v], vmap[w]): m for (v, w), m in mult_matrix(sub).items()}
    return sm == qm


def induced_subgraph(g: Graph, members: Iterable[str], name: str | None = None) -> Graph:
    """Induced subgraph on a vertex set, keeping bundles with both endpoints inside."""
    members = _check_members(g, members)
    vertices = tuple(v for v in g.vertices if v in members)
    bundles = tuple(b for b in g.bundles if b.src in members and b.dst in members)
    return Graph(name or f"{g.name}_sub", vertices, bundles)
