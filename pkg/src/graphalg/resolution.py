"""Resolution of a graph along an admissible subgraph, and pullback certificates.

Given a graph E2 and a vertex set spanning an admissible subgraph F2 such
that E2 has no self-loop outside those vertices, the *resolution* is the
graph E1 on the same vertices whose multiplicity matrix counts irreducible
pointed paths, together with the canonical functor sending the k-th edge of
every E1 bundle to the k-th irreducible pointed path.  E1 is loop-free
exactly when the non-self-loop part of E2 is acyclic, and the four induced
maps (two quotients, the functor and its restriction) form a pullback square
of the corresponding graph algebras.

`verify_pullback` machine-checks every hypothesis of that statement, exactly
where possible and up to explicit bounds where the path sets are infinite,
and records the outcome in a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraElement,
    InducedHom,
    Monomial,
    QuotientHom,
    apply_hom,
    kernel_preimage,
    square_commutes,
)
from .core import (
    Graph,
    Bundle,
    Edge,
    all_paths,
    format_path,
    is_pointed,
    loop_free,
    short_loops_at,
)
from .functors import CanonicalRule, GraphFunctor, check_functor_conditions
from .pointed import irreducible_pointed_count
from .subsets import AdmissibilityReport, check_admissible, induced_subgraph


@dataclass(frozen=True)
class Bounds:
    max_len: int = 6
    max_index: int = 4


DEFAULT_BOUNDS = Bounds()


class ResolveError(ValueError):
    def __init__(self, stage: str, message: str, report: AdmissibilityReport | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.report = report


@dataclass
class Resolution:
    e1: Graph
    f1: Graph
    e2: Graph
    f2: Graph
    functor: GraphFunctor

    def restricted_functor(self) -> GraphFunctor:
        """The functor between the subgraphs; evaluates identically on shared
        vertices because admissibility pins their edge neighbourhoods."""
        vmap = {v: v for v in self.f1.vertices}
        return GraphFunctor(self.f1, self.f2, vmap, CanonicalRule(), name=f"{self.functor.name}_restricted")


def _resolved_graph(e2: Graph) -> Graph:
    bundles = []
    labels = set()
    for v in e2.vertices:
        for w in e2.vertices:
            count = irreducible_pointed_count(e2, v, w)
            if count >= 1:
                label = f"{v}_{w}"
                if label in labels:
                    raise ValueError(f"resolved bundle label {label!r} collides; rename vertices")
                labels.add(label)
                bundles.append(Bundle(label, v, w, count))
    return Graph(f"{e2.name}_res", e2.vertices, bundles)


def _subgraph_parts(e2: Graph, f2_vertices) -> tuple[Graph, frozenset[str], AdmissibilityReport]:
    members = frozenset(f2_vertices)
    for v in members:
        e2.require_vertex(v)
    f2 = induced_subgraph(e2, members, name=f"{e2.name}_f2")
    report = check_admissible(f2, e2, {v: v for v in f2.vertices})
    return f2, members, report


def resolve(e2: Graph, f2_vertices) -> Resolution:
    """Construct (E1, F1, functor) from (E2, F2 vertex set).

    Raises when the subgraph is not admissible or when E2 carries a self-loop
    outside it; a loopy E1 is a theorem-hypothesis failure, not a
    construction failure, and is left to `verify_pullback` to report.
    """
    f2, members, report = _subgraph_parts(e2, f2_vertices)
    if not report.admissible:
        raise ResolveError("admissibility", "; ".join(report.witnesses) or "subgraph is not admissible", report)
    outside = [v for v in e2.vertices if v not in members]
    short = short_loops_at(e2, outside)
    if short:
        raise ResolveError("short-loops", f"self-loop {short[0].label} based outside the subgraph at {short[0].src}")
    e1 = _resolved_graph(e2)
    f1 = induced_subgraph(e1, members, name=f"{e1.name}_f1")
    functor = GraphFunctor(e1, e2, {v: v for v in e2.vertices}, CanonicalRule(), name=f"resolve_{e2.name}")
    return Resolution(e1, f1, e2, f2, functor)


# -- certificates -------------------------------------------------------------------


@dataclass(frozen=True)
class PullbackChecks:
    f2_admissible: bool = False
    f1_admissible: bool = False
    e1_loop_free: bool = False
    no_short_loops_outside_f2: bool = False
    vertex_sets_match: bool = False
    prolongation_reflection_to_bound: bool = False
    out_edge_bijection: bool = False
    image_is_pointed_to_bound: bool = False
    algebra_commutes_to_bound: bool = False
    kernel_inclusion_to_bound: bool = False

    def as_dict(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}

    def all_true(self) -> bool:
        return all(self.as_dict().values())


@dataclass
class PullbackCertificate:
    e2: Graph
    f2_vertices: tuple[str, ...]
    e1: Graph
    f1: Graph
    f2: Graph
    functor: GraphFunctor
    checks: PullbackChecks
    witnesses: tuple[str, ...]
    bounds: Bounds
    unital: bool
    e1_af: bool
    degenerate: bool

    @property
    def verified(self) -> bool:
        # a subgraph equal to the whole graph makes the square trivially
        # commute but resolves nothing; refuse to call that verified
        return self.checks.all_true() and not self.degenerate

    def corners(self) -> dict[str, str]:
        return {
            "top": f"C*({self.e1.name})",
            "left": f"C*({self.f1.name})",
            "right": f"C*({self.e2.name})",
            "bottom": f"C*({self.f2.name})",
        }

    def homomorphisms(self) -> dict[str, object]:
        """The four maps of the square as engine descriptors."""
        outside = [v for v in self.e2.vertices if v not in set(self.f2_vertices)]
        return {
            "pi1": QuotientHom(self.e1, outside, target=self.f1),
            "pi2": QuotientHom(self.e2, outside, target=self.f2),
            "f_star": InducedHom(self.functor),
            "f_restricted_star": InducedHom(
                Resolution(self.e1, self.f1, self.e2, self.f2, self.functor).restricted_functor()
            ),
        }


def _check_image_pointed(functor: GraphFunctor, bounds: Bounds, witnesses: list[str]) -> bool:
    """Both directions of "the image is the pointed paths", within bounds."""
    ok = True
    for b in functor.source.bundles:
        top = b.mult.finite() - 1 if b.mult.is_finite else bounds.max_index
        for i in range(min(top, bounds.max_index) + 1):
            image = functor.eval_edge(Edge(b.label, i))
            if not is_pointed(functor.target, image):
                ok = False
                witnesses.append(f"image of {b.label}[{i}] is not pointed: {format_path(image)}")
    for p in all_paths(functor.target, max_len=bounds.max_len, max_index=bounds.max_index):
        if not p.edges or not is_pointed(functor.target, p):
            continue
        q = functor.decode(p)
        if q is None or functor.eval_path(q) != p:
            ok = False
            witnesses.append(f"pointed path {format_path(p)} is not decodable to a preimage")
    return ok


def _check_kernel_inclusion(
    functor: GraphFunctor,
    members: frozenset[str],
    bounds: Bounds,
    witnesses: list[str],
) -> bool:
    """Every bounded path ranging outside the subgraph decodes and re-evaluates
    to itself, which gives every kernel monomial S_a S_b* the explicit
    preimage S_{decode(a)} S_{decode(b)}*."""
    ok = True
    checked = 0
    for p in all_paths(functor.target, max_len=bounds.max_len, max_index=bounds.max_index):
        if functor.target.path_range(p) in members:
            continue
        checked += 1
        q = functor.decode(p)
        if q is None or functor.eval_path(q) != p:
            ok = False
            witnesses.append(f"kernel path {format_path(p)} has no preimage under the functor")
    if checked == 0 and ok:
        witnesses.append("kernel inclusion holds vacuously: no bounded path ranges outside the subgraph")
    return ok


def verify_pullback(e2: Graph, f2_vertices, bounds: Bounds = DEFAULT_BOUNDS) -> PullbackCertificate:
    """Run every hypothesis check and assemble the certificate.

    Never raises on hypothesis failures; every negative outcome lands in the
    checks and witnesses.
    """
    witnesses: list[str] = []
    f2, members, report2 = _subgraph_parts(e2, f2_vertices)
    witnesses.extend(report2.witnesses)

    outside = [v for v in e2.vertices if v not in members]
    short = short_loops_at(e2, outside)
    if short:
        witnesses.append(f"short loop {short[0].label} based at {short[0].src} outside the subgraph")

    e1 = _resolved_graph(e2)
    f1 = induced_subgraph(e1, members, name=f"{e1.name}_f1")
    functor = GraphFunctor(e1, e2, {v: v for v in e2.vertices}, CanonicalRule(), name=f"resolve_{e2.name}")

    report1 = check_admissible(f1, e1, {v: v for v in f1.vertices})
    witnesses.extend(f"resolved graph: {w}" for w in report1.witnesses)

    e1_loop_free = loop_free(e1)
    if not e1_loop_free:
        witnesses.append("resolved graph has a cycle")

    functor_report = check_functor_conditions(functor, max_len=bounds.max_len, max_index=bounds.max_index)
    witnesses.extend(functor_report.failures)

    image_ok = _check_image_pointed(functor, bounds, witnesses)
    kernel_ok = _check_kernel_inclusion(functor, members, bounds, witnesses)

    commutes_ok = False
    if report2.admissible and report1.admissible:
        restricted = Resolution(e1, f1, e2, f2, functor).restricted_functor()
        pi1 = QuotientHom(e1, outside, target=f1)
        pi2 = QuotientHom(e2, outside, target=f2)
        commutes_ok, commute_failures = square_commutes(
            (pi1, InducedHom(restricted)),
            (InducedHom(functor), pi2),
            max_index=bounds.max_index,
        )
        witnesses.extend(commute_failures)
    else:
        witnesses.append("algebra commutativity skipped: a subgraph inclusion is not admissible")

    checks = PullbackChecks(
        f2_admissible=report2.admissible,
        f1_admissible=report1.admissible,
        e1_loop_free=e1_loop_free,
        no_short_loops_outside_f2=not short,
        vertex_sets_match=True,
        prolongation_reflection_to_bound=functor_report.cond1_ok,
        out_edge_bijection=functor_report.cond2_ok,
        image_is_pointed_to_bound=image_ok,
        algebra_commutes_to_bound=commutes_ok,
        kernel_inclusion_to_bound=kernel_ok,
    )
    degenerate = not outside
    if degenerate:
        witnesses.append("degenerate: the subgraph is the whole graph, nothing is resolved")
    return PullbackCertificate(
        e2=e2,
        f2_vertices=tuple(v for v in e2.vertices if v in members),
        e1=e1,
        f1=f1,
        f2=f2,
        functor=functor,
        checks=checks,
        witnesses=tuple(witnesses),
        bounds=bounds,
        # vertex sets are finite tuples by representation, so the corner
        # algebras of a verified certificate are always unital
        unital=True,
        e1_af=e1_loop_free,
        degenerate=degenerate,
    )


def certificate_kernel_preimage(cert: PullbackCertificate, m: Monomial) -> AlgebraElement:
    """Explicit preimage of a kernel monomial, re-checked by evaluation."""
    pre = kernel_preimage(cert.functor, cert.f2_vertices, m)
    image = apply_hom(InducedHom(cert.functor), pre)
    expected = AlgebraElement.monomial(cert.e2, m.alpha, m.beta)
    if image != expected:
        raise AssertionError(f"preimage of {format_path(m.alpha)}|{format_path(m.beta)} does not re-evaluate to it")
    return pre


def reverify(cert: PullbackCertificate) -> PullbackCertificate:
    """Re-run a certificate's verification from its stored inputs."""
    return verify_pullback(cert.e2, cert.f2_vertices, cert.bounds)
