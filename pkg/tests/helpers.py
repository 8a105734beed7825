"""Shared independent oracles and random generators for the test suite.

The oracles deliberately avoid the code paths they check: comparability is
decided by literal slice equality, and irreducible counts by enumerating
paths and trying every split point.
"""

from __future__ import annotations

import random
from fractions import Fraction

from graphalg.algebra import AlgebraElement, Monomial
from graphalg.core import (
    INF,
    ExtNat,
    Graph,
    Path,
    enumerate_paths,
    is_pointed,
    make_graph,
)


def prefix_oracle(a: Path, b: Path) -> bool:
    """Comparability by raw slice equality, independent of prolongation_compare."""
    if a.base != b.base:
        return False
    n = min(len(a.edges), len(b.edges))
    return a.edges[:n] == b.edges[:n]


def splits_into_pointed(g: Graph, p: Path) -> bool:
    """Whether some split point yields two pointed halves of positive length."""
    for i in range(1, len(p.edges)):
        head = Path(p.base, p.edges[:i])
        tail = Path(g.edge_src(p.edges[i]), p.edges[i:])
        if is_pointed(g, head) and is_pointed(g, tail):
            return True
    return False


def _concrete_edges(g: Graph, v: str):
    out = []
    for b in g.out_bundles(v):
        for i in range(b.mult.finite()):
            from graphalg.core import Edge

            out.append(Edge(b.label, i))
    return out


def brute_irreducible_count(g: Graph, v: str, w: str) -> ExtNat:
    """Count irreducible pointed paths v -> w by pruned enumeration.

    Irreducible means no split point gives two pointed halves of positive
    length.  A completed path with a pointed proper head always splits (the
    tail inherits the full path's final edge), so the search only extends
    prefixes none of whose proper heads are pointed; such prefixes never
    leave v, hence every completion ends with a single non-self-loop edge
    v -> w.  Any completion of length >= 2 pumps its self-loop prefix, so one
    occurrence means infinitely many.
    """
    bound = 2 * len(g.vertices) + 2
    frontier = [Path(v)]
    completions: list[Path] = []
    for _ in range(bound):
        nxt = []
        level: list[Path] = []
        for q in frontier:
            for e in _concrete_edges(g, g.path_range(q)):
                p = Path(v, q.edges + (e,))
                if g.path_range(p) == w and is_pointed(g, p) and not splits_into_pointed(g, p):
                    level.append(p)
                if not is_pointed(g, p):
                    nxt.append(p)
        completions.extend(level)
        if any(len(p.edges) >= 2 for p in level):
            return INF
        if not completions:
            # no single-edge completion exists, and any longer completion
            # would end with exactly such an edge from the stationary frontier
            return ExtNat(0)
        if not nxt:
            return ExtNat(len(completions))
        frontier = nxt
    return ExtNat(len(completions))


def random_graph(rng: random.Random, max_vertices: int = 5, max_bundles: int = 7, max_mult: int = 3) -> Graph:
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(rng.randint(0, max_bundles)):
        src = rng.choice(vertices)
        dst = rng.choice(vertices)
        edges.append((f"b{i}", src, dst, rng.randint(1, max_mult)))
    return make_graph(f"rand{rng.randint(0, 10**6)}", vertices, edges)


def random_acyclic_graph(rng: random.Random, max_vertices: int = 5, max_bundles: int = 6, max_mult: int = 3) -> Graph:
    """Random DAG: bundles only run from earlier to later vertices."""
    n = rng.randint(2, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(rng.randint(1, max_bundles)):
        a, b = sorted(rng.sample(range(n), 2))
        edges.append((f"b{i}", vertices[a], vertices[b], rng.randint(1, max_mult)))
    return make_graph(f"dag{rng.randint(0, 10**6)}", vertices, edges)


def random_path(g: Graph, rng: random.Random, max_len: int = 4, max_index: int = 3) -> Path:
    start = rng.choice(g.vertices)
    paths = enumerate_paths(g, start, max_len=max_len, max_index=max_index)
    return rng.choice(paths)


def random_monomial(g: Graph, rng: random.Random, max_len: int = 3, max_index: int = 2) -> Monomial | None:
    """A random monomial with matching ranges, or None when the draw fails."""
    alpha = random_path(g, rng, max_len, max_index)
    target = g.path_range(alpha)
    candidates = []
    for v in g.vertices:
        candidates.extend(
            p for p in enumerate_paths(g, v, target, max_len=max_len, max_index=max_index)
        )
    if not candidates:
        return None
    return Monomial(alpha, rng.choice(candidates))


def random_terms(g: Graph, rng: random.Random, terms: int = 3, max_len: int = 3, max_index: int = 2) -> dict[Monomial, Fraction]:
    """A raw (possibly rewritable) term map."""
    acc: dict[Monomial, Fraction] = {}
    for _ in range(terms):
        m = random_monomial(g, rng, max_len, max_index)
        if m is None:
            continue
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        if coeff:
            acc[m] = acc.get(m, Fraction(0)) + coeff
    return {m: c for m, c in acc.items() if c}


def random_element(g: Graph, rng: random.Random, terms: int = 3, max_len: int = 3, max_index: int = 2) -> AlgebraElement:
    return AlgebraElement(g, random_terms(g, rng, terms, max_len, max_index))
