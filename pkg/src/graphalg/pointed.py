"""Irreducible pointed paths and their canonical enumeration.

A pointed path is irreducible when it does not split into two pointed paths
of positive length, which happens exactly when every edge before the last is
a self-loop.  An irreducible pointed path from v to w therefore has the shape

    (self-loop at v)^j . (non-self-loop edge v -> w)

The canonical enumeration orders these by (length, lexicographic on
(label, index)); ranks live in the extended naturals because layers may be
infinite, in which case later layers are past every finite position.
"""

from __future__ import annotations

from typing import Iterator

from .core import INF, Bundle, Edge, ExtNat, Graph, Path


def _loop_bundles(g: Graph, v: str) -> tuple[Bundle, ...]:
    return tuple(b for b in g.out_bundles(v) if b.is_self_loop)


def _link_bundles(g: Graph, v: str, w: str) -> tuple[Bundle, ...]:
    return tuple(b for b in g.out_bundles(v) if b.dst == w and not b.is_self_loop)


def _alphabet_size(bundles: tuple[Bundle, ...]) -> ExtNat:
    return sum((b.mult for b in bundles), ExtNat(0))


def _iter_alphabet(bundles: tuple[Bundle, ...]) -> Iterator[Edge]:
    """Concrete edges in (label, index) order; never ends past an infinite bundle."""
    for b in bundles:
        if b.mult.is_finite:
            for i in range(b.mult.finite()):
                yield Edge(b.label, i)
        else:
            i = 0
            while True:
                yield Edge(b.label, i)
                i += 1


def _edge_rank(bundles: tuple[Bundle, ...], e: Edge) -> ExtNat:
    """Position of e in the (label, index)-ordered alphabet."""
    acc = ExtNat(0)
    for b in bundles:
        if b.label == e.bundle:
            return acc + e.index
        acc = acc + b.mult
    raise ValueError(f"edge {e} not in alphabet")


def irreducible_pointed_count(g: Graph, v: str, w: str) -> ExtNat:
    """How many irreducible pointed paths run from v to w.

    Zero when v == w; otherwise the count of non-self-loop edges v -> w if v
    carries no self-loop, and infinite as soon as v carries both a self-loop
    and such an edge (the loop prefix pumps).
    """
    g.require_vertex(v)
    g.require_vertex(w)
    if v == w:
        return ExtNat(0)
    links = _alphabet_size(_link_bundles(g, v, w))
    if links == 0:
        return ExtNat(0)
    if _alphabet_size(_loop_bundles(g, v)) == 0:
        return links
    return INF


def _lex_sequences(bundles: tuple[Bundle, ...], length: int) -> Iterator[tuple[Edge, ...]]:
    if length == 0:
        yield ()
        return
    for e in _iter_alphabet(bundles):
        for rest in _lex_sequences(bundles, length - 1):
            yield (e,) + rest


def iter_irreducible_pointed(g: Graph, v: str, w: str) -> Iterator[Path]:
    """Irreducible pointed paths v -> w in canonical order.

    With infinite bundles involved this yields exactly the paths of finite
    canonical rank, in rank order.
    """
    loops = _loop_bundles(g, v)
    links = _link_bundles(g, v, w)
    if not links:
        return
    prefix_len = 0
    while True:
        for seq in _lex_sequences(loops, prefix_len):
            for e in _iter_alphabet(links):
                yield Path(v, seq + (e,))
        if not loops:
            return
        prefix_len += 1


def irreducible_pointed_at(g: Graph, v: str, w: str, k: int) -> Path:
    """The k-th irreducible pointed path v -> w in canonical order."""
    if k < 0:
        raise ValueError("rank must be nonnegative")
    for i, p in enumerate(iter_irreducible_pointed(g, v, w)):
        if i == k:
            return p
    raise ValueError(f"only {irreducible_pointed_count(g, v, w)} irreducible pointed paths {v} -> {w}, rank {k} requested")


def irreducible_pointed_rank(g: Graph, block: Path) -> ExtNat:
    """Canonical rank of an irreducible pointed path, infinite when the path
    sits past every finite position (some earlier layer is infinite)."""
    if not block.edges:
        raise ValueError("a vertex path has no canonical rank")
    v = block.base
    w = g.path_range(block)
    loops = _loop_bundles(g, v)
    links = _link_bundles(g, v, w)
    j = len(block.edges) - 1
    loop_size = _alphabet_size(loops)
    link_size = _alphabet_size(links)
    rank = ExtNat(0)
    for i in range(j):
        rank = rank + loop_size**i * link_size
    lex = ExtNat(0)
    for t in range(j):
        lex = lex + _edge_rank(loops, block.edges[t]) * loop_size ** (j - 1 - t)
    return rank + lex * link_size + _edge_rank(links, block.edges[-1])


def split_pointed_blocks(g: Graph, p: Path) -> list[Path] | None:
    """Split a path into irreducible pointed blocks '(self-loops)* non-loop'.

    Returns None when trailing self-loops remain, i.e. when p is not pointed.
    The split is the unique one because the block code is prefix-free.
    """
    blocks: list[Path] = []
    at = p.base
    pending: list[Edge] = []
    for e in p.edges:
        pending.append(e)
        if not g.bundle(e.bundle).is_self_loop:
            blocks.append(Path(at, tuple(pending)))
            pending = []
            at = g.edge_dst(e)
    if pending:
        return None
    return blocks
