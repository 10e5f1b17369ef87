"""Schmidt subgroups, N-critical graphs and the Hall decomposition check."""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .formations import (
    Nilpotent,
    Partition,
    formation_membership,
    pi_elements_mask,
    subgroup_in,
)
from .groups import Group, Subgroup, closure_mask, is_normal, mask_to_bits, pi_part
from .lattice import all_subgroups


@dataclass(frozen=True)
class NCriticalGraph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        for p, q in self.edges:
            if p not in self.vertices or q not in self.vertices:
                raise ValueError(f"edge ({p}, {q}) leaves the vertex set")

    def edge_list(self) -> str:
        return "".join(f"{p} {q}\n" for p, q in sorted(self.edges))

    def to_document(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": [list(e) for e in sorted(self.edges)]}


def _sylow_mask(G: Group, H: Subgroup, p: int) -> np.ndarray:
    return H.mask & pi_elements_mask(G, [p])


def schmidt_type(H: Subgroup) -> tuple[int, int] | None:
    """``(p, q)`` if ``H`` is a Schmidt group with normal Sylow ``p``-subgroup."""
    G = H.group
    if H.order == 1 or subgroup_in(Nilpotent(), H):
        return None
    lat = all_subgroups(G)
    if not all(subgroup_in(Nilpotent(), M) for M in lat.maximal_in(H)):
        return None
    if len(H.primes) != 2:
        raise RuntimeError(f"minimal non-nilpotent subgroup with primes {sorted(H.primes)}")
    normal_p = []
    for p in sorted(H.primes):
        # a Sylow p-subgroup is normal iff the p-elements of H form a subgroup of order |H|_p
        pm = _sylow_mask(G, H, p)
        if int(pm.sum()) == pi_part(H.order, [p]) and closure_mask(G, np.flatnonzero(pm)).sum() == pm.sum():
            normal_p.append(p)
    if len(normal_p) != 1:
        raise RuntimeError(f"minimal non-nilpotent subgroup with normal Sylows {normal_p}")
    p = normal_p[0]
    (q,) = H.primes - {p}
    # classical shape: the Sylow q-subgroups of a Schmidt group are cyclic
    q_elems = _sylow_mask(G, H, q)
    if int(G.element_order[q_elems].max()) != pi_part(H.order, [q]):
        raise RuntimeError("Schmidt detector fired on a group with non-cyclic Sylow q-subgroup")
    return p, q


def is_schmidt(G: Group) -> tuple[int, int] | None:
    return schmidt_type(G.whole)


def n_critical_graph(G: Group) -> NCriticalGraph:
    key = "n_critical_graph"
    if key in G.cache:
        return G.cache[key]
    edges: set[tuple[int, int]] = set()
    if not formation_membership(Nilpotent(), G):
        for S in all_subgroups(G):
            t = schmidt_type(S)
            if t is not None:
                edges.add(t)
    graph = NCriticalGraph(frozenset(G.primes), frozenset(edges))
    G.cache[key] = graph
    return graph


def n_critical_graph_of_class(groups: Iterable[Group]) -> NCriticalGraph:
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for G in groups:
        g = n_critical_graph(G)
        vertices |= g.vertices
        edges |= g.edges
    return NCriticalGraph(frozenset(vertices), frozenset(edges))


class Verdict(enum.Enum):
    HOLDS = "holds"
    INAPPLICABLE = "inapplicable"
    VIOLATED = "violated"


def hall_decomposition_check(G: Group, sigma: Partition) -> Verdict:
    """If no edge of the N-critical graph crosses σ-blocks, check ``G`` is the
    direct product of its Hall π_k-subgroups."""
    graph = n_critical_graph(G)
    if any(sigma.block_id(p) != sigma.block_id(q) for p, q in graph.edges):
        return Verdict.INAPPLICABLE
    factors = []
    for block in sigma.blocks_meeting(G.primes):
        mask = closure_mask(G, np.flatnonzero(pi_elements_mask(G, block)))
        H = Subgroup(G, mask_to_bits(mask))
        if H.order != pi_part(G.order, block) or not is_normal(H):
            return Verdict.VIOLATED
        factors.append(H)
    total = 1
    for H in factors:
        total *= H.order
    if total != G.order:
        return Verdict.VIOLATED
    for i, A in enumerate(factors):
        for B in factors[i + 1 :]:
            a, b = A.members, B.members
            if not np.array_equal(G.table[np.ix_(a, b)], G.table[np.ix_(b, a)].T):
                return Verdict.VIOLATED
    return Verdict.HOLDS
