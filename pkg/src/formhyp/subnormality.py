"""K-F-subnormality, weak K-F-subnormalizers and the intersections S_F, C_F."""

from __future__ import annotations

from dataclasses import dataclass

from .formations import Formation, formation_membership, is_hereditary
from .groups import Group, GroupError, Subgroup, core, is_normal, join, quotient
from .lattice import all_subgroups, cyclic_primary_subgroups, sylow_subgroups

NORMAL = "normal"
QUOTIENT_IN_F = "quotient_in_f"
METHODS = ("fast", "maximal", "exhaustive")


@dataclass(frozen=True)
class KsnChain:
    """``H = H_0 <= H_1 <= ... <= H_n = G`` with a justification per step."""

    formation: Formation
    steps: tuple[Subgroup, ...]
    step_kind: tuple[str, ...]

    def verify(self) -> bool:
        for (lo, hi), kind in zip(zip(self.steps, self.steps[1:]), self.step_kind):
            if not lo <= hi:
                return False
            if kind == NORMAL and not is_normal(lo, hi):
                return False
            if kind == QUOTIENT_IN_F and not _quotient_by_core_in(self.formation, lo, hi):
                return False
        return True


def _quotient_by_core_in(F: Formation, L: Subgroup, M: Subgroup) -> bool:
    """Is ``M / Core_M(L)`` in ``F``?"""
    G = M.group
    cache = G.cache.setdefault(("core_quotient_in", str(F)), {})
    key = (L.bits, M.bits)
    if key not in cache:
        C = core(G, L, within=M)
        if C.bits == M.bits:
            cache[key] = True
        else:
            cache[key] = formation_membership(F, quotient(G, C, top=M, check=False).group)
    return cache[key]


def _step(F: Formation, L: Subgroup, M: Subgroup) -> str | None:
    if is_normal(L, M):
        return NORMAL
    if _quotient_by_core_in(F, L, M):
        return QUOTIENT_IN_F
    return None


class _Search:
    """Memoised chain search on the subgroup lattice of one parent group."""

    def __init__(self, F: Formation, G: Group, method: str):
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        self.F, self.G, self.method = F, G, method
        self.memo: dict[tuple[int, int], tuple[Subgroup, str] | None | bool] = G.cache.setdefault(
            ("ksn", str(F), method), {}
        )

    def candidates(self, H: Subgroup, M: Subgroup) -> list[Subgroup]:
        lat = all_subgroups(self.G)
        if self.method == "exhaustive":
            below = [S for S in lat.contained_in(M) if S.bits != M.bits]
        else:
            below = lat.maximal_in(M)
        return [L for L in below if H.bits & ~L.bits == 0]

    def holds(self, H: Subgroup, M: Subgroup) -> bool:
        return self.witness_step(H, M) is not False

    def witness_step(self, H: Subgroup, M: Subgroup):
        """``None`` if ``H == M``; ``(L, kind)`` for a first step below ``M``; ``False`` if no chain."""
        if H.bits == M.bits:
            return None
        key = (H.bits, M.bits)
        if key in self.memo:
            return self.memo[key]
        result = False
        if self.method == "fast":
            kind = _step(self.F, H, M)
            if kind is not None:
                result = (H, kind)
        if result is False:
            for L in self.candidates(H, M):
                kind = _step(self.F, L, M)
                if kind is not None and self.holds(H, L):
                    result = (L, kind)
                    break
        self.memo[key] = result
        return result


def ksn_chain(F: Formation, H: Subgroup, G: Group | Subgroup, method: str = "fast") -> KsnChain | None:
    """A K-F-subnormal chain from ``H`` up to ``G`` (a group or an ambient subgroup), if any."""
    parent, top = _ambient(H, G)
    search = _Search(F, parent, method)
    steps = [top]
    kinds = []
    cur = top
    while cur.bits != H.bits:
        step = search.witness_step(H, cur)
        if step is False:
            return None
        L, kind = step
        steps.append(L)
        kinds.append(kind)
        cur = L
    return KsnChain(F, tuple(reversed(steps)), tuple(reversed(kinds)))


def _ambient(H: Subgroup, G: Group | Subgroup) -> tuple[Group, Subgroup]:
    if isinstance(G, Group):
        parent, top = G, G.whole
    else:
        parent, top = G.group, G
    if H.group is not parent and H.group != parent:
        raise GroupError("H is not a subgroup of the given group")
    if H.bits & ~top.bits:
        raise GroupError("H is not contained in the ambient subgroup")
    return parent, top


def is_k_f_subnormal(F: Formation, H: Subgroup, G: Group | Subgroup, method: str = "fast") -> bool:
    """Does a chain ``H = H_0 <= ... <= H_n = G`` exist with each step normal or
    ``H_i / Core_{H_i}(H_{i-1})`` in ``F``?

    ``method="maximal"`` only climbs through maximal subgroups,
    ``"exhaustive"`` tries every intermediate subgroup, and ``"fast"`` (the
    default) also tries the one-step chain first.  For hereditary ``F`` the
    three agree.
    """
    parent, top = _ambient(H, G)
    if H.bits == top.bits:
        return True
    if method == "fast" and _step(F, H, top) is not None:
        return True
    return _Search(F, parent, method).holds(H, top)


def weak_subnormalizers(F: Formation, H: Subgroup, G: Group, method: str = "fast") -> list[Subgroup]:
    """Maximal overgroups ``M`` of ``H`` with ``H`` K-F-subnormal in ``M``."""
    if not is_hereditary(F):
        raise GroupError("weak subnormalizers need a hereditary formation")
    if is_k_f_subnormal(F, H, G, method):
        return [G.whole]
    over = sorted(all_subgroups(G).containing(H), key=lambda S: (-S.order, S.key))
    found: list[Subgroup] = []
    for M in over:
        if any(M.bits & ~T.bits == 0 for T in found):
            continue
        if is_k_f_subnormal(F, H, M, method):
            found.append(M)
    return sorted(found, key=lambda S: S.key)


def sylow_family(G: Group) -> list[Subgroup]:
    return [P for p in sorted(G.primes) for P in sylow_subgroups(G, p)]


def _intersection_route_a(F: Formation, G: Group, family: list[Subgroup]) -> Subgroup:
    bits = G.whole.bits
    for P in family:
        for W in weak_subnormalizers(F, P, G):
            bits &= W.bits
    return Subgroup(G, bits)


def _largest_normal_route_b(F: Formation, G: Group, family: list[Subgroup]) -> Subgroup:
    for N in sorted(all_subgroups(G).normal, key=lambda S: (-S.order, S.key)):
        if all(is_k_f_subnormal(F, P, join(P, N)) for P in family):
            return N
    raise GroupError("no normal subgroup qualifies; the trivial subgroup always should")


def s_f(F: Formation, G: Group, route: str = "A") -> Subgroup:
    """Intersection of the weak K-F-subnormalizers of all Sylow subgroups."""
    key = ("s_f", str(F), route)
    if key not in G.cache:
        fam = sylow_family(G)
        G.cache[key] = (_intersection_route_a if route == "A" else _largest_normal_route_b)(F, G, fam)
    return G.cache[key]


def c_f(F: Formation, G: Group, route: str = "A") -> Subgroup:
    """Intersection of the weak K-F-subnormalizers of all nontrivial cyclic primary subgroups."""
    key = ("c_f", str(F), route)
    if key not in G.cache:
        fam = cyclic_primary_subgroups(G)
        G.cache[key] = (_intersection_route_a if route == "A" else _largest_normal_route_b)(F, G, fam)
    return G.cache[key]
